import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from subcat.stats import (ContingencyCounts, Method, MethodParams, UndefinedStatistic,
                          binomial_tail, evaluate_association, log_likelihood_ratio, t_score)


def exact_tail(p: Fraction, m: int, n: int) -> Fraction:
    return sum(math.comb(n, i) * p ** i * (1 - p) ** (n - i) for i in range(m, n + 1))


def mp_llr(k1, n1, k2, n2):
    """-2 log lambda from the four log-likelihood terms at 50 digits."""
    with mpmath.workdps(50):
        def logl(p, k, n):
            return (k * mpmath.log(p) if k else 0) + ((n - k) * mpmath.log(1 - p) if n - k else 0)
        p1, p2 = mpmath.mpf(k1) / n1, mpmath.mpf(k2) / n2
        p = mpmath.mpf(k1 + k2) / (n1 + n2)
        return float(2 * (logl(p1, k1, n1) + logl(p2, k2, n2) - logl(p, k1, n1) - logl(p, k2, n2)))


counts = st.integers(1, 5000).flatmap(
    lambda n1: st.tuples(st.integers(0, n1), st.just(n1), st.integers(1, 5000)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.just(t[1]), st.integers(0, t[2]), st.just(t[2]))))


class TestLogLikelihoodRatio:
    def test_equal_proportions(self):
        assert log_likelihood_ratio(ContingencyCounts(5, 10, 500, 1000)) == 0.0

    def test_against_high_precision_formula(self):
        # 31.628501260157902155 from the four-term formula at 50 digits
        got = log_likelihood_ratio(ContingencyCounts(10, 20, 50, 1000))
        assert got == pytest.approx(31.628501260157902, rel=1e-12)

    def test_all_zero(self):
        assert log_likelihood_ratio(ContingencyCounts(0, 10, 0, 10)) == 0.0

    def test_zero_n_is_error(self):
        with pytest.raises(ValueError):
            log_likelihood_ratio(ContingencyCounts(0, 0, 1, 10))

    @given(counts)
    def test_matches_oracle_and_nonnegative(self, c):
        k1, n1, k2, n2 = c
        got = log_likelihood_ratio(ContingencyCounts(k1, n1, k2, n2))
        assert got >= 0
        assert got == pytest.approx(mp_llr(k1, n1, k2, n2), rel=1e-9, abs=1e-8)

    @given(st.integers(1, 300), st.integers(1, 300), st.integers(0, 20))
    def test_zero_iff_equal_proportions(self, a, b, k):
        # k1/n1 == k2/n2 by construction
        n1, n2 = a * 20, b * 20
        k1, k2 = a * k, b * k
        assert abs(log_likelihood_ratio(ContingencyCounts(k1, n1, k2, n2))) <= 1e-9


class TestTScore:
    def test_equal_proportions(self):
        assert t_score(ContingencyCounts(5, 10, 500, 1000)) == 0.0

    def test_default_formula(self):
        # (p1 - p2) / sqrt(p1 q1 / n1 + p2 q2 / n2) evaluated at 50 digits
        assert t_score(ContingencyCounts(10, 20, 50, 1000)) == pytest.approx(4.0172967331824933, rel=1e-12)

    def test_squared_variance_formula(self):
        # sigma(n, p) = n p (1 - p), squared, evaluated at 50 digits
        got = t_score(ContingencyCounts(10, 20, 50, 1000), mode="paper")
        assert got == pytest.approx(0.0094216306066238467, rel=1e-12)

    def test_degenerate_is_undefined(self):
        with pytest.raises(UndefinedStatistic):
            t_score(ContingencyCounts(0, 10, 5, 5))

    @given(counts, st.sampled_from(["default", "paper"]))
    def test_antisymmetry_and_sign(self, c, mode):
        k1, n1, k2, n2 = c
        try:
            t = t_score(ContingencyCounts(k1, n1, k2, n2), mode)
        except UndefinedStatistic:
            return
        swapped = t_score(ContingencyCounts(k2, n2, k1, n1), mode)
        assert swapped == pytest.approx(-t, rel=1e-12, abs=1e-15)
        diff = k1 / n1 - k2 / n2
        assert math.copysign(1, t) == math.copysign(1, diff) or t == 0


class TestBinomialTail:
    def test_full_support(self):
        assert binomial_tail(0.05, 0, 10) == 1.0

    def test_complement_of_zero_term(self):
        assert binomial_tail(0.05, 1, 10) == pytest.approx(1 - 0.95 ** 10, abs=1e-15)
        assert binomial_tail(0.05, 1, 10) == pytest.approx(0.4012631, abs=5e-8)

    def test_three_of_ten(self):
        # exact rational sum: 0.011503557379296874...
        assert binomial_tail(0.05, 3, 10) == pytest.approx(0.0115036, rel=1e-5)
        assert float(exact_tail(Fraction(1, 20), 3, 10)) == pytest.approx(binomial_tail(0.05, 3, 10), abs=1e-15)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_bad_p(self, p):
        with pytest.raises(ValueError):
            binomial_tail(p, 1, 10)

    def test_bad_m(self):
        with pytest.raises(ValueError):
            binomial_tail(0.5, 11, 10)

    @given(st.integers(0, 30).flatmap(lambda n: st.tuples(st.integers(0, n - 1) if n else st.nothing(),
                                                          st.just(n))),
           st.sampled_from([0.01, 0.05, 0.5]))
    def test_telescoping(self, mn, p):
        m, n = mn
        term = math.comb(n, m) * Fraction(p) ** m * (1 - Fraction(p)) ** (n - m)
        assert binomial_tail(p, m, n) - binomial_tail(p, m + 1, n) == pytest.approx(float(term), abs=1e-12)

    @given(st.integers(0, 400).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))),
           st.floats(0.001, 0.999))
    def test_monotone_in_m(self, mn, p):
        m, n = mn
        assume(m < n)
        assert binomial_tail(p, m + 1, n) <= binomial_tail(p, m, n) <= 1.0

    def test_large_n_in_range(self):
        v = binomial_tail(0.05, 400, 5000)
        assert 0.0 <= v <= 1.0


class TestEvaluateAssociation:
    def test_miscue_zero_count(self):
        a = evaluate_association(ContingencyCounts(0, 37, 0, 10), MethodParams(Method.MISCUE))
        assert a.score == 1.0 and not a.accepted

    def test_miscue_three_of_ten(self):
        a = evaluate_association(ContingencyCounts(3, 10, 0, 0), MethodParams("miscue", 0.05, 0.05))
        assert a.score == pytest.approx(0.0115036, rel=1e-5)
        assert a.accepted

    def test_llr_equal_proportions_rejected(self):
        a = evaluate_association(ContingencyCounts(5, 10, 500, 1000), MethodParams("llr", 1e-6))
        assert a.score == 0.0 and not a.accepted

    def test_tscore_undefined_rejected(self):
        a = evaluate_association(ContingencyCounts(0, 10, 5, 5), MethodParams("tscore"))
        assert math.isnan(a.score) and not a.accepted and a.diagnostic

    def test_llr_single_verb_undefined(self):
        a = evaluate_association(ContingencyCounts(5, 10, 0, 0), MethodParams("llr"))
        assert not a.accepted and "n2" in a.diagnostic

    def test_params_validation(self):
        with pytest.raises(ValueError):
            MethodParams("miscue", miscue_prob=1.0)
        with pytest.raises(ValueError):
            MethodParams("llr", threshold=math.inf)
        assert MethodParams("miscue").threshold == 0.05
