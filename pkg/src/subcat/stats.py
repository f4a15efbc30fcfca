"""Association statistics between a verb and an observed frame.

All three tests look at the same 2x2 layout: ``k1`` occurrences of the
frame among the ``n1`` occurrences of the verb, and ``k2`` occurrences of
the frame among the ``n2`` occurrences of all other verbs.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

log = logging.getLogger(__name__)


class Method(str, enum.Enum):
    LLR = "llr"
    TSCORE = "tscore"
    MISCUE = "miscue"


class TScoreMode(str, enum.Enum):
    DEFAULT = "default"
    PAPER = "paper"


DEFAULT_THRESHOLDS = {
    # chi-square(1) critical value at 0.001 and one-sided normal at 0.05,
    # picked by sweeping thresholds on synthetic corpora
    Method.LLR: 10.827566170662733,
    Method.TSCORE: 1.6448536269514722,
    Method.MISCUE: 0.05,
}
DEFAULT_MISCUE_PROB = 0.05


class UndefinedStatistic(ArithmeticError):
    """The statistic has no value for these counts (e.g. zero variance)."""


@dataclass(frozen=True)
class ContingencyCounts:
    k1: float
    n1: float
    k2: float
    n2: float

    def __post_init__(self):
        if not (0 <= self.k1 <= self.n1 and 0 <= self.k2 <= self.n2):
            raise ValueError(f"invalid contingency counts {self}")


@dataclass(frozen=True)
class MethodParams:
    method: Method = Method.MISCUE
    threshold: float | None = None
    miscue_prob: float = DEFAULT_MISCUE_PROB
    tscore_mode: TScoreMode = TScoreMode.DEFAULT

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "tscore_mode", TScoreMode(self.tscore_mode))
        if self.threshold is None:
            object.__setattr__(self, "threshold", DEFAULT_THRESHOLDS[self.method])
        if not math.isfinite(self.threshold):
            raise ValueError("threshold must be finite")
        if not 0.0 < self.miscue_prob < 1.0:
            raise ValueError("miscue_prob must lie in (0, 1)")

    def describe(self) -> str:
        s = f"method={self.method.value} threshold={self.threshold!r}"
        if self.method is Method.MISCUE:
            s += f" miscue_prob={self.miscue_prob!r}"
        if self.method is Method.TSCORE:
            s += f" tscore_mode={self.tscore_mode.value}"
        return s


def _xlogy(x: float, y: float) -> float:
    # 0 * log 0 = 0
    return 0.0 if x == 0 else x * math.log(y)


def log_likelihood(p: float, k: float, n: float) -> float:
    """Binomial log likelihood ``k log p + (n - k) log(1 - p)``."""
    return _xlogy(k, p) + _xlogy(n - k, 1.0 - p)


def log_likelihood_ratio(c: ContingencyCounts) -> float:
    """Dunning's -2 log lambda for the two binomials ``k1/n1`` and ``k2/n2``."""
    if c.n1 <= 0 or c.n2 <= 0:
        raise ValueError("log_likelihood_ratio needs n1 > 0 and n2 > 0")
    p1 = c.k1 / c.n1
    p2 = c.k2 / c.n2
    p = (c.k1 + c.k2) / (c.n1 + c.n2)
    # grouped as KL-style ratios so equal proportions cancel exactly
    value = 2.0 * (
        _xlogy(c.k1, p1 / p if p1 else 1.0)
        + _xlogy(c.n1 - c.k1, (1 - p1) / (1 - p) if p1 != 1 else 1.0)
        + _xlogy(c.k2, p2 / p if p2 else 1.0)
        + _xlogy(c.n2 - c.k2, (1 - p2) / (1 - p) if p2 != 1 else 1.0)
    )
    return max(value, 0.0)


def t_score(c: ContingencyCounts, mode: TScoreMode | str = TScoreMode.DEFAULT) -> float:
    """Difference of proportions over its standard error.

    ``mode="paper"`` uses ``sigma(n, p) = n p (1 - p)`` in the denominator
    instead of the proportion variance ``p (1 - p) / n``.
    """
    if c.n1 <= 0 or c.n2 <= 0:
        raise ValueError("t_score needs n1 > 0 and n2 > 0")
    p1 = c.k1 / c.n1
    p2 = c.k2 / c.n2
    if TScoreMode(mode) is TScoreMode.PAPER:
        var = (c.n1 * p1 * (1 - p1)) ** 2 + (c.n2 * p2 * (1 - p2)) ** 2
    else:
        var = p1 * (1 - p1) / c.n1 + p2 * (1 - p2) / c.n2
    if var <= 0:
        raise UndefinedStatistic(f"zero variance for p1={p1}, p2={p2}")
    return (p1 - p2) / math.sqrt(var)


def log_binomial_coefficient(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def binomial_tail(p: float, m: int, n: int) -> float:
    """P(X >= m) for X ~ Binomial(n, p).

    Terms are built in log space and added from ``i = n`` down to ``m``, so
    the result is non-increasing in ``m`` even at the last ulp.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    if m == 0:
        return 1.0
    logp, logq = math.log(p), math.log1p(-p)
    total = 0.0
    for i in range(n, m - 1, -1):
        total += math.exp(log_binomial_coefficient(n, i) + i * logp + (n - i) * logq)
    return min(total, 1.0)


@dataclass(frozen=True)
class Association:
    score: float
    accepted: bool
    diagnostic: str | None = None


def evaluate_association(c: ContingencyCounts, params: MethodParams) -> Association:
    """Score a verb/frame pair and decide whether the frame is accepted."""
    method = params.method
    try:
        if method is Method.MISCUE:
            score = binomial_tail(params.miscue_prob, int(c.k1), int(c.n1))
            return Association(score, score <= params.threshold)
        if method is Method.LLR:
            if c.n2 <= 0:
                raise UndefinedStatistic("no occurrences of other verbs (n2 = 0)")
            score = log_likelihood_ratio(c)
        else:
            if c.n2 <= 0:
                raise UndefinedStatistic("no occurrences of other verbs (n2 = 0)")
            score = t_score(c, params.tscore_mode)
    except UndefinedStatistic as exc:
        log.debug("undefined %s statistic for %s: %s", method.value, c, exc)
        return Association(math.nan, False, str(exc))
    return Association(score, score >= params.threshold)
