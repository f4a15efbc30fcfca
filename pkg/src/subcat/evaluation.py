"""Scoring argument/adjunct decisions against fractionally weighted gold."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping

from .corpus import Sentence
from .labeling import ARGUMENT, DependentDecision


class GoldError(ValueError):
    pass


@dataclass(frozen=True)
class EvalReport:
    total_verb_nodes: int
    total_complements: int
    known_verb_nodes: int
    known_complements: int
    correct_suggestions: float
    true_arguments: float
    suggested_arguments: int
    incorrect_arg_suggestions: float
    incorrect_adj_suggestions: float

    def __post_init__(self):
        parts = self.correct_suggestions + self.incorrect_arg_suggestions + self.incorrect_adj_suggestions
        if not math.isclose(parts, self.known_complements, rel_tol=1e-9, abs_tol=1e-6):
            raise ValueError(f"correct + incorrect suggestions ({parts}) != "
                             f"known complements ({self.known_complements})")

    @property
    def precision(self) -> float:
        return self.correct_suggestions / self.known_complements if self.known_complements else 0.0

    @property
    def recall(self) -> float:
        return self.correct_suggestions / self.total_complements if self.total_complements else 0.0

    @property
    def f1(self) -> float:
        return f_measure(self.precision, self.recall)

    @property
    def pct_unknown(self) -> float:
        if not self.total_complements:
            return 0.0
        return (self.total_complements - self.known_complements) / self.total_complements


COUNT_FIELDS = [f.name for f in fields(EvalReport)]


def f_measure(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def read_gold_weights(sentences: Iterable[Sentence]) -> dict[tuple[int, int], float]:
    """(sentence index, token id) -> argument weight, for weighted tokens only."""
    weights = {}
    for sent in sentences:
        for tok in sent.tokens:
            if tok.extra in (None, "_"):
                continue
            try:
                w = float(tok.extra)
            except ValueError:
                raise GoldError(f"sentence {sent.index}, token {tok.id}: "
                                f"bad gold weight {tok.extra!r}") from None
            if not 0.0 <= w <= 1.0:
                raise GoldError(f"sentence {sent.index}, token {tok.id}: weight {w} outside [0, 1]")
            weights[sent.index, tok.id] = w
    return weights


def score(decisions: Iterable[DependentDecision], gold: Mapping[tuple[int, int], float],
          verb_nodes: Iterable[tuple[int, int]] = ()) -> EvalReport:
    """Aggregate credit for the decisions; each gets ``w`` if called an argument, else ``1 - w``.

    ``verb_nodes`` lists every (sentence index, verb id) in the test data so
    verbs without labeled dependents still count as nodes. A node is known
    unless one of its dependents was decided with an unknown verb.
    """
    nodes = set(verb_nodes)
    unknown_nodes = set()
    total = known = suggested = 0
    correct = true_args = wrong_arg = wrong_adj = 0.0
    for d in decisions:
        node = (d.sentence_index, d.verb_id)
        nodes.add(node)
        total += 1
        if not d.verb_known:
            unknown_nodes.add(node)
            continue
        try:
            w = gold[d.sentence_index, d.token_id]
        except KeyError:
            raise GoldError(f"no gold weight for sentence {d.sentence_index}, "
                            f"token {d.token_id} ({d.label})") from None
        known += 1
        true_args += w
        if d.decision == ARGUMENT:
            suggested += 1
            correct += w
            wrong_arg += 1 - w
        else:
            correct += 1 - w
            wrong_adj += w
    return EvalReport(len(nodes), total, len(nodes) - len(unknown_nodes), known,
                      correct, true_args, suggested, wrong_arg, wrong_adj)


def _pct(x: float) -> int:
    return int(Decimal(repr(x * 100)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def table_percentages(report: EvalReport) -> dict[str, int]:
    """Integer percentages laid out like the published comparison table.

    Precision and recall are rounded first; F1 and %-unknown are then
    derived from the rounded pair (unknown = 1 - r/p, since r/p equals
    known/total). That is what reproduces the printed integers; computing
    F1 from unrounded values can differ by one point.
    """
    p = _pct(report.precision) / 100
    r = _pct(report.recall) / 100
    return {
        "Precision": _pct(p),
        "Recall": _pct(r),
        "F1": _pct(f_measure(p, r)),
        "% unknown": _pct(1 - r / p) if p else 0,
    }


_ROW_TITLES = [
    ("total_verb_nodes", "Total verb nodes"),
    ("total_complements", "Total complements"),
    ("known_verb_nodes", "Nodes with known verbs"),
    ("known_complements", "Complements of known verbs"),
    ("correct_suggestions", "Correct Suggestions"),
    ("true_arguments", "True Arguments"),
    ("suggested_arguments", "Suggested Arguments"),
    ("incorrect_arg_suggestions", "Incorrect arg suggestions"),
    ("incorrect_adj_suggestions", "Incorrect adj suggestions"),
]


def _num(x) -> str:
    if isinstance(x, float):
        x = round(x, 6)
        return str(int(x)) if x == int(x) else f"{x:g}"
    return str(x)


def format_table(reports: Mapping[str, EvalReport]) -> str:
    names = list(reports)
    rows = [[""] + names]
    pcts = {n: table_percentages(r) for n, r in reports.items()}
    for key in ("Precision", "Recall", "F1", "% unknown"):
        rows.append([key] + [f"{pcts[n][key]}%" for n in names])
    rows.append(None)
    for attr, title in _ROW_TITLES:
        rows.append([title] + [_num(getattr(reports[n], attr)) for n in names])
    width = [max(len(r[i]) for r in rows if r) for i in range(len(names) + 1)]
    rule = "-" * (sum(width) + 3 * len(names))
    lines = []
    for i, row in enumerate(rows):
        if row is None:
            lines.append(rule)
            continue
        cells = [row[0].ljust(width[0])] + [c.rjust(w) for c, w in zip(row[1:], width[1:])]
        lines.append(" | ".join(cells))
        if i == 0:
            lines.append(rule)
    return "\n".join(lines) + "\n"


def format_tsv(reports: Mapping[str, EvalReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["method"] + COUNT_FIELDS + ["precision", "recall", "f1", "pct_unknown"])
    for name, r in reports.items():
        w.writerow([name] + [repr(getattr(r, f)) for f in COUNT_FIELDS]
                   + [repr(r.precision), repr(r.recall), repr(r.f1), repr(r.pct_unknown)])
    return buf.getvalue()


def format_report(reports: Mapping[str, EvalReport]) -> tuple[str, str]:
    """Human-readable table and full-precision TSV."""
    return format_table(reports), format_tsv(reports)


def read_counts(src: Iterable[str]) -> dict[str, EvalReport]:
    """Reports from a TSV of raw aggregates (``method`` + the count columns)."""
    reader = csv.DictReader((line for line in src if line.strip() and not line.startswith("#")),
                            delimiter="\t")
    reports = {}
    for row in reader:
        values = {}
        for f in fields(EvalReport):
            raw = row.get(f.name)
            if raw is None:
                raise ValueError(f"counts file lacks column {f.name!r}")
            values[f.name] = int(raw) if f.type == "int" else float(raw)
        reports[row["method"]] = EvalReport(**values)
    return reports
