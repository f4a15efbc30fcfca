"""Verb/frame co-occurrence counting and subset refinement of observed frames.

Observed frames are scored longest first. A rejected frame hands its whole
count to exactly one of its one-shorter subsets (its successor), so mass
accumulates on smaller frames until they pass the test; the empty frame
absorbs whatever is left. Per-verb totals are conserved throughout.
"""
from __future__ import annotations

import enum
import math
import random
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .corpus import Frame, VerbObservation
from .stats import ContingencyCounts, Method, MethodParams, TScoreMode, evaluate_association

# recorded in lexicon headers; bump if the draw sequence ever changes
RNG_NAME = "python-random-mt19937/v1"
DEFAULT_MIN_VERB_FREQ = 5


class Strategy(str, enum.Enum):
    RANDOM = "random"
    MIN_ENTROPY = "minentropy"


@dataclass
class CooccurrenceTable:
    counts: dict[str, Counter] = field(default_factory=dict)
    unknown: dict[str, int] = field(default_factory=dict)

    def verb_total(self, verb: str) -> int:
        return sum(self.counts[verb].values())

    def frame_totals(self) -> Counter:
        totals = Counter()
        for per_verb in self.counts.values():
            totals.update(per_verb)
        return totals

    @property
    def total(self) -> int:
        return sum(self.verb_total(v) for v in self.counts)

    def count(self, verb: str, frame: Frame) -> int:
        return self.counts.get(verb, {}).get(frame, 0)

    def frame_types(self) -> set[Frame]:
        return {f for per_verb in self.counts.values() for f, c in per_verb.items() if c > 0}


def count_cooccurrences(observations: Iterable[VerbObservation],
                        min_verb_freq: int = DEFAULT_MIN_VERB_FREQ) -> CooccurrenceTable:
    """Count raw observed frames per verb; subsets are not added."""
    counts: dict[str, Counter] = defaultdict(Counter)
    for ob in observations:
        counts[ob.verb_lemma][ob.frame] += 1
    table = CooccurrenceTable()
    for verb in sorted(counts):
        freq = sum(counts[verb].values())
        if freq < min_verb_freq:
            table.unknown[verb] = freq
        else:
            table.counts[verb] = counts[verb]
    return table


def successors(frame: Frame) -> list[Frame]:
    """All subsets one member shorter, in canonical order."""
    if len(frame) == 0:
        raise ValueError("the empty frame has no successors")
    return sorted({frame.without(m) for m in frame}, key=str)


@dataclass(frozen=True)
class SFEntry:
    verb_lemma: str
    frame: Frame
    final_count: int
    score: float
    method: str


@dataclass
class SFLexicon:
    """Accepted frames per known verb.

    The empty frame is stored like any other entry (always accepted) so the
    counts of each verb's entries sum to its training frequency.
    """

    entries: dict[str, dict[Frame, SFEntry]] = field(default_factory=dict)
    unknown: dict[str, int] = field(default_factory=dict)
    header: dict[str, str] = field(default_factory=dict)
    observed_frame_types: int = 0

    def __contains__(self, verb: str) -> bool:
        return verb in self.entries

    def for_verb(self, verb: str) -> list[SFEntry]:
        return list(self.entries.get(verb, {}).values())

    def verb_frequency(self, verb: str) -> int:
        return sum(e.final_count for e in self.entries.get(verb, {}).values())

    def add(self, entry: SFEntry) -> None:
        self.entries.setdefault(entry.verb_lemma, {})[entry.frame] = entry

    def iter_entries(self) -> list[SFEntry]:
        return [self.entries[v][f] for v in sorted(self.entries)
                for f in sorted(self.entries[v], key=lambda fr: (-len(fr), str(fr)))]

    def write(self, out: TextIO) -> None:
        head = " ".join(f"{k}={v}" for k, v in self.header.items())
        out.write(f"# {head}\n" if head else "#\n")
        out.write(f"# observed_frame_types={self.observed_frame_types}\n")
        for verb in sorted(self.unknown):
            out.write(f"#unknown\t{verb}\t{self.unknown[verb]}\n")
        for e in self.iter_entries():
            out.write(f"{e.verb_lemma}\t{e.frame}\t{e.final_count}\t{e.score!r}\t{e.method}\n")

    @classmethod
    def read(cls, src: Iterable[str]) -> "SFLexicon":
        lex = cls()
        for lineno, line in enumerate(src, start=1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            if line.startswith("#unknown\t"):
                _, verb, freq = line.split("\t")
                lex.unknown[verb] = int(freq)
            elif line.startswith("#"):
                for item in line[1:].split():
                    key, _, value = item.partition("=")
                    if key == "observed_frame_types":
                        lex.observed_frame_types = int(value)
                    elif value:
                        lex.header[key] = value
            else:
                cols = line.split("\t")
                if len(cols) != 5:
                    raise ValueError(f"lexicon line {lineno}: expected 5 columns, got {len(cols)}")
                verb, frame, count, score, method = cols
                lex.add(SFEntry(verb, Frame.parse(frame), int(count), float(score), method))
        return lex


def discovered_frames(lexicon: SFLexicon) -> set[Frame]:
    """Distinct non-empty frames accepted for any verb.

    ``lexicon.observed_frame_types`` holds the upper bound (observed frame
    types seen in training).
    """
    return {e.frame for entries in lexicon.entries.values() for e in entries.values() if len(e.frame)}


@dataclass(frozen=True)
class Evaluation:
    verb: str
    frame: Frame
    counts: ContingencyCounts
    score: float
    accepted: bool


def _phi(c: int) -> float:
    return c * math.log(c) if c > 0 else 0.0


def choose_successor(rejected, frame_totals: Counter, strategy: Strategy | str,
                     rng: random.Random) -> dict[tuple[str, Frame], Frame]:
    """Pick one successor for every rejected ``(verb, frame, count)``.

    ``rejected`` is processed in the given order (random draws follow it).
    ``frame_totals`` is the pooled frame distribution over all verbs; the
    min-entropy strategy updates it as transfers are applied.
    """
    strategy = Strategy(strategy)
    assignment: dict[tuple[str, Frame], Frame] = {}
    if strategy is Strategy.RANDOM:
        for verb, frame, _ in rejected:
            cands = successors(frame)
            assignment[verb, frame] = cands[rng.randrange(len(cands))] if len(cands) > 1 else cands[0]
        return assignment

    totals = Counter(frame_totals)
    items = list(rejected)
    cands = [successors(f) for _, f, _ in items]
    # which items must be rescored once a frame's total changes
    touching: dict[Frame, set[int]] = defaultdict(set)
    for i, (_, f, _) in enumerate(items):
        touching[f].add(i)
        for g in cands[i]:
            touching[g].add(i)

    def best_for(i):
        verb, f, x = items[i]
        drop = _phi(totals[f] - x) - _phi(totals[f])
        best = None
        for g in cands[i]:
            gain = drop + _phi(totals[g] + x) - _phi(totals[g])
            key = (-gain, str(f), verb, str(g))
            if best is None or key < best[0]:
                best = (key, g)
        return best

    pending = {i: best_for(i) for i in range(len(items))}
    while pending:
        i = min(pending, key=lambda j: pending[j][0])
        _, g = pending.pop(i)
        verb, f, x = items[i]
        assignment[verb, f] = g
        totals[f] -= x
        totals[g] += x
        for j in touching[f] | touching[g]:
            if j in pending:
                pending[j] = best_for(j)
    return assignment


def refine_subsets(table: CooccurrenceTable, params: MethodParams,
                   strategy: Strategy | str = Strategy.RANDOM, seed: int = 0,
                   threads: int = 1, trace: list | None = None) -> SFLexicon:
    """Run the longest-first accept/reject/migrate passes over ``table``.

    If ``trace`` is a list, every scored pair is appended to it as an
    :class:`Evaluation`.
    """
    strategy = Strategy(strategy)
    rng = random.Random(seed)
    work: dict[str, Counter] = {v: Counter({f: c for f, c in fc.items() if c > 0})
                                for v, fc in table.counts.items()}
    verb_n = {v: sum(fc.values()) for v, fc in work.items()}
    total = sum(verb_n.values())
    lexicon = SFLexicon(unknown=dict(table.unknown),
                        observed_frame_types=len(table.frame_types()))
    lexicon.header = {
        "params": params.describe().replace(" ", ","),
        "strategy": strategy.value,
        "seed": str(seed),
        "rng": RNG_NAME,
    }
    max_len = max((len(f) for fc in work.values() for f in fc), default=0)

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for level in range(max_len, -1, -1):
            pairs = [(v, f, c) for v, fc in work.items() for f, c in fc.items()
                     if len(f) == level and c > 0]
            # count descending, then verb, then frame
            pairs.sort(key=lambda p: (-p[2], p[0], str(p[1])))
            frame_totals: Counter = Counter()
            for v, f, c in pairs:
                frame_totals[f] += c

            def score(pair):
                v, f, c = pair
                counts = ContingencyCounts(c, verb_n[v], frame_totals[f] - c, total - verb_n[v])
                return counts, evaluate_association(counts, params)

            results = list(pool.map(score, pairs)) if pool else [score(p) for p in pairs]

            rejected = []
            for (v, f, c), (counts, assoc) in zip(pairs, results):
                accepted = assoc.accepted or level == 0
                if trace is not None:
                    trace.append(Evaluation(v, f, counts, assoc.score, accepted))
                if accepted:
                    lexicon.add(SFEntry(v, f, c, assoc.score, params.method.value))
                else:
                    rejected.append((v, f, c))
            if not rejected:
                continue

            pooled = Counter()
            for fc in work.values():
                pooled.update(fc)
            moves = choose_successor(rejected, pooled, strategy, rng)
            for v, f, c in rejected:
                del work[v][f]
                work[v][moves[v, f]] += c
    finally:
        if pool:
            pool.shutdown()
    return lexicon


def train(observations: Iterable[VerbObservation], params: MethodParams | None = None,
          strategy: Strategy | str = Strategy.RANDOM, seed: int = 0,
          min_verb_freq: int = DEFAULT_MIN_VERB_FREQ, threads: int = 1,
          trace: list | None = None) -> SFLexicon:
    table = count_cooccurrences(observations, min_verb_freq)
    lexicon = refine_subsets(table, params or MethodParams(), strategy, seed, threads, trace)
    lexicon.header["min_verb_freq"] = str(min_verb_freq)
    return lexicon


__all__ = [
    "CooccurrenceTable", "Evaluation", "Method", "RNG_NAME", "SFEntry", "SFLexicon",
    "Strategy", "TScoreMode", "choose_successor", "count_cooccurrences",
    "discovered_frames", "refine_subsets", "successors", "train",
]
