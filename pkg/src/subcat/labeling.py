"""Argument/adjunct decisions for verb dependents, plus the two baselines."""
from __future__ import annotations

import enum
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable

from .corpus import (DependentLabel, Frame, Sentence, Token, canonicalize, is_predicate,
                     label_of, labeled_daughters)
from .induction import DEFAULT_MIN_VERB_FREQ, SFLexicon


class Mode(str, enum.Enum):
    LEARNED = "learned"
    BASELINE1 = "baseline1"
    BASELINE2 = "baseline2"


ARGUMENT = "Argument"
ADJUNCT = "Adjunct"


@dataclass(frozen=True)
class DependentDecision:
    sentence_index: int
    verb_id: int
    token_id: int
    label: DependentLabel
    decision: str
    verb_known: bool = True


def _score_key(score: float) -> float:
    return -math.inf if math.isnan(score) else score


def select_sf(verb: str, of: Frame, lexicon: SFLexicon) -> Frame | None:
    """Most specific lexicon frame for ``verb`` contained in ``of``.

    Ranked by length, then final count, then score, then the smallest
    rendering. Unknown verbs give None; a known verb with no matching entry
    gets the empty frame.
    """
    if verb not in lexicon:
        return None
    fits = [e for e in lexicon.for_verb(verb) if e.frame.issubset(of)]
    if not fits:
        return Frame()
    best = min(fits, key=lambda e: (-len(e.frame), -e.final_count, -_score_key(e.score), str(e.frame)))
    return best.frame


def _func_class(token: Token) -> str:
    return token.func.split("_")[0] if token.func else ""


class ObservedFrameIndex:
    """Raw training frames per verb, for the longest-match baseline.

    With ``use_func`` every slot is a (label, functional tag) pair, so a
    dependent only matches a training slot when both agree.
    """

    def __init__(self, use_func: bool = False):
        self.use_func = use_func
        self.frames: dict[str, Counter] = {}

    def slots(self, sentence: Sentence, verb_id: int) -> dict:
        out = defaultdict(list)
        for tok, label in labeled_daughters(sentence, verb_id):
            slot = (label, _func_class(tok)) if self.use_func else label
            out[slot].append(tok.id)
        return out

    @classmethod
    def build(cls, sentences: Iterable[Sentence], min_verb_freq: int = DEFAULT_MIN_VERB_FREQ,
              use_func: bool = False) -> "ObservedFrameIndex":
        index = cls(use_func)
        counts: dict[str, Counter] = defaultdict(Counter)
        for sent in sentences:
            for tok in sent.tokens:
                if is_predicate(tok):
                    counts[tok.lemma][frozenset(index.slots(sent, tok.id))] += 1
        index.frames = {v: c for v, c in counts.items() if sum(c.values()) >= min_verb_freq}
        return index

    def __contains__(self, verb: str) -> bool:
        return verb in self.frames

    def match(self, verb: str, test: frozenset) -> frozenset:
        """Slots of ``test`` covered by the best training frame for ``verb``."""
        frames = self.frames[verb]

        def order(of):
            return (-len(of), -frames[of], sorted(map(str, of)))

        subsets = [of for of in frames if of and of <= test]
        if subsets:
            return min(subsets, key=order)
        partial = [of for of in frames if of & test]
        if not partial:
            return frozenset()
        best = min(partial, key=lambda of: (-len(of & test), -frames[of], sorted(map(str, of))))
        return best & test


def label_sentence(sentence: Sentence, lexicon: SFLexicon | None = None,
                   mode: Mode | str = Mode.LEARNED,
                   of_index: ObservedFrameIndex | None = None) -> list[DependentDecision]:
    mode = Mode(mode)
    if mode is Mode.LEARNED and lexicon is None:
        raise ValueError("learned mode needs a lexicon")
    if mode is Mode.BASELINE2 and of_index is None:
        raise ValueError("baseline2 needs an observed frame index")
    out = []
    for verb in sentence.tokens:
        if not is_predicate(verb):
            continue
        deps = labeled_daughters(sentence, verb.id)
        known = True
        if mode is Mode.BASELINE1:
            args = set()
        elif mode is Mode.LEARNED:
            sf = select_sf(verb.lemma, canonicalize(lab for _, lab in deps), lexicon)
            known = sf is not None
            # every token carrying a chosen label is an argument
            args = {tok.id for tok, lab in deps if sf is not None and lab in sf}
        else:
            known = verb.lemma in of_index
            args = set()
            if known:
                slots = of_index.slots(sentence, verb.id)
                for slot in of_index.match(verb.lemma, frozenset(slots)):
                    args.update(slots[slot])
        for tok, lab in deps:
            decision = ARGUMENT if tok.id in args else ADJUNCT
            out.append(DependentDecision(sentence.index, verb.id, tok.id, lab, decision, known))
    return out


def label_corpus(sentences: Iterable[Sentence], lexicon: SFLexicon | None = None,
                 mode: Mode | str = Mode.LEARNED,
                 of_index: ObservedFrameIndex | None = None) -> list[DependentDecision]:
    decisions = []
    for sent in sentences:
        decisions.extend(label_sentence(sent, lexicon, mode, of_index))
    return decisions


ARG_CODES = {ARGUMENT: "A", ADJUNCT: "J"}


def annotate(sentence: Sentence, decisions: Iterable[DependentDecision]) -> Sentence:
    """Copy of ``sentence`` whose seventh column is A/J/U/_ per token."""
    codes = {}
    for d in decisions:
        codes[d.token_id] = ARG_CODES[d.decision] if d.verb_known else "U"
    tokens = tuple(
        Token(t.id, t.form, t.lemma, t.tag, t.head, t.func, codes.get(t.id, "_"))
        for t in sentence.tokens)
    return Sentence(tokens, sentence.index, sentence.comments)


def decisions_from_annotated(sentence: Sentence) -> list[DependentDecision]:
    """Inverse of :func:`annotate` for a labeled sentence read back from disk."""
    out = []
    for tok in sentence.tokens:
        code = tok.extra
        if code in (None, "_"):
            continue
        if code not in ("A", "J", "U"):
            raise ValueError(f"sentence {sentence.index}, token {tok.id}: bad ARG code {code!r}")
        label = label_of(tok, sentence)
        decision = ARGUMENT if code == "A" else ADJUNCT
        out.append(DependentDecision(sentence.index, tok.head, tok.id, label, decision, code != "U"))
    return out
