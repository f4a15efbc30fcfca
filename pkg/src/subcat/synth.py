"""Synthetic treebanks with a planted subcategorization lexicon.

Every sentence has one finite verb realizing one of its planted frames
plus sampled adjuncts, all as direct daughters of the verb (prepositions
get their noun one level down). The gold column marks planted members
with weight 1 and adjuncts with weight 0.
"""
from __future__ import annotations

import itertools
import random
from math import comb
from dataclasses import dataclass, field

from .corpus import (DependentLabel, Frame, LabelKind, Sentence, Token, canonicalize,
                     format_corpus)
from .induction import RNG_NAME

ARGUMENT_POOL = ("N1", "N4", "N3", "N2", "N7", "PR4", "PR3", "R4(na)", "R3(k)", "R7(s)",
                 "R2(od)", "R6(v)", "JS(že)", "JS(zda)", "S", "VINF", "VPAS")
# adjuncts range over far more prepositions than arguments do; a few overlap
ADJUNCT_POOL = ("DB", "N7", "R6(v)", "R4(na)", "R2(od)", "R7(s)", "R3(k)", "R2(do)", "R6(po)",
                "R4(pro)", "R7(před)", "R2(bez)", "R2(z)", "R6(o)", "R4(za)", "R7(mezi)", "R2(u)",
                "R6(při)", "R4(přes)", "R3(proti)", "R2(kvůli)", "R2(během)", "R2(podle)",
                "R2(kolem)", "R2(vedle)", "R7(nad)", "R7(pod)", "R2(mimo)", "R3(díky)", "R7(za)")

_NOUNS = ("student", "zájem", "jazyk", "fakulta", "soubor", "most", "škola", "kniha",
          "město", "práce", "rok", "den")
_FUNC_ARG = {"N1": "Sb"}


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    verb_count: int = 50
    frames_per_verb: tuple[int, int] = (1, 3)
    frame_length: tuple[int, int] = (1, 3)
    argument_pool: tuple[str, ...] = ARGUMENT_POOL
    adjunct_pool: tuple[str, ...] = ADJUNCT_POOL
    # weights for 0, 1, 2, 3 adjuncts
    adjuncts_per_sentence: tuple[float, ...] = (0.0, 1.0, 1.0, 1.0)
    sentences: int = 5000
    test_sentences: int = 500
    zipf_exponent: float = 1.0
    # verbs draw their frames from a shared inventory of this many frames,
    # Zipf-weighted by inventory_exponent (0 is uniform); None draws every
    # verb's frames independently
    frame_inventory: int | None = 20
    inventory_exponent: float = 0.0
    seed: int = 7

    def check(self) -> None:
        lo, hi = self.frame_length
        if not self.argument_pool:
            raise GeneratorError("empty argument pool")
        if self.verb_count < 1:
            raise GeneratorError("need at least one verb")
        if not 0 <= lo <= hi or hi > len(set(self.argument_pool)):
            raise GeneratorError(f"frame length range {self.frame_length} infeasible")
        flo, fhi = self.frames_per_verb
        if not 1 <= flo <= fhi:
            raise GeneratorError(f"frames per verb range {self.frames_per_verb} infeasible")
        n_pool = len(set(self.argument_pool))
        possible = sum(comb(n_pool, k) for k in range(lo, hi + 1))
        if fhi > possible:
            raise GeneratorError("not enough distinct frames for frames_per_verb")
        if self.frame_inventory is not None and fhi > self.frame_inventory:
            raise GeneratorError(f"frame inventory of {self.frame_inventory} infeasible")
        if len(self.adjuncts_per_sentence) > 4 or not any(self.adjuncts_per_sentence):
            raise GeneratorError("adjuncts_per_sentence must weight some of 0..3")
        if any(self.adjuncts_per_sentence[1:]) and not self.adjunct_pool:
            raise GeneratorError("adjuncts requested but the adjunct pool is empty")


@dataclass(frozen=True)
class PlantedSentence:
    verb: str
    frame: Frame
    adjuncts: Frame
    verb_id: int


@dataclass
class SyntheticData:
    spec: GeneratorSpec
    planted: dict[str, list[Frame]]
    train: list[Sentence] = field(default_factory=list)
    test: list[Sentence] = field(default_factory=list)
    train_records: list[PlantedSentence] = field(default_factory=list)
    test_records: list[PlantedSentence] = field(default_factory=list)

    def corpus_text(self, part: str = "train") -> str:
        return format_corpus(_strip_gold(s) for s in getattr(self, part))

    def gold_text(self, part: str = "train") -> str:
        return format_corpus(getattr(self, part))

    def planted_frames(self) -> set[Frame]:
        return {f for frames in self.planted.values() for f in frames}

    def planted_lexicon_text(self) -> str:
        counts: dict[tuple[str, Frame], int] = {}
        for rec in self.train_records:
            counts[rec.verb, rec.frame] = counts.get((rec.verb, rec.frame), 0) + 1
        spec = self.spec
        lines = [f"# planted seed={spec.seed} verbs={spec.verb_count} sentences={spec.sentences} "
                 f"rng={RNG_NAME}"]
        for verb in sorted(self.planted):
            for frame in sorted(self.planted[verb], key=lambda f: (-len(f), str(f))):
                lines.append(f"{verb}\t{frame}\t{counts.get((verb, frame), 0)}\t1.0\tplanted")
        return "\n".join(lines) + "\n"


def _strip_gold(sentence: Sentence) -> Sentence:
    tokens = tuple(Token(t.id, t.form, t.lemma, t.tag, t.head, t.func) for t in sentence.tokens)
    return Sentence(tokens, sentence.index, sentence.comments)


def _realize(label: DependentLabel, rng: random.Random, func: str) -> list[tuple]:
    """Token skeletons (form, lemma, tag, func, attach-to-previous) for one dependent."""
    kind = label.kind
    if kind is LabelKind.NOUN_CASE:
        noun = rng.choice(_NOUNS)
        return [(noun, noun, f"N{label.case}", func, False)]
    if kind is LabelKind.PREP:
        noun = rng.choice(_NOUNS)
        return [(label.lemma, label.lemma, f"R{label.case}", func, False),
                (noun, noun, f"N{label.case}", "Atr", True)]
    if kind is LabelKind.REFLEXIVE:
        form = "se" if label.case == 4 else "si"
        return [(form, "se", f"PR{label.case}", func, False)]
    if kind is LabelKind.COMPLEMENTIZER:
        return [(label.lemma, label.lemma, "JS", func, False)]
    tag = {LabelKind.CLAUSE: "S", LabelKind.INFINITIVE: "VINF",
           LabelKind.PASSIVE_PARTICIPLE: "VPAS", LabelKind.ADVERB: "DB"}[kind]
    word = {"S": "věta", "VINF": "dělat", "VPAS": "udělán", "DB": "dnes"}[tag]
    return [(word, word, tag, func, False)]


def _make_sentence(verb: str, frame: Frame, adjuncts: list, index: int,
                   rng: random.Random) -> tuple[Sentence, int]:
    parts = []
    for lab in frame:
        parts.append((_realize(lab, rng, _FUNC_ARG.get(str(lab), "Obj")), "1"))
    for lab in adjuncts:
        parts.append((_realize(lab, rng, "Adv"), "0"))
    rng.shuffle(parts)
    verb_pos = rng.randint(0, len(parts))
    parts.insert(verb_pos, None)

    tokens: list[Token] = []
    verb_id = sum(len(p[0]) for p in parts[:verb_pos]) + 1
    for part in parts:
        if part is None:
            tokens.append(Token(len(tokens) + 1, verb + "á", verb, "VPP3A", 0, "Pred", "_"))
            continue
        skeleton, weight = part
        owner = None
        for form, lemma, tag, func, attach in skeleton:
            tid = len(tokens) + 1
            if attach:
                tokens.append(Token(tid, form, lemma, tag, owner, func, "_"))
            else:
                owner = tid
                tokens.append(Token(tid, form, lemma, tag, verb_id, func, weight))
    tokens.append(Token(len(tokens) + 1, ".", ".", "ZIP", 0, "AuxK", "_"))
    comment = f"# sent_id = {index}"
    return Sentence(tuple(tokens), index, (comment,)), verb_id


def _plant(spec: GeneratorSpec, rng: random.Random) -> dict[str, list[Frame]]:
    pool = sorted({DependentLabel.parse(x) for x in spec.argument_pool}, key=str)
    width = len(str(spec.verb_count - 1))

    def draw_frame():
        return canonicalize(rng.sample(pool, rng.randint(*spec.frame_length)))

    inventory: list[Frame] = []
    if spec.frame_inventory is not None:
        n_pool = len(pool)
        possible = sum(comb(n_pool, k) for k in range(spec.frame_length[0], spec.frame_length[1] + 1))
        # small pools cannot fill the requested inventory
        while len(inventory) < min(spec.frame_inventory, possible):
            f = draw_frame()
            if f not in inventory:
                inventory.append(f)
        cum = list(itertools.accumulate(1.0 / r ** spec.inventory_exponent
                                        for r in range(1, len(inventory) + 1)))
    planted = {}
    for i in range(spec.verb_count):
        verb = f"sloveso{i:0{width}d}"
        n_frames = rng.randint(*spec.frames_per_verb)
        frames: list[Frame] = []
        while len(frames) < n_frames:
            f = rng.choices(inventory, cum_weights=cum)[0] if inventory else draw_frame()
            if f not in frames:
                frames.append(f)
        planted[verb] = frames
    return planted


def generate(spec: GeneratorSpec | None = None) -> SyntheticData:
    """Build train/test sentences and their planted records from ``spec.seed``."""
    spec = spec or GeneratorSpec()
    spec.check()
    rng = random.Random(spec.seed)
    planted = _plant(spec, rng)
    verbs = list(planted)
    cum = list(itertools.accumulate(1.0 / (r ** spec.zipf_exponent)
                                    for r in range(1, len(verbs) + 1)))
    adj_pool = sorted({DependentLabel.parse(x) for x in spec.adjunct_pool}, key=str)
    adj_counts = list(range(len(spec.adjuncts_per_sentence)))
    data = SyntheticData(spec, planted)

    def one(index: int):
        verb = rng.choices(verbs, cum_weights=cum)[0]
        frame = rng.choice(planted[verb])
        n_adj = rng.choices(adj_counts, weights=spec.adjuncts_per_sentence)[0]
        # with replacement, but never equal to a planted member of this sentence
        free = [a for a in adj_pool if a not in frame]
        drawn = [rng.choice(free) for _ in range(n_adj)] if free else []
        adjuncts = canonicalize(drawn)
        sent, verb_id = _make_sentence(verb, frame, drawn, index, rng)
        return sent, PlantedSentence(verb, frame, adjuncts, verb_id)

    for i in range(spec.sentences):
        sent, rec = one(i)
        data.train.append(sent)
        data.train_records.append(rec)
    for i in range(spec.test_sentences):
        sent, rec = one(i)
        data.test.append(sent)
        data.test_records.append(rec)
    return data
