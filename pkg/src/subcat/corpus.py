"""Treebank reading/writing, dependent labels and observed frames.

The corpus format is a tab-separated, one-token-per-line layout::

    ID  FORM  LEMMA  TAG  HEAD  FUNC  [ARG]

Sentences are separated by a blank line and lines starting with ``#`` are
comments. The optional seventh column holds a gold argument weight (gold
files) or an A/J/U/_ decision (labeled output); it is carried through
verbatim as :attr:`Token.extra`.
"""
from __future__ import annotations

import enum
import io
import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

log = logging.getLogger(__name__)

BASE_COLUMNS = 6
EMPTY_FIELD = "_"
EMPTY_FRAME = "∅"  # rendered empty frame


class CorpusFormatError(ValueError):
    """A malformed line or sentence, with the 1-based line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        self.message = message
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


class LabelError(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    lemma: str
    tag: str
    head: int
    func: str = ""
    extra: str | None = None

    def columns(self) -> list[str]:
        cols = [str(self.id), self.form, self.lemma, self.tag, str(self.head),
                self.func or EMPTY_FIELD]
        if self.extra is not None:
            cols.append(self.extra)
        return cols


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    index: int = 0
    comments: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def token(self, token_id: int) -> Token:
        return self.tokens[token_id - 1]

    def daughters(self, token_id: int) -> list[Token]:
        return [t for t in self.tokens if t.head == token_id]


@dataclass
class Corpus(Sequence):
    """Parsed sentences plus the errors of every rejected block."""

    sentences: list[Sentence] = field(default_factory=list)
    errors: list[CorpusFormatError] = field(default_factory=list)

    def __getitem__(self, i):
        return self.sentences[i]

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def rejected(self) -> int:
        return len(self.errors)


def _parse_token(line: str, lineno: int) -> Token:
    cols = line.split("\t")
    if len(cols) not in (BASE_COLUMNS, BASE_COLUMNS + 1):
        raise CorpusFormatError(
            f"expected {BASE_COLUMNS} or {BASE_COLUMNS + 1} columns, got {len(cols)}", lineno)
    try:
        tid = int(cols[0])
    except ValueError:
        raise CorpusFormatError(f"non-integer id {cols[0]!r}", lineno) from None
    try:
        head = int(cols[4])
    except ValueError:
        raise CorpusFormatError(f"non-integer head {cols[4]!r}", lineno) from None
    func = "" if cols[5] == EMPTY_FIELD else cols[5]
    extra = cols[6] if len(cols) > BASE_COLUMNS else None
    return Token(tid, cols[1], cols[2], cols[3], head, func, extra)


def _check_tree(tokens: list[Token], linenos: list[int]) -> None:
    n = len(tokens)
    width = None
    for pos, (tok, lineno) in enumerate(zip(tokens, linenos), start=1):
        if tok.id != pos:
            raise CorpusFormatError(f"token id {tok.id} out of sequence (expected {pos})", lineno)
        if tok.head < 0 or tok.head > n:
            raise CorpusFormatError(f"dangling head {tok.head} (sentence has {n} tokens)", lineno)
        if tok.head == tok.id:
            raise CorpusFormatError(f"token {tok.id} is its own head", lineno)
        has_extra = tok.extra is not None
        if width is None:
            width = has_extra
        elif width != has_extra:
            raise CorpusFormatError("inconsistent column count within sentence", lineno)
    # every chain of heads must reach 0
    state = [0] * (n + 1)  # 0 unseen, 1 on stack, 2 done
    for start in range(1, n + 1):
        path = []
        node = start
        while node != 0 and state[node] == 0:
            state[node] = 1
            path.append(node)
            node = tokens[node - 1].head
        if node != 0 and state[node] == 1:
            raise CorpusFormatError(f"head cycle through token {node}", linenos[node - 1])
        for p in path:
            state[p] = 2


def _blocks(lines: Iterable[str]) -> Iterator[tuple[list[tuple[int, str]], list[str]]]:
    rows: list[tuple[int, str]] = []
    comments: list[str] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            if rows or comments:
                yield rows, comments
            rows, comments = [], []
        elif line.startswith("#"):
            comments.append(line)
        else:
            rows.append((lineno, line))
    if rows or comments:
        yield rows, comments


def parse_corpus(source: str | Iterable[str], strict: bool = False) -> Corpus:
    """Read sentences from text or an iterable of lines.

    A malformed block is rejected as a whole and parsing continues; the
    errors are collected on the returned :class:`Corpus`. With
    ``strict=True`` the first error is raised instead.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    corpus = Corpus()
    block_no = 0
    for rows, comments in _blocks(source):
        if not rows:
            continue  # comment-only block
        index = block_no
        block_no += 1
        try:
            tokens = [_parse_token(line, lineno) for lineno, line in rows]
            _check_tree(tokens, [lineno for lineno, _ in rows])
        except CorpusFormatError as err:
            if strict:
                raise
            log.warning("rejected sentence %d: %s", index, err)
            corpus.errors.append(err)
            continue
        corpus.sentences.append(Sentence(tuple(tokens), index, tuple(comments)))
    if corpus.errors:
        log.warning("%d malformed sentence(s) rejected", len(corpus.errors))
    return corpus


def read_corpus(path, strict: bool = False) -> Corpus:
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f, strict=strict)


def format_sentence(sentence: Sentence) -> str:
    lines = list(sentence.comments)
    lines.extend("\t".join(t.columns()) for t in sentence.tokens)
    return "\n".join(lines) + "\n"


def format_corpus(sentences: Iterable[Sentence]) -> str:
    return "\n".join(format_sentence(s) for s in sentences)


class LabelKind(enum.Enum):
    NOUN_CASE = "NounCase"
    PREP = "Prep"
    REFLEXIVE = "Reflexive"
    CLAUSE = "Clause"
    COMPLEMENTIZER = "Complementizer"
    INFINITIVE = "Infinitive"
    PASSIVE_PARTICIPLE = "PassiveParticiple"
    ADVERB = "Adverb"


_CASED = {LabelKind.NOUN_CASE, LabelKind.PREP, LabelKind.REFLEXIVE}
_LEXICAL = {LabelKind.PREP, LabelKind.COMPLEMENTIZER}
_PREFIX = {
    LabelKind.NOUN_CASE: "N",
    LabelKind.PREP: "R",
    LabelKind.REFLEXIVE: "PR",
    LabelKind.CLAUSE: "S",
    LabelKind.COMPLEMENTIZER: "JS",
    LabelKind.INFINITIVE: "VINF",
    LabelKind.PASSIVE_PARTICIPLE: "VPAS",
    LabelKind.ADVERB: "DB",
}
_BY_PREFIX = {v: k for k, v in _PREFIX.items()}
_LABEL_RE = re.compile(r"^(PR|JS|VINF|VPAS|DB|N|R|S)([1-7])?(?:\((.+)\))?$")


@dataclass(frozen=True)
class DependentLabel:
    """One slot of a frame, e.g. ``N4``, ``R2(bez)``, ``JS(že)``."""

    kind: LabelKind
    case: int | None = None
    lemma: str | None = None

    def __post_init__(self):
        if self.kind in _CASED:
            if not isinstance(self.case, int) or not 1 <= self.case <= 7:
                raise LabelError(f"{self.kind.value} needs a case in 1..7, got {self.case!r}")
        elif self.case is not None:
            raise LabelError(f"{self.kind.value} carries no case")
        if (self.kind in _LEXICAL) != bool(self.lemma):
            raise LabelError(f"lemma must be present iff kind is Prep/Complementizer "
                             f"({self.kind.value}, {self.lemma!r})")

    def __str__(self) -> str:
        s = _PREFIX[self.kind]
        if self.case is not None:
            s += str(self.case)
        if self.lemma is not None:
            s += f"({self.lemma})"
        return s

    def __lt__(self, other: "DependentLabel") -> bool:
        return str(self) < str(other)

    @classmethod
    def parse(cls, text: str) -> "DependentLabel":
        m = _LABEL_RE.match(text)
        if not m:
            raise LabelError(f"cannot parse label {text!r}")
        prefix, case, lemma = m.groups()
        return cls(_BY_PREFIX[prefix], int(case) if case else None, lemma)


def _case_digit(tag: str, prefix: str) -> int:
    digit = tag[len(prefix):len(prefix) + 1]
    if not digit.isdigit() or not 1 <= int(digit) <= 7:
        raise LabelError(f"tag {tag!r} has no valid case digit after {prefix!r}")
    return int(digit)


def label_of(token: Token, sentence: Sentence | None = None) -> DependentLabel | None:
    """Map a dependent token to its frame label, or None if it fills no slot.

    Raises LabelError when the tag looks like a cased label but the case
    digit is missing or out of range.
    """
    tag = token.tag
    if tag == "VINF":
        return DependentLabel(LabelKind.INFINITIVE)
    if tag == "VPAS":
        return DependentLabel(LabelKind.PASSIVE_PARTICIPLE)
    if tag.startswith("DB"):
        return DependentLabel(LabelKind.ADVERB)
    if tag.startswith("JS"):
        return DependentLabel(LabelKind.COMPLEMENTIZER, lemma=token.lemma)
    if tag.startswith("PR"):
        return DependentLabel(LabelKind.REFLEXIVE, _case_digit(tag, "PR"))
    if tag.startswith("N"):
        return DependentLabel(LabelKind.NOUN_CASE, _case_digit(tag, "N"))
    if tag.startswith("R"):
        return DependentLabel(LabelKind.PREP, _case_digit(tag, "R"), token.lemma)
    if tag.startswith("S"):
        return DependentLabel(LabelKind.CLAUSE)
    return None


@dataclass(frozen=True)
class Frame:
    """An order-free set of dependent labels, kept sorted by rendering."""

    members: tuple[DependentLabel, ...] = ()

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[DependentLabel]:
        return iter(self.members)

    def __contains__(self, label) -> bool:
        return label in self.members

    def __str__(self) -> str:
        return "+".join(str(m) for m in self.members) if self.members else EMPTY_FRAME

    def __lt__(self, other: "Frame") -> bool:
        return str(self) < str(other)

    @property
    def length(self) -> int:
        return len(self.members)

    def issubset(self, other: "Frame") -> bool:
        return set(self.members) <= set(other.members)

    def without(self, label: DependentLabel) -> "Frame":
        return Frame(tuple(m for m in self.members if m != label))

    @classmethod
    def parse(cls, text: str) -> "Frame":
        if text in (EMPTY_FRAME, ""):
            return cls()
        return canonicalize(DependentLabel.parse(part) for part in text.split("+"))


def canonicalize(labels: Iterable[DependentLabel]) -> Frame:
    return Frame(tuple(sorted(set(labels), key=str)))


@dataclass(frozen=True)
class VerbObservation:
    verb_lemma: str
    frame: Frame
    sentence_index: int
    verb_id: int
    dependent_token_ids: dict = field(default_factory=dict, compare=False, hash=False)


def is_predicate(token: Token) -> bool:
    return token.tag.startswith("V") and token.tag not in ("VINF", "VPAS")


def labeled_daughters(sentence: Sentence, verb_id: int) -> list[tuple[Token, DependentLabel]]:
    out = []
    for d in sentence.daughters(verb_id):
        label = label_of(d, sentence)
        if label is not None:
            out.append((d, label))
    return out


def extract_observations(sentence: Sentence,
                         predicate: Callable[[Token], bool] = is_predicate) -> list[VerbObservation]:
    obs = []
    for tok in sentence.tokens:
        if not predicate(tok):
            continue
        ids: dict[DependentLabel, list[int]] = {}
        for d, label in labeled_daughters(sentence, tok.id):
            ids.setdefault(label, []).append(d.id)
        frame = canonicalize(ids)
        obs.append(VerbObservation(
            tok.lemma, frame, sentence.index, tok.id,
            {label: tuple(ids[label]) for label in frame}))
    return obs
