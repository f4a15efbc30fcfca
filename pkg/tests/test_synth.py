import io
import random

import pytest

from subcat.corpus import Frame, extract_observations, format_corpus, labeled_daughters, parse_corpus
from subcat.induction import SFLexicon, count_cooccurrences
from subcat.synth import GeneratorError, GeneratorSpec, generate

F = Frame.parse


def observations(sentences):
    return [ob for s in sentences for ob in extract_observations(s)]


class TestGenerate:
    def test_degenerate_spec(self):
        spec = GeneratorSpec(verb_count=1, frames_per_verb=(1, 1), frame_length=(1, 1),
                             argument_pool=("N4",), adjuncts_per_sentence=(1.0,),
                             sentences=10, test_sentences=0)
        obs = observations(generate(spec).train)
        assert len(obs) == 10
        assert {(o.verb_lemma, str(o.frame)) for o in obs} == {("sloveso0", "N4")}

    def test_default_totals(self):
        data = generate()
        assert len(data.train) == 5000 and len(data.test) == 500
        assert count_cooccurrences(observations(data.train), min_verb_freq=0).total == 5000

    def test_observed_frame_strictly_contains_planted(self):
        data = generate(GeneratorSpec(verb_count=10, sentences=400, test_sentences=0, seed=3))
        for ob, rec in zip(observations(data.train), data.train_records):
            assert rec.frame.issubset(ob.frame) and ob.frame != rec.frame

    def test_planted_frames_distinct_and_in_range(self):
        data = generate(GeneratorSpec(seed=11, sentences=10, test_sentences=0))
        assert len(data.planted) == 50
        for frames in data.planted.values():
            assert 1 <= len(frames) <= 3 and len(set(frames)) == len(frames)
            assert all(1 <= len(f) <= 3 for f in frames)

    def test_adjuncts_never_repeat_planted_labels(self):
        data = generate(GeneratorSpec(verb_count=5, sentences=300, test_sentences=0, seed=2))
        for rec in data.train_records:
            assert not set(rec.adjuncts) & set(rec.frame)

    def test_gold_weights(self):
        data = generate(GeneratorSpec(verb_count=5, sentences=200, test_sentences=0, seed=4))
        for sent, rec in zip(data.train, data.train_records):
            for tok, lab in labeled_daughters(sent, rec.verb_id):
                assert tok.extra == ("1" if lab in rec.frame else "0")

    def test_independent_frames_option(self):
        data = generate(GeneratorSpec(frame_inventory=None, sentences=50, test_sentences=0))
        assert len(data.planted_frames()) > 20

    def test_deterministic(self):
        spec = GeneratorSpec(verb_count=8, sentences=100, test_sentences=20, seed=5)
        a, b = generate(spec), generate(spec)
        for part in ("train", "test"):
            assert a.corpus_text(part) == b.corpus_text(part)
            assert a.gold_text(part) == b.gold_text(part)
        assert generate(GeneratorSpec(verb_count=8, sentences=100, seed=6)).gold_text() != a.gold_text()


class TestFiles:
    def test_round_trip(self):
        data = generate(GeneratorSpec(verb_count=6, sentences=80, test_sentences=10, seed=9))
        for text in (data.corpus_text("train"), data.gold_text("train"), data.gold_text("test")):
            corpus = parse_corpus(text, strict=True)
            assert format_corpus(corpus) == text

    def test_corpus_text_has_no_gold(self):
        data = generate(GeneratorSpec(verb_count=3, sentences=5, test_sentences=0))
        assert all(len(line.split("\t")) == 6 for line in data.corpus_text().splitlines()
                   if line and not line.startswith("#"))

    def test_planted_lexicon_readable(self):
        data = generate(GeneratorSpec(verb_count=6, sentences=200, test_sentences=0, seed=1))
        lex = SFLexicon.read(io.StringIO(data.planted_lexicon_text()))
        assert {e.frame for e in lex.iter_entries()} == data.planted_frames()
        assert sum(e.final_count for e in lex.iter_entries()) == 200


class TestSpecErrors:
    @pytest.mark.parametrize("kwargs", [
        dict(argument_pool=()),
        dict(adjunct_pool=()),
        dict(verb_count=0),
        dict(frame_length=(2, 1)),
        dict(frames_per_verb=(0, 2)),
        dict(argument_pool=("N1", "N4"), frame_length=(1, 1), frames_per_verb=(3, 3)),
        dict(frame_inventory=2),
        dict(adjuncts_per_sentence=(0.0, 0.0)),
    ])
    def test_infeasible(self, kwargs):
        with pytest.raises(GeneratorError):
            generate(GeneratorSpec(**kwargs))

    def test_no_adjuncts_needs_no_pool(self):
        spec = GeneratorSpec(adjunct_pool=(), adjuncts_per_sentence=(1.0,), verb_count=2,
                             sentences=5, test_sentences=0)
        assert len(generate(spec).train) == 5


def test_random_specs_parse():
    rng = random.Random(0)
    for _ in range(5):
        spec = GeneratorSpec(verb_count=rng.randint(1, 10), sentences=rng.randint(0, 30),
                             test_sentences=rng.randint(0, 5), seed=rng.randrange(1000))
        data = generate(spec)
        assert len(parse_corpus(data.gold_text(), strict=True)) == spec.sentences
