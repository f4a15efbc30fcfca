"""Command line entry point: gen, train, label, eval, stats-dump."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .corpus import extract_observations, format_corpus, is_predicate, read_corpus
from .evaluation import format_table, format_tsv, read_counts, read_gold_weights, score
from .induction import (DEFAULT_MIN_VERB_FREQ, SFLexicon, Strategy,
                        count_cooccurrences, discovered_frames, refine_subsets)
from .labeling import Mode, ObservedFrameIndex, annotate, decisions_from_annotated, label_sentence
from .stats import DEFAULT_MISCUE_PROB, Method, MethodParams, TScoreMode
from .synth import GeneratorSpec, generate

log = logging.getLogger("subcat")


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _observations(sentences, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(extract_observations, sentences))
    else:
        chunks = [extract_observations(s) for s in sentences]
    return [ob for chunk in chunks for ob in chunk]


def _params(args) -> MethodParams:
    method = Method(args.method)
    if args.miscue_prob is not None and method is not Method.MISCUE:
        log.warning("--miscue-prob is only used by --method miscue; ignored")
    if args.tscore_mode != "default" and method is not Method.TSCORE:
        log.warning("--tscore-mode is only used by --method tscore; ignored")
    return MethodParams(method, args.threshold,
                        args.miscue_prob if args.miscue_prob is not None else DEFAULT_MISCUE_PROB,
                        TScoreMode(args.tscore_mode))


def _train(args, trace=None) -> SFLexicon:
    corpus = read_corpus(args.corpus)
    if not corpus.sentences:
        log.warning("training corpus %s has no sentences; lexicon will be empty", args.corpus)
    table = count_cooccurrences(_observations(corpus.sentences, args.threads), args.min_verb_freq)
    lexicon = refine_subsets(table, _params(args), args.successor, args.seed, args.threads, trace)
    lexicon.header["min_verb_freq"] = str(args.min_verb_freq)
    log.info("%d known verbs, %d unknown; discovered %d frames of %d observed frame types",
             len(lexicon.entries), len(lexicon.unknown), len(discovered_frames(lexicon)),
             lexicon.observed_frame_types)
    return lexicon


def cmd_gen(args) -> int:
    spec = GeneratorSpec(verb_count=args.verbs, sentences=args.sentences,
                         test_sentences=args.test_sentences, seed=args.seed)
    data = generate(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "train.conll", data.corpus_text("train"))
    _write(out / "train.gold", data.gold_text("train"))
    _write(out / "test.conll", data.corpus_text("test"))
    _write(out / "test.gold", data.gold_text("test"))
    _write(out / "planted.tsv", data.planted_lexicon_text())
    return 0


def cmd_train(args) -> int:
    lexicon = _train(args)
    with open(args.output, "w", encoding="utf-8", newline="\n") as f:
        lexicon.write(f)
    return 0


def cmd_stats_dump(args) -> int:
    trace = []
    _train(args, trace)
    lines = ["verb\tframe\tk1\tn1\tk2\tn2\tscore\taccepted"]
    for ev in trace:
        c = ev.counts
        lines.append(f"{ev.verb}\t{ev.frame}\t{c.k1}\t{c.n1}\t{c.k2}\t{c.n2}\t"
                     f"{ev.score!r}\t{int(ev.accepted)}")
    text = "\n".join(lines) + "\n"
    if args.output:
        _write(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_label(args) -> int:
    mode = Mode(args.mode)
    lexicon = of_index = None
    if mode is Mode.LEARNED:
        if not args.lexicon:
            raise SystemExit("label: --lexicon is required for --mode learned")
        with open(args.lexicon, encoding="utf-8") as f:
            lexicon = SFLexicon.read(f)
    elif mode is Mode.BASELINE2:
        if not args.train:
            raise SystemExit("label: --train is required for --mode baseline2")
        of_index = ObservedFrameIndex.build(read_corpus(args.train).sentences,
                                            args.min_verb_freq, args.use_func)
    corpus = read_corpus(args.corpus)

    def work(sent):
        return annotate(sent, label_sentence(sent, lexicon, mode, of_index))

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            labeled = list(pool.map(work, corpus.sentences))
    else:
        labeled = [work(s) for s in corpus.sentences]
    _write(Path(args.output), format_corpus(labeled))
    return 0


def cmd_eval(args) -> int:
    reports = {}
    if args.counts:
        with open(args.counts, encoding="utf-8") as f:
            reports.update(read_counts(f))
    if args.labeled:
        if not args.gold:
            raise SystemExit("eval: --gold is required with labeled files")
        gold_corpus = read_corpus(args.gold)
        gold = read_gold_weights(gold_corpus)
        names = args.names.split(",") if args.names else [Path(p).stem for p in args.labeled]
        if len(names) != len(args.labeled):
            raise SystemExit("eval: --names must give one name per labeled file")
        for name, path in zip(names, args.labeled):
            labeled = read_corpus(path)
            decisions = [d for s in labeled for d in decisions_from_annotated(s)]
            nodes = [(s.index, t.id) for s in labeled for t in s.tokens if is_predicate(t)]
            reports[name] = score(decisions, gold, nodes)
    if not reports:
        raise SystemExit("eval: nothing to evaluate (give labeled files or --counts)")
    text = format_table(reports) if args.report == "table" else format_tsv(reports)
    if args.output:
        _write(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return 0


def _add_training_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("corpus", help="training treebank")
    p.add_argument("--method", choices=[m.value for m in Method], default="miscue")
    p.add_argument("--threshold", type=float, default=None,
                   help="accept threshold (default: 0.05 miscue, 10.83 llr, 1.645 tscore)")
    p.add_argument("--miscue-prob", type=float, default=None,
                   help=f"miscue probability (default {DEFAULT_MISCUE_PROB})")
    p.add_argument("--successor", choices=[s.value for s in Strategy], default="random")
    p.add_argument("--tscore-mode", choices=[m.value for m in TScoreMode], default="default")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subcat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--min-verb-freq", type=int, default=DEFAULT_MIN_VERB_FREQ)
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a synthetic treebank")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--verbs", type=int, default=50)
    p.add_argument("--sentences", type=int, default=5000)
    p.add_argument("--test-sentences", type=int, default=500)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("train", parents=[common], help="learn a frame lexicon")
    _add_training_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("stats-dump", parents=[common], help="per-pair statistics as TSV")
    _add_training_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stats_dump)

    p = sub.add_parser("label", parents=[common], help="mark verb dependents A/J/U")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="learned")
    p.add_argument("--lexicon")
    p.add_argument("--train", help="training treebank (baseline2)")
    p.add_argument("--use-func", action="store_true",
                   help="baseline2: slots must also agree on functional tag")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("eval", parents=[common], help="score labeled files against gold")
    p.add_argument("labeled", nargs="*")
    p.add_argument("--gold")
    p.add_argument("--names", help="comma-separated column names")
    p.add_argument("--counts", help="TSV of raw aggregate counts per method")
    p.add_argument("--report", choices=["table", "tsv"], default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        raise SystemExit("--threads must be >= 1")
    try:
        return args.func(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
