"""Command line entry point: ``denormkit <subcommand> ...``.

Exit codes: 0 success, 1 internal error, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path

from . import crf, metrics, segmenter, synth
from .corpus import (
    BOUNDARY_LABELS, COMMA_LABELS, LabeledSequence, SplitSpec, Token,
    abbreviation_forms, as_instances, format_labeled, format_report, read_corpus, read_labeled,
    split_corpus, windows,
)
from .denorm.lexicon import DenormConfig, load_config, load_lexicons
from .denorm.rules import denormalize
from .errors import DenormError

log = logging.getLogger("denormkit")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2
WRAP = 20
TASK_LABELS = {"boundary": BOUNDARY_LABELS, "comma": COMMA_LABELS}


class UsageError(Exception):
    pass


def _read_text(path):
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UsageError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from None


def _open_out(path):
    if path is None or str(path) == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="\n")


def _require(path, what):
    if path is None or not Path(path).is_file():
        raise UsageError(f"{what} not found: {path}")
    return Path(path)


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _wrap(tokens, width=WRAP):
    return "".join(" ".join(tokens[i:i + width]) + "\n" for i in range(0, len(tokens), width))


# ---------------------------------------------------------------- synth

def cmd_synth(args):
    with _open_out(args.output) as out:
        for line in synth.generate(args.n, args.seed):
            out.write(line + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- prepare

def _rendered(sequences):
    """Gold punctuated text over normalized tokens, one sentence per line."""
    stream = [t.surface for s in sequences for t in s.tokens]
    bs = [b for s in sequences for b in s.boundaries]
    cs = [c for s in sequences for c in s.commas]
    return segmenter.render(segmenter.assemble(stream, bs, cs))


def cmd_prepare(args):
    corpus_path = _require(args.corpus, "corpus")
    lexicons = load_lexicons(args.lexicons, kinds=("abbreviation",))
    with open(corpus_path, "rb") as fh:
        lines = fh.read().split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    sentences, report = read_corpus(
        lines, lexicons.abbreviations, free_text=args.free_text, exclude_flagged=args.exclude_flagged,
    )
    spec = SplitSpec(args.segments, args.per_segment, args.seed)
    train, tune, test = split_corpus(sentences, spec)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for name, part in (("train", train), ("tune", tune), ("test", test)):
        _write(out / f"{name}.tsv", format_labeled(part))
    for name, part in (("tune", tune), ("test", test)):
        _write(out / f"{name}.txt", _wrap([t.surface for s in part for t in s.tokens]))
        _write(out / f"{name}.ref.txt", _rendered(part))
    _write(out / "report.tsv", format_report(report))
    manifest = {
        "corpus": corpus_path.name,
        "sentences": len(sentences),
        "flagged": sum(s.flagged for s in sentences),
        "train": len(train), "tune": len(tune), "test": len(test),
        "segments": spec.segments, "per_segment": spec.per_segment, "seed": spec.seed,
        "free_text": args.free_text, "exclude_flagged": args.exclude_flagged,
    }
    _write(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"train={len(train)} tune={len(tune)} test={len(test)} -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------- train

def _task_f1(model, instances, task):
    """Boundary F1 (any terminal counts) or comma F1 on decoded instances."""
    tp = fp = fn = 0
    negative = "NONE"
    for words, gold in instances:
        pred, _ = crf.viterbi(words, model)
        for p, g in zip(pred, gold):
            tp += p != negative and g != negative
            fp += p != negative and g == negative
            fn += p == negative and g != negative
    return metrics.prf(tp, fp, fn)[2]


def cmd_train(args):
    train_path = _require(args.train, "training file")
    tune_path = _require(args.tune, "tune file") if args.tune else None
    templates = crf.parse_templates(args.templates) if args.templates else crf.DEFAULT_TEMPLATES
    train_seqs = read_labeled(train_path)
    dataset = as_instances(windows(train_seqs, args.window), args.task)
    tune_set = as_instances(windows(read_labeled(tune_path), args.window), args.task) if tune_path else None
    config = crf.TrainConfig(
        l2_lambda=args.l2, epochs=args.epochs, learning_rate=args.lr,
        shuffle_seed=args.seed, batch_size=args.batch_size or None,
    )
    labels = TASK_LABELS[args.task]
    history, scores = [], []
    best = {"f1": None, "model": None, "epoch": 0}

    def consider(epoch, model):
        if tune_set is None:
            best.update(model=model, epoch=epoch)
            return None
        f1 = _task_f1(model, tune_set, args.task)
        scores.append(f1)
        # strict improvement keeps the earliest epoch on ties
        if best["f1"] is None or f1 > best["f1"]:
            best.update(f1=f1, model=model, epoch=epoch)
        return f1

    def on_epoch(record, model):
        history.append((record, consider(record.epoch, model)))

    if tune_set is not None or args.epochs == 0:
        crf._check_dataset(dataset, labels)
        zero = crf.CrfModel.zeros(labels, templates, crf.build_vocab(dataset, templates))
        consider(0, zero)
    model = crf.train(dataset, labels, templates, config, on_epoch=on_epoch)
    chosen = best["model"] if best["model"] is not None else model
    crf.save_model(chosen, args.output)
    if args.log:
        rows = ["epoch\tobjective\tstep\ttune_f1\n"]
        if tune_set is not None:
            rows.append(f"0\t\t\t{scores[0]:.6f}\n")
        for record, f1 in history:
            f1_text = "" if f1 is None else f"{f1:.6f}"
            rows.append(f"{record.epoch}\t{record.objective:.6f}\t{record.step:.6g}\t{f1_text}\n")
        _write(args.log, "".join(rows))
    if args.figure:
        from .plotting import plot_training

        plot_training([r for r, _ in history], args.figure, scores or None)
    msg = f"saved {args.output} (epoch {best['epoch']}"
    if best["f1"] is not None:
        msg += f", tune F1 {best['f1']:.4f}"
    print(msg + ")")
    return EXIT_OK


# ---------------------------------------------------------------- segment

def _load_model(path, what):
    return crf.load_model(_require(path, what))


def cmd_segment(args):
    bmodel = _load_model(args.boundary_model, "boundary model")
    cmodel = _load_model(args.comma_model, "comma model") if args.comma_model else None
    tokens = _read_text(args.input).split()
    result = segmenter.segment(tokens, bmodel, cmodel)
    with _open_out(args.output) as out:
        for sentence in result.sentences:
            out.write(segmenter.render_sentence(sentence) + "\n")
            out.flush()
    if result.coerced:
        log.info("final NONE label coerced to PERIOD")
    return EXIT_OK


# ---------------------------------------------------------------- denorm

def cmd_denorm(args):
    config = load_config(_require(args.config, "config")) if args.config else DenormConfig()
    for stage in ("numbers", "entities", "abbreviations", "casing"):
        if getattr(args, f"no_{stage}"):
            setattr(config, stage, False)
    kinds = []
    if config.numbers or config.entities:
        kinds.append("numeral_form")
    if config.abbreviations:
        kinds.append("abbreviation")
    if config.casing:
        kinds.extend(["given_name", "surname"])
    try:
        lexicons = load_lexicons(args.lexicons, kinds=tuple(kinds))
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    text = _read_text(args.input)
    segmented = segmenter.parse_segmented(text, abbreviation_forms(lexicons.abbreviations))
    with _open_out(args.output) as out:
        out.write(denormalize(segmented, lexicons, config))
    return EXIT_OK


# ---------------------------------------------------------------- evaluate

def _labeled_from(path):
    """A label .tsv file, or punctuated text read back into labels."""
    if Path(path).suffix == ".tsv":
        return read_labeled(path)
    words, bs, cs = segmenter.labels_from_text(_read_text(path), abbreviation_forms(_abbreviations()))
    if not words:
        return []
    return [LabeledSequence([Token(w, i) for i, w in enumerate(words)], bs, cs)]


def _abbreviations():
    try:
        return load_lexicons(None, kinds=("abbreviation",)).abbreviations
    except FileNotFoundError:
        return None


def _segments(path):
    return [line.split() for line in _read_text(path).splitlines()]


def cmd_evaluate(args):
    _require(args.pred, "prediction file")
    _require(args.gold, "gold file")
    if args.kind == "boundary":
        report = metrics.boundary_eval(_labeled_from(args.pred), _labeled_from(args.gold))
    else:
        hyps, refs = _segments(args.pred), _segments(args.gold)
        if len(hyps) != len(refs):
            raise UsageError(f"line count mismatch: {len(hyps)} predicted, {len(refs)} gold")
        if args.kind == "bleu":
            report = metrics.bleu(hyps, refs)
        elif args.kind == "nist":
            report = metrics.nist(hyps, refs)
        elif args.kind == "ter":
            report = metrics.corpus_ter(hyps, refs)
        else:
            report = metrics.corpus_meteor(hyps, refs)
    print(report.to_text())
    print(report.to_line())
    if args.figure:
        from .plotting import plot_report

        plot_report(report, args.figure)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="denormkit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="write a synthetic punctuated corpus")
    s.add_argument("-n", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("prepare", help="normalize a corpus and split it into train/tune/test")
    s.add_argument("corpus")
    s.add_argument("-o", "--output", required=True, help="output directory")
    s.add_argument("--segments", type=int, default=250)
    s.add_argument("--per-segment", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--lexicons")
    s.add_argument("--free-text", action="store_true", help="sentences may span lines")
    s.add_argument("--exclude-flagged", action="store_true")
    s.set_defaults(func=cmd_prepare)

    s = sub.add_parser("train", help="train a boundary or comma CRF")
    s.add_argument("task", choices=sorted(TASK_LABELS))
    s.add_argument("--train", required=True)
    s.add_argument("--tune")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--epochs", type=int, default=10)
    s.add_argument("--l2", type=float, default=1.0)
    s.add_argument("--lr", type=float, default=0.1)
    s.add_argument("--batch-size", type=int, default=16, help="0 for full-batch ascent")
    s.add_argument("--window", type=int, default=8, help="sentences per training stream")
    s.add_argument("--templates", help='e.g. "word offset:-1 offset:1 suffix:3"')
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--log", help="per-epoch TSV log")
    s.add_argument("--figure", help="PNG training curve")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("segment", help="punctuate a normalized token stream")
    s.add_argument("input")
    s.add_argument("--boundary-model", required=True)
    s.add_argument("--comma-model")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_segment)

    s = sub.add_parser("denorm", help="apply the de-normalization rules to segmented text")
    s.add_argument("input")
    s.add_argument("--lexicons", help="lexicon directory (default: $DENORM_LEXICON_DIR, then shipped)")
    s.add_argument("--config")
    for stage in ("numbers", "entities", "abbreviations", "casing"):
        s.add_argument(f"--no-{stage}", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_denorm)

    s = sub.add_parser("evaluate", help="score predictions against a gold file")
    s.add_argument("pred")
    s.add_argument("gold")
    s.add_argument("--kind", choices=["boundary", "bleu", "nist", "ter", "meteor"], required=True)
    s.add_argument("--figure", help="PNG rendering of the report")
    s.set_defaults(func=cmd_evaluate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, DenormError, FileNotFoundError) as exc:
        print(f"denormkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"denormkit {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
