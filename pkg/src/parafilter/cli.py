"""Command-line interface binding the whole curation workflow.

Subcommands: score, filter, sweep, hist, split, dedup, augment-plan,
augment-merge, select-candidates. Every subcommand is a deterministic
function of its flags and input files. Human-readable summaries print
scores as percentages; machine outputs (JSON-lines, CSV) carry raw
values in [0, 1].

Exit codes: 0 success, 1 data error, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import augment, scoring, sweep
from .corpus import (FORMATS, Corpus, SplitRatios, dedup_corpus, read_corpus,
                     split_corpus, write_corpus)
from .embeddings import load_store
from .errors import DataError
from .ngram import BleuConfig, PincConfig
from .pipeline import (STAGES, BackTranslation, CandidateGroup,
                       CandidateSelectionConfig, FilterConfig, filter_corpus,
                       select_candidates)

_STAGE_LABELS = {
    "pinc": "PINC",
    "bertscore": "BERTScore",
    "repetition": "N-gram repetition",
    "punctuation": "Punctuation",
}


def _default_jobs() -> int:
    env = os.environ.get("PARAFILTER_JOBS", "").strip()
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise ValueError(f"PARAFILTER_JOBS must be an integer, got {env!r}")


def _thresholds(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad threshold list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty threshold list")
    return values


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _emit_jsonl(records, path) -> None:
    out = _open_out(path)
    try:
        for rec in records:
            out.write(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()


def _pct(x) -> str:
    return "-" if x is None else f"{100.0 * x:.2f}"


# --- subcommand implementations ------------------------------------------

def _cmd_score(args) -> int:
    corpus = read_corpus(args.input, args.format)
    store = load_store(args.store) if args.store else None
    cfg = scoring.ScoringConfig(
        use_embeddings=not args.no_embeddings,
        pinc=PincConfig(args.pinc_max_n),
        bleu=BleuConfig(args.bleu_max_n, args.smoothing_epsilon),
    )
    per_pair, agg = scoring.score_corpus(corpus, store, cfg, jobs=args.jobs)
    _emit_jsonl((s.to_json_dict() for s in per_pair), args.out)

    table = sys.stderr if args.out in (None, "-") else sys.stdout
    rows = [("pairs", str(agg.pairs)),
            ("corpus BLEU", _pct(agg.corpus_bleu)),
            ("ROUGE-L", _pct(agg.mean_rouge_l_f1)),
            ("PINC", _pct(agg.mean_pinc)),
            ("self-BLEU", _pct(agg.mean_self_bleu)),
            ("BERTScore (F1)", _pct(agg.mean_bertscore_f1)),
            ("BERT-iBLEU", _pct(agg.mean_bert_ibleu))]
    for name, value in rows:
        print(f"{name:<16} {value}", file=table)
    return 0


def _cmd_filter(args) -> int:
    corpus = read_corpus(args.input, args.format)
    cfg = FilterConfig(
        pinc_min=args.pinc_min, bert_min=args.bert_min, bert_max=args.bert_max,
        repeat_n=args.repeat_n,
        require_terminal_punct=not args.no_punct_filter,
        pinc_max_n=args.pinc_max_n,
        use_bertscore=not args.no_embeddings,
    )
    store = load_store(args.store) if args.store else None
    kept, stats, outcomes = filter_corpus(corpus, store, cfg, jobs=args.jobs)
    write_corpus(kept, args.out, args.format)
    if args.outcomes:
        _emit_jsonl((o.to_json_dict() for o in outcomes), args.outcomes)

    print(f"{'input pairs':<22} {stats.input}")
    for stage in STAGES:
        label = f"rejected: {_STAGE_LABELS[stage]}"
        print(f"{label:<22} {stats.rejected[stage]}")
    print(f"{'passed':<22} {stats.passed}")
    print(f"{'yield':<22} {100.0 * stats.yield_fraction:.2f}%")
    return 0


def _cmd_sweep(args) -> int:
    corpus = read_corpus(args.input, args.format)
    store = load_store(args.store) if args.store else None
    curve = sweep.sweep_report(corpus, store, args.metric, args.thresholds,
                               csv_path=None, pinc_max_n=args.pinc_max_n)
    out = _open_out(args.out)
    try:
        out.writelines(sweep.curve_csv_lines(curve))
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_hist(args) -> int:
    if len(args.edges) < 2 or any(b <= a for a, b
                                  in zip(args.edges, args.edges[1:])):
        raise ValueError(f"edges must be strictly ascending: {args.edges}")
    corpus = read_corpus(args.input, args.format)
    store = load_store(args.store) if args.store else None
    scores = sweep.score_pairs(corpus, store, args.metric,
                               pinc_max_n=args.pinc_max_n)
    try:
        hist = sweep.histogram(scores, args.edges, args.metric)
    except ValueError as exc:
        # scores falling outside the requested range are a data problem
        raise DataError(str(exc)) from None
    out = _open_out(args.out)
    try:
        out.writelines(sweep.histogram_csv_lines(hist))
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_split(args) -> int:
    corpus = read_corpus(args.input, args.format)
    ratios = SplitRatios.from_string(args.ratios)
    train, validation, test = split_corpus(corpus, ratios, args.seed)
    write_corpus(train, args.out_train, args.format)
    write_corpus(validation, args.out_validation, args.format)
    write_corpus(test, args.out_test, args.format)
    print(f"train={len(train)} validation={len(validation)} test={len(test)}")
    return 0


def _cmd_dedup(args) -> int:
    corpus = read_corpus(args.input, args.format)
    kept = dedup_corpus(corpus, args.key)
    write_corpus(kept, args.out, args.format)
    print(f"kept {len(kept)} of {len(corpus)} pairs")
    return 0


def _cmd_augment_plan(args) -> int:
    cfg = augment.AugmentConfig(pos_order=tuple(args.pos_order.split(",")))
    requests = []
    for sentence in augment.read_tagged(args.tagged):
        requests.extend(augment.plan_masks(sentence, cfg))
    augment.write_requests(requests, args.out)
    print(f"{len(requests)} mask requests")
    return 0


def _cmd_augment_merge(args) -> int:
    corpus = read_corpus(args.input, args.format)
    cfg = augment.AugmentConfig(pos_order=tuple(args.pos_order.split(",")))
    fills_by_plan: dict[str, list] = {}
    for fill in augment.read_fills(args.fills):
        fills_by_plan.setdefault(fill.plan_id, []).append(fill)
    merged = []
    for sentence in augment.read_tagged(args.tagged):
        original = corpus.by_id(sentence.id) if sentence.id in corpus.ids() \
            else None
        if original is None:
            raise DataError(f"tagged sentence {sentence.id!r} not in corpus")
        requests = augment.plan_masks(sentence, cfg)
        fills = sorted(fills_by_plan.get(sentence.id, []), key=lambda f: f.step)
        pair = augment.merge_fills(original, requests, fills)
        merged.append(pair)
        for extra in range(2, args.repeat + 1):
            merged.append(
                type(pair)(f"{pair.id}{extra}", pair.source, pair.candidate,
                           pair.references, pair.meta))
    write_corpus(Corpus(merged), args.out, args.format)
    print(f"{len(merged)} augmented pairs")
    return 0


def _cmd_select_candidates(args) -> int:
    cfg = CandidateSelectionConfig(similarity_threshold=args.threshold)
    kept = []
    with open(args.input, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            try:
                obj = json.loads(line)
                group = CandidateGroup(
                    obj["id"], obj["source"],
                    tuple(BackTranslation(c["text"], float(c["sim_source"]),
                                          float(c["sim_pivot"]))
                          for c in obj["candidates"]))
            except (KeyError, TypeError, ValueError,
                    json.JSONDecodeError) as exc:
                raise DataError(f"{args.input}:{lineno}: {exc}") from None
            kept.extend(select_candidates(group, cfg))
    write_corpus(Corpus(kept), args.out, args.format)
    print(f"{len(kept)} candidate pairs kept")
    return 0


# --- parser ---------------------------------------------------------------

def _add_common(p, store=False):
    p.add_argument("--in", dest="input", required=True, help="input corpus file")
    p.add_argument("--format", choices=FORMATS, default="jsonl",
                   help="corpus file format (default jsonl)")
    if store:
        p.add_argument("--store", help="PEMB embedding store path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parafilter",
        description="Paraphrase corpus curation: metrics, filtering, "
                    "threshold sweeps, and MLM augmentation planning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score every pair with the full metric suite")
    _add_common(p, store=True)
    p.add_argument("--out", help="per-pair JSON-lines (default stdout)")
    p.add_argument("--no-embeddings", action="store_true",
                   help="skip BERTScore/BERT-iBLEU (no store needed)")
    p.add_argument("--pinc-max-n", type=int, default=4)
    p.add_argument("--bleu-max-n", type=int, default=4)
    p.add_argument("--smoothing-epsilon", type=float, default=0.1)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default $PARAFILTER_JOBS or 1)")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("filter", help="run the four-stage filter")
    _add_common(p, store=True)
    p.add_argument("--out", required=True, help="surviving pairs")
    p.add_argument("--outcomes", help="per-pair outcome JSON-lines")
    p.add_argument("--pinc-min", type=float, default=0.76)
    p.add_argument("--bert-min", type=float, default=0.92)
    p.add_argument("--bert-max", type=float, default=0.98)
    p.add_argument("--repeat-n", type=int, default=2)
    p.add_argument("--no-punct-filter", action="store_true")
    p.add_argument("--pinc-max-n", type=int, default=4)
    p.add_argument("--no-embeddings", action="store_true",
                   help="skip the BERTScore stage entirely")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("sweep", help="yield curve over thresholds, as CSV")
    _add_common(p, store=True)
    p.add_argument("--metric", choices=sweep.METRICS, required=True)
    p.add_argument("--thresholds", type=_thresholds, required=True,
                   help="comma-separated ascending thresholds")
    p.add_argument("--pinc-max-n", type=int, default=4)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("hist", help="score histogram, as CSV")
    _add_common(p, store=True)
    p.add_argument("--metric", choices=sweep.METRICS, required=True)
    p.add_argument("--edges", type=_thresholds, required=True,
                   help="comma-separated ascending bin edges")
    p.add_argument("--pinc-max-n", type=int, default=4)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=_cmd_hist)

    p = sub.add_parser("split", help="deterministic train/validation/test split")
    _add_common(p)
    p.add_argument("--ratios", required=True, help="e.g. 80:10:10")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-validation", required=True)
    p.add_argument("--out-test", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("dedup", help="drop duplicate pairs")
    _add_common(p)
    p.add_argument("--key", choices=("source", "candidate", "pair"),
                   default="pair")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_dedup)

    p = sub.add_parser("augment-plan", help="emit mask requests for a tagged corpus")
    p.add_argument("--tagged", required=True,
                   help="tagged corpus JSON-lines (id, tokens, tags)")
    p.add_argument("--pos-order", default=",".join(augment.DEFAULT_POS_ORDER),
                   help="comma-separated POS priority list")
    p.add_argument("--out", required=True, help="mask request JSON-lines")
    p.set_defaults(func=_cmd_augment_plan)

    p = sub.add_parser("augment-merge",
                       help="merge mask fills back into augmented pairs")
    _add_common(p)
    p.add_argument("--tagged", required=True)
    p.add_argument("--fills", required=True, help="mask fill JSON-lines")
    p.add_argument("--pos-order", default=",".join(augment.DEFAULT_POS_ORDER))
    p.add_argument("--repeat", type=int, default=1,
                   help="emit each augmented pair this many times")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_augment_merge)

    p = sub.add_parser("select-candidates",
                       help="gate back-translation groups by similarity")
    p.add_argument("--in", dest="input", required=True,
                   help="candidate group JSON-lines")
    p.add_argument("--format", choices=FORMATS, default="jsonl",
                   help="output corpus format")
    p.add_argument("--threshold", type=float, default=0.7)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_select_candidates)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "jobs", None) is None and hasattr(args, "jobs"):
            args.jobs = _default_jobs()
        if hasattr(args, "repeat") and args.repeat < 1:
            raise ValueError(f"--repeat must be >= 1, got {args.repeat}")
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
