"""Yield curves and score histograms for threshold selection.

A yield curve reports, for each threshold, the fraction of pairs whose
score is at or above it ("data having at least a certain amount"); the
filter thresholds were chosen by reading such plots, so the tool emits
the underlying CSV (threshold,count,fraction) and leaves plotting to
anything that reads CSV.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .corpus import Corpus
from .embeddings import EmbeddingStore, bert_score, sentence_similarity
from .errors import MissingEmbeddingError
from .ngram import PincConfig, pinc
from .textnorm import tokenize

METRICS = ("pinc", "bertscore_f1", "sentence_similarity")


@dataclass(frozen=True)
class SweepCurve:
    """Yield (count and fraction of scores >= threshold) per threshold."""

    metric: str
    thresholds: tuple[float, ...]
    counts: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("curve needs a positive sample count")
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError(f"thresholds not ascending: {self.thresholds}")
        if len(self.counts) != len(self.thresholds):
            raise ValueError("one count per threshold required")

    @property
    def yields(self) -> tuple[float, ...]:
        return tuple(c / self.n for c in self.counts)


@dataclass(frozen=True)
class ScoreHistogram:
    """Counts per half-open bin [e_i, e_i+1); the last bin is closed."""

    metric: str
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) < 2:
            raise ValueError("need at least two bin edges")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError(f"edges not strictly ascending: {self.edges}")
        if len(self.counts) != len(self.edges) - 1:
            raise ValueError("count/bin mismatch")


def yield_curve(scores, thresholds, metric: str = "") -> SweepCurve:
    """Fraction of scores at or above each threshold (closed comparison)."""
    scores = list(scores)
    if not scores:
        raise ValueError("yield_curve: no scores")
    ordered = sorted(scores)
    n = len(ordered)
    counts = tuple(n - bisect_left(ordered, t) for t in thresholds)
    return SweepCurve(metric, tuple(thresholds), counts, n)


def histogram(scores, edges, metric: str = "") -> ScoreHistogram:
    """Bin scores into [e_i, e_i+1) with the final bin closed at both ends."""
    edges = tuple(edges)
    hist = ScoreHistogram(metric, edges, (0,) * (len(edges) - 1))
    counts = [0] * (len(edges) - 1)
    for s in scores:
        if s < edges[0] or s > edges[-1]:
            raise ValueError(
                f"score {s} outside histogram range [{edges[0]}, {edges[-1]}]"
            )
        idx = min(bisect_right(edges, s) - 1, len(counts) - 1)
        counts[idx] += 1
    return ScoreHistogram(metric, edges, tuple(counts))


def score_pairs(corpus: Corpus, store: EmbeddingStore | None, metric: str,
                pinc_max_n: int = 4, source_suffix: str = ":src",
                candidate_suffix: str = ":cand") -> list[float]:
    """One score per pair for the given metric, in corpus order."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    if metric == "pinc":
        cfg = PincConfig(pinc_max_n)
        return [pinc(tokenize(p.source), tokenize(p.candidate), cfg)
                for p in corpus]
    if store is None:
        raise MissingEmbeddingError([p.id + source_suffix for p in corpus][:10])
    missing = [p.id + suf for p in corpus
               for suf in (source_suffix, candidate_suffix)
               if p.id + suf not in store]
    if missing:
        raise MissingEmbeddingError(missing)
    out = []
    for p in corpus:
        src_key, cand_key = p.id + source_suffix, p.id + candidate_suffix
        if metric == "bertscore_f1":
            out.append(bert_score(store.get(src_key), store.get(cand_key)).f1)
        else:
            out.append(sentence_similarity(store, src_key, cand_key))
    return out


def curve_csv_lines(curve: SweepCurve):
    yield "threshold,count,fraction\n"
    for t, c, y in zip(curve.thresholds, curve.counts, curve.yields):
        yield f"{t:.6f},{c},{y:.6f}\n"


def histogram_csv_lines(hist: ScoreHistogram):
    yield "bin_start,bin_end,count\n"
    for lo, hi, c in zip(hist.edges, hist.edges[1:], hist.counts):
        yield f"{lo:.6f},{hi:.6f},{c}\n"


def write_curve_csv(curve: SweepCurve, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(curve_csv_lines(curve))


def write_histogram_csv(hist: ScoreHistogram, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(histogram_csv_lines(hist))


def sweep_report(corpus: Corpus, store: EmbeddingStore | None, metric: str,
                 thresholds, csv_path=None, pinc_max_n: int = 4) -> SweepCurve:
    """Score every pair once, build the yield curve, optionally emit CSV."""
    scores = score_pairs(corpus, store, metric, pinc_max_n)
    curve = yield_curve(scores, thresholds, metric)
    if csv_path is not None:
        write_curve_csv(curve, csv_path)
    return curve
