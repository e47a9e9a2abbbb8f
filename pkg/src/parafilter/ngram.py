"""Surface-form paraphrase metrics over token sequences.

PINC (fraction of candidate n-grams absent from the source, averaged
over n-gram orders), smoothed sentence BLEU (used as self-BLEU against
the source), corpus BLEU with multi-reference clipping, ROUGE-L F1, and
the n-gram repetition test used by the filter pipeline.

All scores are raw values in [0, 1]; the CLI converts to percentages
for human-readable output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels


def _tokens(x) -> tuple:
    """Accept a TokenSeq or any sequence of token strings."""
    toks = getattr(x, "tokens", x)
    return tuple(toks)


@dataclass(frozen=True)
class PincConfig:
    """Maximum n-gram order for PINC (4 in all our runs)."""

    max_n: int = 4

    def __post_init__(self):
        if not 1 <= self.max_n <= 8:
            raise ValueError(f"max_n must be in 1..8, got {self.max_n}")


@dataclass(frozen=True)
class BleuConfig:
    max_n: int = 4
    smoothing_epsilon: float = 0.1
    effective_order: bool = True

    def __post_init__(self):
        if self.max_n < 1:
            raise ValueError(f"max_n must be >= 1, got {self.max_n}")
        if not self.smoothing_epsilon > 0:
            raise ValueError("smoothing_epsilon must be positive")


def ngram_set(tokens, n: int) -> set:
    """Distinct contiguous n-token windows; empty when len(tokens) < n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    toks = _tokens(tokens)
    return {toks[i:i + n] for i in range(len(toks) - n + 1)}


def pinc(source, candidate, cfg: PincConfig = PincConfig()) -> float:
    """N-gram novelty of *candidate* with respect to *source*, in [0, 1].

    Average over n = 1..max_n of (1 - |overlap| / |candidate n-grams|),
    with set semantics. Orders where the candidate has no n-grams (it is
    shorter than n) are skipped and the average runs over the remaining
    orders. 0 for identical sequences, 1 for fully disjoint ones.
    Asymmetric by construction: the denominator counts candidate n-grams.
    """
    src, cand = _tokens(source), _tokens(candidate)
    if not cand:
        raise ValueError("pinc: candidate has no tokens")
    total = 0.0
    levels = 0
    for distinct, overlap in kernels.pinc_counts(src, cand, cfg.max_n):
        if distinct == 0:
            continue
        total += 1.0 - overlap / distinct
        levels += 1
    return total / levels


def _precisions(counts, eps: float):
    logs = []
    for clipped, total in counts:
        num = clipped if clipped > 0 else eps
        den = total if total > 0 else 1
        logs.append(math.log(num / den))
    return logs


def sentence_bleu(reference, hypothesis, cfg: BleuConfig = BleuConfig()) -> float:
    """Smoothed sentence-level BLEU of *hypothesis* against one reference.

    Geometric mean of modified n-gram precisions for n up to
    min(max_n, len(hypothesis)) (the effective-order rule; disable via
    cfg to always use max_n orders), with `smoothing_epsilon` replacing
    zero match counts, times the brevity penalty
    exp(min(0, 1 - |ref| / |hyp|)). Always strictly positive.
    """
    ref, hyp = _tokens(reference), _tokens(hypothesis)
    if not hyp:
        raise ValueError("sentence_bleu: empty hypothesis")
    orders = min(cfg.max_n, len(hyp)) if cfg.effective_order else cfg.max_n
    logs = _precisions(kernels.clipped_counts(hyp, [ref], orders),
                       cfg.smoothing_epsilon)
    bp = math.exp(min(0.0, 1.0 - len(ref) / len(hyp)))
    return bp * math.exp(sum(logs) / len(logs))


def corpus_bleu(references, hypotheses, cfg: BleuConfig = BleuConfig()) -> float:
    """Corpus-level BLEU with clipped counts aggregated over all pairs.

    *references* is one reference-set (non-empty list of token
    sequences) per hypothesis. The brevity penalty uses the closest
    reference length per hypothesis (ties resolved to the shorter one).
    Orders with no hypothesis n-grams anywhere in the corpus are
    skipped; zero match counts at the remaining orders are smoothed as
    in sentence_bleu.
    """
    if len(references) != len(hypotheses):
        raise ValueError(
            f"corpus_bleu: {len(references)} reference sets for "
            f"{len(hypotheses)} hypotheses"
        )
    if not hypotheses:
        raise ValueError("corpus_bleu: empty corpus")
    clipped = [0] * cfg.max_n
    totals = [0] * cfg.max_n
    hyp_len = 0
    ref_len = 0
    for refs, hyp in zip(references, hypotheses):
        hyp_t = _tokens(hyp)
        refs_t = [_tokens(r) for r in refs]
        if not hyp_t:
            raise ValueError("corpus_bleu: empty hypothesis")
        if not refs_t:
            raise ValueError("corpus_bleu: empty reference set")
        for i, (c, t) in enumerate(kernels.clipped_counts(hyp_t, refs_t, cfg.max_n)):
            clipped[i] += c
            totals[i] += t
        hyp_len += len(hyp_t)
        ref_len += min((len(r) for r in refs_t),
                       key=lambda L: (abs(L - len(hyp_t)), L))
    counts = [(c, t) for c, t in zip(clipped, totals) if t > 0]
    logs = _precisions(counts, cfg.smoothing_epsilon)
    bp = math.exp(min(0.0, 1.0 - ref_len / hyp_len))
    return bp * math.exp(sum(logs) / len(logs))


def rouge_l_f1(reference, hypothesis) -> float:
    """ROUGE-L F1 over tokens: LCS-based precision/recall harmonic mean."""
    ref, hyp = _tokens(reference), _tokens(hypothesis)
    if not ref or not hyp:
        raise ValueError("rouge_l_f1: empty input")
    lcs = kernels.lcs_length(ref, hyp)
    if lcs == 0:
        return 0.0
    precision = lcs / len(hyp)
    recall = lcs / len(ref)
    return 2 * precision * recall / (precision + recall)


def has_ngram_repeat(tokens, n: int) -> bool:
    """True iff some n-gram occurs at least twice (contiguous windows,
    multiset count)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return kernels.window_repeat(_tokens(tokens), n)
