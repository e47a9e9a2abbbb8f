"""Shared test fixtures: random corpora, independent oracles, and the
planted-failure corpus used by the pipeline tests.

The oracles here are deliberately naive reimplementations (explicit set
comprehensions, exhaustive loops, memoized recursion) kept independent
of the parafilter code paths they check.
"""

import math
import random
from collections import Counter
from functools import lru_cache

import numpy as np

from parafilter import Corpus, SentencePair, mock_store
from parafilter.pipeline import FilterConfig

ALPHABET = ["a", "b", "c", "d", "e", "f", "g", "h"]


def random_tokens(rng: random.Random, min_len=1, max_len=8, alphabet=None):
    alphabet = alphabet or ALPHABET
    return [rng.choice(alphabet) for _ in range(rng.randint(min_len, max_len))]


def random_text(rng: random.Random, vocab, min_len=3, max_len=12,
                terminated=True):
    words = [rng.choice(vocab) for _ in range(rng.randint(min_len, max_len))]
    return " ".join(words) + ("।" if terminated else "")


def random_corpus(rng: random.Random, n, with_refs=True, with_meta=True):
    vocab = [f"w{i}" for i in range(40)] + ["ক", "খমখ", "গগ"]
    pairs = []
    for i in range(n):
        refs = tuple(random_text(rng, vocab) for _ in range(rng.randint(0, 3))) \
            if with_refs else ()
        meta = {"src": "test", "k": str(rng.randint(0, 9))} \
            if with_meta and rng.random() < 0.5 else {}
        pairs.append(SentencePair(
            f"pair-{i}", random_text(rng, vocab), random_text(rng, vocab),
            refs, meta))
    return Corpus(pairs)


# --- independent oracles --------------------------------------------------

def oracle_ngram_set(tokens, n):
    return {tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)}


def oracle_pinc(src, cand, max_n=4):
    levels = []
    for n in range(1, max_n + 1):
        cgrams = oracle_ngram_set(cand, n)
        if not cgrams:
            continue
        sgrams = oracle_ngram_set(src, n)
        levels.append(1.0 - len(cgrams & sgrams) / len(cgrams))
    return sum(levels) / len(levels)


def oracle_lcs(a, b):
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def oracle_window_repeat(tokens, n):
    counts = Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))
    return any(c >= 2 for c in counts.values())


def oracle_clipped(hyp, refs, n):
    """(clipped matches, total windows) from explicit count tables."""
    hyp_table = Counter(tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1))
    ref_tables = [Counter(tuple(r[i:i + n]) for i in range(len(r) - n + 1))
                  for r in refs]
    clipped = 0
    for gram, count in hyp_table.items():
        clipped += min(count, max(t[gram] for t in ref_tables))
    return clipped, sum(hyp_table.values())


def oracle_corpus_bleu(references, hypotheses, max_n=4, eps=0.1):
    """Count-table reimplementation of corpus BLEU for small fixtures."""
    clipped = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for refs, hyp in zip(references, hypotheses):
        for n in range(1, max_n + 1):
            c, t = oracle_clipped(hyp, refs, n)
            clipped[n - 1] += c
            totals[n - 1] += t
        hyp_len += len(hyp)
        ref_len += sorted((len(r) for r in refs),
                          key=lambda L: (abs(L - len(hyp)), L))[0]
    log_sum = 0.0
    levels = 0
    for c, t in zip(clipped, totals):
        if t == 0:
            continue
        log_sum += math.log((c if c > 0 else eps) / t)
        levels += 1
    bp = math.exp(min(0.0, 1.0 - ref_len / hyp_len))
    return bp * math.exp(log_sum / levels)


def oracle_bert_score(ref_rows, cand_rows):
    """Exhaustive pairwise-max P/R/F1 with per-pair cosines."""

    def cos(u, v):
        nu = math.sqrt(sum(x * x for x in u))
        nv = math.sqrt(sum(x * x for x in v))
        return sum(a * b for a, b in zip(u, v)) / (nu * nv)

    table = [[cos(r, c) for c in cand_rows] for r in ref_rows]
    recall = sum(max(row) for row in table) / len(ref_rows)
    precision = sum(max(table[i][j] for i in range(len(ref_rows)))
                    for j in range(len(cand_rows))) / len(cand_rows)
    if precision + recall == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def oracle_bert_score_np(ref_rows, cand_rows):
    """Vectorized variant of oracle_bert_score for larger fixtures."""
    ref = np.asarray(ref_rows, dtype=np.float64)
    cand = np.asarray(cand_rows, dtype=np.float64)
    ref = ref / np.linalg.norm(ref, axis=1, keepdims=True)
    cand = cand / np.linalg.norm(cand, axis=1, keepdims=True)
    table = ref @ cand.T
    recall = table.max(axis=1).mean()
    precision = table.max(axis=0).mean()
    if precision + recall == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def oracle_has_terminal(text):
    enders = {"।", "?", "!", "."}
    quotes = {'"', "'", "”", "’"}
    for ch in reversed(text):
        if ch.isspace() or ch in quotes:
            continue
        return ch in enders
    return False


# --- planted-failure corpus -----------------------------------------------

PLANT_SIZES = {"pass": 500, "identical": 100, "perm": 100,
               "disjoint": 100, "repeat": 100, "punct": 100}

#: Filter operating point the plant is engineered against. The wide
#: BERTScore band keeps hash-embedding cosine noise far from both cuts.
PLANT_CONFIG = FilterConfig(pinc_min=0.76, bert_min=0.5, bert_max=0.98,
                            repeat_n=2, require_terminal_punct=True)

DANDA = "।"


def _plant_pair(kind, i, words, novel):
    rev = list(reversed(words))
    source = " ".join(words) + DANDA
    if kind == "identical":
        cand_tokens = words + [DANDA]
    elif kind == "perm":
        cand_tokens = rev + [DANDA]
    elif kind == "pass":
        cand_tokens = rev + novel[:2] + [DANDA]
    elif kind == "disjoint":
        cand_tokens = novel + [DANDA]
    elif kind == "repeat":
        cand_tokens = rev + [novel[0], rev[0], rev[1]] + [DANDA]
    elif kind == "punct":
        cand_tokens = rev + novel[:2]
    else:
        raise AssertionError(kind)
    candidate = " ".join(t for t in cand_tokens if t != DANDA)
    if cand_tokens[-1] == DANDA:
        candidate += DANDA
    return SentencePair(f"{kind}-{i}", source, candidate)


def planted_corpus(seed=20240, dim=128, sizes=PLANT_SIZES):
    """(corpus, store, expected_first_failure_counts).

    Each class is constructed so its per-stage behaviour under
    PLANT_CONFIG is known: every pair's class is re-derived here from
    independent per-stage checks (oracle pinc / exhaustive BERTScore /
    window counts / character scan) and the build fails loudly if any
    pair strays from its plant.
    """
    rng = random.Random(seed)
    pairs = []
    expected = {"pass": 0, "pinc": 0, "bertscore": 0,
                "repetition": 0, "punctuation": 0}
    class_stage = {"identical": "pinc", "perm": "pinc",
                   "disjoint": "bertscore", "repeat": "repetition",
                   "punct": "punctuation", "pass": "pass"}
    serial = 0
    for kind, count in sizes.items():
        for i in range(count):
            words = [f"ক{serial}x{j}" for j in range(12)]
            novel = [f"ন{serial}y{j}" for j in range(12)]
            serial += 1
            pairs.append(_plant_pair(kind, i, words, novel))
            expected[class_stage[kind]] += 1
    rng.shuffle(pairs)
    corpus = Corpus(pairs)
    store = mock_store(corpus, dim=dim)

    cfg = PLANT_CONFIG
    for pair in corpus:
        kind = pair.id.split("-")[0]
        src = _simple_tokens(pair.source)
        cand = _simple_tokens(pair.candidate)
        ref_m = store.get(pair.id + ":src").rows
        cand_m = store.get(pair.id + ":cand").rows
        _, _, f1 = oracle_bert_score_np(ref_m, cand_m)
        stage = None
        if oracle_pinc(src, cand) < cfg.pinc_min:
            stage = "pinc"
        elif not cfg.bert_min <= f1 <= cfg.bert_max:
            stage = "bertscore"
        elif oracle_window_repeat(cand, cfg.repeat_n):
            stage = "repetition"
        elif not oracle_has_terminal(pair.candidate):
            stage = "punctuation"
        label = stage or "pass"
        if label != class_stage[kind]:
            raise AssertionError(
                f"plant broke for {pair.id}: expected {class_stage[kind]}, "
                f"independent checks say {label} (f1={f1:.4f})"
            )
    return corpus, store, expected


def _simple_tokens(text):
    """Whitespace split with danda detached; mirrors what the plant emits."""
    out = []
    for chunk in text.split():
        if chunk.endswith(DANDA) and len(chunk) > 1:
            out.extend([chunk[:-1], DANDA])
        else:
            out.append(chunk)
    return out


def mock_rows(rng: random.Random, tokens, dim):
    """Random full-precision matrices for oracle comparisons."""
    return np.array([[rng.gauss(0, 1) for _ in range(dim)]
                     for _ in range(tokens)], dtype=np.float32)
