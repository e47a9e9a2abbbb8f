"""Per-pair and corpus-level metric reports.

Each pair gets the full metric suite: PINC and self-BLEU against the
source, BLEU and ROUGE-L against the references (falling back to the
source when a pair carries none), BERTScore F1 from stored embeddings,
and the combined semantic/diversity score. Corpus aggregates are
arithmetic means, except BLEU which aggregates count tables corpus-wide.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

from .corpus import Corpus
from .embeddings import (BertIBleuConfig, EmbeddingStore, bert_ibleu,
                         bert_score)
from .errors import MissingEmbeddingError
from .ngram import (BleuConfig, PincConfig, corpus_bleu, pinc, rouge_l_f1,
                    sentence_bleu)
from .textnorm import tokenize


@dataclass(frozen=True)
class PairScores:
    """All per-pair scores, raw values in [0, 1]."""

    id: str
    pinc: float
    bleu: float
    self_bleu: float
    rouge_l_f1: float
    bertscore_f1: float | None = None
    bert_ibleu: float | None = None

    def to_json_dict(self) -> dict:
        out = {"id": self.id, "pinc": self.pinc, "bleu": self.bleu,
               "self_bleu": self.self_bleu, "rouge_l_f1": self.rouge_l_f1}
        if self.bertscore_f1 is not None:
            out["bertscore_f1"] = self.bertscore_f1
            out["bert_ibleu"] = self.bert_ibleu
        return out


@dataclass(frozen=True)
class CorpusScores:
    """Corpus aggregates: count-table corpus BLEU plus metric means."""

    pairs: int
    corpus_bleu: float
    mean_pinc: float
    mean_self_bleu: float
    mean_rouge_l_f1: float
    mean_bertscore_f1: float | None = None
    mean_bert_ibleu: float | None = None


@dataclass(frozen=True)
class ScoringConfig:
    use_embeddings: bool = True
    pinc: PincConfig = PincConfig()
    bleu: BleuConfig = BleuConfig()
    hybrid: BertIBleuConfig = BertIBleuConfig()
    source_suffix: str = ":src"
    candidate_suffix: str = ":cand"


def _score_pair(pair, store, cfg: ScoringConfig) -> PairScores:
    src = tokenize(pair.source)
    cand = tokenize(pair.candidate)
    refs = [tokenize(r) for r in pair.references] or [src]
    self_bleu = sentence_bleu(src, cand, cfg.bleu)
    bleu = corpus_bleu([refs], [cand], cfg.bleu)
    rouge = max(rouge_l_f1(r, cand) for r in refs)
    f1 = hybrid = None
    if cfg.use_embeddings:
        ref_m = store.get(pair.id + cfg.source_suffix)
        cand_m = store.get(pair.id + cfg.candidate_suffix)
        f1 = bert_score(ref_m, cand_m).f1
        # bert_ibleu requires F1 > 0; unrelated embeddings can score <= 0
        hybrid = bert_ibleu(min(max(f1, 1e-9), 1.0), self_bleu, cfg.hybrid)
    return PairScores(pair.id, pinc(src, cand, cfg.pinc), bleu, self_bleu,
                      rouge, f1, hybrid)


_WORKER = {}


def _init_worker(store, cfg):
    _WORKER["store"] = store
    _WORKER["cfg"] = cfg


def _score_one(pair):
    return _score_pair(pair, _WORKER["store"], _WORKER["cfg"])


def _mean(values):
    return sum(values) / len(values)


def score_corpus(corpus: Corpus, store: EmbeddingStore | None = None,
                 cfg: ScoringConfig = ScoringConfig(), jobs: int = 1,
                 ) -> tuple[list[PairScores], CorpusScores]:
    if len(corpus) == 0:
        raise ValueError("cannot score an empty corpus")
    if cfg.use_embeddings:
        if store is None:
            raise MissingEmbeddingError(
                [p.id + cfg.source_suffix for p in corpus][:10])
        missing = [p.id + suf for p in corpus
                   for suf in (cfg.source_suffix, cfg.candidate_suffix)
                   if p.id + suf not in store]
        if missing:
            raise MissingEmbeddingError(missing)

    if jobs > 1 and len(corpus) > 1:
        ctx = multiprocessing.get_context("fork")
        chunk = max(1, len(corpus) // (jobs * 4))
        with ctx.Pool(jobs, initializer=_init_worker, initargs=(store, cfg)) as pool:
            per_pair = pool.map(_score_one, corpus.pairs, chunksize=chunk)
    else:
        per_pair = [_score_pair(p, store, cfg) for p in corpus]

    refs = []
    hyps = []
    for pair in corpus:
        src = tokenize(pair.source)
        refs.append([tokenize(r) for r in pair.references] or [src])
        hyps.append(tokenize(pair.candidate))
    aggregate = CorpusScores(
        pairs=len(corpus),
        corpus_bleu=corpus_bleu(refs, hyps, cfg.bleu),
        mean_pinc=_mean([s.pinc for s in per_pair]),
        mean_self_bleu=_mean([s.self_bleu for s in per_pair]),
        mean_rouge_l_f1=_mean([s.rouge_l_f1 for s in per_pair]),
        mean_bertscore_f1=(_mean([s.bertscore_f1 for s in per_pair])
                           if cfg.use_embeddings else None),
        mean_bert_ibleu=(_mean([s.bert_ibleu for s in per_pair])
                         if cfg.use_embeddings else None),
    )
    return per_pair, aggregate
