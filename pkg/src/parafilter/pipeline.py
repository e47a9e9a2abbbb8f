"""Candidate selection and the four-stage paraphrase filter.

Stage order is fixed: pinc -> bertscore -> repetition -> punctuation.
Every stage is a stateless per-pair predicate, so the set of surviving
pairs is the intersection of the individual predicate-pass sets; the
order only decides which stage a rejection is attributed to. All stages
are scored even after a failure so sweep and histogram tooling can
reuse the scores from a single pass.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field

from .corpus import Corpus, SentencePair
from .embeddings import EmbeddingStore, bert_score
from .errors import MissingEmbeddingError
from .ngram import PincConfig, has_ngram_repeat, pinc
from .textnorm import has_terminal_punctuation, tokenize

STAGES = ("pinc", "bertscore", "repetition", "punctuation")


@dataclass(frozen=True)
class CandidateSelectionConfig:
    """Similarity gate for back-translated candidates (strict >)."""

    similarity_threshold: float = 0.7

    def __post_init__(self):
        if not 0 <= self.similarity_threshold <= 1:
            raise ValueError(
                f"similarity_threshold must be in [0, 1], "
                f"got {self.similarity_threshold}"
            )


@dataclass(frozen=True)
class BackTranslation:
    """One candidate with its similarity to the source and to the pivot."""

    text: str
    sim_source: float
    sim_pivot: float


@dataclass(frozen=True)
class CandidateGroup:
    """A source sentence with its scored back-translation candidates."""

    id: str
    source: str
    candidates: tuple[BackTranslation, ...]


@dataclass(frozen=True)
class FilterConfig:
    """Thresholds for the four filter stages.

    Defaults are the adopted operating point: PINC >= 0.76, BERTScore F1
    within [0.92, 0.98], no repeated 2-grams, terminal punctuation
    required. The suffixes select which store records score a pair:
    embeddings for pair X are looked up under "X:src" and "X:cand".
    """

    pinc_min: float = 0.76
    bert_min: float = 0.92
    bert_max: float = 0.98
    repeat_n: int = 2
    require_terminal_punct: bool = True
    pinc_max_n: int = 4
    use_bertscore: bool = True
    source_suffix: str = ":src"
    candidate_suffix: str = ":cand"

    def __post_init__(self):
        if not 0 <= self.pinc_min <= 1:
            raise ValueError(f"pinc_min must be in [0, 1], got {self.pinc_min}")
        if not 0 <= self.bert_min < self.bert_max <= 1:
            raise ValueError(
                f"need 0 <= bert_min < bert_max <= 1, "
                f"got [{self.bert_min}, {self.bert_max}]"
            )
        if self.repeat_n < 1:
            raise ValueError(f"repeat_n must be >= 1, got {self.repeat_n}")
        PincConfig(self.pinc_max_n)  # range check


@dataclass(frozen=True)
class FilterOutcome:
    """Per-pair verdict: first failed stage (if any) plus the scores."""

    pair_id: str
    passed: bool
    failed_stage: str | None
    pinc: float
    bertscore_f1: float | None

    def __post_init__(self):
        if self.passed != (self.failed_stage is None):
            raise ValueError("passed must match the absence of failed_stage")
        if self.failed_stage is not None and self.failed_stage not in STAGES:
            raise ValueError(f"unknown stage {self.failed_stage!r}")

    def to_json_dict(self) -> dict:
        return {"id": self.pair_id, "passed": self.passed,
                "failed_stage": self.failed_stage, "pinc": self.pinc,
                "bertscore_f1": self.bertscore_f1}


@dataclass
class PipelineStats:
    """Per-stage rejection accounting; input = passed + sum(rejections)."""

    input: int
    passed: int
    rejected: dict = field(default_factory=dict)

    def __post_init__(self):
        for stage in STAGES:
            self.rejected.setdefault(stage, 0)
        if self.input != self.passed + sum(self.rejected.values()):
            raise ValueError("stats do not add up")

    @property
    def yield_fraction(self) -> float:
        return self.passed / self.input if self.input else 0.0


def select_candidates(group: CandidateGroup,
                      cfg: CandidateSelectionConfig = CandidateSelectionConfig(),
                      ) -> list[SentencePair]:
    """Keep candidates whose similarity to the source AND to the pivot
    both strictly exceed the threshold.

    Kept candidates become pairs with ids "<group.id>-<k>", k the
    candidate's position in the group.
    """
    kept = []
    for k, cand in enumerate(group.candidates):
        for sim in (cand.sim_source, cand.sim_pivot):
            if not -1 <= sim <= 1:
                raise ValueError(
                    f"similarity out of [-1, 1] in group {group.id!r}: {sim}"
                )
        if (cand.sim_source > cfg.similarity_threshold
                and cand.sim_pivot > cfg.similarity_threshold):
            kept.append(SentencePair(f"{group.id}-{k}", group.source, cand.text))
    return kept


def run_filters(pair: SentencePair, store: EmbeddingStore | None,
                cfg: FilterConfig = FilterConfig()) -> FilterOutcome:
    """Apply the four stages to one pair and record the first failure."""
    src_tokens = tokenize(pair.source)
    cand_tokens = tokenize(pair.candidate)
    pinc_score = pinc(src_tokens, cand_tokens, PincConfig(cfg.pinc_max_n))

    f1 = None
    if cfg.use_bertscore:
        if store is None:
            raise MissingEmbeddingError([pair.id + cfg.source_suffix])
        ref_m = store.get(pair.id + cfg.source_suffix)
        cand_m = store.get(pair.id + cfg.candidate_suffix)
        f1 = bert_score(ref_m, cand_m).f1

    failed = None
    if pinc_score < cfg.pinc_min:
        failed = "pinc"
    elif cfg.use_bertscore and not cfg.bert_min <= f1 <= cfg.bert_max:
        failed = "bertscore"
    elif has_ngram_repeat(cand_tokens, cfg.repeat_n):
        failed = "repetition"
    elif cfg.require_terminal_punct and not has_terminal_punctuation(pair.candidate):
        failed = "punctuation"
    return FilterOutcome(pair.id, failed is None, failed, pinc_score, f1)


def _missing_ids(corpus: Corpus, store: EmbeddingStore, cfg: FilterConfig):
    missing = []
    for pair in corpus:
        for suffix in (cfg.source_suffix, cfg.candidate_suffix):
            key = pair.id + suffix
            if key not in store:
                missing.append(key)
    return missing


_WORKER = {}


def _init_worker(store, cfg):
    _WORKER["store"] = store
    _WORKER["cfg"] = cfg


def _run_one(pair):
    return run_filters(pair, _WORKER["store"], _WORKER["cfg"])


def filter_corpus(corpus: Corpus, store: EmbeddingStore | None,
                  cfg: FilterConfig = FilterConfig(), jobs: int = 1,
                  ) -> tuple[Corpus, PipelineStats, list[FilterOutcome]]:
    """Filter every pair, keeping input order among survivors.

    Embedding availability is checked up front so one error reports
    every missing id. `jobs` bounds worker processes; results are
    identical to the serial path regardless of the value.
    """
    if cfg.use_bertscore:
        if store is None:
            raise MissingEmbeddingError(
                [p.id + cfg.source_suffix for p in corpus][:10] or ["<empty>"]
            )
        missing = _missing_ids(corpus, store, cfg)
        if missing:
            raise MissingEmbeddingError(missing)

    if jobs > 1 and len(corpus) > 1:
        ctx = multiprocessing.get_context("fork")
        chunk = max(1, len(corpus) // (jobs * 4))
        with ctx.Pool(jobs, initializer=_init_worker, initargs=(store, cfg)) as pool:
            outcomes = pool.map(_run_one, corpus.pairs, chunksize=chunk)
    else:
        outcomes = [run_filters(pair, store, cfg) for pair in corpus]

    rejected = {stage: 0 for stage in STAGES}
    kept = []
    for pair, outcome in zip(corpus, outcomes):
        if outcome.passed:
            kept.append(pair)
        else:
            rejected[outcome.failed_stage] += 1
    stats = PipelineStats(len(corpus), len(kept), rejected)
    return Corpus(kept), stats, outcomes
