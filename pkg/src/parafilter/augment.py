"""POS-driven mask planning, fill merging, and re-filtering.

Augmentation swaps tokens of selected parts of speech for model-filled
alternatives. This module plans which positions to mask and in what
order, merges externally produced fills back into pairs, and re-filters
the result; the masked-LM itself lives behind the request/fill wire
format (JSON-lines, see below) and is not part of this package.

Planning masks every position whose tag is in the configured POS list,
ordered first by the tag's priority in that list, then left to right.
All planned positions carry the "[MASK]" sentinel in every emitted
request; a consumer answers the steps of a plan in order, substituting
its earlier fills before predicting the next (each fill conditions on
the previous ones).

Wire formats:
    tagged sentence  {"id": ..., "tokens": [...], "tags": [...]}
    mask request     {"plan_id": ..., "step": ..., "tokens": [...],
                      "mask_position": ...}
    mask fill        {"plan_id": ..., "step": ..., "token": ...}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .corpus import Corpus, SentencePair
from .errors import CorpusFormatError, DataError
from .pipeline import FilterConfig, filter_corpus
from .textnorm import detokenize

MASK_TOKEN = "[MASK]"

#: Mask-and-fill priority: main verb, auxiliary verb, adjective, verbal
#: noun, adverb of manner, adverb of location, spatio-temporal noun.
DEFAULT_POS_ORDER = ("VM", "VA", "JJ", "NV", "AMN", "ALC", "NST")

#: Re-filter operating point for augmented pairs: the PINC bar drops to
#: 0.7 because token substitution alone does not change sentence
#: structure; the BERTScore band stays at [0.92, 0.98].
AUGMENT_REFILTER = FilterConfig(pinc_min=0.7)


@dataclass(frozen=True)
class TaggedSentence:
    """Tokens plus one POS tag per token (externally produced)."""

    id: str
    tokens: tuple[str, ...]
    tags: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError(
                f"{self.id!r}: {len(self.tokens)} tokens vs "
                f"{len(self.tags)} tags"
            )
        if any(not t for t in self.tokens):
            raise ValueError(f"{self.id!r}: empty token")


@dataclass(frozen=True)
class AugmentConfig:
    pos_order: tuple[str, ...] = DEFAULT_POS_ORDER
    refilter: FilterConfig = AUGMENT_REFILTER

    def __post_init__(self):
        if not self.pos_order:
            raise ValueError("pos_order must be non-empty")
        if len(set(self.pos_order)) != len(self.pos_order):
            raise ValueError(f"pos_order has duplicates: {self.pos_order}")


@dataclass(frozen=True)
class MaskRequest:
    """One fill step: predict the token at mask_position given tokens."""

    plan_id: str
    step: int
    tokens: tuple[str, ...]
    mask_position: int

    def __post_init__(self):
        if not 0 <= self.mask_position < len(self.tokens):
            raise ValueError(
                f"mask position {self.mask_position} out of range "
                f"for {len(self.tokens)} tokens"
            )


@dataclass(frozen=True)
class MaskFill:
    plan_id: str
    step: int
    token: str


def plan_masks(sentence: TaggedSentence,
               cfg: AugmentConfig = AugmentConfig()) -> list[MaskRequest]:
    """Mask requests for every token whose tag is in cfg.pos_order.

    Ordered by (position of the tag in pos_order, token position). The
    emitted token lists carry the sentinel at all planned positions:
    fills are unknown at planning time, and consumers substitute their
    own earlier fills step by step.
    """
    rank = {tag: i for i, tag in enumerate(cfg.pos_order)}
    planned = sorted(
        (rank[tag], pos) for pos, tag in enumerate(sentence.tags) if tag in rank
    )
    masked = list(sentence.tokens)
    for _, pos in planned:
        masked[pos] = MASK_TOKEN
    masked = tuple(masked)
    return [MaskRequest(sentence.id, step, masked, pos)
            for step, (_, pos) in enumerate(planned)]


def merge_fills(original: SentencePair, requests: list[MaskRequest],
                fills: list[MaskFill]) -> SentencePair:
    """Apply fills to a plan, producing the augmented pair.

    The new pair keeps the original source (id suffixed "-aug"); its
    candidate is the fully filled token sequence, detokenized. A
    zero-step plan passes the pair through unchanged apart from the id.
    """
    if not requests:
        if fills:
            raise DataError(f"{original.id!r}: fills for an empty plan")
        return replace(original, id=original.id + "-aug")

    if len(fills) != len(requests):
        raise DataError(
            f"{original.id!r}: {len(requests)} steps but {len(fills)} fills"
        )
    tokens = list(requests[0].tokens)
    for req, fill in zip(requests, fills):
        if fill.step != req.step or fill.plan_id != req.plan_id:
            raise DataError(
                f"{req.plan_id!r}: expected fill for step {req.step}, "
                f"got plan {fill.plan_id!r} step {fill.step}"
            )
        if not fill.token or fill.token.split() != [fill.token]:
            raise DataError(
                f"{req.plan_id!r} step {req.step}: fill token must be a "
                f"single whitespace-free token, got {fill.token!r}"
            )
        tokens[req.mask_position] = fill.token
    return replace(original, id=original.id + "-aug",
                   candidate=detokenize(tokens))


def filter_augmented(pairs, store,
                     cfg: FilterConfig = AUGMENT_REFILTER) -> Corpus:
    """Run augmented pairs through the standard pipeline at the
    augmentation thresholds."""
    kept, _, _ = filter_corpus(Corpus(pairs), store, cfg)
    return kept


# --- Wire I/O -----------------------------------------------------------

def _read_jsonl(path, decode):
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            try:
                out.append(decode(json.loads(line)))
            except (ValueError, KeyError, TypeError,
                    json.JSONDecodeError) as exc:
                raise CorpusFormatError(path, lineno, str(exc)) from None
    return out


def read_tagged(path) -> list[TaggedSentence]:
    return _read_jsonl(
        path,
        lambda obj: TaggedSentence(obj["id"], tuple(obj["tokens"]),
                                   tuple(obj["tags"])),
    )


def read_fills(path) -> list[MaskFill]:
    return _read_jsonl(
        path,
        lambda obj: MaskFill(obj["plan_id"], int(obj["step"]), obj["token"]),
    )


def write_requests(requests: list[MaskRequest], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for req in requests:
            fh.write(json.dumps(
                {"plan_id": req.plan_id, "step": req.step,
                 "tokens": list(req.tokens),
                 "mask_position": req.mask_position},
                ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
