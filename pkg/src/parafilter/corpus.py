"""Sentence-pair records, corpus serialization, splitting, deduplication.

The canonical on-disk format is JSON-lines, one object per line:

    {"id": str, "source": str, "candidate": str,
     "references": [str], "meta": {str: str}}

TSV is a convenience export with four columns (id, source, candidate,
references joined by U+001E) and backslash escaping of tab, newline,
carriage return, backslash, and the reference separator. `meta` is not
representable in TSV and is dropped on export.

Splitting shuffles with the published splitmix64 generator driving a
Fisher-Yates pass, then slices test / validation / train contiguously;
identical (corpus, ratios, seed) always produce identical partitions,
independent of platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CorpusFormatError
from .textnorm import normalize

__all__ = [
    "SentencePair", "Corpus", "SplitRatios",
    "read_corpus", "write_corpus", "split_corpus", "split_sizes",
    "dedup_corpus",
]


@dataclass(frozen=True)
class SentencePair:
    """One source/candidate pair, optionally with references and metadata."""

    id: str
    source: str
    candidate: str
    references: tuple[str, ...] = ()
    meta: Mapping[str, str] = field(default_factory=dict)

    def problems(self) -> list[str]:
        """Contract violations, empty when the pair is valid."""
        out = []
        if not self.id:
            out.append("empty id")
        if not normalize(self.source):
            out.append("source empty after normalization")
        if not normalize(self.candidate):
            out.append("candidate empty after normalization")
        return out


class Corpus:
    """Ordered, immutable collection of pairs with unique ids."""

    def __init__(self, pairs: Iterable[SentencePair]):
        pairs = tuple(pairs)
        index: dict[str, int] = {}
        for i, pair in enumerate(pairs):
            bad = pair.problems()
            if bad:
                raise ValueError(f"invalid pair {pair.id!r}: {'; '.join(bad)}")
            if pair.id in index:
                raise ValueError(f"duplicate pair id {pair.id!r}")
            index[pair.id] = i
        self._pairs = pairs
        self._index = index

    @property
    def pairs(self) -> tuple[SentencePair, ...]:
        return self._pairs

    def ids(self):
        return self._index.keys()

    def by_id(self, pair_id: str) -> SentencePair:
        return self._pairs[self._index[pair_id]]

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __getitem__(self, i: int) -> SentencePair:
        return self._pairs[i]

    def __eq__(self, other):
        return isinstance(other, Corpus) and self._pairs == other._pairs

    def __repr__(self):
        return f"Corpus({len(self._pairs)} pairs)"


# --- JSON-lines ---------------------------------------------------------

def _pair_to_json(pair: SentencePair) -> str:
    return json.dumps(
        {"id": pair.id, "source": pair.source, "candidate": pair.candidate,
         "references": list(pair.references), "meta": dict(pair.meta)},
        ensure_ascii=False, separators=(",", ":"),
    )


def _pair_from_json(obj) -> SentencePair:
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    for key in ("id", "source", "candidate"):
        if key not in obj:
            raise ValueError(f"missing field {key!r}")
        if not isinstance(obj[key], str):
            raise ValueError(f"field {key!r} is not a string")
    references = obj.get("references", [])
    if (not isinstance(references, list)
            or any(not isinstance(r, str) for r in references)):
        raise ValueError("field 'references' is not a list of strings")
    meta = obj.get("meta", {})
    if (not isinstance(meta, dict)
            or any(not isinstance(k, str) or not isinstance(v, str)
                   for k, v in meta.items())):
        raise ValueError("field 'meta' is not a string-to-string map")
    return SentencePair(obj["id"], obj["source"], obj["candidate"],
                        tuple(references), meta)


# --- TSV ----------------------------------------------------------------

_REF_SEP = "\x1e"
_TSV_ESCAPES = [("\\", "\\\\"), ("\t", "\\t"), ("\n", "\\n"),
                ("\r", "\\r"), (_REF_SEP, "\\e")]
_TSV_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r", "e": _REF_SEP}


def _tsv_escape(text: str) -> str:
    for raw, esc in _TSV_ESCAPES:
        text = text.replace(raw, esc)
    return text


def _tsv_unescape(text: str) -> str:
    if "\\" not in text:
        return text
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            if i + 1 >= len(text) or text[i + 1] not in _TSV_UNESCAPES:
                raise ValueError(f"bad escape sequence at offset {i}")
            out.append(_TSV_UNESCAPES[text[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _pair_to_tsv(pair: SentencePair) -> str:
    refs = _REF_SEP.join(_tsv_escape(r) for r in pair.references)
    return "\t".join([_tsv_escape(pair.id), _tsv_escape(pair.source),
                      _tsv_escape(pair.candidate), refs])


def _pair_from_tsv(line: str) -> SentencePair:
    fields = line.split("\t")
    if len(fields) != 4:
        raise ValueError(f"expected 4 tab-separated fields, got {len(fields)}")
    ident, source, candidate = (_tsv_unescape(f) for f in fields[:3])
    refs = tuple(_tsv_unescape(r) for r in fields[3].split(_REF_SEP)) \
        if fields[3] else ()
    return SentencePair(ident, source, candidate, refs)


# --- I/O ----------------------------------------------------------------

FORMATS = ("jsonl", "tsv")


def read_corpus(path, format: str = "jsonl") -> Corpus:
    """Read a corpus file; malformed lines raise with their line number."""
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}")
    pairs = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            try:
                if format == "jsonl":
                    pair = _pair_from_json(json.loads(line))
                else:
                    pair = _pair_from_tsv(line)
                bad = pair.problems()
                if bad:
                    raise ValueError("; ".join(bad))
                if pair.id in seen:
                    raise ValueError(f"duplicate id {pair.id!r}")
            except (ValueError, json.JSONDecodeError) as exc:
                raise CorpusFormatError(path, lineno, str(exc)) from None
            seen.add(pair.id)
            pairs.append(pair)
    return Corpus(pairs)


def write_corpus(corpus: Corpus, path, format: str = "jsonl") -> None:
    """Write a corpus; the output reads back structurally equal (JSONL)
    or equal up to dropped meta (TSV)."""
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}")
    encode = _pair_to_json if format == "jsonl" else _pair_to_tsv
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in corpus:
            fh.write(encode(pair))
            fh.write("\n")


# --- Splitting ----------------------------------------------------------

@dataclass(frozen=True)
class SplitRatios:
    """Train/validation/test fractions, kept exact and summing to 1."""

    train: Fraction
    validation: Fraction
    test: Fraction

    def __post_init__(self):
        parts = (self.train, self.validation, self.test)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative split ratio in {parts}")
        if sum(parts) != 1:
            raise ValueError(f"split ratios must sum to 1, got {parts}")

    @classmethod
    def from_string(cls, text: str) -> "SplitRatios":
        """Parse "80:10:10"-style proportions (also accepts decimals),
        normalizing by their sum."""
        chunks = text.split(":")
        if len(chunks) != 3:
            raise ValueError(f"expected train:validation:test, got {text!r}")
        try:
            parts = [Fraction(c.strip()) for c in chunks]
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad ratio {text!r}: {exc}") from None
        total = sum(parts)
        if total <= 0:
            raise ValueError(f"ratios must have a positive sum, got {text!r}")
        return cls(*(p / total for p in parts))


_MASK64 = (1 << 64) - 1


def _splitmix64(seed: int):
    """splitmix64 stream: portable, seedable, published 64-bit generator."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def _shuffled(items, seed: int) -> list:
    """Fisher-Yates with splitmix64 draws (j = next() mod (i+1))."""
    items = list(items)
    rng = _splitmix64(seed)
    for i in range(len(items) - 1, 0, -1):
        j = next(rng) % (i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def _round_half_up(x: Fraction) -> int:
    return int(x + Fraction(1, 2))  # floor(x + 1/2); x is non-negative


def split_sizes(n: int, ratios: SplitRatios) -> tuple[int, int, int]:
    """(train, validation, test) sizes for an n-pair corpus.

    test and validation round half-up from their exact fractions; train
    takes the remainder. When both roundings land on .5 for a tiny
    corpus, validation is clamped so the remainder is never negative.
    """
    n_test = _round_half_up(ratios.test * n)
    n_val = min(_round_half_up(ratios.validation * n), n - n_test)
    return n - n_test - n_val, n_val, n_test


def split_corpus(corpus: Corpus, ratios: SplitRatios,
                 seed: int) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic disjoint (train, validation, test) partition."""
    if len(corpus) == 0:
        raise ValueError("cannot split an empty corpus")
    n_train, n_val, n_test = split_sizes(len(corpus), ratios)
    shuffled = _shuffled(corpus.pairs, seed)
    test = shuffled[:n_test]
    validation = shuffled[n_test:n_test + n_val]
    train = shuffled[n_test + n_val:]
    return Corpus(train), Corpus(validation), Corpus(test)


# --- Deduplication ------------------------------------------------------

DEDUP_KEYS = ("source", "candidate", "pair")


def dedup_corpus(corpus: Corpus, key: str = "pair") -> Corpus:
    """Drop later pairs whose key (normalized text) was seen before."""
    if key not in DEDUP_KEYS:
        raise ValueError(f"dedup key must be one of {DEDUP_KEYS}, got {key!r}")
    seen = set()
    kept = []
    for pair in corpus:
        if key == "source":
            k = normalize(pair.source)
        elif key == "candidate":
            k = normalize(pair.candidate)
        else:
            k = (normalize(pair.source), normalize(pair.candidate))
        if k in seen:
            continue
        seen.add(k)
        kept.append(pair)
    return Corpus(kept)
