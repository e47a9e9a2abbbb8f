"""Embedding-based semantic scoring and the PEMB binary store.

Token- or sentence-level embedding matrices arrive precomputed from any
encoder (model inference lives outside this package) and are scored
here: greedy-matched precision/recall/F1 between token matrices, plain
cosine between sentence vectors, and the weighted harmonic mean that
combines semantic similarity with n-gram diversity.

PEMB file layout (little-endian):

    magic "PEMB" | u32 version = 1 | u32 dim | u64 record count
    u16 provenance length | provenance (UTF-8)
    per record:
        u16 id length | id (UTF-8)
        u32 token_count
        token_count * dim IEEE-754 binary32, row-major

Mock embeddings (for tests and offline runs) hash each token with
BLAKE2b (8-byte digest, little-endian) into a PCG64 seed, draw `dim`
standard normals, and L2-normalize; sentence mode takes the normalized
mean of the token rows. Identical text always yields identical rows,
and any producer implementing the same recipe emits compatible stores.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import EmbeddingFormatError, MissingEmbeddingError
from .textnorm import tokenize

_MAGIC = b"PEMB"
_VERSION = 1


@dataclass(frozen=True)
class TokenEmbeddingMatrix:
    """Per-sentence matrix of token vectors (one row per token).

    A single-row matrix encodes a sentence embedding. Rows must be
    finite with nonzero Euclidean norm.
    """

    sentence_id: str
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float32)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise ValueError(
                f"rows must be a (tokens, dim) matrix, got shape {rows.shape}"
            )
        if not np.isfinite(rows).all():
            raise ValueError(f"non-finite embedding values for {self.sentence_id!r}")
        if (np.linalg.norm(rows, axis=1) == 0).any():
            raise ValueError(f"zero-norm embedding row for {self.sentence_id!r}")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    @property
    def token_count(self) -> int:
        return self.rows.shape[0]


class EmbeddingStore:
    """Immutable id -> TokenEmbeddingMatrix map with a uniform dimension."""

    def __init__(self, matrices: Iterable[TokenEmbeddingMatrix], provenance: str = ""):
        by_id: dict[str, TokenEmbeddingMatrix] = {}
        dim = None
        for m in matrices:
            if m.sentence_id in by_id:
                raise ValueError(f"duplicate embedding id {m.sentence_id!r}")
            if dim is None:
                dim = m.dim
            elif m.dim != dim:
                raise ValueError(
                    f"mixed dimensions in store: {dim} vs {m.dim} "
                    f"({m.sentence_id!r})"
                )
            by_id[m.sentence_id] = m
        self._by_id = by_id
        self.dim = dim
        self.provenance = provenance

    def __len__(self):
        return len(self._by_id)

    def __contains__(self, sentence_id):
        return sentence_id in self._by_id

    def __iter__(self):
        return iter(self._by_id.values())

    def ids(self):
        return self._by_id.keys()

    def get(self, sentence_id: str) -> TokenEmbeddingMatrix:
        try:
            return self._by_id[sentence_id]
        except KeyError:
            raise MissingEmbeddingError([sentence_id]) from None


class BertScoreResult(NamedTuple):
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class BertIBleuConfig:
    """Weight of the semantic term (beta) and the floor applied to
    1 - selfBLEU before inversion."""

    beta: float = 4.0
    diversity_floor: float = 1e-4

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if not 0 < self.diversity_floor < 1:
            raise ValueError("diversity_floor must be in (0, 1)")


def cosine(u, v) -> float:
    """Cosine similarity, clamped to [-1, 1] against rounding."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("cosine of zero-norm vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def _unit_rows(m: TokenEmbeddingMatrix) -> np.ndarray:
    rows = m.rows.astype(np.float64)
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def bert_score(reference: TokenEmbeddingMatrix,
               candidate: TokenEmbeddingMatrix) -> BertScoreResult:
    """Greedy-matching precision/recall/F1 between two token matrices.

    Recall: mean over reference rows of the maximum cosine to any
    candidate row; precision with the roles swapped; F1 the harmonic
    mean (0 when P + R = 0). No IDF weighting, no baseline rescaling.
    """
    if reference.dim != candidate.dim:
        raise ValueError(
            f"dimension mismatch: {reference.dim} vs {candidate.dim}"
        )
    sim = _unit_rows(reference) @ _unit_rows(candidate).T
    recall = float(np.clip(sim.max(axis=1).mean(), -1.0, 1.0))
    precision = float(np.clip(sim.max(axis=0).mean(), -1.0, 1.0))
    if precision + recall == 0:
        return BertScoreResult(precision, recall, 0.0)
    f1 = 2 * precision * recall / (precision + recall)
    return BertScoreResult(precision, recall, f1)


def sentence_similarity(store: EmbeddingStore, id_a: str, id_b: str) -> float:
    """Cosine between two stored sentence vectors (single-row matrices)."""
    a = store.get(id_a)
    b = store.get(id_b)
    for m in (a, b):
        if m.token_count != 1:
            raise ValueError(
                f"{m.sentence_id!r} holds a {m.token_count}-row token matrix, "
                "not a sentence vector"
            )
    return cosine(a.rows[0], b.rows[0])


def bert_ibleu(bertscore_f1: float, self_bleu: float,
               cfg: BertIBleuConfig = BertIBleuConfig()) -> float:
    """Weighted harmonic mean of semantic similarity and diversity.

    Combines bertscore_f1 (weight beta) with d = max(1 - self_bleu,
    diversity_floor) (weight 1); the floor keeps the score total where
    self_bleu = 1 would otherwise divide by zero.
    """
    if not 0 < bertscore_f1 <= 1:
        raise ValueError(f"bertscore_f1 must be in (0, 1], got {bertscore_f1}")
    if not 0 <= self_bleu <= 1:
        raise ValueError(f"self_bleu must be in [0, 1], got {self_bleu}")
    diversity = max(1.0 - self_bleu, cfg.diversity_floor)
    return (cfg.beta + 1.0) / (cfg.beta / bertscore_f1 + 1.0 / diversity)


def save_store(store: EmbeddingStore, path) -> None:
    """Write *store* in the PEMB binary format."""
    prov = store.provenance.encode("utf-8")
    if len(prov) > 0xFFFF:
        raise ValueError("provenance longer than 65535 bytes")
    with open(path, "wb") as fh:
        dim = store.dim if store.dim is not None else 0
        fh.write(struct.pack("<4sIIQ", _MAGIC, _VERSION, dim, len(store)))
        fh.write(struct.pack("<H", len(prov)))
        fh.write(prov)
        for m in store:
            ident = m.sentence_id.encode("utf-8")
            if len(ident) > 0xFFFF:
                raise ValueError(f"id longer than 65535 bytes: {m.sentence_id!r}")
            fh.write(struct.pack("<H", len(ident)))
            fh.write(ident)
            fh.write(struct.pack("<I", m.token_count))
            fh.write(np.ascontiguousarray(m.rows, dtype="<f4").tobytes())


class _Reader:
    def __init__(self, path):
        with open(path, "rb") as fh:
            self.buf = fh.read()
        self.off = 0
        self.path = str(path)

    def take(self, size, what):
        if self.off + size > len(self.buf):
            raise EmbeddingFormatError(
                f"{self.path}: truncated file while reading {what}"
            )
        out = self.buf[self.off:self.off + size]
        self.off += size
        return out

    def unpack(self, fmt, what):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def load_store(path) -> EmbeddingStore:
    """Read a PEMB file, validating magic, version, and dim uniformity."""
    r = _Reader(path)
    magic, version, dim, count = r.unpack("<4sIIQ", "header")
    if magic != _MAGIC:
        raise EmbeddingFormatError(f"{r.path}: bad magic {magic!r}")
    if version != _VERSION:
        raise EmbeddingFormatError(f"{r.path}: unsupported version {version}")
    (prov_len,) = r.unpack("<H", "provenance length")
    provenance = r.take(prov_len, "provenance").decode("utf-8")
    matrices = []
    seen = set()
    for i in range(count):
        (id_len,) = r.unpack("<H", f"record {i} id length")
        ident = r.take(id_len, f"record {i} id").decode("utf-8")
        if ident in seen:
            raise EmbeddingFormatError(f"{r.path}: duplicate id {ident!r}")
        seen.add(ident)
        (token_count,) = r.unpack("<I", f"record {ident!r} token count")
        payload = r.take(4 * token_count * dim, f"record {ident!r} payload")
        rows = np.frombuffer(payload, dtype="<f4").reshape(token_count, dim)
        try:
            matrices.append(TokenEmbeddingMatrix(ident, rows))
        except ValueError as exc:
            raise EmbeddingFormatError(f"{r.path}: {exc}") from None
    if r.off != len(r.buf):
        raise EmbeddingFormatError(
            f"{r.path}: {len(r.buf) - r.off} trailing bytes after last record"
        )
    return EmbeddingStore(matrices, provenance)


def _exact_unit(v: np.ndarray) -> np.ndarray:
    # exactly-rounded norm (fsum): bit-identical regardless of how the
    # buffer is aligned, unlike vectorized reductions
    norm = math.sqrt(math.fsum(x * x for x in v.tolist()))
    return v / norm if norm > 0 else v


def _token_direction(token: str, dim: int) -> np.ndarray:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    seed = int.from_bytes(digest, "little")
    rng = np.random.Generator(np.random.PCG64(seed))
    return _exact_unit(rng.standard_normal(dim))


def mock_embed(text: str, dim: int = 64, mode: str = "tokens",
               sentence_id: str = "") -> TokenEmbeddingMatrix:
    """Deterministic hash-based embeddings, no model required.

    Tokens mode: one unit row per token of the normalized text (empty
    text hashes as a single pseudo-token). Sentence mode: the normalized
    mean of the token rows, as a 1-row matrix. The recipe (BLAKE2b
    8-byte digest -> PCG64 -> standard normals -> exact-sum
    normalization, sequential mean) is bit-reproducible, so independent
    producers can emit byte-identical stores.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    toks = tokenize(text).tokens or ("",)
    rows = np.stack([_token_direction(t, dim) for t in toks])
    if mode == "sentence":
        acc = rows[0].copy()
        for row in rows[1:]:
            acc += row
        mean = acc / len(rows)
        norm = math.sqrt(math.fsum(x * x for x in mean.tolist()))
        rows = (mean / norm if norm > 0 else rows[0])[None, :]
    elif mode != "tokens":
        raise ValueError(f"mode must be 'sentence' or 'tokens', got {mode!r}")
    return TokenEmbeddingMatrix(sentence_id, rows.astype(np.float32))


def mock_store(corpus, dim: int = 64, mode: str = "tokens",
               source_suffix: str = ":src", candidate_suffix: str = ":cand",
               provenance: str = "mock") -> EmbeddingStore:
    """Build a store with mock embeddings for both sides of every pair."""
    matrices = []
    for pair in corpus:
        matrices.append(
            mock_embed(pair.source, dim, mode, pair.id + source_suffix))
        matrices.append(
            mock_embed(pair.candidate, dim, mode, pair.id + candidate_suffix))
    return EmbeddingStore(matrices, provenance)
