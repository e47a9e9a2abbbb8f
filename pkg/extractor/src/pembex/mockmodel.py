"""Offline mock backend: hash embeddings and a context-hash fill model.

The embedding recipe matches the consumer's documented mock algorithm
bit for bit, so stores produced here are interchangeable with its test
fixtures: each token (from the shared tokenizer) is hashed with BLAKE2b
(8-byte digest, little-endian) into a PCG64 seed, `dim` standard
normals are drawn and L2-normalized; sentence mode is the normalized
mean of the token rows, and empty text hashes as one pseudo-token.

The fill model predicts deterministically: it hashes (plan id, step,
visible context) and picks one of the sentence's visible tokens. When
the context leaves only one distinct token visible the prediction is
forced, which makes integration fixtures self-checking.
"""

import hashlib
import math

import numpy as np

from .textproc import tokenize

MASK_TOKEN = "[MASK]"
FALLBACK_FILL = "শব্দ"  # emitted when nothing is visible


def token_direction(token: str, dim: int) -> np.ndarray:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    seed = int.from_bytes(digest, "little")
    rng = np.random.Generator(np.random.PCG64(seed))
    v = rng.standard_normal(dim)
    # exactly-rounded norm keeps the recipe bit-reproducible across
    # processes (vectorized reductions vary with buffer alignment)
    return v / math.sqrt(math.fsum(x * x for x in v.tolist()))


class MockEncoder:
    """Deterministic stand-in for a sentence/token encoder."""

    name = "mock"

    def __init__(self, dim: int = 64):
        if dim < 2:
            raise ValueError(f"dim must be >= 2, got {dim}")
        self.dim = dim

    def encode_tokens(self, text: str) -> np.ndarray:
        toks = tokenize(text) or [""]
        rows = np.stack([token_direction(t, self.dim) for t in toks])
        return rows.astype(np.float32)

    def encode_sentence(self, text: str) -> np.ndarray:
        toks = tokenize(text) or [""]
        rows = np.stack([token_direction(t, self.dim) for t in toks])
        acc = rows[0].copy()
        for row in rows[1:]:
            acc += row
        mean = acc / len(rows)
        norm = math.sqrt(math.fsum(x * x for x in mean.tolist()))
        vec = mean / norm if norm > 0 else rows[0]
        return vec[None, :].astype(np.float32)


class MockFillModel:
    """Deterministic mask filler needing no trained weights."""

    name = "mock"

    def predict(self, plan_id: str, step: int, tokens: list[str],
                mask_position: int) -> str:
        visible = [t for i, t in enumerate(tokens)
                   if t != MASK_TOKEN and i != mask_position]
        if not visible:
            return FALLBACK_FILL
        context = " ".join(visible)
        digest = hashlib.blake2b(
            f"{plan_id}\x00{step}\x00{context}".encode("utf-8"),
            digest_size=8).digest()
        return visible[int.from_bytes(digest, "little") % len(visible)]
