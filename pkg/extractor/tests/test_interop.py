"""Byte-level compatibility with the consumer's documented formats.

These tests import the curation engine directly to pin the shared
contracts (mock embedding recipe, PEMB layout); the pembex package
itself never does.
"""

import numpy as np
import pytest

parafilter = pytest.importorskip("parafilter")

from pembex.extract import ExtractorConfig, extract
from pembex.mockmodel import MockEncoder


def test_mock_rows_match_engine_recipe_bitwise():
    texts = [
        "আমি ভাত খাই।",
        "a b c!",
        "ক",
        "",
    ]
    enc = MockEncoder(32)
    for text in texts:
        ours = enc.encode_tokens(text)
        theirs = parafilter.mock_embed(text, 32, "tokens").rows
        assert ours.tobytes() == theirs.tobytes(), repr(text)
        ours_s = enc.encode_sentence(text)
        theirs_s = parafilter.mock_embed(text, 32, "sentence").rows
        assert ours_s.tobytes() == theirs_s.tobytes(), repr(text)


def test_engine_loader_accepts_our_store(corpus_50, tmp_path):
    corpus_path, ids = corpus_50
    store_path = tmp_path / "store.pemb"
    extract(corpus_path, store_path, ExtractorConfig(mode="tokens"))
    store = parafilter.load_store(store_path)
    assert len(store) == 2 * len(ids)
    first = store.get(f"{ids[0]}:src")
    ours = MockEncoder(64).encode_tokens(
        # reconstruct the source text from the fixture generator
        " ".join([f"ক0w{j}" for j in range(12)]) + "।")
    assert np.array_equal(first.rows, ours)
