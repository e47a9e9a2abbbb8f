import json

import numpy as np
import pytest

from pembex.extract import ExtractorConfig, extract, read_pairs
from pembex.mockmodel import MockEncoder
from pembex.pemb import PembWriteError, read_store, write_store


class TestMockEncoder:
    def test_token_rows_are_unit_norm(self):
        enc = MockEncoder(16)
        rows = enc.encode_tokens("ক খ গ।")
        assert rows.shape == (4, 16)
        assert np.allclose(np.linalg.norm(rows, axis=1), 1.0, atol=1e-6)

    def test_deterministic(self):
        enc = MockEncoder(16)
        a = enc.encode_tokens("some text here।")
        b = enc.encode_tokens("some text here।")
        assert np.array_equal(a, b)

    def test_sentence_mode_single_row(self):
        enc = MockEncoder(8)
        assert enc.encode_sentence("ক খ").shape == (1, 8)

    def test_dim_validation(self):
        with pytest.raises(ValueError):
            MockEncoder(1)


class TestPembWriter:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        records = []
        for i in range(20):
            rows = rng.standard_normal((rng.integers(1, 6), 12)) \
                .astype(np.float32)
            records.append((f"id{i}", rows))
        path = tmp_path / "s.pemb"
        write_store(records, 12, "prov ব", path)
        dim, prov, loaded = read_store(path)
        assert (dim, prov) == (12, "prov ব")
        for ident, rows in records:
            assert loaded[ident].tobytes() == rows.tobytes()

    def test_duplicate_id_rejected(self, tmp_path):
        rows = np.ones((1, 4), dtype=np.float32)
        with pytest.raises(PembWriteError):
            write_store([("a", rows), ("a", rows)], 4, "", tmp_path / "x")

    def test_dim_mismatch_rejected(self, tmp_path):
        rows = np.ones((1, 3), dtype=np.float32)
        with pytest.raises(PembWriteError):
            write_store([("a", rows)], 4, "", tmp_path / "x")

    def test_zero_row_rejected(self, tmp_path):
        rows = np.zeros((1, 4), dtype=np.float32)
        with pytest.raises(PembWriteError):
            write_store([("a", rows)], 4, "", tmp_path / "x")


class TestExtract:
    def test_two_records_per_pair_with_suffixes(self, corpus_50, tmp_path):
        corpus_path, ids = corpus_50
        out = tmp_path / "store.pemb"
        manifest = extract(corpus_path, out, ExtractorConfig(mode="tokens"))
        _, _, records = read_store(out)
        assert len(records) == 2 * len(ids)
        for ident in ids:
            assert f"{ident}:src" in records
            assert f"{ident}:cand" in records
        assert manifest["records"] == 2 * len(ids)

    def test_sentence_mode_one_row_each(self, corpus_50, tmp_path):
        corpus_path, _ = corpus_50
        out = tmp_path / "store.pemb"
        extract(corpus_path, out, ExtractorConfig(mode="sentence"))
        _, _, records = read_store(out)
        assert all(rows.shape[0] == 1 for rows in records.values())

    def test_bitwise_deterministic(self, corpus_50, tmp_path):
        corpus_path, _ = corpus_50
        a, b = tmp_path / "a.pemb", tmp_path / "b.pemb"
        cfg = ExtractorConfig(mode="tokens")
        extract(corpus_path, a, cfg)
        extract(corpus_path, b, cfg)
        assert a.read_bytes() == b.read_bytes()

    def test_manifest_row_counts_match_payload(self, corpus_50, tmp_path):
        corpus_path, _ = corpus_50
        out = tmp_path / "store.pemb"
        extract(corpus_path, out, ExtractorConfig(mode="tokens"))
        manifest = json.loads((tmp_path / "store.pemb.manifest.json")
                              .read_text(encoding="utf-8"))
        _, _, records = read_store(out)
        assert set(manifest["rows"]) == set(records)
        for ident, rows in records.items():
            assert manifest["rows"][ident] == rows.shape[0]

    def test_provenance_records_model_and_layer(self, corpus_50, tmp_path):
        corpus_path, _ = corpus_50
        out = tmp_path / "store.pemb"
        extract(corpus_path, out, ExtractorConfig(mode="sentence", layer=-2))
        _, prov, _ = read_store(out)
        assert "mock" in prov and "layer=-2" in prov

    def test_malformed_corpus_line_reported(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id":"x","source":"s"}\n', encoding="utf-8")
        with pytest.raises(ValueError) as info:
            read_pairs(bad)
        assert ":1:" in str(info.value)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            ExtractorConfig(mode="words")
