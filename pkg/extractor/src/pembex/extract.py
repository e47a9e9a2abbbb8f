"""Corpus -> PEMB store extraction with a sidecar manifest.

Reads the curation engine's JSON-lines corpus (id/source/candidate),
encodes both sides of every pair, and writes one store record per side:
"<id>:src" and "<id>:cand". The manifest (<out>.manifest.json) records
model, mode, layer, dim and the per-record row counts so downstream
checks can validate the binary payload without re-running the encoder.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

from . import pemb

log = logging.getLogger("pembex")

MODES = ("sentence", "tokens")


@dataclass(frozen=True)
class ExtractorConfig:
    model: str = "mock"
    mode: str = "tokens"
    layer: int = -1
    batch_size: int = 32
    device: str = "cpu"
    mock_dim: int = 64

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")


def read_pairs(path):
    """Minimal reader for the corpus wire format."""
    pairs = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            try:
                obj = json.loads(line)
                pairs.append((obj["id"], obj["source"], obj["candidate"]))
            except (KeyError, TypeError, json.JSONDecodeError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return pairs


def make_encoder(cfg: ExtractorConfig):
    if cfg.model == "mock":
        from .mockmodel import MockEncoder
        return MockEncoder(cfg.mock_dim)
    from .backends import HFEncoder
    return HFEncoder(cfg.model, layer=cfg.layer, device=cfg.device)


def extract(corpus_path, out_path, cfg: ExtractorConfig) -> dict:
    """Encode a corpus into a PEMB store; returns the manifest dict."""
    encoder = make_encoder(cfg)
    encode = (encoder.encode_sentence if cfg.mode == "sentence"
              else encoder.encode_tokens)

    from .backends import SequenceTooLong

    records = []
    rows_by_id = {}
    skipped = []
    for ident, source, candidate in read_pairs(corpus_path):
        try:
            sides = [(f"{ident}:src", encode(source)),
                     (f"{ident}:cand", encode(candidate))]
        except SequenceTooLong as exc:
            log.warning("skipping %s: %s", ident, exc)
            skipped.append(ident)
            continue
        for key, rows in sides:
            records.append((key, rows))
            rows_by_id[key] = int(rows.shape[0])

    dim = records[0][1].shape[1] if records else getattr(encoder, "dim", 0)
    provenance = f"{encoder.name}/mode={cfg.mode}/layer={cfg.layer}"
    pemb.write_store(records, dim, provenance, out_path)

    manifest = {"model": encoder.name, "mode": cfg.mode, "layer": cfg.layer,
                "dim": dim, "records": len(records), "skipped": skipped,
                "rows": rows_by_id}
    with open(f"{out_path}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
