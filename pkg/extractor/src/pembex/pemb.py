"""PEMB store writer (and a reader used by our own tests).

Layout (little-endian), as consumed by the curation engine:

    magic "PEMB" | u32 version = 1 | u32 dim | u64 record count
    u16 provenance length | provenance (UTF-8)
    per record:
        u16 id length | id (UTF-8)
        u32 token_count
        token_count * dim IEEE-754 binary32, row-major
"""

import struct

import numpy as np

MAGIC = b"PEMB"
VERSION = 1


class PembWriteError(ValueError):
    pass


def write_store(records, dim: int, provenance: str, path) -> None:
    """Write (id, rows) records; rows must be (t, dim) float32, t >= 1."""
    records = list(records)
    seen = set()
    for ident, rows in records:
        if ident in seen:
            raise PembWriteError(f"duplicate record id {ident!r}")
        seen.add(ident)
        if rows.ndim != 2 or rows.shape[1] != dim or rows.shape[0] < 1:
            raise PembWriteError(
                f"{ident!r}: rows shape {rows.shape} incompatible with dim {dim}"
            )
        if not np.isfinite(rows).all():
            raise PembWriteError(f"{ident!r}: non-finite values")
        if (np.linalg.norm(rows, axis=1) == 0).any():
            raise PembWriteError(f"{ident!r}: zero-norm row")

    prov = provenance.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sIIQ", MAGIC, VERSION, dim, len(records)))
        fh.write(struct.pack("<H", len(prov)))
        fh.write(prov)
        for ident, rows in records:
            raw = ident.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<I", rows.shape[0]))
            fh.write(np.ascontiguousarray(rows, dtype="<f4").tobytes())


def read_store(path):
    """(dim, provenance, {id: rows}) - verification helper for tests."""
    with open(path, "rb") as fh:
        blob = fh.read()
    off = 0

    def take(size):
        nonlocal off
        if off + size > len(blob):
            raise ValueError("truncated PEMB file")
        out = blob[off:off + size]
        off += size
        return out

    magic, version, dim, count = struct.unpack("<4sIIQ", take(20))
    if magic != MAGIC or version != VERSION:
        raise ValueError(f"not a PEMB v{VERSION} file")
    (prov_len,) = struct.unpack("<H", take(2))
    provenance = take(prov_len).decode("utf-8")
    records = {}
    for _ in range(count):
        (id_len,) = struct.unpack("<H", take(2))
        ident = take(id_len).decode("utf-8")
        (token_count,) = struct.unpack("<I", take(4))
        payload = take(4 * token_count * dim)
        records[ident] = np.frombuffer(payload, dtype="<f4").reshape(
            token_count, dim)
    if off != len(blob):
        raise ValueError("trailing bytes after last record")
    return dim, provenance, records
