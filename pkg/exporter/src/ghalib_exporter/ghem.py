"""GHEM container I/O, exporter side.

Independent implementation of the interchange layout (little-endian):

  magic      4 bytes  b"GHEM"
  version    uint16   = 1
  flags      uint16   pooling: 0 = mean, 1 = first_token
  rows       uint32
  dim        uint32
  name_len   uint16   followed by that many UTF-8 bytes (encoder name)
  digest     8 bytes  first 8 of SHA-256 over "\n".join(record ids)
  payload    rows * dim float32, row-major

The core pipeline writes flags = 0 and ignores the field on read, so
recording the pooling choice here stays compatible in both directions.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ghalib_exporter.errors import ExportError

MAGIC = b"GHEM"
VERSION = 1

POOLING_FLAGS = {"mean": 0, "first_token": 1}
FLAG_POOLINGS = {v: k for k, v in POOLING_FLAGS.items()}


def corpus_digest(record_ids) -> bytes:
    return hashlib.sha256("\n".join(record_ids).encode("utf-8")).digest()[:8]


def write_ghem(path, matrix: np.ndarray, record_ids, encoder_name: str, flags: int = 0) -> None:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    if matrix.ndim != 2:
        raise ExportError(f"embedding matrix must be 2-D, got shape {matrix.shape}")
    rows, dim = matrix.shape
    if rows != len(record_ids):
        raise ExportError(f"matrix has {rows} rows but {len(record_ids)} record ids")
    if not np.isfinite(matrix).all():
        raise ExportError("embedding matrix contains non-finite values")
    name = encoder_name.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HHII", VERSION, flags, rows, dim))
        fh.write(struct.pack("<H", len(name)))
        fh.write(name)
        fh.write(corpus_digest(record_ids))
        fh.write(matrix.tobytes())


@dataclass
class Header:
    version: int
    flags: int
    rows: int
    dim: int
    encoder_name: str
    digest: bytes
    payload_offset: int


def parse_header(raw: bytes) -> Header:
    """Parse the fixed header; raises ExportError on anything short or alien."""
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise ExportError("not a GHEM file")
    if len(raw) < 18:
        raise ExportError("file ends inside the header")
    version, flags, rows, dim = struct.unpack_from("<HHII", raw, 4)
    (name_len,) = struct.unpack_from("<H", raw, 16)
    offset = 18
    if len(raw) < offset + name_len + 8:
        raise ExportError("file ends inside the header")
    name = raw[offset : offset + name_len].decode("utf-8")
    offset += name_len
    digest = raw[offset : offset + 8]
    offset += 8
    return Header(version, flags, rows, dim, name, digest, offset)


def read_ghem(path, expected_ids) -> np.ndarray:
    """Strict read-back used by tests and verification helpers."""
    raw = Path(path).read_bytes()
    header = parse_header(raw)
    if header.version != VERSION:
        raise ExportError(f"unsupported version {header.version}")
    if header.rows != len(expected_ids):
        raise ExportError(f"file has {header.rows} rows, corpus has {len(expected_ids)}")
    if header.digest != corpus_digest(expected_ids):
        raise ExportError("digest mismatch: file was exported for a different id sequence")
    payload = raw[header.payload_offset :]
    want = header.rows * header.dim * 4
    if len(payload) != want:
        raise ExportError(f"payload is {len(payload)} bytes, header promises {want}")
    matrix = np.frombuffer(payload, dtype="<f4").reshape(header.rows, header.dim)
    if not np.isfinite(matrix).all():
        raise ExportError("payload contains non-finite values")
    return matrix
