"""Dense per-record feature matrices.

Two backends: embedding matrices read from GHEM interchange files
(produced by the exporter sidecar), and an in-core hashed TF-IDF
vectorizer that needs no pretrained encoder. Multiple sources with
aligned rows can be concatenated.

GHEM layout (little-endian throughout):
  magic      4 bytes  b"GHEM"
  version    uint16   = 1
  flags      uint16   = 0
  rows       uint32
  dim        uint32
  name_len   uint16   followed by that many UTF-8 bytes (encoder name)
  digest     8 bytes  first 8 of SHA-256 over "\\n".join(record ids)
  payload    rows * dim float32, row-major
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ghalib.corpus import Record
from ghalib.errors import DataError, GhemFormatError

GHEM_MAGIC = b"GHEM"
GHEM_VERSION = 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass
class FeatureMatrix:
    data: np.ndarray  # rows x dim
    row_ids: tuple[str, ...]
    backend: str  # "embedding" | "hashed_tfidf" | "concat"

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def select(self, ids: Sequence[str]) -> "FeatureMatrix":
        """Row-subset by record id, in the order given."""
        index = {rid: i for i, rid in enumerate(self.row_ids)}
        missing = [rid for rid in ids if rid not in index]
        if missing:
            raise DataError(f"feature matrix has no rows for ids: {missing[:5]}")
        sel = [index[rid] for rid in ids]
        return FeatureMatrix(self.data[sel], tuple(ids), self.backend)


def corpus_digest(record_ids: Sequence[str]) -> bytes:
    joined = "\n".join(record_ids).encode("utf-8")
    return hashlib.sha256(joined).digest()[:8]


def write_embedding_file(
    path: str | Path,
    matrix: np.ndarray,
    record_ids: Sequence[str],
    encoder_name: str,
) -> None:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    rows, dim = matrix.shape
    if rows != len(record_ids):
        raise DataError(f"matrix has {rows} rows but {len(record_ids)} record ids")
    name = encoder_name.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(GHEM_MAGIC)
        fh.write(struct.pack("<HHII", GHEM_VERSION, 0, rows, dim))
        fh.write(struct.pack("<H", len(name)))
        fh.write(name)
        fh.write(corpus_digest(record_ids))
        fh.write(matrix.tobytes())


def read_embedding_file(path: str | Path, expected_ids: Sequence[str]) -> FeatureMatrix:
    """Read a GHEM file, checking header, digest, payload length, and
    finiteness against the expected record ids."""
    raw = Path(path).read_bytes()
    if len(raw) < 4 or raw[:4] != GHEM_MAGIC:
        raise GhemFormatError("bad_magic", f"{path} is not a GHEM file")
    # fixed header: 4 magic + 2 version + 2 flags + 4 rows + 4 dim + 2 name_len
    if len(raw) < 18:
        raise GhemFormatError("truncated", "file ends inside the header")
    version, _flags, rows, dim = struct.unpack_from("<HHII", raw, 4)
    if version != GHEM_VERSION:
        raise GhemFormatError("bad_version", f"unsupported version {version}")
    (name_len,) = struct.unpack_from("<H", raw, 16)
    offset = 18
    if len(raw) < offset + name_len + 8:
        raise GhemFormatError("truncated", "file ends inside the header")
    encoder_name = raw[offset : offset + name_len].decode("utf-8")
    offset += name_len
    digest = raw[offset : offset + 8]
    offset += 8

    if rows != len(expected_ids):
        raise GhemFormatError(
            "row_mismatch", f"file has {rows} rows, corpus has {len(expected_ids)}"
        )
    expected_digest = corpus_digest(expected_ids)
    if digest != expected_digest:
        raise GhemFormatError(
            "digest_mismatch",
            f"embedding file was computed for a different corpus/id order "
            f"(file {digest.hex()}, corpus {expected_digest.hex()})",
        )
    payload = raw[offset:]
    expected_len = rows * dim * 4
    if len(payload) != expected_len:
        raise GhemFormatError(
            "truncated", f"payload is {len(payload)} bytes, header implies {expected_len}"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(rows, dim)
    if not np.isfinite(data).all():
        raise GhemFormatError("nonfinite", "payload contains non-finite values")
    mat = FeatureMatrix(data.copy(), tuple(expected_ids), "embedding")
    mat.encoder_name = encoder_name  # informational, not part of the contract
    return mat


# --- hashed TF-IDF ----------------------------------------------------------


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _word_ngrams(text: str, lo: int, hi: int) -> list[str]:
    words = text.split()
    grams = []
    for n in range(lo, hi + 1):
        grams.extend(" ".join(words[i : i + n]) for i in range(len(words) - n + 1))
    return grams


def hashed_tfidf(
    records: Sequence[Record],
    dim: int = 4096,
    ngram_range: tuple[int, int] = (1, 2),
) -> FeatureMatrix:
    """Signed feature-hashing TF-IDF over word n-grams of normalized text.

    Term index is FNV-1a(64) of the space-joined n-gram modulo dim, with
    sign taken from bit 63 to reduce collision bias; idf uses the smoothed
    form ln((1+N)/(1+df)) + 1; rows are L2-normalized. No vocabulary is
    stored, so output is deterministic across runs and platforms.
    """
    if not records:
        raise DataError("empty record list")
    if dim < 2**10 or dim & (dim - 1) != 0:
        raise ValueError(f"dim must be a power of two >= 1024, got {dim}")
    lo, hi = ngram_range
    if not (1 <= lo <= hi <= 3):
        raise ValueError(f"ngram_range must satisfy 1 <= lo <= hi <= 3, got {ngram_range}")

    n_docs = len(records)
    doc_grams = []
    df: dict[str, int] = {}
    for rec in records:
        counts: dict[str, int] = {}
        for g in _word_ngrams(rec.text, lo, hi):
            counts[g] = counts.get(g, 0) + 1
        doc_grams.append(counts)
        for g in counts:
            df[g] = df.get(g, 0) + 1

    idf = {g: np.log((1 + n_docs) / (1 + d)) + 1.0 for g, d in df.items()}
    data = np.zeros((n_docs, dim), dtype=np.float64)
    for i, counts in enumerate(doc_grams):
        for g, tf in counts.items():
            h = fnv1a_64(g.encode("utf-8"))
            sign = 1.0 if (h >> 63) == 0 else -1.0
            data[i, h % dim] += sign * tf * idf[g]
        norm = np.linalg.norm(data[i])
        if norm > 0:
            data[i] /= norm
    return FeatureMatrix(data, tuple(r.id for r in records), "hashed_tfidf")


def concat_features(parts: Sequence[FeatureMatrix]) -> FeatureMatrix:
    """Horizontal concatenation of row-aligned feature sources."""
    if not parts:
        raise DataError("nothing to concatenate")
    ids = parts[0].row_ids
    for p in parts[1:]:
        if p.row_ids != ids:
            raise DataError("feature parts disagree on row ids/order")
    if len(parts) == 1:
        return parts[0]
    data = np.concatenate([np.asarray(p.data, dtype=np.float64) for p in parts], axis=1)
    return FeatureMatrix(data, ids, "concat")


def truncate_tokens(text: str, max_tokens: int = 128) -> str:
    """Keep the first max_tokens whitespace-delimited tokens."""
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    tokens = text.split()
    if len(tokens) <= max_tokens:
        return text
    return " ".join(tokens[:max_tokens])
