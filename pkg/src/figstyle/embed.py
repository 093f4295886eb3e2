"""Externally produced embedding files, document pooling, feature assembly.

The toolkit never computes neural sentence embeddings itself; it consumes
vector files and turns them into document-level feature matrices.

vectors.jsonl records come in two shapes:

  per-sentence  {"id": str, "sentences": [[float, ...], ...]}
  per-document  {"id": str, "vector": [float, ...]}

Per-sentence records are mean-pooled into one document vector. A compact
binary container is available for large corpora:

  header   magic "FSVB", u32 little-endian dimension, u64 little-endian count
  ids      count times (u32 little-endian byte length, UTF-8 bytes)
  payload  count * dim float32 little-endian, row-major

The JSONL form serializes float64 exactly (repr round-trip); the binary
form stores float32.
"""

import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .corpus import _iter_jsonl

__all__ = [
    "SentenceVectors",
    "FeatureMatrix",
    "pool_document",
    "concat_features",
    "load_vectors",
    "as_document_vectors",
    "matrix_from_vectors",
    "write_doc_vectors",
    "load_feature_matrix",
    "write_binary_vectors",
    "read_binary_vectors",
]

BINARY_MAGIC = b"FSVB"


@dataclass(frozen=True)
class SentenceVectors:
    """Per-sentence embedding rows for one document."""

    id: str
    rows: np.ndarray

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[0] < 1:
            raise DataError(f"{self.id!r}: need at least one sentence row")
        if not np.all(np.isfinite(self.rows)):
            raise DataError(f"{self.id!r}: non-finite embedding values")

    @property
    def dim(self):
        return self.rows.shape[1]


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense per-document feature rows with a descriptor like "stylo(52)"."""

    doc_ids: list
    rows: np.ndarray
    feature_spec: str

    def __post_init__(self):
        if self.rows.ndim != 2 or self.rows.shape[0] != len(self.doc_ids):
            raise DataError("row count must equal document id count")
        if not np.all(np.isfinite(self.rows)):
            raise DataError(f"{self.feature_spec}: non-finite feature values")

    @property
    def width(self):
        return self.rows.shape[1]


def pool_document(vs):
    """Document vector: element-wise mean of the sentence rows."""
    return vs.rows.mean(axis=0)


def concat_features(matrices):
    """Horizontal concatenation of feature matrices with identical id order."""
    matrices = list(matrices)
    if not matrices:
        raise DataError("nothing to concatenate")
    first = matrices[0]
    for other in matrices[1:]:
        if other.doc_ids != first.doc_ids:
            raise DataError(
                "feature matrices disagree on document ids or their order"
            )
    if len(matrices) == 1:
        return first
    return FeatureMatrix(
        doc_ids=list(first.doc_ids),
        rows=np.hstack([m.rows for m in matrices]),
        feature_spec="+".join(m.feature_spec for m in matrices),
    )


def _to_rows(raw, rec_id, path, lineno):
    try:
        rows = np.asarray(raw, dtype=np.float64)
    except (ValueError, TypeError):
        raise DataError(f"{path}:{lineno}: ragged rows for id {rec_id!r}")
    if rows.ndim != 2:
        raise DataError(f"{path}:{lineno}: ragged rows for id {rec_id!r}")
    return rows


def load_vectors(path, expected_dim=None):
    """Load vectors.jsonl into id -> SentenceVectors or 1-D document vector.

    Validates finiteness, consistent dimensions (against expected_dim when
    given, else against the first record), and id uniqueness.
    """
    out = {}
    seen_dim = expected_dim
    for lineno, record in _iter_jsonl(path):
        rec_id = record.get("id")
        if not isinstance(rec_id, str):
            raise DataError(f"{path}:{lineno}: record needs a string id")
        if rec_id in out:
            raise DataError(f"{path}:{lineno}: duplicate id {rec_id!r}")
        if "sentences" in record:
            rows = _to_rows(record["sentences"], rec_id, path, lineno)
            if not np.all(np.isfinite(rows)):
                raise DataError(f"{path}:{lineno}: non-finite value in {rec_id!r}")
            dim = rows.shape[1]
            value = SentenceVectors(id=rec_id, rows=rows)
        elif "vector" in record:
            vec = np.asarray(record["vector"], dtype=np.float64)
            if vec.ndim != 1:
                raise DataError(f"{path}:{lineno}: vector must be flat")
            if not np.all(np.isfinite(vec)):
                raise DataError(f"{path}:{lineno}: non-finite value in {rec_id!r}")
            dim = vec.shape[0]
            value = vec
        else:
            raise DataError(
                f"{path}:{lineno}: record needs 'sentences' or 'vector'"
            )
        if seen_dim is None:
            seen_dim = dim
        elif dim != seen_dim:
            raise DataError(
                f"{path}:{lineno}: id {rec_id!r} has dimension {dim}, "
                f"expected {seen_dim}"
            )
        out[rec_id] = value
    return out


def as_document_vectors(loaded):
    """Pool any per-sentence entries of a load_vectors result."""
    return {
        rec_id: pool_document(v) if isinstance(v, SentenceVectors) else v
        for rec_id, v in loaded.items()
    }


def matrix_from_vectors(doc_ids, vectors, feature_spec):
    """Stack per-document vectors into a FeatureMatrix in doc_ids order."""
    missing = [d for d in doc_ids if d not in vectors]
    if missing:
        raise DataError(
            f"{feature_spec}: missing vectors for {len(missing)} documents "
            f"(e.g. {missing[0]!r})"
        )
    rows = np.vstack([vectors[d] for d in doc_ids])
    return FeatureMatrix(
        doc_ids=list(doc_ids), rows=rows, feature_spec=feature_spec
    )


def write_doc_vectors(doc_ids, rows, path):
    """Write per-document records in the vectors.jsonl form (exact floats)."""
    rows = np.asarray(rows, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as handle:
        for doc_id, row in zip(doc_ids, rows):
            record = {"id": doc_id, "vector": row.tolist()}
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_feature_matrix(path, feature_spec, expected_dim=None):
    """Read a per-document vectors.jsonl file back as a FeatureMatrix."""
    loaded = as_document_vectors(load_vectors(path, expected_dim))
    doc_ids = list(loaded)
    return matrix_from_vectors(doc_ids, loaded, feature_spec)


def write_binary_vectors(doc_ids, rows, path):
    """Write the FSVB binary container (float32, little-endian)."""
    rows = np.asarray(rows)
    if rows.ndim != 2 or rows.shape[0] != len(doc_ids):
        raise DataError("binary writer needs one row per document id")
    with open(path, "wb") as handle:
        handle.write(BINARY_MAGIC)
        handle.write(struct.pack("<IQ", rows.shape[1], rows.shape[0]))
        for doc_id in doc_ids:
            blob = doc_id.encode("utf-8")
            handle.write(struct.pack("<I", len(blob)))
            handle.write(blob)
        handle.write(np.ascontiguousarray(rows, dtype="<f4").tobytes())


def read_binary_vectors(path):
    """Read an FSVB container; returns (doc_ids, float32 row matrix)."""
    with open(path, "rb") as handle:
        magic = handle.read(4)
        if magic != BINARY_MAGIC:
            raise DataError(f"{path}: not an FSVB vector container")
        dim, count = struct.unpack("<IQ", handle.read(12))
        doc_ids = []
        for _ in range(count):
            (length,) = struct.unpack("<I", handle.read(4))
            doc_ids.append(handle.read(length).decode("utf-8"))
        payload = handle.read(4 * dim * count)
        if len(payload) != 4 * dim * count:
            raise DataError(f"{path}: truncated FSVB payload")
        rows = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    if not np.all(np.isfinite(rows)):
        raise DataError(f"{path}: non-finite values in FSVB payload")
    return doc_ids, rows.copy()
