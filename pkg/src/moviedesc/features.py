"""Precomputed visual feature vectors: normalization, distance, retrieval, I/O.

Feature computation itself (trajectories, CNNs) happens upstream; this module
only ingests the vectors. The binary layout per file is

    magic "MDFV" | u32 version
    repeated records:
        u32 id length | id utf-8 bytes
        u32 feature-name length | name utf-8 bytes
        u32 dim | dim float64 values

all little-endian. A CSV fallback (snippet_id, feature_name, v0, v1, ...)
covers hand-made fixtures.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ioutil import atomic_write_bytes, atomic_write_text

MAGIC = b"MDFV"
VERSION = 1

FEATURE_NAMES = ("DT", "LSDA", "PLACES", "HYBRID")  # conventional, not enforced


class FeatureFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FeatureVector:
    feature_name: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.ndim != 1:
            raise ValueError("feature values must be a flat vector")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature values must be finite")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


def l1_normalize(v: FeatureVector) -> FeatureVector:
    """Scale so the absolute components sum to 1; zero vectors are an error."""
    norm = float(np.abs(v.values).sum())
    if norm == 0.0:
        raise ValueError("unnormalizable: zero vector")
    return FeatureVector(v.feature_name, v.values / norm)


def intersection_distance(a: FeatureVector, b: FeatureVector) -> float:
    """1 - sum(min(a_i, b_i)); equals L1/2 for L1-normalized non-negative input."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(1.0 - np.minimum(a.values, b.values).sum())


def nearest_neighbor(query: FeatureVector, training: list[tuple[FeatureVector, str]]) -> str:
    """Sentence of the closest training vector; ties keep the earliest item."""
    if not training:
        raise ValueError("empty training set")
    best_d = None
    best_sentence = None
    for vec, sentence in training:
        d = intersection_distance(query, vec)
        if best_d is None or d < best_d:
            best_d = d
            best_sentence = sentence
    return best_sentence


def write_features(path, features: dict[str, FeatureVector]) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        import io

        buffer = io.StringIO()
        writer = csv.writer(buffer)
        for snippet_id, vec in features.items():
            writer.writerow([snippet_id, vec.feature_name] + [repr(float(x)) for x in vec.values])
        atomic_write_text(path, buffer.getvalue())
        return
    chunks = [MAGIC, struct.pack("<I", VERSION)]
    for snippet_id, vec in features.items():
        for text in (snippet_id, vec.feature_name):
            raw = text.encode("utf-8")
            chunks.append(struct.pack("<I", len(raw)))
            chunks.append(raw)
        chunks.append(struct.pack("<I", vec.dim))
        chunks.append(vec.values.astype("<f8").tobytes())
    atomic_write_bytes(path, b"".join(chunks))


def _read_features_csv(path) -> dict[str, FeatureVector]:
    out: dict[str, FeatureVector] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row_no, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) < 3:
                raise FeatureFormatError(f"{path}: row {row_no}: expected id, name, values")
            try:
                values = np.array([float(x) for x in row[2:]])
            except ValueError as exc:
                raise FeatureFormatError(f"{path}: row {row_no}: {exc}") from None
            out[row[0]] = FeatureVector(row[1], values)
    return out


def read_features(path) -> dict[str, FeatureVector]:
    """Read a feature file (binary or CSV), keyed by snippet id, in file order."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head != MAGIC:
        return _read_features_csv(path)

    out: dict[str, FeatureVector] = {}
    data = path.read_bytes()
    pos = 4
    (version,) = struct.unpack_from("<I", data, pos)
    pos += 4
    if version != VERSION:
        raise FeatureFormatError(f"{path}: unsupported feature file version {version}")
    dims: dict[str, int] = {}
    while pos < len(data):
        fields = []
        for _ in range(2):
            if pos + 4 > len(data):
                raise FeatureFormatError(f"{path}: truncated record at byte {pos}")
            (n,) = struct.unpack_from("<I", data, pos)
            pos += 4
            fields.append(data[pos : pos + n].decode("utf-8"))
            pos += n
        (dim,) = struct.unpack_from("<I", data, pos)
        pos += 4
        end = pos + 8 * dim
        if end > len(data):
            raise FeatureFormatError(f"{path}: truncated values at byte {pos}")
        values = np.frombuffer(data[pos:end], dtype="<f8").astype(np.float64)
        pos = end
        snippet_id, name = fields
        if name in dims and dims[name] != dim:
            raise FeatureFormatError(
                f"{path}: {snippet_id}: dim {dim} differs from earlier {name} dim {dims[name]}"
            )
        dims[name] = dim
        out[snippet_id] = FeatureVector(name, values)
    return out


def load_unary_scores(paths) -> dict[str, dict[str, dict[str, float]]]:
    """Unary score CSVs (snippet_id, node, label, score) -> nested maps.

    Multiple files fuse by score summation per (snippet, node, label).
    """
    out: dict[str, dict[str, dict[str, float]]] = {}
    if isinstance(paths, (str, Path)):
        paths = [paths]
    for path in paths:
        with open(path, encoding="utf-8", newline="") as fh:
            for row_no, row in enumerate(csv.reader(fh), start=1):
                if not row or row[0].startswith("#"):
                    continue
                if len(row) != 4:
                    raise FeatureFormatError(
                        f"{path}: row {row_no}: expected snippet_id, node, label, score"
                    )
                snippet_id, node, label, score = row
                if node not in ("verb", "object", "location"):
                    raise FeatureFormatError(f"{path}: row {row_no}: unknown node {node!r}")
                by_node = out.setdefault(snippet_id, {})
                by_label = by_node.setdefault(node, {})
                by_label[label] = by_label.get(label, 0.0) + float(score)
    return out
