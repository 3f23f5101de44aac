"""Visual-word codebook: seeded k-means over activity features.

Initialization is farthest-point: the seed picks the first centroid, each
further centroid is the point maximizing its distance to the chosen set.
That makes fitting fully deterministic for a given seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .features import FeatureVector
from .ioutil import atomic_write_text


@dataclass(frozen=True, eq=False)
class VisualWordCodebook:
    centroids: np.ndarray  # k x dim
    k: int
    seed: int
    objective_per_iter: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.centroids.shape[0] != self.k:
            raise ValueError("centroid count differs from k")


@dataclass(frozen=True)
class VisualWordTuple:
    subject_label: str
    activity_word: int
    object_label: str
    scene_label: str


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def kmeans_fit(vectors: list[FeatureVector], k: int = 300, seed: int = 42, max_iter: int = 100) -> VisualWordCodebook:
    """Lloyd iterations from farthest-point init; stops when assignments settle.

    The recorded objective (sum of squared distances after each assignment
    step) is non-increasing across iterations.
    """
    if len(vectors) < k:
        raise ValueError(f"need at least k={k} vectors, got {len(vectors)}")
    points = np.stack([v.values for v in vectors])

    rng = np.random.default_rng(seed)
    first = int(rng.integers(len(points)))
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[first]
    min_d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        idx = int(np.argmax(min_d2))  # ties: first occurrence = lowest index
        centroids[c] = points[idx]
        min_d2 = np.minimum(min_d2, ((points - centroids[c]) ** 2).sum(axis=1))

    objectives: list[float] = []
    assignments = None
    for _ in range(max_iter):
        d2 = _squared_distances(points, centroids)
        new_assignments = d2.argmin(axis=1)
        objectives.append(float(d2[np.arange(len(points)), new_assignments].sum()))
        if assignments is not None and np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
        for c in range(k):
            members = points[assignments == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
    return VisualWordCodebook(
        centroids=centroids, k=k, seed=seed, objective_per_iter=tuple(objectives)
    )


def kmeans_assign(codebook: VisualWordCodebook, v: FeatureVector) -> int:
    """Index of the nearest centroid (Euclidean); ties go to the lowest index."""
    if v.dim != codebook.centroids.shape[1]:
        raise ValueError(f"dimension mismatch: {v.dim} vs {codebook.centroids.shape[1]}")
    d2 = ((codebook.centroids - v.values) ** 2).sum(axis=1)
    return int(d2.argmin())


def _top_classes(scores: dict[str, float], n: int) -> list[str]:
    if len(scores) < n:
        raise ValueError(f"need at least {n} scored classes, got {len(scores)}")
    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return [name for name, _ in ranked[:n]]


def visual_word_tuple(
    lsda_scores: dict[str, float],
    dt: FeatureVector,
    places_scores: dict[str, float],
    codebook: VisualWordCodebook,
) -> VisualWordTuple:
    """(top object class, activity word, runner-up object class, top scene).

    Score ties break lexicographically by class name.
    """
    subject, obj = _top_classes(lsda_scores, 2)
    scene = _top_classes(places_scores, 1)[0]
    return VisualWordTuple(
        subject_label=subject,
        activity_word=kmeans_assign(codebook, dt),
        object_label=obj,
        scene_label=scene,
    )


def save_codebook(codebook: VisualWordCodebook, path) -> None:
    payload = {
        "k": codebook.k,
        "seed": codebook.seed,
        "centroids": [[repr(float(x)) for x in row] for row in codebook.centroids],
    }
    atomic_write_text(path, json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def load_codebook(path) -> VisualWordCodebook:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    centroids = np.array([[float(x) for x in row] for row in payload["centroids"]])
    return VisualWordCodebook(centroids=centroids, k=payload["k"], seed=payload["seed"])
