"""Three-node CRF over verb/object/location labels with exact MAP inference.

Pairwise potentials are smoothed log co-occurrence counts learned from
parsed tuples; unaries come from visual classifier score files. The label
spaces stay small enough (hundreds of labels per node) that MAP is a plain
enumeration of the label product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .ioutil import atomic_write_text
from .semparse import SRTuple

NODES = ("verb", "object", "location")


@dataclass(frozen=True, eq=False)
class PairwisePotentials:
    labels: dict[str, tuple[str, ...]]  # node -> sorted label tuple
    tables: dict[tuple[str, str], np.ndarray]  # (node_a, node_b) -> |A| x |B|
    alpha: float
    skipped: int  # tuples not counted for at least one pair

    def index(self, node: str) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels[node])}


_PAIRS = (("verb", "object"), ("verb", "location"), ("object", "location"))


def fit_pairwise(tuples: list[SRTuple], vocabs: dict[str, list[str]], alpha: float = 1.0) -> PairwisePotentials:
    """potential(u, v) = log((count(u,v) + alpha) / (N + alpha*|U|*|V|)).

    A tuple contributes to a pair only when both slots are present and inside
    the vocabularies; everything else is skipped and counted.
    """
    if not tuples:
        raise ValueError("empty tuple list")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    labels = {node: tuple(sorted(set(vocabs[node]))) for node in NODES}
    index = {node: {label: i for i, label in enumerate(labels[node])} for node in NODES}

    tables: dict[tuple[str, str], np.ndarray] = {}
    skipped_tuples: set[int] = set()
    for node_a, node_b in _PAIRS:
        counts = np.zeros((len(labels[node_a]), len(labels[node_b])))
        n = 0
        for t_idx, t in enumerate(tuples):
            u = getattr(t, node_a)
            v = getattr(t, node_b)
            if u in index[node_a] and v in index[node_b]:
                counts[index[node_a][u], index[node_b][v]] += 1
                n += 1
            else:
                skipped_tuples.add(t_idx)
        denom = n + alpha * counts.size
        tables[(node_a, node_b)] = np.log((counts + alpha) / denom)
    return PairwisePotentials(labels=labels, tables=tables, alpha=alpha, skipped=len(skipped_tuples))


def crf_map(
    unaries: dict[str, dict[str, float]],
    potentials: PairwisePotentials,
    weights: tuple[float, float] = (1.0, 1.0),
    top_k: int | None = None,
    mode: str = "sense",
) -> SRTuple:
    """Exhaustive MAP over the scored label product.

    Maximizes w_u * sum(unaries) + w_p * sum(pairwise potentials); ties break
    on the lexicographically smallest (verb, object, location) triple. With
    top_k, each node is first cut to its k best unary labels.
    """
    w_u, w_p = weights
    scored: dict[str, list[str]] = {}
    values: dict[str, np.ndarray] = {}
    for node in NODES:
        node_scores = unaries.get(node) or {}
        if not node_scores:
            raise ValueError(f"node {node!r} has no scored labels")
        vocab = set(potentials.labels[node])
        unknown = set(node_scores) - vocab
        if unknown:
            raise ValueError(f"node {node!r}: labels {sorted(unknown)} not in the fitted vocabulary")
        ranked = sorted(node_scores)  # lexicographic; argmax then prefers smaller labels
        if top_k is not None:
            ranked = sorted(sorted(ranked, key=lambda l: -node_scores[l])[:top_k])
        scored[node] = ranked
        values[node] = np.array([node_scores[l] for l in ranked])

    def sub_table(node_a: str, node_b: str) -> np.ndarray:
        table = potentials.tables[(node_a, node_b)]
        ia = potentials.index(node_a)
        ib = potentials.index(node_b)
        rows = [ia[l] for l in scored[node_a]]
        cols = [ib[l] for l in scored[node_b]]
        return table[np.ix_(rows, cols)]

    total = (
        w_u
        * (
            values["verb"][:, None, None]
            + values["object"][None, :, None]
            + values["location"][None, None, :]
        )
        + w_p * sub_table("verb", "object")[:, :, None]
        + w_p * sub_table("verb", "location")[:, None, :]
        + w_p * sub_table("object", "location")[None, :, :]
    )
    flat = int(np.argmax(total))  # first max = lexicographically smallest triple
    vi, oi, li = np.unravel_index(flat, total.shape)
    return SRTuple(
        verb=scored["verb"][vi],
        object=scored["object"][oi],
        location=scored["location"][li],
        mode=mode,
    )


def save_potentials(potentials: PairwisePotentials, path) -> None:
    payload = {
        "alpha": potentials.alpha,
        "skipped": potentials.skipped,
        "labels": {node: list(labels) for node, labels in potentials.labels.items()},
        "tables": {
            f"{a}|{b}": [[repr(float(x)) for x in row] for row in table]
            for (a, b), table in potentials.tables.items()
        },
    }
    atomic_write_text(path, json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def load_potentials(path) -> PairwisePotentials:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    labels = {node: tuple(ls) for node, ls in payload["labels"].items()}
    tables = {}
    for key, rows in payload["tables"].items():
        a, _, b = key.partition("|")
        tables[(a, b)] = np.array([[float(x) for x in row] for row in rows])
    return PairwisePotentials(
        labels=labels, tables=tables, alpha=payload["alpha"], skipped=payload["skipped"]
    )
