"""Human-ranking harness: blinded task export, response import, mean ranks.

Tasks go out as JSON lines. The header records the shuffle seed and the
method list; candidate order per task comes from one seeded generator
replayed in file order, so importing responses can reverse the blinding
without ever writing method names into the task records.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .ioutil import atomic_write_text

TASKS_KIND = "moviedesc-ranking-tasks"
RANK_CRITERIA = ("correctness", "grammar", "relevance")


@dataclass(frozen=True)
class RankingRecord:
    snippet_id: str
    ranks: dict[str, int]  # method -> rank, a permutation of 1..M

    def __post_init__(self):
        m = len(self.ranks)
        if sorted(self.ranks.values()) != list(range(1, m + 1)):
            raise ValueError(
                f"{self.snippet_id}: ranks {sorted(self.ranks.values())} "
                f"are not a permutation of 1..{m}"
            )


def mean_ranks(records: list[RankingRecord]) -> dict[str, float]:
    """Arithmetic mean rank per method; every record must cover the same set."""
    if not records:
        raise ValueError("no ranking records")
    methods = set(records[0].ranks)
    sums = {m: 0.0 for m in methods}
    for record in records:
        if set(record.ranks) != methods:
            raise ValueError(
                f"snippet {record.snippet_id}: methods {sorted(record.ranks)} "
                f"differ from {sorted(methods)}"
            )
        for method, rank in record.ranks.items():
            sums[method] += rank
    return {m: sums[m] / len(records) for m in sorted(sums)}


def _blind_key(position: int) -> str:
    key = ""
    position += 1
    while position:
        position, rem = divmod(position - 1, 26)
        key = chr(ord("A") + rem) + key
    return key


def export_ranking_tasks(
    snippet_ids: list[str],
    methods: dict[str, dict[str, str]],  # method -> snippet_id -> sentence
    out_path,
    seed: int = 42,
) -> int:
    """One task per snippet with candidates in seeded random order."""
    method_names = sorted(methods)
    if not method_names:
        raise ValueError("no methods to rank")
    for method in method_names:
        missing = [s for s in snippet_ids if s not in methods[method]]
        if missing:
            raise ValueError(f"method {method!r} missing candidates for {missing[:5]}")
    rng = np.random.default_rng(seed)
    lines = [
        json.dumps(
            {"kind": TASKS_KIND, "seed": seed, "methods": method_names},
            sort_keys=True,
            separators=(",", ":"),
        )
    ]
    for snippet_id in snippet_ids:
        order = rng.permutation(len(method_names))
        candidates = [
            {"key": _blind_key(pos), "sentence": methods[method_names[order[pos]]][snippet_id]}
            for pos in range(len(method_names))
        ]
        lines.append(
            json.dumps(
                {"snippet_id": snippet_id, "candidates": candidates},
                sort_keys=True,
                ensure_ascii=False,
                separators=(",", ":"),
            )
        )
    atomic_write_text(out_path, "\n".join(lines) + "\n")
    return len(snippet_ids)


def _read_tasks(tasks_path) -> tuple[int, list[str], list[str]]:
    with open(tasks_path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    header = json.loads(lines[0])
    if header.get("kind") != TASKS_KIND:
        raise ValueError(f"{tasks_path} is not a ranking task file")
    snippet_ids = [json.loads(ln)["snippet_id"] for ln in lines[1:]]
    return header["seed"], header["methods"], snippet_ids


def import_ranking_responses(tasks_path, responses: list[dict]) -> list[RankingRecord]:
    """Reverse the blinding: responses carry ranks per blind key.

    Each response is {"snippet_id": ..., "ranks": {"A": 2, ...}}; the shuffle
    is re-derived from the task file's seed, so the mapping back to method
    names is exact.
    """
    seed, method_names, snippet_ids = _read_tasks(tasks_path)
    rng = np.random.default_rng(seed)
    key_to_method: dict[str, dict[str, str]] = {}
    for snippet_id in snippet_ids:
        order = rng.permutation(len(method_names))
        key_to_method[snippet_id] = {
            _blind_key(pos): method_names[order[pos]] for pos in range(len(method_names))
        }
    records = []
    for response in responses:
        snippet_id = response["snippet_id"]
        if snippet_id not in key_to_method:
            raise ValueError(f"response for unknown snippet {snippet_id!r}")
        mapping = key_to_method[snippet_id]
        try:
            ranks = {mapping[key]: int(rank) for key, rank in response["ranks"].items()}
        except KeyError as exc:
            raise ValueError(f"snippet {snippet_id}: unknown candidate key {exc}") from None
        records.append(RankingRecord(snippet_id=snippet_id, ranks=ranks))
    return records


def format_ranking_table(by_criterion: dict[str, dict[str, float]]) -> str:
    """Mean-rank table with one column per criterion, lower is better."""
    criteria = [c for c in RANK_CRITERIA if c in by_criterion] or sorted(by_criterion)
    methods = sorted({m for means in by_criterion.values() for m in means})
    width = max((len(m) for m in methods), default=6) + 2
    lines = [" " * width + "".join(f"{c.capitalize():>13}" for c in criteria)]
    for method in methods:
        cells = "".join(
            f"{by_criterion[c].get(method, float('nan')):>13.1f}" for c in criteria
        )
        lines.append(f"{method:<{width}}" + cells)
    return "\n".join(lines)
