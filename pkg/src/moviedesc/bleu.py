"""Corpus-level BLEU@4 with modified n-gram precision and brevity penalty."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass


@dataclass(frozen=True)
class EvalPair:
    snippet_id: str
    candidate: tuple[str, ...]
    references: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if not self.references:
            raise ValueError(f"{self.snippet_id}: at least one reference required")
        object.__setattr__(self, "candidate", tuple(t.lower() for t in self.candidate))
        object.__setattr__(
            self, "references", tuple(tuple(t.lower() for t in r) for r in self.references)
        )


def _ngrams(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


def _closest_ref_length(candidate_len: int, references) -> int:
    # standard convention: closest length, ties to the shorter reference
    return min((abs(len(r) - candidate_len), len(r)) for r in references)[1]


def bleu4(pairs: list[EvalPair], max_n: int = 4, smoothing: bool = False) -> float:
    """Corpus BLEU as a percentage.

    Clipped n-gram matches are pooled over the whole corpus; the geometric
    mean of p_1..p_4 is scaled by exp(1 - r/c) when the candidate corpus is
    shorter than the (closest-length) reference corpus. Without smoothing any
    zero precision zeroes the score; with smoothing each precision becomes
    (matches + 1) / (total + 1).
    """
    if not pairs:
        raise ValueError("no evaluation pairs")
    matches = [0] * max_n
    totals = [0] * max_n
    cand_len = 0
    ref_len = 0
    for pair in pairs:
        cand_len += len(pair.candidate)
        ref_len += _closest_ref_length(len(pair.candidate), pair.references)
        for n in range(1, max_n + 1):
            cand_counts = _ngrams(pair.candidate, n)
            if not cand_counts:
                continue
            max_ref = Counter()
            for ref in pair.references:
                for gram, count in _ngrams(ref, n).items():
                    if count > max_ref[gram]:
                        max_ref[gram] = count
            matches[n - 1] += sum(min(c, max_ref[g]) for g, c in cand_counts.items())
            totals[n - 1] += sum(cand_counts.values())

    log_sum = 0.0
    for m, t in zip(matches, totals):
        if smoothing:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            return 0.0
        log_sum += math.log(m / t) / max_n

    bp = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / max(cand_len, 1))
    return 100.0 * bp * math.exp(log_sum)
