"""Half-open time intervals in seconds, the common currency for alignment."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class TimeInterval:
    start_s: float
    end_s: float

    def __post_init__(self):
        if not (0.0 <= self.start_s < self.end_s):
            raise ValueError(f"invalid interval [{self.start_s}, {self.end_s})")

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s

    def overlaps(self, other: "TimeInterval") -> bool:
        return self.start_s < other.end_s and other.start_s < self.end_s


def iou(a: TimeInterval, b: TimeInterval) -> float:
    """Intersection over union of two intervals; disjoint pairs score 0."""
    inter = min(a.end_s, b.end_s) - max(a.start_s, b.start_s)
    if inter <= 0.0:
        return 0.0
    union = max(a.end_s, b.end_s) - min(a.start_s, b.start_s)
    return inter / union
