"""Figure rendering for the CLI report paths."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .corpus import CorpusStats
from .intervals import TimeInterval
from .segmenter import DifferenceCurve


def save_curve_figure(
    curve: DifferenceCurve,
    intervals: list[TimeInterval],
    threshold: float,
    path,
    title: str = "Audio difference curve",
) -> None:
    times = curve.start_s + np.arange(len(curve.scores)) / curve.frame_rate
    fig, ax = plt.subplots(figsize=(12, 4))
    ax.plot(times, curve.scores, lw=0.6, color="#1f77b4", label="difference")
    ax.axhline(threshold, color="#d62728", lw=1.0, ls="--", label=f"threshold {threshold:.4g}")
    for k, iv in enumerate(intervals):
        ax.axvspan(iv.start_s, iv.end_s, color="#2ca02c", alpha=0.25,
                   label="detected narration" if k == 0 else None)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("mean per-bin distance")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_stats_figure(stats: CorpusStats, path) -> None:
    sources = list(stats.per_source)
    before = [stats.per_source[s].words_before for s in sources]
    after = [stats.per_source[s].words_after for s in sources]
    hours = [stats.per_source[s].total_h for s in sources]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    x = np.arange(len(sources))
    ax1.bar(x - 0.2, before, width=0.4, label="before curation", color="#9ecae1")
    ax1.bar(x + 0.2, after, width=0.4, label="after curation", color="#3182bd")
    ax1.set_xticks(x, sources)
    ax1.set_ylabel("words")
    ax1.set_title("Word counts")
    ax1.legend(fontsize=8)

    ax2.bar(x, hours, width=0.5, color="#31a354")
    ax2.set_xticks(x, sources)
    ax2.set_ylabel("hours")
    ax2.set_title("Kept clip time")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_ranking_figure(by_criterion: dict[str, dict[str, float]], path) -> None:
    criteria = sorted(by_criterion)
    methods = sorted({m for means in by_criterion.values() for m in means})
    fig, ax = plt.subplots(figsize=(max(6, len(methods) * 0.9), 4))
    x = np.arange(len(methods))
    width = 0.8 / max(len(criteria), 1)
    for i, criterion in enumerate(criteria):
        values = [by_criterion[criterion].get(m, np.nan) for m in methods]
        ax.bar(x + i * width, values, width=width, label=criterion)
    ax.set_xticks(x + width * (len(criteria) - 1) / 2, methods, rotation=30, ha="right")
    ax.set_ylabel("mean rank (lower is better)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
