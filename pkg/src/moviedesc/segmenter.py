"""Locate narration insertions by differencing mixed vs. original spectrograms.

The mixed track carries the original movie audio plus narration read between
dialogues. After a global lag correction the two magnitude spectrograms agree
wherever no narration is present, so the per-frame distance curve lights up
exactly where narration was mixed in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .audio_io import AudioTrack
from .intervals import TimeInterval


@dataclass(frozen=True, eq=False)
class Spectrogram:
    magnitudes: np.ndarray  # frames x bins, non-negative
    frame_rate: float  # frames per second = sample_rate / hop
    window_size: int
    hop: int

    @property
    def n_frames(self) -> int:
        return self.magnitudes.shape[0]

    @property
    def n_bins(self) -> int:
        return self.magnitudes.shape[1]


@dataclass(frozen=True, eq=False)
class DifferenceCurve:
    scores: np.ndarray  # per compared frame pair, non-negative
    frame_rate: float
    start_s: float = 0.0  # mixed-track time of the first compared frame


def compute_spectrogram(track: AudioTrack, window_size: int = 1024, hop: int = 512) -> Spectrogram:
    """Hann-windowed magnitude spectrogram with `floor((n-w)/hop)+1` frames."""
    if window_size < 2 or window_size & (window_size - 1):
        raise ValueError(f"invalid window: {window_size} is not a power of two")
    if not 0 < hop <= window_size:
        raise ValueError(f"hop {hop} must be in (0, window_size]")
    samples = np.asarray(track.samples, dtype=np.float64)
    if samples.size < window_size:
        raise ValueError(
            f"input too short: {samples.size} samples < one window of {window_size}"
        )
    n_frames = (samples.size - window_size) // hop + 1
    index = np.arange(window_size)[None, :] + hop * np.arange(n_frames)[:, None]
    frames = samples[index] * np.hanning(window_size)
    magnitudes = np.abs(np.fft.rfft(frames, axis=1))
    return Spectrogram(
        magnitudes=magnitudes,
        frame_rate=track.sample_rate / hop,
        window_size=window_size,
        hop=hop,
    )


def _check_compatible(a: Spectrogram, b: Spectrogram) -> None:
    if (a.window_size, a.hop, a.n_bins) != (b.window_size, b.hop, b.n_bins):
        raise ValueError("spectrograms use different window/hop parameters")
    if a.frame_rate != b.frame_rate:
        raise ValueError("spectrograms have different frame rates")


def _mean_frame_distance(a: Spectrogram, b: Spectrogram, lag: int) -> float | None:
    """Mean per-frame L1 distance / bin count, comparing a[t] with b[t+lag]."""
    a0 = max(0, -lag)
    b0 = a0 + lag
    n = min(a.n_frames - a0, b.n_frames - b0)
    if n <= 0:
        return None
    return float(np.abs(a.magnitudes[a0 : a0 + n] - b.magnitudes[b0 : b0 + n]).mean())


def estimate_offset(spec_a: Spectrogram, spec_b: Spectrogram, max_lag_frames: int) -> int:
    """Lag in [-max_lag, +max_lag] maximizing mean frame similarity.

    A positive lag k means spec_b runs k frames behind spec_a (b[t+k] ~ a[t]).
    Ties go to the smallest |lag|, then to the negative lag.
    """
    _check_compatible(spec_a, spec_b)
    if max_lag_frames < 0:
        raise ValueError("max_lag_frames must be non-negative")
    if max_lag_frames >= min(spec_a.n_frames, spec_b.n_frames):
        raise ValueError("max_lag_frames must be smaller than either frame count")
    best_lag = None
    best_sim = -np.inf
    # scan order 0, -1, +1, -2, +2, ... so strict improvement encodes the tie rule
    for k in sorted(range(-max_lag_frames, max_lag_frames + 1), key=lambda k: (abs(k), k)):
        dist = _mean_frame_distance(spec_a, spec_b, k)
        if dist is None:
            continue
        if -dist > best_sim:
            best_sim = -dist
            best_lag = k
    if best_lag is None:
        raise ValueError("no overlap at any lag")
    return best_lag


def difference_curve(mixed: Spectrogram, original: Spectrogram, lag: int) -> DifferenceCurve:
    """Per-frame L1 distance (divided by bin count) between aligned frames."""
    _check_compatible(mixed, original)
    m0 = max(0, -lag)
    o0 = m0 + lag
    n = min(mixed.n_frames - m0, original.n_frames - o0)
    if n <= 0:
        raise ValueError("no overlapping frames at this lag")
    scores = np.abs(mixed.magnitudes[m0 : m0 + n] - original.magnitudes[o0 : o0 + n]).mean(axis=1)
    return DifferenceCurve(scores=scores, frame_rate=mixed.frame_rate, start_s=m0 / mixed.frame_rate)


def suggest_threshold(curve: DifferenceCurve, percentile: float = 75.0) -> float:
    """Percentile-based threshold suggestion; the final choice is per movie."""
    if curve.scores.size == 0:
        raise ValueError("empty curve")
    return float(np.percentile(curve.scores, percentile))


def curve_percentiles(curve: DifferenceCurve, percentiles=(50, 75, 90, 95, 99)) -> dict[float, float]:
    return {float(p): float(np.percentile(curve.scores, p)) for p in percentiles}


def threshold_segments(
    curve: DifferenceCurve,
    threshold: float,
    min_segment_s: float = 1.0,
    merge_gap_s: float = 0.25,
) -> list[TimeInterval]:
    """Runs of frames above threshold, gap-merged, then length-filtered.

    Runs separated by a gap shorter than `merge_gap_s` are merged first;
    merged runs shorter than `min_segment_s` are dropped.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    if min_segment_s <= 0:
        raise ValueError("min_segment_s must be positive")
    above = curve.scores > threshold
    runs: list[list[int]] = []  # [start_frame, end_frame) pairs
    start = None
    for i, hot in enumerate(above):
        if hot and start is None:
            start = i
        elif not hot and start is not None:
            runs.append([start, i])
            start = None
    if start is not None:
        runs.append([start, len(above)])

    merged: list[list[int]] = []
    for run in runs:
        if merged and (run[0] - merged[-1][1]) / curve.frame_rate < merge_gap_s:
            merged[-1][1] = run[1]
        else:
            merged.append(run)

    out = []
    for i, j in merged:
        if (j - i) / curve.frame_rate >= min_segment_s:
            out.append(
                TimeInterval(
                    start_s=curve.start_s + i / curve.frame_rate,
                    end_s=curve.start_s + j / curve.frame_rate,
                )
            )
    return out


@dataclass(frozen=True)
class SegmenterParams:
    window_size: int = 1024
    hop: int = 512
    max_lag_s: float = 10.0
    threshold: float | None = None  # None -> suggest_threshold(curve, auto_percentile)
    auto_percentile: float = 75.0
    min_segment_s: float = 1.0
    merge_gap_s: float = 0.25


@dataclass(frozen=True)
class SegmentationResult:
    intervals: list[TimeInterval]
    curve: DifferenceCurve
    lag_frames: int
    threshold: float
    params: SegmenterParams = field(default_factory=SegmenterParams)

    def interval_scores(self) -> list[tuple[float, float]]:
        """(peak, mean) difference score per detected interval."""
        out = []
        for iv in self.intervals:
            i = int(round((iv.start_s - self.curve.start_s) * self.curve.frame_rate))
            j = int(round((iv.end_s - self.curve.start_s) * self.curve.frame_rate))
            chunk = self.curve.scores[i:j]
            out.append((float(chunk.max()), float(chunk.mean())))
        return out


def run_segmentation(
    mixed: AudioTrack, original: AudioTrack, params: SegmenterParams = SegmenterParams()
) -> SegmentationResult:
    if mixed.sample_rate != original.sample_rate:
        raise ValueError(
            f"sample rates differ: {mixed.sample_rate} vs {original.sample_rate}"
        )
    spec_m = compute_spectrogram(mixed, params.window_size, params.hop)
    spec_o = compute_spectrogram(original, params.window_size, params.hop)
    max_lag = int(params.max_lag_s * spec_m.frame_rate)
    max_lag = min(max_lag, min(spec_m.n_frames, spec_o.n_frames) - 1)
    lag = estimate_offset(spec_m, spec_o, max_lag)
    curve = difference_curve(spec_m, spec_o, lag)
    threshold = (
        params.threshold
        if params.threshold is not None
        else suggest_threshold(curve, params.auto_percentile)
    )
    intervals = threshold_segments(curve, threshold, params.min_segment_s, params.merge_gap_s)
    return SegmentationResult(
        intervals=intervals, curve=curve, lag_frames=lag, threshold=threshold, params=params
    )


def segment_dvs(
    mixed: AudioTrack, original: AudioTrack, params: SegmenterParams = SegmenterParams()
) -> list[TimeInterval]:
    """Full pipeline: spectrograms -> offset -> difference curve -> segments."""
    return run_segmentation(mixed, original, params).intervals
