import numpy as np
import pytest

from moviedesc.audio_io import AudioTrack
from moviedesc.segmenter import (
    DifferenceCurve,
    SegmenterParams,
    compute_spectrogram,
    difference_curve,
    estimate_offset,
    segment_dvs,
    suggest_threshold,
    threshold_segments,
)


def naive_dft_magnitudes(samples, window_size, hop):
    """Independent O(n^2) DFT oracle with the same Hann window."""
    window = 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(window_size) / (window_size - 1))
    n_frames = (len(samples) - window_size) // hop + 1
    bins = window_size // 2 + 1
    out = np.zeros((n_frames, bins))
    for f in range(n_frames):
        frame = samples[f * hop : f * hop + window_size] * window
        for k in range(bins):
            angles = -2j * np.pi * k * np.arange(window_size) / window_size
            out[f, k] = abs(np.sum(frame * np.exp(angles)))
    return out


def track(samples, rate=16000):
    return AudioTrack(samples=np.asarray(samples, dtype=np.float64), sample_rate=rate)


class TestComputeSpectrogram:
    def test_silence_is_all_zero(self):
        spec = compute_spectrogram(track(np.zeros(16000)), 1024, 512)
        assert spec.magnitudes.shape == ((16000 - 1024) // 512 + 1, 513)
        assert np.all(spec.magnitudes == 0)

    def test_pure_tone_peaks_at_expected_bin(self):
        t = np.arange(16000) / 16000
        spec = compute_spectrogram(track(np.sin(2 * np.pi * 1000 * t)), 1024, 512)
        expected_bin = round(1000 * 1024 / 16000)
        assert expected_bin == 64
        assert np.all(spec.magnitudes.argmax(axis=1) == expected_bin)

    def test_matches_naive_dft_oracle(self):
        rng = np.random.default_rng(7)
        samples = rng.normal(size=256 + 2 * 128)  # 3 frames at window 256, hop 128
        spec = compute_spectrogram(track(samples), 256, 128)
        oracle = naive_dft_magnitudes(samples, 256, 128)
        assert spec.magnitudes.shape == oracle.shape == (3, 129)
        np.testing.assert_allclose(spec.magnitudes, oracle, rtol=1e-6, atol=1e-9)

    def test_matches_naive_dft_oracle_4096_samples(self):
        rng = np.random.default_rng(8)
        samples = rng.normal(size=4096)
        spec = compute_spectrogram(track(samples), 1024, 512)
        oracle = naive_dft_magnitudes(samples, 1024, 512)
        np.testing.assert_allclose(spec.magnitudes, oracle, rtol=1e-6, atol=1e-9)

    def test_frame_rate_and_geometry(self):
        spec = compute_spectrogram(track(np.ones(5000)), 512, 256)
        assert spec.frame_rate == 16000 / 256
        assert spec.n_frames == (5000 - 512) // 256 + 1

    def test_too_short_input(self):
        with pytest.raises(ValueError, match="input too short"):
            compute_spectrogram(track(np.zeros(100)), 1024, 512)

    def test_non_power_of_two_window(self):
        with pytest.raises(ValueError, match="invalid window"):
            compute_spectrogram(track(np.zeros(4000)), 1000, 500)


def random_spectrogram(rng, frames, bins=65, window=128, hop=64, rate=8192):
    from moviedesc.segmenter import Spectrogram

    return Spectrogram(
        magnitudes=np.abs(rng.normal(size=(frames, bins))),
        frame_rate=rate / hop,
        window_size=window,
        hop=hop,
    )


def shift_spectrogram(spec, k, rng, noise_scale=0.0):
    """Delay by k frames, padding with fresh noise; optional additive noise."""
    mags = spec.magnitudes
    pad = np.abs(rng.normal(size=(abs(k), mags.shape[1])))
    if k >= 0:
        shifted = np.vstack([pad, mags[: len(mags) - k]]) if k else mags.copy()
    else:
        shifted = np.vstack([mags[-k:], pad])
    if noise_scale:
        shifted = np.abs(shifted + rng.normal(scale=noise_scale, size=shifted.shape))
    from moviedesc.segmenter import Spectrogram

    return Spectrogram(shifted, spec.frame_rate, spec.window_size, spec.hop)


class TestEstimateOffset:
    def test_identity_gives_zero(self):
        spec = random_spectrogram(np.random.default_rng(0), 80)
        assert estimate_offset(spec, spec, 20) == 0

    @pytest.mark.parametrize("k", [1, 5, 17, -3, -12])
    def test_constructed_shift(self, k):
        rng = np.random.default_rng(42 + k)
        spec = random_spectrogram(rng, 120)
        shifted = shift_spectrogram(spec, k, rng)
        assert estimate_offset(spec, shifted, 30) == k

    def test_shift_with_noise_20db(self):
        # 20 dB SNR: noise amplitude one tenth of the signal RMS
        for k in (-40, -7, 0, 13, 40):
            rng = np.random.default_rng(100 + k)
            spec = random_spectrogram(rng, 150)
            snr_scale = float(np.sqrt(np.mean(spec.magnitudes**2))) / 10.0
            shifted = shift_spectrogram(spec, k, rng, noise_scale=snr_scale)
            assert estimate_offset(spec, shifted, 45) == k

    def test_antisymmetric_on_shifts(self):
        rng = np.random.default_rng(5)
        spec = random_spectrogram(rng, 100)
        shifted = shift_spectrogram(spec, 9, rng)
        assert estimate_offset(spec, shifted, 25) == 9
        assert estimate_offset(shifted, spec, 25) == -9

    def test_lag_bound_validation(self):
        spec = random_spectrogram(np.random.default_rng(1), 10)
        with pytest.raises(ValueError):
            estimate_offset(spec, spec, 10)


class TestDifferenceCurve:
    def test_identical_streams_zero(self):
        spec = random_spectrogram(np.random.default_rng(3), 50)
        curve = difference_curve(spec, spec, 0)
        assert np.all(curve.scores == 0)
        assert len(curve.scores) == 50

    def test_silent_original(self):
        rng = np.random.default_rng(4)
        mixed = random_spectrogram(rng, 40)
        from moviedesc.segmenter import Spectrogram

        silent = Spectrogram(
            np.zeros_like(mixed.magnitudes), mixed.frame_rate, mixed.window_size, mixed.hop
        )
        curve = difference_curve(mixed, silent, 0)
        np.testing.assert_allclose(curve.scores, mixed.magnitudes.mean(axis=1))

    def test_elementwise_oracle(self):
        rng = np.random.default_rng(9)
        a = random_spectrogram(rng, 60)
        b = random_spectrogram(rng, 55)
        for lag in (-4, 0, 7):
            curve = difference_curve(a, b, lag)
            m0 = max(0, -lag)
            expected = []
            for t in range(len(curve.scores)):
                fa = a.magnitudes[m0 + t]
                fb = b.magnitudes[m0 + t + lag]
                expected.append(sum(abs(x - y) for x, y in zip(fa, fb)) / len(fa))
            np.testing.assert_allclose(curve.scores, expected, atol=1e-9)

    def test_no_overlap(self):
        spec = random_spectrogram(np.random.default_rng(2), 10)
        with pytest.raises(ValueError, match="no overlap"):
            difference_curve(spec, spec, 10)


def run_merge_drop_oracle(above, frame_rate, min_segment_s, merge_gap_s):
    """Scalar state machine over the hot/cold frame sequence."""
    runs = []
    start = None
    for i, hot in enumerate(list(above) + [False]):
        if hot and start is None:
            start = i
        if not hot and start is not None:
            runs.append((start, i))
            start = None
    merged = []
    for run in runs:
        if merged and (run[0] - merged[-1][1]) / frame_rate < merge_gap_s:
            merged[-1] = (merged[-1][0], run[1])
        else:
            merged.append(run)
    return [r for r in merged if (r[1] - r[0]) / frame_rate >= min_segment_s]


class TestThresholdSegments:
    def curve(self, scores, frame_rate=10.0):
        return DifferenceCurve(np.asarray(scores, dtype=float), frame_rate)

    def test_all_below_threshold(self):
        assert threshold_segments(self.curve([0.1] * 40), 0.5) == []

    def test_short_run_dropped(self):
        scores = [0.0] * 10 + [1.0] * 5 + [0.0] * 10  # 0.5 s at 10 fps
        assert threshold_segments(self.curve(scores), 0.5, min_segment_s=1.0) == []

    def test_gap_merge_rescues_short_runs(self):
        # two 0.8 s runs separated by a 0.1 s gap at 10 fps
        scores = [0.0] * 5 + [1.0] * 8 + [0.0] * 1 + [1.0] * 8 + [0.0] * 5
        got = threshold_segments(self.curve(scores), 0.5, min_segment_s=1.0, merge_gap_s=0.25)
        expected = run_merge_drop_oracle(np.asarray(scores) > 0.5, 10.0, 1.0, 0.25)
        assert [(iv.start_s, iv.end_s) for iv in got] == [
            (a / 10.0, b / 10.0) for a, b in expected
        ]
        assert len(got) == 1 and got[0].duration_s >= 1.0

    def test_random_against_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            scores = rng.random(rng.integers(5, 200))
            threshold = float(rng.random())
            min_seg = float(rng.uniform(0.05, 0.5))
            gap = float(rng.uniform(0.0, 0.3))
            got = threshold_segments(self.curve(scores), threshold, min_seg, gap)
            expected = run_merge_drop_oracle(scores > threshold, 10.0, min_seg, gap)
            assert [(iv.start_s, iv.end_s) for iv in got] == [
                (a / 10.0, b / 10.0) for a, b in expected
            ]

    def test_sorted_disjoint_and_min_duration(self):
        rng = np.random.default_rng(13)
        scores = rng.random(500)
        got = threshold_segments(self.curve(scores), 0.6, min_segment_s=0.3, merge_gap_s=0.2)
        for a, b in zip(got, got[1:]):
            assert a.end_s <= b.start_s
        # endpoints are float; allow rounding slack on the recomputed duration
        assert all(iv.duration_s >= 0.3 - 1e-9 for iv in got)

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(17)
        scores = rng.random(300)
        curve = self.curve(scores)
        coverage = []
        for threshold in (0.2, 0.4, 0.6, 0.8):
            ivs = threshold_segments(curve, threshold, min_segment_s=0.2, merge_gap_s=0.0)
            coverage.append(sum(iv.duration_s for iv in ivs))
        assert all(a >= b for a, b in zip(coverage, coverage[1:]))

    def test_start_offset_applied(self):
        curve = DifferenceCurve(np.array([1.0] * 20), 10.0, start_s=3.0)
        got = threshold_segments(curve, 0.5, min_segment_s=1.0)
        assert got[0].start_s == 3.0 and got[0].end_s == 5.0


class TestSegmentDvs:
    def test_identical_tracks_empty(self):
        from fixture_movie import make_original

        track_ = make_original(8.0)
        params = SegmenterParams(max_lag_s=1.0, threshold=1e-6)
        assert segment_dvs(track_, track_, params) == []

    def test_shift_only_no_insertions(self):
        from fixture_movie import make_mixed, make_original

        original = make_original(20.0)
        mixed, _ = make_mixed(original, bursts=(), offset_s=1.5, noise=0.0)
        params = SegmenterParams(max_lag_s=3.0, threshold=0.01)
        assert segment_dvs(mixed, original, params) == []

    def test_synthetic_bursts_recovered(self):
        from fixture_movie import make_mixed, make_original

        original = make_original(30.0)
        bursts = ((4.0, 5.5), (12.0, 13.2), (20.0, 22.0))
        mixed, truth = make_mixed(original, bursts=bursts, offset_s=1.5)
        # threshold picked per movie, as for real mixes: above the alignment
        # residual floor, well below narration level
        params = SegmenterParams(max_lag_s=3.0, threshold=0.05)
        intervals = segment_dvs(mixed, original, params)
        assert len(intervals) == len(truth)
        for iv, (ts, te) in zip(intervals, truth):
            inter = min(iv.end_s, te) - max(iv.start_s, ts)
            union = max(iv.end_s, te) - min(iv.start_s, ts)
            assert inter / union >= 0.9

    def test_sample_rate_mismatch(self):
        a = AudioTrack(np.zeros(4000), 16000)
        b = AudioTrack(np.zeros(4000), 8000)
        with pytest.raises(ValueError, match="sample rates differ"):
            segment_dvs(a, b)


def test_suggest_threshold_percentile():
    curve = DifferenceCurve(np.arange(101, dtype=float), 10.0)
    assert suggest_threshold(curve) == pytest.approx(75.0)
    assert suggest_threshold(curve, 90) == pytest.approx(90.0)
