"""WAV ingestion: uncompressed PCM 16-bit or 32-bit float, mono or stereo."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile


class AudioFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AudioTrack:
    """Mono amplitude samples in [-1, 1] at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


def load_wav(path) -> AudioTrack:
    """Read a WAV file; stereo is averaged to mono before any processing."""
    rate, data = wavfile.read(path)
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32 or data.dtype == np.float64:
        samples = data.astype(np.float64)
    else:
        raise AudioFormatError(
            f"{path}: unsupported sample format {data.dtype}; "
            "expected 16-bit PCM or 32-bit float"
        )
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    elif samples.ndim != 1:
        raise AudioFormatError(f"{path}: unsupported channel layout {samples.shape}")
    return AudioTrack(samples=samples, sample_rate=int(rate))


def save_wav(path, track: AudioTrack, dtype: str = "float32") -> None:
    if dtype == "float32":
        wavfile.write(path, track.sample_rate, track.samples.astype(np.float32))
    elif dtype == "int16":
        scaled = np.clip(np.round(track.samples * 32768.0), -32768, 32767)
        wavfile.write(path, track.sample_rate, scaled.astype(np.int16))
    else:
        raise ValueError(f"unsupported output dtype {dtype!r}")
