"""Deterministic synthetic movie used across the tests.

The "original" audio is a music-like bed: a handful of sinusoids with slow
amplitude envelopes, so its magnitude spectrogram is stable under sub-frame
misalignment but decorrelates over seconds (like real mixing offsets do).
The "mixed" track is the original delayed by a global offset with narration
bursts added at known positions.
"""

from __future__ import annotations

import json

import numpy as np

from moviedesc.audio_io import AudioTrack

RATE = 16000
OFFSET_S = 1.5

# burst positions in ORIGINAL-track seconds; mixed-track truth adds OFFSET_S.
# the first burst is placed to overlap the first script description's
# fallback interval, so the IoU pairing step has work to do
BURSTS_8 = (
    (6.8, 10.2),
    (22.5, 24.0),
    (37.0, 39.5),
    (55.0, 56.2),
    (80.0, 83.0),
    (102.0, 103.5),
    (128.0, 130.8),
    (150.0, 151.6),
)


def make_original(duration_s: float, seed: int = 1234) -> AudioTrack:
    rng = np.random.default_rng(seed)
    n = int(duration_s * RATE)
    t = np.arange(n) / RATE
    samples = np.zeros(n)
    for freq, base in ((110, 0.09), (220, 0.07), (330, 0.05), (523, 0.04), (740, 0.03)):
        envelope_hz = rng.uniform(0.08, 0.4)
        phase = rng.uniform(0, 2 * np.pi)
        envelope = np.clip(0.6 + 0.4 * np.sin(2 * np.pi * envelope_hz * t + phase), 0, None)
        samples += base * envelope * np.sin(2 * np.pi * freq * t + rng.uniform(0, 2 * np.pi))
    return AudioTrack(samples, RATE)


def narration(t: np.ndarray, seed: int) -> np.ndarray:
    """Speech stand-in: amplitude-modulated band around 200-600 Hz."""
    rng = np.random.default_rng(seed)
    voice = np.zeros_like(t)
    for freq in (190, 280, 410, 560):
        voice += np.sin(2 * np.pi * freq * t + rng.uniform(0, 2 * np.pi))
    syllables = 0.55 + 0.45 * np.sin(2 * np.pi * 3.1 * t + rng.uniform(0, 2 * np.pi))
    return 0.22 * syllables * voice / 4


def make_mixed(
    original: AudioTrack,
    bursts=BURSTS_8,
    offset_s: float = OFFSET_S,
    noise: float = 0.001,
    seed: int = 99,
) -> tuple[AudioTrack, list[tuple[float, float]]]:
    """Original delayed by offset_s plus narration bursts; returns mixed truth."""
    rng = np.random.default_rng(seed)
    n = len(original.samples)
    shift = int(round(offset_s * RATE))
    mixed = np.zeros(n)
    if shift >= 0:
        mixed[shift:] = original.samples[: n - shift]
    else:
        mixed[: n + shift] = original.samples[-shift:]
    t = np.arange(n) / RATE
    truth = []
    for k, (start, end) in enumerate(bursts):
        start_m, end_m = start + offset_s, end + offset_s
        mask = (t >= start_m) & (t < end_m)
        mixed[mask] += narration(t[mask], seed=seed + k)
        truth.append((start_m, end_m))
    mixed += noise * rng.normal(size=n)
    return AudioTrack(np.clip(mixed, -1, 1), RATE), truth


# --- text side of the fixture movie -------------------------------------------

SCRIPT_TEXT = """\
INT. FARMHOUSE KITCHEN - DAY

Abby carries a basket to the table. She opens the window.

                         ABBY
            Good morning. Did you sleep well
            in the old house?

                         MIKE
            Better than ever. The kitchen smells
            wonderful this morning.

Abby smiles. She puts the basket on the table.

                         ABBY
            Help me carry this basket into the
            garden before the rain starts.

EXT. FARMHOUSE GARDEN - DAY

Mike follows Abby into the garden. He holds the gate.

                         MIKE
            Careful with the gate. The hinge is
            broken again.

                         ABBY
            Then fix it after breakfast, before
            the market opens.

They walk along the path. Abby drops the basket.

                         MIKE
            Leave it. I will take the basket to
            the porch later.

Abby laughs. She kisses Mike.
"""

SRT_TEXT = """\
1
00:00:12,000 --> 00:00:15,500
Good morning. Did you sleep well
in the old house?

2
00:00:16,000 --> 00:00:19,800
Better than ever. The kitchen smells
wonderful this morning.

3
00:00:31,000 --> 00:00:35,200
Help me carry this basket into the
garden before the rain starts.

4
00:00:48,000 --> 00:00:52,000
Careful with the gate. The hinge is
broken again.

5
00:00:54,000 --> 00:00:58,000
Then fix it after breakfast, before
the market opens.

6
00:01:10,000 --> 00:01:13,800
Leave it. I will take the basket to
the porch later.
"""

# DVS-style sentences as a transcription service would return them, one per
# narration burst (mixed-track times)
DVS_SENTENCES = [
    "Abby carries a basket into the kitchen.",
    "She opens the window.",
    "Abby puts the basket on the table.",
    "Mike follows Abby into the garden.",
    "He holds the gate.",
    "They walk along the path.",
    "Abby drops the basket.",
    "She kisses Mike.",
]

CHARACTER_NAMES = ["Abby", "Mike"]


def dvs_records(truth: list[tuple[float, float]]) -> list[dict]:
    assert len(truth) >= len(DVS_SENTENCES)
    return [
        {"sentence": s, "start_s": round(a, 3), "end_s": round(b, 3)}
        for s, (a, b) in zip(DVS_SENTENCES, truth)
    ]


def write_jsonl(path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
