"""SubRip (.srt) parsing and serialization.

Accepts UTF-8 with optional BOM, LF or CRLF line endings, and strips inline
formatting tags. Output entries are renumbered sequentially and overlapping
cue intervals are clamped so the parsed list is strictly non-overlapping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .intervals import TimeInterval


class SrtParseError(ValueError):
    pass


@dataclass(frozen=True)
class SubtitleEntry:
    index: int
    interval: TimeInterval
    text: str


_TIMESTAMP = re.compile(r"(\d{1,2}):(\d{2}):(\d{2})[,.](\d{1,3})")
_TIMING_LINE = re.compile(
    r"^\s*(\d{1,2}:\d{2}:\d{2}[,.]\d{1,3})\s*-->\s*(\d{1,2}:\d{2}:\d{2}[,.]\d{1,3})"
)
_TAG = re.compile(r"</?[a-zA-Z][^>]*>|\{\\?[^}]*\}")


def _parse_timestamp(text: str) -> float:
    m = _TIMESTAMP.fullmatch(text.strip())
    if m is None:
        raise SrtParseError(f"malformed timestamp {text!r}")
    h, mi, s, ms = m.groups()
    return int(h) * 3600 + int(mi) * 60 + int(s) + int(ms.ljust(3, "0")) / 1000.0


def _strip_tags(text: str) -> str:
    return _TAG.sub("", text)


def parse_srt(text: str) -> list[SubtitleEntry]:
    if text.startswith("﻿"):
        text = text[1:]
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    blocks = [b for b in re.split(r"\n\s*\n", text) if b.strip()]

    entries: list[SubtitleEntry] = []
    prev_end = 0.0
    for block_no, block in enumerate(blocks, start=1):
        lines = [ln for ln in block.split("\n") if ln.strip()]
        if lines and re.fullmatch(r"\s*\d+\s*", lines[0]):
            lines = lines[1:]
        if not lines:
            continue
        m = _TIMING_LINE.match(lines[0])
        if m is None:
            raise SrtParseError(f"block {block_no}: expected timing line, got {lines[0]!r}")
        try:
            start = _parse_timestamp(m.group(1))
            end = _parse_timestamp(m.group(2))
        except SrtParseError as exc:
            raise SrtParseError(f"block {block_no}: {exc}") from None
        if end <= start:
            raise SrtParseError(f"block {block_no}: end {end} not after start {start}")
        body = _strip_tags("\n".join(lines[1:])).strip()
        # normalization: clamp cues that bleed into the previous one
        start = max(start, prev_end)
        if start >= end:
            continue
        prev_end = end
        entries.append(
            SubtitleEntry(
                index=len(entries) + 1,
                interval=TimeInterval(start, end),
                text=body,
            )
        )
    return entries


def _format_timestamp(seconds: float) -> str:
    ms = int(round(seconds * 1000))
    h, rem = divmod(ms, 3_600_000)
    mi, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{mi:02d}:{s:02d},{ms:03d}"


def serialize_srt(entries: list[SubtitleEntry]) -> str:
    blocks = []
    for entry in entries:
        blocks.append(
            f"{entry.index}\n"
            f"{_format_timestamp(entry.interval.start_s)} --> "
            f"{_format_timestamp(entry.interval.end_s)}\n"
            f"{entry.text}\n"
        )
    return "\n".join(blocks)
