"""Script-to-subtitle alignment.

Dialogue words from the script are matched against subtitle words with a
longest-common-subsequence dynamic program. Matched dialogue blocks become
time anchors; description sentences between anchors get their interval by
linear interpolation of character offsets, and a reliability score equal to
the ratio of matched words in the surrounding dialogue blocks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .intervals import TimeInterval
from .screenplay import DESCRIPTION, DIALOGUE, ScriptElement
from .srt import SubtitleEntry

# mean clip length of aligned script sentences; used when a description has
# a matched dialogue anchor on one side only
FALLBACK_DURATION_S = 3.4

RELIABLE_SCORE = 0.5


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class WordMatch:
    script_token_index: int
    subtitle_token_index: int


@dataclass(frozen=True)
class ScoredSentence:
    text: str
    interval: TimeInterval
    score: float
    source: str = "script"
    fallback: bool = False  # interval came from the one-sided fallback rule

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")


_TOKEN = re.compile(r"[a-z0-9']+")


def normalize_tokens(text: str) -> list[str]:
    """Lowercase word tokens, punctuation stripped, numerals kept."""
    return [t.strip("'") for t in _TOKEN.findall(text.lower()) if t.strip("'")]


def _lcs_table(a: list[str], b: list[str]) -> np.ndarray:
    """Suffix LCS lengths: table[i, j] = LCS(a[i:], b[j:])."""
    n, m = len(a), len(b)
    b_arr = np.array(b, dtype=object) if m else np.empty(0, dtype=object)
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(n - 1, -1, -1):
        match = np.where(b_arr == a[i], table[i + 1, 1:] + 1, 0).astype(np.int32)
        row = np.maximum(match, table[i + 1, :m])
        table[i, :m] = np.maximum.accumulate(row[::-1])[::-1]
    return table


def align_dialogue_dp(script_tokens: list[str], subtitle_tokens: list[str]) -> list[WordMatch]:
    """Maximum-cardinality order-preserving matching of equal tokens.

    Among maximum matchings, takes the one using the earliest subtitle
    indices: the traversal prefers skipping a script token over skipping a
    subtitle token whenever both preserve optimality.
    """
    a, b = script_tokens, subtitle_tokens
    table = _lcs_table(a, b)
    matches: list[WordMatch] = []
    i = j = 0
    while i < len(a) and j < len(b) and table[i, j] > 0:
        if a[i] == b[j] and table[i, j] == table[i + 1, j + 1] + 1:
            matches.append(WordMatch(i, j))
            i += 1
            j += 1
        elif table[i + 1, j] == table[i, j]:
            i += 1
        else:
            j += 1
    return matches


@dataclass
class _DialogueBlock:
    element_ordinal: int
    tokens: list[str]
    token_offset: int  # position of first token in the concatenated stream
    char_start: float
    char_end: float
    matched: int = 0
    start_time: float | None = None
    end_time: float | None = None

    @property
    def anchored(self) -> bool:
        return self.matched > 0 and self.start_time is not None


@dataclass
class ScriptAlignment:
    """Joint view of a parsed script and subtitles after DP word matching."""

    elements: list[ScriptElement]
    subtitles: list[SubtitleEntry]
    matches: list[WordMatch] = field(default_factory=list)
    blocks: list[_DialogueBlock] = field(default_factory=list)
    char_spans: dict[int, tuple[float, float]] = field(default_factory=dict)


def build_alignment(elements: list[ScriptElement], subtitles: list[SubtitleEntry]) -> ScriptAlignment:
    # cumulative character offsets over element texts stand in for script
    # position; robust to the original file's wrapping
    char_spans: dict[int, tuple[float, float]] = {}
    offset = 0
    for el in elements:
        char_spans[el.ordinal] = (float(offset), float(offset + len(el.text)))
        offset += len(el.text) + 1

    blocks: list[_DialogueBlock] = []
    script_tokens: list[str] = []
    token_block: list[int] = []
    for el in elements:
        if el.kind != DIALOGUE:
            continue
        tokens = normalize_tokens(el.text)
        if not tokens:
            continue
        block = _DialogueBlock(
            element_ordinal=el.ordinal,
            tokens=tokens,
            token_offset=len(script_tokens),
            char_start=char_spans[el.ordinal][0],
            char_end=char_spans[el.ordinal][1],
        )
        blocks.append(block)
        token_block.extend([len(blocks) - 1] * len(tokens))
        script_tokens.extend(tokens)

    subtitle_tokens: list[str] = []
    token_entry: list[int] = []
    for k, entry in enumerate(subtitles):
        tokens = normalize_tokens(entry.text)
        token_entry.extend([k] * len(tokens))
        subtitle_tokens.extend(tokens)

    matches = align_dialogue_dp(script_tokens, subtitle_tokens)
    for m in matches:
        block = blocks[token_block[m.script_token_index]]
        entry = subtitles[token_entry[m.subtitle_token_index]]
        block.matched += 1
        if block.start_time is None or entry.interval.start_s < block.start_time:
            block.start_time = entry.interval.start_s
        if block.end_time is None or entry.interval.end_s > block.end_time:
            block.end_time = entry.interval.end_s

    return ScriptAlignment(elements=elements, subtitles=subtitles, matches=matches, blocks=blocks, char_spans=char_spans)


def infer_interval(
    desc_span: tuple[float, float],
    anchor_before: tuple[float, float],
    anchor_after: tuple[float, float],
) -> TimeInterval:
    """Interpolate a description's interval from its character offsets.

    Anchors are (script character position, time): the end time of the
    preceding matched dialogue and the start time of the following one.
    """
    (b_pos, b_time), (a_pos, a_time) = anchor_before, anchor_after
    if not b_time < a_time:
        raise AlignmentError(f"anchor times not increasing: {b_time} >= {a_time}")
    if not b_pos <= desc_span[0] <= desc_span[1] <= a_pos:
        raise AlignmentError("description does not lie between its anchors")
    span = a_pos - b_pos
    scale = (a_time - b_time) / span if span > 0 else 0.0
    start = b_time + (desc_span[0] - b_pos) * scale
    end = b_time + (desc_span[1] - b_pos) * scale
    if end <= start:  # zero-length description span; keep non-degenerate
        end = start + 1e-3
    return TimeInterval(max(start, 0.0), end)


def score_descriptions(
    elements: list[ScriptElement],
    alignment: ScriptAlignment,
    window: int = 2,
) -> list[ScoredSentence]:
    """Score each description by the matched-word ratio of near-by dialogue.

    The ratio is taken over the `window` dialogue blocks before and after the
    sentence; descriptions with no dialogue in range score 0. Intervals come
    from infer_interval between the nearest matched blocks, falling back to a
    3.4 s slot next to the single available anchor at script boundaries.
    """
    blocks = alignment.blocks
    anchored = [b for b in blocks if b.anchored]
    if not anchored:
        raise AlignmentError("unalignable script: no dialogue words matched any subtitle")

    block_by_ordinal: list[int] = []  # count of blocks with ordinal < element ordinal
    count = 0
    block_iter = iter(blocks)
    next_block = next(block_iter, None)
    for el in elements:
        while next_block is not None and next_block.element_ordinal < el.ordinal:
            count += 1
            next_block = next(block_iter, None)
        block_by_ordinal.append(count)

    descs = []  # (element, score, prev_anchor, next_anchor)
    for el in elements:
        if el.kind != DESCRIPTION:
            continue
        n_before = block_by_ordinal[el.ordinal]
        near = blocks[max(0, n_before - window) : n_before] + blocks[n_before : n_before + window]
        total = sum(len(b.tokens) for b in near)
        matched = sum(b.matched for b in near)
        score = matched / total if total else 0.0
        prev_anchor = next((b for b in reversed(blocks[:n_before]) if b.anchored), None)
        next_anchor = next((b for b in blocks[n_before:] if b.anchored), None)
        descs.append((el, score, prev_anchor, next_anchor))

    # boundary descriptions line up in 3.4 s slots next to the lone anchor,
    # keeping script order: the one nearest the anchor abuts it
    n_head = sum(1 for _, _, prev, _ in descs if prev is None)

    results: list[ScoredSentence] = []
    head_seen = 0
    tail_seen = 0
    for el, score, prev_anchor, next_anchor in descs:
        span = alignment.char_spans[el.ordinal]
        fallback = False
        if prev_anchor is not None and next_anchor is not None:
            interval = infer_interval(
                span,
                (prev_anchor.char_end, prev_anchor.end_time),
                (next_anchor.char_start, next_anchor.start_time),
            )
        elif next_anchor is not None:  # before the first anchored dialogue
            head_seen += 1
            end = next_anchor.start_time - (n_head - head_seen) * FALLBACK_DURATION_S
            end = max(end, 0.02 * FALLBACK_DURATION_S)
            interval = TimeInterval(max(end - FALLBACK_DURATION_S, 0.0), end)
            fallback = True
        else:  # after the last anchored dialogue
            tail_seen += 1
            start = prev_anchor.end_time + (tail_seen - 1) * FALLBACK_DURATION_S
            interval = TimeInterval(start, start + FALLBACK_DURATION_S)
            fallback = True
        results.append(
            ScoredSentence(text=el.text, interval=interval, score=score, fallback=fallback)
        )
    return results


def filter_reliable(sentences: list[ScoredSentence], min_score: float = RELIABLE_SCORE) -> list[ScoredSentence]:
    return [s for s in sentences if s.score >= min_score]


def align_script(
    elements: list[ScriptElement],
    subtitles: list[SubtitleEntry],
    window: int = 2,
) -> list[ScoredSentence]:
    """Parse-to-scored-sentences convenience wrapper (no reliability filter)."""
    alignment = build_alignment(elements, subtitles)
    return score_descriptions(elements, alignment, window=window)
