"""Movie script parsing by layout heuristics.

Screenplays in the common "Final Draft" layout put action at the left margin,
dialogue indented, and character cues further indented in capitals. Plenty of
scripts found on the web deviate (everything flush left, tabs, re-wrapped
prose), so indentation thresholds are estimated per file and can be
overridden with an explicit ScriptFormat.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

SCENE_HEADING = "scene_heading"
CHARACTER_CUE = "character_cue"
DIALOGUE = "dialogue"
DESCRIPTION = "description"


@dataclass(frozen=True)
class ScriptElement:
    kind: str
    text: str
    ordinal: int


@dataclass(frozen=True)
class ScriptFormat:
    """Explicit layout thresholds; use detect_format() to estimate them."""

    cue_indent_min: int
    dialogue_indent_min: int
    flat: bool = False  # no reliable indentation; fall back to line-shape rules


_SCENE_PREFIX = re.compile(r"^(INT\.?/EXT\.?|EXT\.?/INT\.?|INT|EXT|I/E)[\s.]", re.IGNORECASE)
_CUE_NOISE = re.compile(r"\((V\.O\.|O\.S\.|CONT'D|O\.C\.)\)\s*$", re.IGNORECASE)
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


def _indent(line: str) -> int:
    expanded = line.expandtabs(4)
    return len(expanded) - len(expanded.lstrip(" "))


def _is_scene_heading(stripped: str) -> bool:
    return bool(_SCENE_PREFIX.match(stripped)) and stripped == stripped.upper()


def _is_cue_shaped(stripped: str) -> bool:
    if not stripped or len(stripped) > 40:
        return False
    if _is_scene_heading(stripped):
        return False
    body = _CUE_NOISE.sub("", stripped).strip()
    if not body or body.endswith((".", "!", "?", ":")):
        return False
    return body == body.upper() and any(c.isalpha() for c in body)


def detect_format(text: str) -> ScriptFormat:
    """Estimate indentation thresholds from the file's own layout.

    Cue-shaped lines mark dialogue regions (until a blank line); the action
    margin is the most common indent of the remaining prose. Scripts whose
    cues sit at the action margin are treated as flat.
    """
    cue_indents: Counter = Counter()
    action_indents: Counter = Counter()
    in_dialogue = False
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped:
            in_dialogue = False
            continue
        if _is_scene_heading(stripped):
            in_dialogue = False
            continue
        if _is_cue_shaped(stripped):
            cue_indents[_indent(raw)] += 1
            in_dialogue = True
            continue
        if not in_dialogue:
            action_indents[_indent(raw)] += 1
    if not cue_indents:
        return ScriptFormat(cue_indent_min=0, dialogue_indent_min=0, flat=True)
    cue_mode = cue_indents.most_common(1)[0][0]
    if not action_indents:
        return ScriptFormat(cue_indent_min=max(cue_mode - 2, 0), dialogue_indent_min=0)
    action_mode = action_indents.most_common(1)[0][0]
    if cue_mode <= action_mode:
        return ScriptFormat(cue_indent_min=0, dialogue_indent_min=0, flat=True)
    return ScriptFormat(cue_indent_min=cue_mode - 2, dialogue_indent_min=action_mode + 1)


def _split_sentences(prose: str) -> list[str]:
    parts = [p.strip() for p in _SENTENCE_SPLIT.split(prose.strip())]
    return [p for p in parts if p]


def parse_script(text: str, fmt: ScriptFormat | None = None) -> list[ScriptElement]:
    """Classify lines into scene headings, cues, dialogue and descriptions.

    Consecutive description lines are merged and re-split into sentences, so
    each description element carries exactly one sentence. Unclassifiable
    lines fall through to description.
    """
    if fmt is None:
        fmt = detect_format(text)

    elements: list[ScriptElement] = []
    desc_buffer: list[str] = []
    dialogue_buffer: list[str] = []
    in_dialogue = False

    def flush_description():
        if desc_buffer:
            prose = " ".join(desc_buffer)
            for sentence in _split_sentences(prose):
                elements.append(ScriptElement(DESCRIPTION, sentence, len(elements)))
            desc_buffer.clear()

    def flush_dialogue():
        nonlocal in_dialogue
        if dialogue_buffer:
            elements.append(ScriptElement(DIALOGUE, " ".join(dialogue_buffer), len(elements)))
            dialogue_buffer.clear()
        in_dialogue = False

    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped:
            flush_dialogue()
            continue
        indent = _indent(raw)

        if _is_scene_heading(stripped):
            flush_dialogue()
            flush_description()
            elements.append(ScriptElement(SCENE_HEADING, stripped, len(elements)))
            continue

        is_cue = _is_cue_shaped(stripped) and (fmt.flat or indent >= fmt.cue_indent_min)
        if is_cue:
            flush_dialogue()
            flush_description()
            elements.append(ScriptElement(CHARACTER_CUE, stripped, len(elements)))
            in_dialogue = True
            continue

        if in_dialogue and (fmt.flat or indent >= fmt.dialogue_indent_min):
            if stripped.startswith("(") and stripped.endswith(")"):
                continue  # parenthetical stage direction inside dialogue
            dialogue_buffer.append(stripped)
            continue

        flush_dialogue()
        desc_buffer.append(stripped)

    flush_dialogue()
    flush_description()
    return elements
