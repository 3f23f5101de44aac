"""Tuple-to-sentence generation and parallel-corpus export.

The template generator is the runnable stand-in for a phrase-based
translation system: it memorizes training sentences per exact tuple, learns
slot templates per filled-slot signature, and backs off by dropping the
location, then the object, down to "Someone <verb>s.". The export side
writes the line-aligned source/target files a real SMT toolkit would train
on.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field

from .ioutil import atomic_write_text
from .semparse import LOCATION, OBJECT, SRTuple, SUBJECT, VERB

SLOT_ORDER = (SUBJECT, VERB, OBJECT, LOCATION)

_TOKEN = re.compile(r"[a-z0-9'#-]+|[.,!?;:]")


def tokenize_sentence(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def _label_tokens(label: str) -> list[str]:
    return label.replace("_", " ").split()


def _strip_sense(label: str) -> str:
    return label.partition("#")[0]


def _find_span(tokens: list[str], target: list[str]) -> tuple[int, int] | None:
    for i in range(len(tokens) - len(target) + 1):
        if tokens[i : i + len(target)] == target:
            return i, i + len(target)
    return None


def _verb_forms(lemma: str) -> list[str]:
    forms = [lemma, third_person(lemma), lemma + "ed", lemma + "ing", lemma + "d"]
    if lemma.endswith("e"):
        forms += [lemma[:-1] + "ing"]
    return forms


def third_person(lemma: str) -> str:
    if re.search(r"(s|x|z|ch|sh|o)$", lemma):
        return lemma + "es"
    if re.search(r"[^aeiou]y$", lemma):
        return lemma[:-1] + "ies"
    return lemma + "s"


def _signature(sr: SRTuple) -> tuple[str, ...]:
    return tuple(slot for slot in SLOT_ORDER if getattr(sr, slot) is not None)


def _template_from_pair(sr: SRTuple, sentence: str) -> list[str]:
    """Replace slot label occurrences in the sentence with {slot} holes."""
    tokens = tokenize_sentence(sentence)
    for slot in SLOT_ORDER:
        label = getattr(sr, slot)
        if label is None:
            continue
        base = _strip_sense(label)
        candidates = [_label_tokens(base)]
        if slot == VERB:
            candidates = [[form] for form in _verb_forms(base)]
        for cand in candidates:
            span = _find_span(tokens, cand)
            if span is not None:
                tokens[span[0] : span[1]] = ["{%s}" % slot]
                break
    return tokens


@dataclass
class TemplateBank:
    exact: dict[tuple, Counter] = field(default_factory=dict)
    by_signature: dict[tuple[str, ...], Counter] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return sum(sum(c.values()) for c in self.exact.values())


def _tuple_key(sr: SRTuple) -> tuple:
    return (sr.subject, sr.verb, sr.object, sr.location)


def fit_template_bank(pairs: list[tuple[SRTuple, str]]) -> TemplateBank:
    if not pairs:
        raise ValueError("cannot fit a template bank on no pairs")
    bank = TemplateBank()
    for sr, sentence in pairs:
        bank.exact.setdefault(_tuple_key(sr), Counter())[sentence.strip()] += 1
        template = tuple(_template_from_pair(sr, sentence))
        bank.by_signature.setdefault(_signature(sr), Counter())[template] += 1
    return bank


def _most_common(counter: Counter):
    return min(counter.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def _render(tokens: list[str]) -> str:
    text = " ".join(tokens)
    text = re.sub(r"\s+([.,!?;:])", r"\1", text)
    text = text[:1].upper() + text[1:]
    if not re.search(r"[.!?]$", text):
        text += "."
    return text


def generate_sentence(sr: SRTuple, bank: TemplateBank) -> str:
    """Most frequent exact sentence, else slot templates with backoff."""
    if not bank.exact:
        raise ValueError("empty template bank")
    exact = bank.exact.get(_tuple_key(sr))
    if exact:
        return _most_common(exact)

    attempt = sr
    while True:
        templates = bank.by_signature.get(_signature(attempt))
        if templates:
            tokens = list(_most_common(templates))
            filled = [
                _fill(token, attempt) if token.startswith("{") else token for token in tokens
            ]
            return _render(filled)
        if attempt.location is not None:
            attempt = SRTuple(
                verb=attempt.verb, subject=attempt.subject, object=attempt.object,
                location=None, mode=attempt.mode,
            )
        elif attempt.object is not None:
            attempt = SRTuple(
                verb=attempt.verb, subject=attempt.subject, object=None,
                location=None, mode=attempt.mode,
            )
        else:
            break
    return f"Someone {third_person(_strip_sense(sr.verb))}."


def _fill(hole: str, sr: SRTuple) -> str:
    slot = hole.strip("{}")
    label = getattr(sr, slot)
    if label is None:
        return hole
    base = _strip_sense(label).replace("_", " ")
    return third_person(base) if slot == VERB else base


def smt_source_line(sr: SRTuple) -> str:
    """Non-empty slot labels in subject-verb-object-location order.

    Multiword labels are joined with underscores so each slot is one token.
    """
    parts = []
    for slot in SLOT_ORDER:
        label = getattr(sr, slot)
        if label is not None:
            parts.append(label.replace(" ", "_"))
    return " ".join(parts)


def export_smt_parallel(pairs: list[tuple[SRTuple, str]], out_src, out_tgt) -> int:
    """Write line-aligned source (tuples) and target (tokenized sentences)."""
    if not pairs:
        raise ValueError("no pairs to export")
    src_lines = [smt_source_line(sr) for sr, _ in pairs]
    tgt_lines = [" ".join(tokenize_sentence(sentence)) for _, sentence in pairs]
    for path, lines in ((out_src, src_lines), (out_tgt, tgt_lines)):
        try:
            atomic_write_text(path, "\n".join(lines) + "\n")
        except OSError as exc:
            raise OSError(f"failed writing {path}: {exc}") from exc
    return len(pairs)


def read_smt_parallel(src_path, tgt_path) -> list[tuple[list[str], list[str]]]:
    with open(src_path, encoding="utf-8") as fh:
        src = [line.split() for line in fh.read().splitlines()]
    with open(tgt_path, encoding="utf-8") as fh:
        tgt = [line.split() for line in fh.read().splitlines()]
    if len(src) != len(tgt):
        raise ValueError(f"line counts differ: {len(src)} vs {len(tgt)}")
    return list(zip(src, tgt))


def save_template_bank(bank: TemplateBank, path) -> None:
    payload = {
        "exact": [
            {"tuple": list(key), "sentences": sorted(counter.items())}
            for key, counter in sorted(bank.exact.items(), key=lambda kv: str(kv[0]))
        ],
        "by_signature": [
            {"signature": list(sig), "templates": sorted((list(t), n) for t, n in counter.items())}
            for sig, counter in sorted(bank.by_signature.items())
        ],
    }
    atomic_write_text(
        path,
        json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n",
    )


def load_template_bank(path) -> TemplateBank:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    bank = TemplateBank()
    for item in payload["exact"]:
        bank.exact[tuple(item["tuple"])] = Counter(dict(
            (sentence, n) for sentence, n in item["sentences"]
        ))
    for item in payload["by_signature"]:
        bank.by_signature[tuple(item["signature"])] = Counter(dict(
            (tuple(t), n) for t, n in item["templates"]
        ))
    return bank
