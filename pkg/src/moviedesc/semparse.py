"""Shallow semantic parsing of description sentences.

Sentences are split into clauses at verb coordination, chunked into NP/VP/PP
phrases by a deterministic grammar over part-of-speech tags, and lifted to
(SUBJECT, VERB, OBJECT, LOCATION) tuples by matching verb frames whose
selectional restrictions are checked against a noun-property lexicon. The
tagger and the word-sense disambiguator are pluggable; defaults come from
the bundled lexicon.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .lexicon import Lexicon, Sense, VerbFrame, builtin_lexicon

SUBJECT, VERB, OBJECT, LOCATION = "subject", "verb", "object", "location"

# VerbNet-style roles grouped onto the four output slots; anything else drops
ROLE_GROUPS = {
    "Agent": SUBJECT,
    "Experiencer": SUBJECT,
    "Action": VERB,
    "Patient": OBJECT,
    "Theme": OBJECT,
    "Stimulus": OBJECT,
    "Location": LOCATION,
    "Destination": LOCATION,
    "Source": LOCATION,
}

_WORD = re.compile(r"[a-zA-Z][a-zA-Z'-]*|\d+")
_CONJ = frozenset({"and", "or"})


@dataclass(frozen=True)
class Clause:
    tokens: tuple[str, ...]
    source_sentence: str

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("clause must contain at least one token")

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class Chunk:
    kind: str  # NP | VP | PP
    tokens: tuple[str, ...]
    head: int

    def __post_init__(self):
        if not 0 <= self.head < len(self.tokens):
            raise ValueError("head index outside chunk")

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class RoleAssignment:
    bindings: dict[str, tuple[Chunk, Sense]]
    frame: VerbFrame

    def __post_init__(self):
        if not self.bindings:
            raise ValueError("empty role assignment")


@dataclass(frozen=True)
class SRTuple:
    verb: str
    subject: str | None = None
    object: str | None = None
    location: str | None = None
    mode: str = "sense"

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "verb": self.verb,
            "object": self.object,
            "location": self.location,
            "mode": self.mode,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SRTuple":
        return cls(
            verb=d["verb"],
            subject=d.get("subject"),
            object=d.get("object"),
            location=d.get("location"),
            mode=d.get("mode", "sense"),
        )


class LexiconTagger:
    """Word-list part-of-speech provider; unknown words default to noun."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon

    def tag(self, word: str) -> str:
        w = word.lower()
        lex = self.lexicon
        if w in lex.words_for_tag("det"):
            return "det"
        if w in lex.words_for_tag("pron"):
            return "pron"
        if w in lex.words_for_tag("prep"):
            return "prep"
        if w in lex.words_for_tag("part"):
            return "part"
        if w in lex.words_for_tag("aux") or lex.lemmas.get(w) in lex.words_for_tag("aux"):
            return "aux"
        if w in lex.words_for_tag("adj"):
            return "adj"
        if lex.is_verb(w) and w not in lex.noun_properties:
            return "verb"
        if w in lex.noun_properties:
            return "noun"
        if w in lex.words_for_tag("particle"):
            return "particle"
        if lex.is_verb(w):
            return "verb"
        return "noun"


def tokenize_words(sentence: str) -> list[str]:
    return [w.lower() for w in _WORD.findall(sentence)]


def split_clauses(sentence: str, lexicon: Lexicon | None = None) -> list[Clause]:
    """One clause per coordinated verb, with the subject copied into each.

    Coordinated verbs that share a continuation borrow it from the last
    conjunct, so "he shot and modified the video" yields "he shot the video"
    and "he modified the video". Sentences without verb coordination come
    back as a single clause.
    """
    if not sentence.strip():
        raise ValueError("empty sentence")
    lexicon = lexicon or builtin_lexicon()
    tagger = LexiconTagger(lexicon)
    tokens = tokenize_words(sentence)
    if not tokens:
        raise ValueError(f"no word tokens in {sentence!r}")
    tags = [tagger.tag(t) for t in tokens]

    # split points: conjunctions directly followed by a verb
    cut_points = [
        i
        for i in range(1, len(tokens) - 1)
        if tokens[i] in _CONJ and tags[i + 1] == "verb"
    ]
    if not cut_points:
        return [Clause(tuple(tokens), sentence)]

    segments: list[list[str]] = []
    seg_tags: list[list[str]] = []
    prev = 0
    for cut in cut_points:
        segments.append(tokens[prev:cut])
        seg_tags.append(tags[prev:cut])
        prev = cut + 1
    segments.append(tokens[prev:])
    seg_tags.append(tags[prev:])

    first_verb = next((i for i, t in enumerate(seg_tags[0]) if t == "verb"), None)
    if first_verb is None:
        return [Clause(tuple(tokens), sentence)]
    subject = segments[0][:first_verb]

    def after_verb(seg: list[str], tags_: list[str]) -> list[str]:
        last = max((i for i, t in enumerate(tags_) if t in ("verb", "particle")), default=-1)
        return seg[last + 1 :]

    # a direct object after the last conjunct is shared ("shot and modified
    # the video"); a PP complement is not ("stops and stares at the wall")
    shared_tail = after_verb(segments[-1], seg_tags[-1])
    if shared_tail and tagger.tag(shared_tail[0]) in ("prep", "part"):
        shared_tail = []
    clauses = []
    for k, (seg, tags_) in enumerate(zip(segments, seg_tags)):
        body = seg if k == 0 else subject + seg
        if k < len(segments) - 1 and not after_verb(seg, tags_):
            body = body + shared_tail
        clauses.append(Clause(tuple(body), sentence))
    return clauses


def chunk_clause(clause: Clause, tagger=None) -> list[Chunk]:
    """Maximal NP/VP/PP chunks over tags.

    NPs take determiners, adjectives and nouns; VPs take auxiliaries and the
    infinitive marker up to the main verb plus a trailing particle; a
    preposition becomes a one-token PP marker for the NP that follows it.
    """
    tagger = tagger or LexiconTagger(builtin_lexicon())
    tokens = list(clause.tokens)
    tags = [tagger.tag(t) for t in tokens]
    chunks: list[Chunk] = []
    n = len(tokens)
    i = 0
    while i < n:
        tag = tags[i]
        if tag == "particle" and i + 1 < n and tags[i + 1] in ("det", "adj", "noun", "pron"):
            tag = tags[i] = "prep"  # "down the street": particle word used as preposition
        if tag == "prep":
            chunks.append(Chunk("PP", (tokens[i],), 0))
            i += 1
        elif tag in ("aux", "verb", "part"):
            start = i
            verb_positions = []
            while i < n:
                t = tags[i]
                if t == "verb":
                    verb_positions.append(i)
                    i += 1
                elif t in ("aux", "part") and not verb_positions:
                    i += 1
                elif t == "particle" and verb_positions:
                    if i + 1 < n and tags[i + 1] in ("det", "adj", "noun", "pron"):
                        break  # preposition-like use, leave for a PP
                    i += 1
                    break
                else:
                    break
            head = (verb_positions[-1] if verb_positions else i - 1) - start
            chunks.append(Chunk("VP", tuple(tokens[start:i]), head))
        elif tag in ("det", "adj", "noun", "pron"):
            start = i
            i += 1
            while i < n:
                t = tags[i]
                if t in ("det", "adj", "noun", "pron"):
                    i += 1
                elif t == "verb" and tags[i - 1] in ("det", "adj"):
                    tags[i] = "noun"  # "the run": verb form in noun position
                    i += 1
                else:
                    break
            noun_positions = [k for k in range(start, i) if tags[k] in ("noun", "pron")]
            head = (noun_positions[-1] if noun_positions else i - 1) - start
            chunks.append(Chunk("NP", tuple(tokens[start:i]), head))
        else:
            chunks.append(Chunk("NP", (tokens[i],), 0))
            i += 1
    return chunks


def head_word(chunk: Chunk) -> str:
    """NP: rightmost noun; VP: the main verb past any auxiliaries."""
    return chunk.tokens[chunk.head]


def most_frequent_sense(lemma, pos, senses, context_tokens):
    return senses[0].sense_number if senses else 1


class CueDisambiguator:
    """Picks the first sense whose cue words appear in the clause."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon

    def __call__(self, lemma, pos, senses, context_tokens):
        context = set(context_tokens)
        for sense in senses:
            cues = self.lexicon.cues.get((lemma, sense.sense_number), frozenset())
            if cues & context:
                return sense.sense_number
        return most_frequent_sense(lemma, pos, senses, context_tokens)


def disambiguate(head: str, pos: str, context: Clause, lexicon: Lexicon, wsd=None) -> Sense:
    """Resolve a head word to a sense; unknown heads get #1 with a flag."""
    lemma = lexicon.verb_lemma(head) if pos == "verb" else lexicon.noun_lemma(head)
    senses = lexicon.senses_of(lemma, pos)
    if not senses:
        return Sense(lemma, pos, 1, out_of_lexicon=True)
    chooser = wsd or most_frequent_sense
    number = chooser(lemma, pos, senses, context.tokens)
    if number not in {s.sense_number for s in senses}:
        number = senses[0].sense_number
    return Sense(lemma, pos, number)


def _match_pattern(
    pattern: tuple[str, ...], chunks: list[Chunk]
) -> tuple[list[tuple[int, Chunk]], Chunk] | None:
    """Bind NP-ish pattern slots to chunks; None when shapes don't line up.

    NP.Location consumes either a bare NP or a PP marker plus its NP. The
    whole chunk sequence must be consumed. Returns the slot bindings and the
    chunk matched by V.
    """
    bound: list[tuple[int, Chunk]] = []
    vp_chunk: Chunk | None = None
    slot = 0  # index over NP-ish slots, in pattern order
    c = 0
    for symbol in pattern:
        if symbol == "V":
            if c >= len(chunks) or chunks[c].kind != "VP":
                return None
            vp_chunk = chunks[c]
            c += 1
        elif symbol == "PP":
            if c >= len(chunks) or chunks[c].kind != "PP":
                return None
            c += 1
        elif symbol == "NP":
            if c >= len(chunks) or chunks[c].kind != "NP":
                return None
            bound.append((slot, chunks[c]))
            slot += 1
            c += 1
        elif symbol == "NP.Location":
            if c + 1 < len(chunks) and chunks[c].kind == "PP" and chunks[c + 1].kind == "NP":
                bound.append((slot, chunks[c + 1]))
                slot += 1
                c += 2
            elif c < len(chunks) and chunks[c].kind == "NP":
                bound.append((slot, chunks[c]))
                slot += 1
                c += 1
            else:
                return None
        else:
            return None
    if c != len(chunks) or vp_chunk is None:
        return None
    return bound, vp_chunk


def match_verb_frames(
    verb: Sense,
    chunks: list[Chunk],
    lexicon: Lexicon,
    noun_properties: dict[str, frozenset[str]] | None = None,
    wsd=None,
) -> list[RoleAssignment]:
    """Frames surviving the syntactic then the selectional-restriction match.

    All frames of the verb's lemma are candidates; an assignment survives only
    if every bound NP head satisfies its slot's restriction. Results keep
    lexicon order.
    """
    props = noun_properties if noun_properties is not None else lexicon.noun_properties
    context = Clause(tuple(t for ch in chunks for t in ch.tokens), "")
    assignments: list[RoleAssignment] = []
    for frame in lexicon.frames_for(verb.lemma):
        matched = _match_pattern(frame.syntactic_pattern, chunks)
        if matched is None:
            continue
        bound, vp_chunk = matched
        bindings: dict[str, tuple[Chunk, Sense]] = {}
        ok = True
        for slot_idx, chunk in bound:
            role, restriction = frame.restrictions[slot_idx]
            head = head_word(chunk)
            lemma = lexicon.noun_lemma(head)
            if restriction != "any" and restriction not in props.get(lemma, frozenset()):
                ok = False
                break
            bindings[role] = (chunk, disambiguate(head, "noun", context, lexicon, wsd=wsd))
        if not ok:
            continue
        bindings["Action"] = (vp_chunk, frame.verb_sense)
        assignments.append(RoleAssignment(bindings=bindings, frame=frame))
    return assignments


def _text_label(chunk: Chunk, lexicon: Lexicon) -> str:
    dets = lexicon.words_for_tag("det")
    kept = [t for t in chunk.tokens if t not in dets]
    return " ".join(kept) if kept else chunk.text


def to_sr(assignment: RoleAssignment, mode: str = "sense", lexicon: Lexicon | None = None) -> SRTuple:
    """Group frame roles onto the four slots and render the labels.

    Text mode uses the chunk text without determiners (the verb uses its
    surface head word, so synonyms stay distinct); sense mode uses "lemma#n",
    which groups all verbs sharing a sense. Pronoun-only chunks render as
    their canonical noun in text mode.
    """
    if mode not in ("text", "sense"):
        raise ValueError(f"unknown mode {mode!r}")
    lexicon = lexicon or builtin_lexicon()
    slots: dict[str, str] = {}
    for role, (chunk, sense) in assignment.bindings.items():
        slot = ROLE_GROUPS.get(role)
        if slot is None or slot in slots:
            continue
        if mode == "sense":
            slots[slot] = sense.label
        elif slot == VERB:
            slots[slot] = head_word(chunk)
        else:
            label = _text_label(chunk, lexicon)
            if len(chunk.tokens) == 1 and chunk.tokens[0] in lexicon.pronouns:
                label = lexicon.pronouns[chunk.tokens[0]]
            slots[slot] = label
    if VERB not in slots:
        raise ValueError("assignment binds no Action role")
    return SRTuple(
        verb=slots[VERB],
        subject=slots.get(SUBJECT),
        object=slots.get(OBJECT),
        location=slots.get(LOCATION),
        mode=mode,
    )


@dataclass
class ClauseParse:
    """Diagnostics of one clause's trip through the parser."""

    clause: Clause
    chunks: list[Chunk]
    verb_sense: Sense | None
    assignments: list[RoleAssignment]
    sr: SRTuple | None
    flags: tuple[str, ...] = ()
    dropped_roles: tuple[str, ...] = ()  # roles with no slot in the grouping map


def parse_sentence(
    sentence: str,
    lexicon: Lexicon | None = None,
    mode: str = "sense",
    wsd=None,
) -> list[ClauseParse]:
    """sentence -> clauses -> chunks -> frames -> SR tuples.

    Among surviving assignments the first in lexicon order wins, except that
    assignments agreeing with the disambiguator's verb sense are preferred.
    A verb without a surviving frame still emits a VERB-only tuple, flagged.
    """
    lexicon = lexicon or builtin_lexicon()
    tagger = LexiconTagger(lexicon)
    wsd = wsd or CueDisambiguator(lexicon)
    parses = []
    for clause in split_clauses(sentence, lexicon):
        chunks = chunk_clause(clause, tagger)
        vp = next((ch for ch in chunks if ch.kind == "VP"), None)
        if vp is None:
            parses.append(ClauseParse(clause, chunks, None, [], None, flags=("no-verb",)))
            continue
        verb_sense = disambiguate(head_word(vp), "verb", clause, lexicon, wsd=wsd)
        flags = ("out-of-lexicon",) if verb_sense.out_of_lexicon else ()
        assignments = match_verb_frames(verb_sense, chunks, lexicon, wsd=wsd)
        assignments.sort(key=lambda a: a.frame.verb_sense != verb_sense)  # stable
        if not lexicon.frames_for(verb_sense.lemma):
            flags += ("no-frame",)
        dropped: tuple[str, ...] = ()
        if assignments:
            sr = to_sr(assignments[0], mode=mode, lexicon=lexicon)
            dropped = tuple(
                role for role in assignments[0].bindings if role not in ROLE_GROUPS
            )
        else:
            if "no-frame" not in flags:
                flags += ("no-surviving-frame",)
            label = verb_sense.label if mode == "sense" else verb_sense.lemma
            sr = SRTuple(verb=label, mode=mode)
        parses.append(
            ClauseParse(
                clause, chunks, verb_sense, assignments, sr, flags=flags, dropped_roles=dropped
            )
        )
    return parses


@dataclass(frozen=True)
class LabelVocab:
    slot: str
    counts: dict[str, int]  # retained labels only
    min_count: int

    @property
    def labels(self) -> list[str]:
        return sorted(self.counts)


def extract_label_vocab(tuples: list[SRTuple], slot: str, min_count: int = 30) -> LabelVocab:
    """Labels of a slot occurring at least min_count times across the corpus."""
    if slot not in (SUBJECT, VERB, OBJECT, LOCATION):
        raise ValueError(f"unknown slot {slot!r}")
    counter = Counter()
    for t in tuples:
        label = getattr(t, slot)
        if label is not None:
            counter[label] += 1
    kept = {label: n for label, n in counter.items() if n >= min_count}
    return LabelVocab(slot=slot, counts=kept, min_count=min_count)
