"""Plain-text lexicon backing the semantic parser.

A lexicon directory holds small line-oriented tables:

    nouns.txt      bus: solid, machine
    frames.txt     shoot#2: NP V NP | Agent: animate, Patient: solid
    senses.txt     shoot: 1=kill 2=film
    cues.txt       shoot#2: video, camera, film
    lemmas.txt     shot: shoot
    pronouns.txt   he: man
    tags.txt       det: the, a, an, ...

The bundled lexicon under moviedesc/data/lexicon is a desk-scale stand-in
for full dictionary resources; real inventories can be dropped in using the
same format. Nouns implicitly carry a single sense (#1); verb senses come
from senses.txt.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

RESTRICTION_VOCAB = frozenset({"animate", "solid", "location", "machine", "any"})
NP_SLOTS = frozenset({"NP", "NP.Location"})
PATTERN_VOCAB = frozenset({"NP", "V", "PP", "NP.Location"})


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Sense:
    lemma: str
    pos: str  # noun | verb
    sense_number: int
    out_of_lexicon: bool = False

    def __post_init__(self):
        if self.sense_number < 1:
            raise ValueError("sense_number must be positive")

    @property
    def label(self) -> str:
        return f"{self.lemma}#{self.sense_number}"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class VerbFrame:
    verb_sense: Sense
    syntactic_pattern: tuple[str, ...]
    restrictions: tuple[tuple[str, str], ...]  # (role, restriction) per NP-ish slot
    frame_id: int = -1

    def __post_init__(self):
        unknown = set(self.syntactic_pattern) - PATTERN_VOCAB
        if unknown:
            raise LexiconError(f"unknown pattern symbols {sorted(unknown)}")
        if sum(1 for s in self.syntactic_pattern if s == "V") != 1:
            raise LexiconError(f"pattern {self.syntactic_pattern} must contain exactly one V")
        n_np = sum(1 for s in self.syntactic_pattern if s in NP_SLOTS)
        if n_np != len(self.restrictions):
            raise LexiconError(
                f"{self.verb_sense}: {n_np} NP slots but {len(self.restrictions)} restrictions"
            )
        for role, restriction in self.restrictions:
            if restriction not in RESTRICTION_VOCAB:
                raise LexiconError(f"unknown restriction {restriction!r} for role {role}")


_SENSE_REF = re.compile(r"^([a-z'-]+)#(\d+)$")


def _parse_sense_ref(text: str, pos: str = "verb") -> Sense:
    m = _SENSE_REF.match(text.strip())
    if m is None:
        raise LexiconError(f"bad sense reference {text!r}, expected lemma#n")
    return Sense(m.group(1), pos, int(m.group(2)))


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise LexiconError(f"line {no}: expected 'key: values', got {raw!r}")
        key, _, rest = line.partition(":")
        yield no, key.strip(), rest.strip()


@dataclass
class Lexicon:
    noun_properties: dict[str, frozenset[str]] = field(default_factory=dict)
    frames: list[VerbFrame] = field(default_factory=list)
    verb_senses: dict[str, list[tuple[int, str]]] = field(default_factory=dict)
    cues: dict[tuple[str, int], frozenset[str]] = field(default_factory=dict)
    lemmas: dict[str, str] = field(default_factory=dict)
    pronouns: dict[str, str] = field(default_factory=dict)
    tag_words: dict[str, frozenset[str]] = field(default_factory=dict)

    def words_for_tag(self, tag: str) -> frozenset[str]:
        return self.tag_words.get(tag, frozenset())

    def verb_lemma(self, word: str) -> str:
        """Map a surface verb form to its lemma, falling back to suffix rules."""
        word = word.lower()
        if word in self.lemmas:
            return self.lemmas[word]
        if word in self.verb_senses:
            return word
        for stripped in _suffix_candidates(word):
            if stripped in self.verb_senses:
                return stripped
        return word

    def noun_lemma(self, word: str) -> str:
        word = word.lower()
        if word in self.pronouns:
            return self.pronouns[word]
        if word in self.lemmas:
            return self.lemmas[word]
        if word in self.noun_properties:
            return word
        for singular in (word[:-1], word[:-2], word[:-3] + "y"):
            if singular and singular in self.noun_properties:
                return singular
        return word

    def is_verb(self, word: str) -> bool:
        return self.verb_lemma(word) in self.verb_senses

    def frames_for(self, lemma: str) -> list[VerbFrame]:
        return [f for f in self.frames if f.verb_sense.lemma == lemma]

    def senses_of(self, lemma: str, pos: str) -> list[Sense]:
        if pos == "verb":
            numbers = [n for n, _ in self.verb_senses.get(lemma, [])]
        else:
            numbers = [1] if lemma in self.noun_properties else []
        return [Sense(lemma, pos, n) for n in numbers]


def _suffix_candidates(word: str):
    if word.endswith(("ied", "ies")) and len(word) > 4:
        yield word[:-3] + "y"  # modified -> modify, carries -> carry
    for suffix in ("ing", "ed", "es", "s", "d"):
        if word.endswith(suffix) and len(word) > len(suffix) + 1:
            stem = word[: -len(suffix)]
            yield stem
            yield stem + "e"  # smiled -> smile
            if len(stem) > 2 and stem[-1] == stem[-2]:
                yield stem[:-1]  # nodded -> nod


def _load_table(path: Path) -> str:
    return path.read_text(encoding="utf-8") if path.exists() else ""


def load_lexicon(directory) -> Lexicon:
    directory = Path(directory)
    lex = Lexicon()

    for no, key, rest in _lines(_load_table(directory / "nouns.txt")):
        props = frozenset(p.strip() for p in rest.split(",") if p.strip())
        bad = props - RESTRICTION_VOCAB
        if bad:
            raise LexiconError(f"nouns.txt line {no}: unknown properties {sorted(bad)}")
        lex.noun_properties[key.lower()] = props

    for no, key, rest in _lines(_load_table(directory / "senses.txt")):
        senses = []
        for part in rest.split():
            num, _, gloss = part.partition("=")
            if not num.isdigit() or not gloss:
                raise LexiconError(f"senses.txt line {no}: expected n=gloss, got {part!r}")
            senses.append((int(num), gloss))
        lex.verb_senses[key.lower()] = sorted(senses)

    for no, key, rest in _lines(_load_table(directory / "frames.txt")):
        sense = _parse_sense_ref(key)
        pattern_text, _, restr_text = rest.partition("|")
        pattern = tuple(pattern_text.split())
        restrictions = []
        if restr_text.strip():
            for item in restr_text.split(","):
                role, _, restriction = item.partition(":")
                if not restriction.strip():
                    raise LexiconError(f"frames.txt line {no}: expected Role: restriction")
                restrictions.append((role.strip(), restriction.strip()))
        try:
            frame = VerbFrame(sense, pattern, tuple(restrictions), frame_id=len(lex.frames))
        except LexiconError as exc:
            raise LexiconError(f"frames.txt line {no}: {exc}") from None
        if sense.lemma not in lex.verb_senses:
            raise LexiconError(f"frames.txt line {no}: {sense.lemma} missing from senses.txt")
        lex.frames.append(frame)

    for no, key, rest in _lines(_load_table(directory / "cues.txt")):
        sense = _parse_sense_ref(key)
        lex.cues[(sense.lemma, sense.sense_number)] = frozenset(
            w.strip().lower() for w in rest.split(",") if w.strip()
        )

    for _, key, rest in _lines(_load_table(directory / "lemmas.txt")):
        lex.lemmas[key.lower()] = rest.lower()

    for _, key, rest in _lines(_load_table(directory / "pronouns.txt")):
        lex.pronouns[key.lower()] = rest.lower()

    for _, key, rest in _lines(_load_table(directory / "tags.txt")):
        lex.tag_words[key.strip()] = frozenset(w.strip().lower() for w in rest.split(",") if w.strip())

    return lex


def builtin_lexicon() -> Lexicon:
    """The lexicon bundled with the package."""
    root = resources.files("moviedesc").joinpath("data/lexicon")
    with resources.as_file(root) as path:
        return load_lexicon(path)
