"""Corpus data model: snippets, curation tags, pairing, stats, persistence.

A project is one JSON-lines file: a header record with format version,
revision counter and movie metadata, followed by one record per snippet.
Serialization is deterministic (sorted keys, fixed separators) so an
unchanged project re-saves byte-identically.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field, replace
from importlib import resources

from .intervals import TimeInterval, iou

FORMAT_NAME = "moviedesc-project"
FORMAT_VERSION = 1

TAGS = ("keep", "intro_ending", "screen_text", "irrelevant", "audio_related")
SOURCES = ("dvs", "script")


class ProjectFormatError(ValueError):
    pass


class RevisionConflict(RuntimeError):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"stale revision {expected}, project is at {actual}")
        self.expected = expected
        self.actual = actual


@dataclass
class Snippet:
    id: str
    movie_id: str
    interval: TimeInterval
    sentence: str
    source: str
    score: float | None = None
    tag: str = "keep"
    locked: bool = False

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")

    @property
    def kept(self) -> bool:
        return self.tag == "keep"


@dataclass
class MovieMeta:
    title: str = ""
    duration_s: float | None = None
    media: dict[str, str] = field(default_factory=dict)


@dataclass
class CorpusProject:
    movies: dict[str, MovieMeta] = field(default_factory=dict)
    snippets: list[Snippet] = field(default_factory=list)
    revision: int = 0

    def snippet_by_id(self, snippet_id: str) -> Snippet:
        for s in self.snippets:
            if s.id == snippet_id:
                return s
        raise KeyError(snippet_id)

    def for_movie(self, movie_id: str) -> list[Snippet]:
        return [s for s in self.snippets if s.movie_id == movie_id]

    def validate(self) -> None:
        seen = set()
        for s in self.snippets:
            if s.id in seen:
                raise ProjectFormatError(f"duplicate snippet id {s.id}")
            seen.add(s.id)
            if s.movie_id not in self.movies:
                raise ProjectFormatError(f"snippet {s.id}: unknown movie {s.movie_id}")
            duration = self.movies[s.movie_id].duration_s
            if duration is not None and s.interval.end_s > duration + 1e-9:
                raise ProjectFormatError(
                    f"snippet {s.id}: interval ends at {s.interval.end_s}s, "
                    f"movie lasts {duration}s"
                )


def pair_overlapping(
    dvs: list[Snippet], script: list[Snippet], min_iou: float = 0.75
) -> list[tuple[str, str, float]]:
    """Greedy one-to-one pairing of DVS and script snippets by descending IoU."""
    candidates = []
    for d in dvs:
        for s in script:
            value = iou(d.interval, s.interval)
            if value >= min_iou:
                candidates.append((value, d.id, s.id))
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    used_d: set[str] = set()
    used_s: set[str] = set()
    pairs = []
    for value, d_id, s_id in candidates:
        if d_id in used_d or s_id in used_s:
            continue
        used_d.add(d_id)
        used_s.add(s_id)
        pairs.append((d_id, s_id, value))
    return pairs


# --- anonymization -----------------------------------------------------------

_PERSON_TERMS: dict[str, frozenset[str]] | None = None


def _person_terms() -> dict[str, frozenset[str]]:
    global _PERSON_TERMS
    if _PERSON_TERMS is None:
        text = resources.files("moviedesc").joinpath("data/person_terms.txt").read_text("utf-8")
        terms: dict[str, frozenset[str]] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(":")
            terms[key.strip()] = frozenset(w.strip().lower() for w in rest.split(",") if w.strip())
        _PERSON_TERMS = terms
    return _PERSON_TERMS


@dataclass(frozen=True)
class Replacement:
    original: str
    replacement: str
    position: int


def _recapitalize(text: str) -> str:
    # only the inserted words; other casing is left alone
    return re.sub(
        r"(^|[.!?]\s+)(someone|people)\b",
        lambda m: m.group(1) + m.group(2).capitalize(),
        text,
    )


def anonymize_sentence(
    sentence: str,
    name_lexicon: set[str],
    plural_markers: set[str] | None = None,
) -> tuple[str, list[Replacement]]:
    """Replace character names and person descriptions with someone/people.

    Coordinated names and plural person references become "people"; single
    names and singular person descriptions ("a young woman") become
    "someone". Sentence-initial replacements are re-capitalized. Returns the
    rewritten sentence and the replacement log.
    """
    terms = _person_terms()
    singular = terms.get("singular", frozenset())
    plural = set(terms.get("plural", frozenset())) | set(plural_markers or ())
    adjectives = terms.get("adjectives", frozenset())

    log: list[Replacement] = []
    names = sorted({n.strip() for n in name_lexicon if n.strip()}, key=len, reverse=True)
    out = sentence

    def record(m: re.Match, replacement: str) -> str:
        log.append(Replacement(m.group(0), replacement, m.start()))
        return replacement

    if names:
        name_pat = "|".join(re.escape(n) for n in names)
        coord = re.compile(
            rf"\b(?:{name_pat})(?:\s*(?:,|and|or)\s+(?:{name_pat}))+\b"
        )
        out = coord.sub(lambda m: record(m, "people"), out)
        out = re.compile(rf"\b(?:{name_pat})\b").sub(lambda m: record(m, "someone"), out)

    art = r"(?:a|an|the|one)"
    adj = "|".join(sorted(re.escape(a) for a in adjectives))
    if singular:
        sing = "|".join(sorted(re.escape(w) for w in singular))
        desc = re.compile(
            rf"\b{art}\s+(?:(?:{adj})\s+){{0,2}}(?:{sing})\b", re.IGNORECASE
        )
        out = desc.sub(lambda m: record(m, "someone"), out)
    if plural:
        plur = "|".join(sorted(re.escape(w) for w in plural))
        desc = re.compile(
            rf"\b(?:(?:the|some|two|three|four|several|many)\s+)?"
            rf"(?:(?:{adj})\s+){{0,2}}(?:{plur})\b",
            re.IGNORECASE,
        )
        out = desc.sub(lambda m: record(m, "people"), out)

    if log:
        out = _recapitalize(out)
    return out, log


def anonymize(sentence: str, name_lexicon: set[str], plural_markers: set[str] | None = None) -> str:
    return anonymize_sentence(sentence, name_lexicon, plural_markers)[0]


def anonymize_project(
    project: CorpusProject, names_by_movie: dict[str, set[str]]
) -> tuple[CorpusProject, int]:
    """Rewrite every unlocked snippet sentence; bumps the revision once."""
    changed = 0
    snippets = []
    for s in project.snippets:
        if s.locked:
            snippets.append(s)
            continue
        new_text = anonymize(s.sentence, names_by_movie.get(s.movie_id, set()))
        if new_text != s.sentence:
            changed += 1
            snippets.append(replace(s, sentence=new_text))
        else:
            snippets.append(s)
    out = CorpusProject(
        movies=dict(project.movies),
        snippets=snippets,
        revision=project.revision + 1,
    )
    return out, changed


# --- statistics ---------------------------------------------------------------


@dataclass(frozen=True)
class SourceStats:
    movies: int
    words_before: int
    words_after: int
    sentences: int
    avg_clip_s: float
    total_h: float


@dataclass(frozen=True)
class CorpusStats:
    per_source: dict[str, SourceStats]
    total: SourceStats


def _word_count(text: str) -> int:
    return len(text.split())


def compute_stats(project: CorpusProject) -> CorpusStats:
    """Word counts before/after curation plus clip-length aggregates.

    "Before" counts every snippet regardless of tag; "after" and the length
    figures cover only snippets still tagged keep.
    """

    def stats_for(snippets: list[Snippet]) -> SourceStats:
        kept = [s for s in snippets if s.kept]
        durations = [s.interval.duration_s for s in kept]
        return SourceStats(
            movies=len({s.movie_id for s in snippets}),
            words_before=sum(_word_count(s.sentence) for s in snippets),
            words_after=sum(_word_count(s.sentence) for s in kept),
            sentences=len(kept),
            avg_clip_s=sum(durations) / len(durations) if durations else 0.0,
            total_h=sum(durations) / 3600.0,
        )

    per_source = {
        source: stats_for([s for s in project.snippets if s.source == source])
        for source in SOURCES
    }
    return CorpusStats(per_source=per_source, total=stats_for(project.snippets))


_SOURCE_ROW_NAMES = {"dvs": "DVS", "script": "Movie script"}


def format_stats_table(stats: CorpusStats) -> str:
    """Render the before/after words + sentences + length summary table."""
    header1 = f"{'':14} {'':>7} {'Before':>10} {'After alignment':>42}"
    header2 = (
        f"{'':14} {'Movies':>7} {'Words':>10} {'Words':>10} "
        f"{'Sentences':>10} {'Avg. length':>12} {'Total length':>13}"
    )
    lines = [header1, header2]
    rows = [(_SOURCE_ROW_NAMES[s], stats.per_source[s]) for s in SOURCES]
    rows.append(("Total", stats.total))
    for name, st in rows:
        lines.append(
            f"{name:14} {st.movies:>7} {st.words_before:>10} {st.words_after:>10} "
            f"{st.sentences:>10} {st.avg_clip_s:>8.1f} sec {st.total_h:>10.1f} h."
        )
    return "\n".join(lines)


# --- persistence ---------------------------------------------------------------


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _snippet_record(s: Snippet) -> dict:
    return {
        "id": s.id,
        "movie_id": s.movie_id,
        "start_s": s.interval.start_s,
        "end_s": s.interval.end_s,
        "sentence": s.sentence,
        "source": s.source,
        "score": s.score,
        "tag": s.tag,
        "locked": s.locked,
    }


def _snippet_from_record(rec: dict) -> Snippet:
    return Snippet(
        id=rec["id"],
        movie_id=rec["movie_id"],
        interval=TimeInterval(rec["start_s"], rec["end_s"]),
        sentence=rec["sentence"],
        source=rec["source"],
        score=rec.get("score"),
        tag=rec.get("tag", "keep"),
        locked=bool(rec.get("locked", False)),
    )


def dumps_project(project: CorpusProject) -> str:
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "revision": project.revision,
        "movies": {
            mid: {"title": m.title, "duration_s": m.duration_s, "media": m.media}
            for mid, m in sorted(project.movies.items())
        },
    }
    lines = [_dump(header)]
    lines.extend(_dump(_snippet_record(s)) for s in project.snippets)
    return "\n".join(lines) + "\n"


def save_project(project: CorpusProject, path) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(dumps_project(project))
    os.replace(tmp, path)


def loads_project(text: str) -> CorpusProject:
    lines = text.splitlines()
    if not lines:
        raise ProjectFormatError("empty project file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ProjectFormatError(f"line 1: corrupt header: {exc}") from None
    if header.get("format") != FORMAT_NAME:
        raise ProjectFormatError(f"not a {FORMAT_NAME} file")
    if header.get("version") != FORMAT_VERSION:
        raise ProjectFormatError(
            f"unsupported project version {header.get('version')!r}; "
            f"this build reads version {FORMAT_VERSION} and has no migration for it"
        )
    movies = {
        mid: MovieMeta(
            title=m.get("title", ""),
            duration_s=m.get("duration_s"),
            media=m.get("media", {}),
        )
        for mid, m in header.get("movies", {}).items()
    }
    snippets = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            snippets.append(_snippet_from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ProjectFormatError(f"line {no}: corrupt snippet record: {exc}") from None
    project = CorpusProject(movies=movies, snippets=snippets, revision=header.get("revision", 0))
    project.validate()
    return project


def load_project(path) -> CorpusProject:
    with open(path, encoding="utf-8") as fh:
        return loads_project(fh.read())


PATCHABLE_FIELDS = ("start_s", "end_s", "sentence", "tag", "locked")


def apply_patch(project: CorpusProject, snippet_id: str, fields: dict, expected_revision: int) -> Snippet:
    """Single-writer mutation used by the curation API; bumps the revision.

    Raises RevisionConflict when expected_revision is stale, KeyError for an
    unknown snippet, ValueError for bad fields.
    """
    if expected_revision != project.revision:
        raise RevisionConflict(expected_revision, project.revision)
    unknown = set(fields) - set(PATCHABLE_FIELDS)
    if unknown:
        raise ValueError(f"unknown fields {sorted(unknown)}")
    snippet = project.snippet_by_id(snippet_id)
    start = fields.get("start_s", snippet.interval.start_s)
    end = fields.get("end_s", snippet.interval.end_s)
    interval = TimeInterval(start, end)  # validates start < end
    duration = project.movies[snippet.movie_id].duration_s
    if duration is not None and interval.end_s > duration + 1e-9:
        raise ValueError(f"interval ends beyond the movie duration {duration}s")
    updated = replace(
        snippet,
        interval=interval,
        sentence=fields.get("sentence", snippet.sentence),
        tag=fields.get("tag", snippet.tag),
        locked=bool(fields.get("locked", snippet.locked)),
    )
    project.snippets[project.snippets.index(snippet)] = updated
    project.revision += 1
    return updated
