import itertools

import numpy as np
import pytest

from moviedesc.corpus import (
    CorpusProject,
    MovieMeta,
    ProjectFormatError,
    RevisionConflict,
    Snippet,
    anonymize,
    anonymize_project,
    apply_patch,
    compute_stats,
    dumps_project,
    format_stats_table,
    load_project,
    loads_project,
    pair_overlapping,
    save_project,
)
from moviedesc.intervals import TimeInterval, iou


class TestIou:
    def test_identity(self):
        iv = TimeInterval(2.0, 5.0)
        assert iou(iv, iv) == 1.0

    def test_disjoint(self):
        assert iou(TimeInterval(0, 1), TimeInterval(2, 3)) == 0.0

    def test_partial_overlap(self):
        assert iou(TimeInterval(0, 4), TimeInterval(2, 6)) == pytest.approx(2 / 6)

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a = sorted(rng.uniform(0, 100, size=2))
            b = sorted(rng.uniform(0, 100, size=2))
            if a[0] == a[1] or b[0] == b[1]:
                continue
            x = TimeInterval(*a)
            y = TimeInterval(*b)
            assert iou(x, y) == iou(y, x)
            assert 0.0 <= iou(x, y) <= 1.0


def snippet(sid, movie, start, end, source, sentence="words here", tag="keep", locked=False):
    return Snippet(
        id=sid, movie_id=movie, interval=TimeInterval(start, end),
        sentence=sentence, source=source, tag=tag, locked=locked,
    )


def greedy_pairing_oracle(dvs, script, min_iou):
    candidates = sorted(
        (
            (iou(d.interval, s.interval), d.id, s.id)
            for d, s in itertools.product(dvs, script)
            if iou(d.interval, s.interval) >= min_iou
        ),
        key=lambda c: (-c[0], c[1], c[2]),
    )
    used = set()
    out = []
    for value, d_id, s_id in candidates:
        if d_id in used or s_id in used:
            continue
        used.update((d_id, s_id))
        out.append((d_id, s_id, value))
    return out


class TestPairOverlapping:
    def test_single_pair_above_threshold(self):
        dvs = [snippet("d1", "m", 0, 10, "dvs")]
        script = [snippet("s1", "m", 1, 11, "script")]
        pairs = pair_overlapping(dvs, script, min_iou=0.75)
        assert len(pairs) == 1 and pairs[0][:2] == ("d1", "s1")

    def test_below_threshold_excluded(self):
        dvs = [snippet("d1", "m", 0.0, 4.0, "dvs")]
        script = [snippet("s1", "m", 1.05, 4.0, "script")]  # IoU 0.7375
        assert iou(dvs[0].interval, script[0].interval) < 0.75
        assert pair_overlapping(dvs, script) == []

    def test_each_snippet_used_once(self):
        dvs = [snippet(f"d{i}", "m", i, i + 2, "dvs") for i in range(5)]
        script = [snippet(f"s{i}", "m", i + 0.1, i + 2.1, "script") for i in range(5)]
        pairs = pair_overlapping(dvs, script, min_iou=0.5)
        assert len({d for d, _, _ in pairs}) == len(pairs)
        assert len({s for _, s, _ in pairs}) == len(pairs)

    def test_grid_matches_greedy_oracle(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            dvs = [
                snippet(f"d{i}", "m", s, s + float(rng.uniform(0.5, 4)), "dvs")
                for i, s in enumerate(rng.uniform(0, 20, size=5))
            ]
            script = [
                snippet(f"s{i}", "m", s, s + float(rng.uniform(0.5, 4)), "script")
                for i, s in enumerate(rng.uniform(0, 20, size=5))
            ]
            for threshold in (0.3, 0.5, 0.75):
                assert pair_overlapping(dvs, script, threshold) == greedy_pairing_oracle(
                    dvs, script, threshold
                )

    def test_all_pairs_meet_threshold(self):
        rng = np.random.default_rng(12)
        dvs = [
            snippet(f"d{i}", "m", s, s + 2.0, "dvs")
            for i, s in enumerate(rng.uniform(0, 30, size=8))
        ]
        script = [
            snippet(f"s{i}", "m", s, s + 2.0, "script")
            for i, s in enumerate(rng.uniform(0, 30, size=8))
        ]
        for _, _, value in pair_overlapping(dvs, script, 0.75):
            assert value >= 0.75


class TestAnonymize:
    def test_single_name(self):
        assert anonymize("Abby gets in the basket.", {"Abby"}) == "Someone gets in the basket."

    def test_coordinated_names(self):
        assert anonymize("Mike and Abby run.", {"Abby", "Mike"}) == "People run."

    def test_person_description(self):
        assert anonymize("A young woman enters.", set()) == "Someone enters."

    def test_untouched_without_names(self):
        text = "The door creaks open."
        assert anonymize(text, {"Abby"}) == text

    def test_idempotent(self):
        rng = np.random.default_rng(4)
        sentences = [
            "Abby gets in the basket.",
            "Mike and Abby run.",
            "A young woman stares at two men.",
            "The elderly gentleman bows to Marta.",
            "People run.",
            "Someone waves.",
        ]
        for s in sentences:
            once = anonymize(s, {"Abby", "Mike", "Marta"})
            assert anonymize(once, {"Abby", "Mike", "Marta"}) == once

    def test_possessive(self):
        assert anonymize("Abby's coat is red.", {"Abby"}) == "Someone's coat is red."

    def test_replacement_log(self):
        from moviedesc.corpus import anonymize_sentence

        out, log = anonymize_sentence("Mike waves at Abby.", {"Abby", "Mike"})
        assert out == "Someone waves at someone."
        assert len(log) == 2


def project_fixture(n_dvs=3, n_script=2):
    movies = {"m1": MovieMeta(title="Fixture", duration_s=1000.0)}
    snippets = []
    for i in range(n_dvs):
        snippets.append(
            snippet(f"d{i}", "m1", 10 * i, 10 * i + 3, "dvs", sentence="one two three")
        )
    for i in range(n_script):
        snippets.append(
            snippet(f"s{i}", "m1", 10 * i + 1, 10 * i + 6, "script", sentence="four five")
        )
    return CorpusProject(movies=movies, snippets=snippets, revision=1)


class TestComputeStats:
    def test_empty_project(self):
        stats = compute_stats(CorpusProject())
        assert stats.total.words_before == 0
        assert stats.total.sentences == 0
        assert stats.total.avg_clip_s == 0.0

    def test_simple_arithmetic(self):
        project = CorpusProject(
            movies={"m": MovieMeta()},
            snippets=[
                snippet("a", "m", 0, 3, "dvs", sentence="two words"),
                snippet("b", "m", 5, 10, "dvs", sentence="three little words"),
            ],
        )
        stats = compute_stats(project)
        dvs = stats.per_source["dvs"]
        assert dvs.avg_clip_s == pytest.approx(4.0)
        assert dvs.total_h == pytest.approx(8 / 3600)
        assert dvs.words_before == dvs.words_after == 5

    def test_tagged_out_snippets_counted_before_only(self):
        project = project_fixture()
        project.snippets[0].tag = "irrelevant"
        stats = compute_stats(project)
        dvs = stats.per_source["dvs"]
        assert dvs.words_before == 9
        assert dvs.words_after == 6
        assert dvs.sentences == 2

    def test_words_after_never_exceeds_before(self):
        rng = np.random.default_rng(8)
        tags = ["keep", "irrelevant", "screen_text", "intro_ending", "audio_related"]
        project = project_fixture(6, 6)
        for s in project.snippets:
            s.tag = tags[rng.integers(len(tags))]
        stats = compute_stats(project)
        for st in list(stats.per_source.values()) + [stats.total]:
            assert st.words_after <= st.words_before

    def test_table_rendering_golden(self):
        project = project_fixture()
        project.snippets[3].tag = "irrelevant"
        got = format_stats_table(compute_stats(project))
        expected = (
            "                           Before                            After alignment\n"
            "                Movies      Words      Words  Sentences  Avg. length  Total length\n"
            "DVS                  1          9          9          3      3.0 sec        0.0 h.\n"
            "Movie script         1          4          2          1      5.0 sec        0.0 h.\n"
            "Total                1         13         11          4      3.5 sec        0.0 h."
        )
        assert got == expected


class TestPersistence:
    def test_round_trip(self, tmp_path):
        project = project_fixture()
        path = tmp_path / "p.jsonl"
        save_project(project, path)
        loaded = load_project(path)
        assert loaded == project

    def test_unknown_version_rejected(self, tmp_path):
        project = project_fixture()
        text = dumps_project(project).replace('"version":1', '"version":99')
        with pytest.raises(ProjectFormatError, match="version"):
            loads_project(text)

    def test_corrupt_line_numbered(self):
        text = dumps_project(project_fixture())
        lines = text.splitlines()
        lines[2] = lines[2][:-5]
        with pytest.raises(ProjectFormatError, match="line 3"):
            loads_project("\n".join(lines))

    def test_resave_byte_identical_10k(self, tmp_path):
        rng = np.random.default_rng(21)
        snippets = []
        for i in range(10_000):
            start = float(rng.uniform(0, 5000))
            snippets.append(
                snippet(
                    f"s{i:05d}", "m1", start, start + float(rng.uniform(0.5, 9)),
                    "dvs" if i % 2 else "script",
                    sentence=f"sentence number {i} with unicode éà",
                    tag="keep" if i % 7 else "irrelevant",
                    locked=bool(i % 13 == 0),
                )
            )
        project = CorpusProject(
            movies={"m1": MovieMeta(title="Big", duration_s=6000.0)}, snippets=snippets,
            revision=17,
        )
        p1 = tmp_path / "a.jsonl"
        p2 = tmp_path / "b.jsonl"
        save_project(project, p1)
        save_project(load_project(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_snippet_outside_duration_rejected(self):
        project = project_fixture()
        project.movies["m1"].duration_s = 5.0
        with pytest.raises(ProjectFormatError, match="interval ends"):
            loads_project(dumps_project(project))

    def test_unknown_movie_rejected(self):
        project = project_fixture()
        project.snippets.append(snippet("x", "ghost", 0, 1, "dvs"))
        with pytest.raises(ProjectFormatError, match="unknown movie"):
            loads_project(dumps_project(project))


class TestApplyPatch:
    def test_patch_bumps_revision(self):
        project = project_fixture()
        updated = apply_patch(project, "d1", {"tag": "screen_text"}, expected_revision=1)
        assert updated.tag == "screen_text"
        assert project.revision == 2

    def test_stale_revision_conflict(self):
        project = project_fixture()
        with pytest.raises(RevisionConflict):
            apply_patch(project, "d1", {"tag": "keep"}, expected_revision=0)

    def test_invalid_interval_rejected(self):
        project = project_fixture()
        with pytest.raises(ValueError):
            apply_patch(project, "d1", {"start_s": 9.0, "end_s": 2.0}, expected_revision=1)

    def test_unknown_snippet(self):
        with pytest.raises(KeyError):
            apply_patch(project_fixture(), "nope", {}, expected_revision=1)


class TestAnonymizeProject:
    def test_locked_snippets_untouched(self):
        project = project_fixture()
        project.snippets[0].sentence = "Abby waves."
        project.snippets[0].locked = True
        project.snippets[1].sentence = "Abby runs."
        out, changed = anonymize_project(project, {"m1": {"Abby"}})
        assert changed == 1
        assert out.snippet_by_id("d0").sentence == "Abby waves."
        assert out.snippet_by_id("d1").sentence == "Someone runs."
        assert out.revision == project.revision + 1
