import pytest

from moviedesc.generate import (
    export_smt_parallel,
    fit_template_bank,
    generate_sentence,
    load_template_bank,
    read_smt_parallel,
    save_template_bank,
    smt_source_line,
    third_person,
    tokenize_sentence,
)
from moviedesc.semparse import SRTuple


def sr(verb, subject=None, object=None, location=None, mode="text"):
    return SRTuple(verb=verb, subject=subject, object=object, location=location, mode=mode)


TRAIN_PAIRS = [
    (sr("open", "someone", "door"), "Someone opens the door."),
    (sr("open", "someone", "door"), "Someone opens the door."),
    (sr("open", "someone", "door"), "Someone pushes the door open."),
    (sr("close", "someone", "window"), "Someone closes the window."),
    (sr("walk", "someone", location="street"), "Someone walks down the street."),
    (sr("run", "someone"), "Someone runs."),
    (sr("carry", "someone", "basket", "garden"), "Someone carries the basket into the garden."),
]


class TestGenerateSentence:
    def bank(self):
        return fit_template_bank(TRAIN_PAIRS)

    def test_exact_tuple_most_frequent_sentence(self):
        got = generate_sentence(sr("open", "someone", "door"), self.bank())
        assert got == "Someone opens the door."

    def test_unseen_tuple_known_signature_substitutes(self):
        got = generate_sentence(sr("close", "someone", "door"), self.bank())
        assert got == "Someone closes the door."

    def test_backoff_drops_location_then_object(self):
        bank = fit_template_bank(
            [
                (sr("open", "someone", "door"), "Someone opens the door."),
                (sr("run", "someone"), "Someone runs."),
            ]
        )
        # location never seen in training: falls back to subject+verb+object
        got = generate_sentence(sr("open", "someone", "door", "kitchen"), bank)
        assert got == "Someone opens the door."
        # object never seen either: subject+verb pattern
        got = generate_sentence(sr("jump", "someone", None, None), bank)
        assert got == "Someone jumps."

    def test_default_pattern(self):
        bank = fit_template_bank([(sr("open", "someone", "door"), "Someone opens the door.")])
        got = generate_sentence(sr("wave"), bank)
        assert got == "Someone waves."

    def test_sense_labels_rendered_without_suffix(self):
        bank = fit_template_bank(
            [(sr("open#1", "someone#1", "door#1", mode="sense"), "Someone opens the door.")]
        )
        got = generate_sentence(sr("open#1", "someone#1", "window#1", mode="sense"), bank)
        assert got == "Someone opens the window."

    def test_golden_outputs_20_pair_bank(self):
        pairs = TRAIN_PAIRS + [
            (sr("sit", "someone", location="chair"), "Someone sits on a chair."),
            (sr("hold", "someone", "cup"), "Someone holds a cup."),
            (sr("watch", "someone", "tv"), "Someone watches tv."),
            (sr("kiss", "someone", "someone"), "Someone kisses someone."),
            (sr("drop", "someone", "bottle"), "Someone drops the bottle."),
            (sr("grab", "someone", "coat"), "Someone grabs a coat."),
            (sr("read", "someone", "book"), "Someone reads a book."),
            (sr("smile", "someone"), "Someone smiles."),
            (sr("wave", "someone"), "Someone waves."),
            (sr("lean", "someone"), "Someone leans forward."),
            (sr("climb", "someone", "stairs"), "Someone climbs the stairs."),
            (sr("pour", "someone", "glass"), "Someone pours a glass."),
            (sr("nod", "someone"), "Someone nods."),
        ]
        bank = fit_template_bank(pairs)
        # the "{subject} {verb} the {object} ." template is the most frequent
        # (subject, verb, object) pattern in this bank: 5 of 9
        golden = [
            (sr("hold", "someone", "book"), "Someone holds the book."),
            (sr("drop", "someone", "cup"), "Someone drops the cup."),
            (sr("smile", "someone"), "Someone smiles."),
            (sr("climb", "someone", "ladder"), "Someone climbs the ladder."),
            (sr("dance", "someone"), "Someone dances."),
        ]
        for tup, expected in golden:
            assert generate_sentence(tup, bank) == expected

    def test_empty_bank_error(self):
        with pytest.raises(ValueError):
            fit_template_bank([])


class TestThirdPerson:
    def test_regular(self):
        assert third_person("open") == "opens"

    def test_sibilant(self):
        assert third_person("push") == "pushes"

    def test_consonant_y(self):
        assert third_person("carry") == "carries"


class TestSmtExport:
    def test_source_line_slot_order(self):
        line = smt_source_line(sr("cut", None, "tomato", None))
        assert line == "cut tomato"

    def test_multiword_labels_joined(self):
        line = smt_source_line(sr("shoot", "man", "video", "moving bus"))
        assert line == "man shoot video moving_bus"

    def test_empty_slots_omitted(self):
        assert smt_source_line(sr("run")) == "run"

    def test_target_tokenized(self, tmp_path):
        pairs = [(sr("cut", None, "tomato"), "The person slices the tomato.")]
        src, tgt = tmp_path / "x.src", tmp_path / "x.tgt"
        export_smt_parallel(pairs, src, tgt)
        assert src.read_text() == "cut tomato\n"
        assert tgt.read_text() == "the person slices the tomato .\n"

    def test_line_counts_equal_and_round_trip(self, tmp_path):
        import random

        rng = random.Random(3)
        verbs = ["run", "walk", "open", "close", "hold"]
        pairs = []
        for i in range(100):
            tup = sr(
                rng.choice(verbs),
                "someone",
                rng.choice([None, "door", "red box"]),
                rng.choice([None, "kitchen", "the green garden"]),
            )
            pairs.append((tup, f"Sentence number {i}, quite plain."))
        src, tgt = tmp_path / "c.src", tmp_path / "c.tgt"
        export_smt_parallel(pairs, src, tgt)
        parsed = read_smt_parallel(src, tgt)
        assert len(parsed) == len(pairs)
        for (tup, sentence), (src_tokens, tgt_tokens) in zip(pairs, parsed):
            assert src_tokens == smt_source_line(tup).split()
            assert tgt_tokens == tokenize_sentence(sentence)
        # re-export reproduces the files byte for byte
        src2, tgt2 = tmp_path / "c2.src", tmp_path / "c2.tgt"
        export_smt_parallel(pairs, src2, tgt2)
        assert src.read_bytes() == src2.read_bytes()
        assert tgt.read_bytes() == tgt2.read_bytes()

    def test_full_tuples_recoverable(self, tmp_path):
        pairs = [
            (sr("shoot", "man", "video", "moving bus"), "The man shoots a video."),
            (sr("open", "woman", "door", "dark hall"), "The woman opens the door."),
        ]
        src, tgt = tmp_path / "f.src", tmp_path / "f.tgt"
        export_smt_parallel(pairs, src, tgt)
        for (tup, _), (src_tokens, _) in zip(pairs, read_smt_parallel(src, tgt)):
            subject, verb, obj, loc = (t.replace("_", " ") for t in src_tokens)
            assert (subject, verb, obj, loc) == (tup.subject, tup.verb, tup.object, tup.location)

    def test_empty_pairs_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            export_smt_parallel([], tmp_path / "a", tmp_path / "b")


def test_bank_json_round_trip(tmp_path):
    bank = fit_template_bank(TRAIN_PAIRS)
    path = tmp_path / "bank.json"
    save_template_bank(bank, path)
    loaded = load_template_bank(path)
    for tup, _ in TRAIN_PAIRS:
        assert generate_sentence(tup, loaded) == generate_sentence(tup, bank)
    path2 = tmp_path / "bank2.json"
    save_template_bank(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()
