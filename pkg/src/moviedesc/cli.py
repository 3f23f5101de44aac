"""Command-line entry point wiring the pipeline stages.

Results go to stdout or --out as JSON lines / plain text; progress goes to
stderr. Output files are written to a temp name and renamed, so a failing
run never leaves a partial file. Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import align as align_mod
from . import corpus as corpus_mod
from . import crf as crf_mod
from . import features as feat_mod
from . import generate as gen_mod
from . import ranking as rank_mod
from .audio_io import AudioFormatError, load_wav
from .bleu import EvalPair, bleu4
from .codebook import kmeans_fit, load_codebook, save_codebook, visual_word_tuple
from .intervals import TimeInterval
from .lexicon import LexiconError, builtin_lexicon, load_lexicon
from .screenplay import parse_script
from .segmenter import SegmenterParams, run_segmentation
from .semparse import SRTuple, extract_label_vocab, parse_sentence
from .srt import SrtParseError, parse_srt

DEFAULT_SEED = 42
PROJECT_DIR_ENV = "MOVIEDESC_PROJECT_DIR"


def resolve_project_path(path: str) -> str:
    """Relative --project paths resolve against $MOVIEDESC_PROJECT_DIR."""
    base = os.environ.get(PROJECT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _progress(message: str) -> None:
    print(f"[moviedesc] {message}", file=sys.stderr)


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        _atomic_write(args.out, text)
        _progress(f"wrote {args.out}")
    else:
        sys.stdout.write(text)


def _read_jsonl(path) -> list[dict]:
    records = []
    try:
        with open(path, encoding="utf-8") as fh:
            for no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise DataError(f"{path}: line {no}: {exc}") from None
    except OSError as exc:
        raise DataError(str(exc)) from None
    return records


def _jsonl(records) -> str:
    return "".join(
        json.dumps(r, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"
        for r in records
    )


def _load_lexicon(args):
    try:
        return load_lexicon(args.lexicon) if getattr(args, "lexicon", None) else builtin_lexicon()
    except LexiconError as exc:
        raise DataError(str(exc)) from None


# --- subcommands ---------------------------------------------------------------


def cmd_segment(args) -> int:
    mixed = load_wav(args.mixed)
    original = load_wav(args.original)
    threshold = None if args.threshold == "auto" else float(args.threshold)
    params = SegmenterParams(
        window_size=args.window,
        hop=args.hop,
        max_lag_s=args.max_lag_s,
        threshold=threshold,
        min_segment_s=args.min_segment_s,
        merge_gap_s=args.merge_gap_s,
    )
    _progress(f"segmenting {args.mixed} against {args.original}")
    result = run_segmentation(mixed, original, params)
    _progress(
        f"lag {result.lag_frames} frames, threshold {result.threshold:.6g}, "
        f"{len(result.intervals)} intervals"
    )
    records = [
        {
            "start_s": round(iv.start_s, 4),
            "end_s": round(iv.end_s, 4),
            "peak_score": peak,
            "mean_score": mean,
        }
        for iv, (peak, mean) in zip(result.intervals, result.interval_scores())
    ]
    _emit(args, _jsonl(records))
    if args.curve_out:
        payload = {
            "frame_rate": result.curve.frame_rate,
            "start_s": result.curve.start_s,
            "lag_frames": result.lag_frames,
            "threshold": result.threshold,
            "scores": [round(float(x), 8) for x in result.curve.scores],
        }
        _atomic_write(args.curve_out, json.dumps(payload, sort_keys=True) + "\n")
        _progress(f"wrote {args.curve_out}")
    if args.figure:
        from .report import save_curve_figure

        save_curve_figure(result.curve, result.intervals, result.threshold, args.figure)
        _progress(f"wrote {args.figure}")
    return 0


def cmd_align_script(args) -> int:
    try:
        script_text = Path(args.script).read_text("utf-8")
        srt_text = Path(args.srt).read_text("utf-8-sig")
    except OSError as exc:
        raise DataError(str(exc)) from None
    elements = parse_script(script_text)
    subtitles = parse_srt(srt_text)
    _progress(f"{len(elements)} script elements, {len(subtitles)} subtitle cues")
    sentences = align_mod.align_script(elements, subtitles, window=args.window)
    kept = align_mod.filter_reliable(sentences, min_score=args.min_score)
    _progress(f"{len(kept)}/{len(sentences)} descriptions at score >= {args.min_score}")
    records = [
        {
            "text": s.text,
            "start_s": round(s.interval.start_s, 4),
            "end_s": round(s.interval.end_s, 4),
            "score": round(s.score, 6),
            "movie_id": args.movie_id,
        }
        for s in (sentences if args.keep_all else kept)
    ]
    _emit(args, _jsonl(records))
    return 0


def _sentence_records(path) -> list[tuple[str, str]]:
    records = _read_jsonl(path)
    out = []
    for no, rec in enumerate(records, start=1):
        text = rec.get("sentence", rec.get("text"))
        if text is None:
            raise DataError(f"{path}: record {no}: no sentence/text field")
        out.append((rec.get("id", f"s{no:05d}"), text))
    return out


def cmd_parse_sr(args) -> int:
    lexicon = _load_lexicon(args)
    sentences = _sentence_records(args.sentences)
    records = []
    flagged = 0
    for sid, text in sentences:
        for clause_idx, parse in enumerate(parse_sentence(text, lexicon, mode=args.mode)):
            if parse.sr is None:
                flagged += 1
                continue
            if parse.flags:
                flagged += 1
            rec = parse.sr.as_dict()
            rec.update(
                {
                    "sentence_id": sid,
                    "sentence": text,
                    "clause_index": clause_idx,
                    "frame_id": parse.assignments[0].frame.frame_id if parse.assignments else None,
                    "flags": list(parse.flags),
                }
            )
            records.append(rec)
    _progress(f"{len(records)} tuples from {len(sentences)} sentences ({flagged} flagged)")
    _emit(args, _jsonl(records))
    return 0


def _tuples_from_file(path) -> list[SRTuple]:
    return [SRTuple.from_dict(rec) for rec in _read_jsonl(path)]


def cmd_build_vocab(args) -> int:
    tuples = _tuples_from_file(args.tuples)
    vocab = extract_label_vocab(tuples, args.slot, args.min_count)
    payload = {"slot": vocab.slot, "min_count": vocab.min_count, "counts": dict(sorted(vocab.counts.items()))}
    _progress(f"{len(vocab.counts)} {args.slot} labels at min_count {args.min_count}")
    _emit(args, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0


def _load_project(path) -> corpus_mod.CorpusProject:
    try:
        return corpus_mod.load_project(resolve_project_path(path))
    except (OSError, corpus_mod.ProjectFormatError) as exc:
        raise DataError(str(exc)) from None


def cmd_init(args) -> int:
    project_path = resolve_project_path(args.project)
    if args.append and Path(project_path).exists():
        project = _load_project(args.project)
    else:
        project = corpus_mod.CorpusProject()
    media = {}
    if args.curve:
        media["difference_curve"] = args.curve
    if args.mixed_wav:
        media["mixed_wav"] = args.mixed_wav
    project.movies[args.movie_id] = corpus_mod.MovieMeta(
        title=args.title or args.movie_id, duration_s=args.duration_s, media=media
    )
    counters = {"dvs": 0, "script": 0}
    for source, path in (("dvs", args.dvs), ("script", args.script_sents)):
        if not path:
            continue
        for rec in _read_jsonl(path):
            counters[source] += 1
            sid = f"{args.movie_id}-{source}-{counters[source]:04d}"
            try:
                interval = TimeInterval(rec["start_s"], rec["end_s"])
                text = rec.get("sentence", rec.get("text"))
                if text is None:
                    raise KeyError("sentence")
            except (KeyError, ValueError) as exc:
                raise DataError(f"{path}: record {counters[source]}: {exc}") from None
            project.snippets.append(
                corpus_mod.Snippet(
                    id=sid,
                    movie_id=args.movie_id,
                    interval=interval,
                    sentence=text,
                    source=source,
                    score=rec.get("score"),
                )
            )
    project.revision += 1
    try:
        project.validate()
    except corpus_mod.ProjectFormatError as exc:
        raise DataError(str(exc)) from None
    corpus_mod.save_project(project, project_path)
    _progress(
        f"project {project_path}: movie {args.movie_id}, "
        f"{counters['dvs']} dvs + {counters['script']} script snippets"
    )
    return 0


def cmd_pair(args) -> int:
    project = _load_project(args.project)
    snippets = project.for_movie(args.movie) if args.movie else project.snippets
    dvs = [s for s in snippets if s.source == "dvs"]
    script = [s for s in snippets if s.source == "script"]
    pairs = corpus_mod.pair_overlapping(dvs, script, min_iou=args.min_iou)
    _progress(f"{len(pairs)} pairs at IoU >= {args.min_iou}")
    _emit(args, _jsonl([{"dvs_id": d, "script_id": s, "iou": round(v, 6)} for d, s, v in pairs]))
    return 0


def cmd_anonymize(args) -> int:
    project = _load_project(args.project)
    names: set[str] = set()
    if args.names:
        try:
            names = {ln.strip() for ln in Path(args.names).read_text("utf-8").splitlines() if ln.strip()}
        except OSError as exc:
            raise DataError(str(exc)) from None
    names_by_movie = {mid: names for mid in project.movies}
    anonymized, changed = corpus_mod.anonymize_project(project, names_by_movie)
    target = args.out or resolve_project_path(args.project)
    corpus_mod.save_project(anonymized, target)
    _progress(f"rewrote {changed} sentences -> {target}")
    return 0


def cmd_stats(args) -> int:
    project = _load_project(args.project)
    stats = corpus_mod.compute_stats(project)
    _emit(args, corpus_mod.format_stats_table(stats) + "\n")
    if args.figure:
        from .report import save_stats_figure

        save_stats_figure(stats, args.figure)
        _progress(f"wrote {args.figure}")
    return 0


def _read_feature_file(path):
    try:
        return feat_mod.read_features(path)
    except (OSError, feat_mod.FeatureFormatError, ValueError) as exc:
        raise DataError(str(exc)) from None


def cmd_nn(args) -> int:
    train = _read_feature_file(args.train_features)
    queries = _read_feature_file(args.query_features)
    sentences = dict(_sentence_records(args.train_sentences))
    missing = [sid for sid in train if sid not in sentences]
    if missing:
        raise DataError(f"{args.train_sentences}: no sentence for snippets {missing[:5]}")
    training = [
        (feat_mod.l1_normalize(vec), sentences[sid]) for sid, vec in train.items()
    ]
    records = []
    for sid, vec in queries.items():
        sentence = feat_mod.nearest_neighbor(feat_mod.l1_normalize(vec), training)
        records.append({"id": sid, "sentence": sentence})
    _progress(f"retrieved {len(records)} sentences from {len(training)} training items")
    _emit(args, _jsonl(records))
    return 0


def _read_class_scores(path) -> dict[str, dict[str, float]]:
    import csv as _csv

    out: dict[str, dict[str, float]] = {}
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            for no, row in enumerate(_csv.reader(fh), start=1):
                if not row or row[0].startswith("#"):
                    continue
                if len(row) != 3:
                    raise DataError(f"{path}: row {no}: expected snippet_id, class, score")
                out.setdefault(row[0], {})[row[1]] = float(row[2])
    except OSError as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    return out


def cmd_vwords(args) -> int:
    if args.fit_dt:
        vectors = list(_read_feature_file(args.fit_dt).values())
        _progress(f"fitting k={args.k} codebook on {len(vectors)} vectors (seed {args.seed})")
        try:
            codebook = kmeans_fit(vectors, k=args.k, seed=args.seed)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        save_codebook(codebook, args.codebook)
        _progress(f"wrote {args.codebook} ({len(codebook.objective_per_iter)} iterations)")
        return 0
    codebook = load_codebook(args.codebook)
    dt = _read_feature_file(args.dt)
    lsda = _read_class_scores(args.lsda)
    places = _read_class_scores(args.places)
    records = []
    for sid, vec in dt.items():
        if sid not in lsda or sid not in places:
            raise DataError(f"snippet {sid}: missing LSDA or PLACES scores")
        try:
            t = visual_word_tuple(lsda[sid], vec, places[sid], codebook)
        except ValueError as exc:
            raise DataError(f"snippet {sid}: {exc}") from None
        records.append(
            {
                "id": sid,
                "subject": t.subject_label,
                "activity_word": t.activity_word,
                "object": t.object_label,
                "scene": t.scene_label,
            }
        )
    _emit(args, _jsonl(records))
    return 0


def _vocab_labels(args, tuples) -> dict[str, list[str]]:
    vocabs = {}
    for node in crf_mod.NODES:
        path = getattr(args, f"{node}_vocab", None)
        if path:
            payload = json.loads(Path(path).read_text("utf-8"))
            vocabs[node] = list(payload["counts"])
        else:
            vocabs[node] = extract_label_vocab(tuples, node, args.min_count).labels
    return vocabs


def cmd_crf_fit(args) -> int:
    tuples = _tuples_from_file(args.tuples)
    vocabs = _vocab_labels(args, tuples)
    for node in crf_mod.NODES:
        if not vocabs[node]:
            raise DataError(
                f"no {node} labels reach min_count {args.min_count}; "
                "lower --min-count or supply a vocabulary file"
            )
    try:
        potentials = crf_mod.fit_pairwise(tuples, vocabs, alpha=args.alpha)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    crf_mod.save_potentials(potentials, args.out)
    _progress(
        f"fitted potentials on {len(tuples)} tuples "
        f"({potentials.skipped} skipped for out-of-vocab labels) -> {args.out}"
    )
    return 0


def cmd_crf_map(args) -> int:
    potentials = crf_mod.load_potentials(args.potentials)
    unaries = feat_mod.load_unary_scores(args.unaries)
    records = []
    for sid in unaries:
        try:
            sr = crf_mod.crf_map(
                unaries[sid], potentials, weights=(args.unary_weight, args.pairwise_weight),
                top_k=args.top_k,
            )
        except ValueError as exc:
            raise DataError(f"snippet {sid}: {exc}") from None
        rec = sr.as_dict()
        rec["id"] = sid
        records.append(rec)
    _progress(f"decoded {len(records)} snippets")
    _emit(args, _jsonl(records))
    return 0


def _pairs_from_file(path) -> list[tuple[SRTuple, str]]:
    pairs = []
    for no, rec in enumerate(_read_jsonl(path), start=1):
        sentence = rec.get("sentence", rec.get("text"))
        if sentence is None:
            raise DataError(f"{path}: record {no}: no sentence field")
        pairs.append((SRTuple.from_dict(rec), sentence))
    return pairs


def cmd_gen(args) -> int:
    if args.fit:
        bank = gen_mod.fit_template_bank(_pairs_from_file(args.fit))
        gen_mod.save_template_bank(bank, args.bank)
        _progress(f"fitted template bank on {bank.size} pairs -> {args.bank}")
        if not args.tuples:
            return 0
    bank = gen_mod.load_template_bank(args.bank)
    records = []
    for rec in _read_jsonl(args.tuples):
        sr = SRTuple.from_dict(rec)
        records.append({"id": rec.get("id", rec.get("sentence_id")), "sentence": gen_mod.generate_sentence(sr, bank)})
    _progress(f"generated {len(records)} sentences")
    _emit(args, _jsonl(records))
    return 0


def cmd_export_smt(args) -> int:
    pairs = _pairs_from_file(args.pairs)
    try:
        n = gen_mod.export_smt_parallel(pairs, args.src, args.tgt)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from None
    _progress(f"exported {n} parallel examples -> {args.src}, {args.tgt}")
    return 0


def _read_eval_pairs(path) -> list[EvalPair]:
    if str(path).lower().endswith(".csv"):
        import csv as _csv

        pairs = []
        with open(path, encoding="utf-8", newline="") as fh:
            for no, row in enumerate(_csv.reader(fh), start=1):
                if not row or row[0].startswith("#"):
                    continue
                if len(row) < 3:
                    raise DataError(
                        f"{path}: row {no}: expected snippet_id, candidate, references"
                    )
                refs = [r for r in row[2].split("|") if r.strip()]
                if not refs:
                    raise DataError(f"{path}: row {no}: no references")
                pairs.append(
                    EvalPair(
                        snippet_id=row[0],
                        candidate=tuple(_tokens(row[1])),
                        references=tuple(tuple(_tokens(r)) for r in refs),
                    )
                )
        return pairs
    pairs = []
    for no, rec in enumerate(_read_jsonl(path), start=1):
        try:
            pairs.append(
                EvalPair(
                    snippet_id=rec.get("snippet_id", rec.get("id", f"p{no:05d}")),
                    candidate=tuple(_tokens(rec["candidate"])),
                    references=tuple(tuple(_tokens(r)) for r in rec["references"]),
                )
            )
        except (KeyError, ValueError) as exc:
            raise DataError(f"{path}: record {no}: {exc}") from None
    return pairs


def cmd_bleu(args) -> int:
    pairs = _read_eval_pairs(args.pairs)
    if not pairs:
        raise DataError(f"{args.pairs}: no evaluation pairs")
    score = bleu4(pairs, smoothing=args.smoothing)
    _emit(args, f"{score:.2f}\n")
    return 0


def _tokens(value) -> list[str]:
    if isinstance(value, str):
        return gen_mod.tokenize_sentence(value)
    return [str(t).lower() for t in value]


def cmd_rank_export(args) -> int:
    methods: dict[str, dict[str, str]] = {}
    for item in args.method:
        name, _, path = item.partition("=")
        if not path:
            raise UsageError(f"--method wants name=path, got {item!r}")
        methods[name] = {rec["id"]: rec["sentence"] for rec in _read_jsonl(path)}
    snippet_ids = sorted(set.intersection(*(set(m) for m in methods.values())))
    if not snippet_ids:
        raise DataError("methods share no snippet ids")
    try:
        n = rank_mod.export_ranking_tasks(snippet_ids, methods, args.out, seed=args.seed)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    _progress(f"exported {n} blinded tasks -> {args.out}")
    return 0


def cmd_rank_import(args) -> int:
    responses = _read_jsonl(args.responses)
    by_criterion: dict[str, list] = {}
    try:
        for criterion in sorted({r.get("criterion", "rank") for r in responses}):
            subset = [r for r in responses if r.get("criterion", "rank") == criterion]
            by_criterion[criterion] = rank_mod.import_ranking_responses(args.tasks, subset)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    means = {c: rank_mod.mean_ranks(records) for c, records in by_criterion.items()}
    _emit(args, rank_mod.format_ranking_table(means) + "\n")
    if args.records_out:
        records = [
            {"criterion": c, "snippet_id": r.snippet_id, "ranks": dict(sorted(r.ranks.items()))}
            for c, rs in sorted(by_criterion.items())
            for r in rs
        ]
        _atomic_write(args.records_out, _jsonl(records))
        _progress(f"wrote {args.records_out}")
    if args.figure:
        from .report import save_ranking_figure

        save_ranking_figure(means, args.figure)
        _progress(f"wrote {args.figure}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import ProjectStore, create_app

    project_path = resolve_project_path(args.project)
    store = ProjectStore(project_path)
    app = create_app(store, ui_dir=args.ui)
    _progress(f"serving {project_path} on http://{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# --- argument wiring ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="moviedesc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="locate narration in a mixed audio track")
    p.add_argument("--mixed", required=True)
    p.add_argument("--original", required=True)
    p.add_argument("--threshold", default="auto", help="difference threshold or 'auto'")
    p.add_argument("--window", type=int, default=1024)
    p.add_argument("--hop", type=int, default=512)
    p.add_argument("--max-lag-s", type=float, default=10.0)
    p.add_argument("--min-segment-s", type=float, default=1.0)
    p.add_argument("--merge-gap-s", type=float, default=0.25)
    p.add_argument("--out")
    p.add_argument("--curve-out")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("align-script", help="align a script to subtitles")
    p.add_argument("--script", required=True)
    p.add_argument("--srt", required=True)
    p.add_argument("--movie-id", required=True)
    p.add_argument("--window", type=int, default=2, help="dialogue blocks each side")
    p.add_argument("--min-score", type=float, default=align_mod.RELIABLE_SCORE)
    p.add_argument("--keep-all", action="store_true", help="emit unreliable sentences too")
    p.add_argument("--out")
    p.set_defaults(func=cmd_align_script)

    p = sub.add_parser("parse-sr", help="extract semantic tuples from sentences")
    p.add_argument("--sentences", required=True, help="JSONL with sentence/text fields")
    p.add_argument("--mode", choices=("text", "sense"), default="sense")
    p.add_argument("--lexicon", help="lexicon directory (default: bundled)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_parse_sr)

    p = sub.add_parser("build-vocab", help="label vocabulary over parsed tuples")
    p.add_argument("--tuples", required=True)
    p.add_argument("--slot", choices=("subject", "verb", "object", "location"), required=True)
    p.add_argument("--min-count", type=int, default=30)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("init", help="create or extend a project file")
    p.add_argument("--project", required=True)
    p.add_argument("--movie-id", required=True)
    p.add_argument("--title")
    p.add_argument("--duration-s", type=float)
    p.add_argument("--dvs", help="JSONL snippets from segmentation + transcription")
    p.add_argument("--script-sents", help="JSONL from align-script")
    p.add_argument("--curve", help="difference-curve JSON path to attach")
    p.add_argument("--mixed-wav")
    p.add_argument("--append", action="store_true")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("pair", help="pair DVS and script snippets by IoU")
    p.add_argument("--project", required=True)
    p.add_argument("--movie")
    p.add_argument("--min-iou", type=float, default=0.75)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("anonymize", help="replace names/person mentions in a project")
    p.add_argument("--project", required=True)
    p.add_argument("--names", help="one character name per line")
    p.add_argument("--out", help="default: rewrite the project in place")
    p.set_defaults(func=cmd_anonymize)

    p = sub.add_parser("stats", help="corpus statistics table")
    p.add_argument("--project", required=True)
    p.add_argument("--figure")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("nn", help="nearest-neighbor sentence retrieval")
    p.add_argument("--train-features", required=True)
    p.add_argument("--train-sentences", required=True)
    p.add_argument("--query-features", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_nn)

    p = sub.add_parser("vwords", help="fit or apply the visual-word codebook")
    p.add_argument("--fit-dt", help="fit: training DT feature file")
    p.add_argument("--codebook", required=True)
    p.add_argument("--k", type=int, default=300)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--dt", help="assign: DT feature file")
    p.add_argument("--lsda", help="assign: object scores CSV (id, class, score)")
    p.add_argument("--places", help="assign: scene scores CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_vwords)

    p = sub.add_parser("crf-fit", help="fit pairwise potentials from tuples")
    p.add_argument("--tuples", required=True)
    p.add_argument("--min-count", type=int, default=30)
    p.add_argument("--verb-vocab")
    p.add_argument("--object-vocab")
    p.add_argument("--location-vocab")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_crf_fit)

    p = sub.add_parser("crf-map", help="MAP decode unary score files")
    p.add_argument("--unaries", nargs="+", required=True, help="CSV files; several fuse by sum")
    p.add_argument("--potentials", required=True)
    p.add_argument("--unary-weight", type=float, default=1.0)
    p.add_argument("--pairwise-weight", type=float, default=1.0)
    p.add_argument("--top-k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_crf_map)

    p = sub.add_parser("gen", help="generate sentences from tuples")
    p.add_argument("--fit", help="JSONL of tuple+sentence pairs to fit the bank")
    p.add_argument("--bank", required=True)
    p.add_argument("--tuples")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("export-smt", help="write SMT parallel corpus files")
    p.add_argument("--pairs", required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.set_defaults(func=cmd_export_smt)

    p = sub.add_parser("bleu", help="corpus BLEU@4 of candidate/reference pairs")
    p.add_argument("--pairs", required=True)
    p.add_argument("--smoothing", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bleu)

    p = sub.add_parser("rank-export", help="export blinded ranking tasks")
    p.add_argument("--method", action="append", required=True, help="name=sentences.jsonl")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_rank_export)

    p = sub.add_parser("rank-import", help="unblind responses and print mean ranks")
    p.add_argument("--tasks", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--records-out")
    p.add_argument("--figure")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rank_import)

    p = sub.add_parser("serve", help="serve the curation API")
    p.add_argument("--project", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8731)
    p.add_argument("--ui", help="static UI directory to mount at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, SrtParseError, AudioFormatError, align_mod.AlignmentError, LexiconError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
