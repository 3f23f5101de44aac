"""Curation HTTP API served by the CLI `serve` command.

One process owns one project file: reads are served from memory, every
mutation goes through a revision-checked PATCH that persists before
returning (single-writer contract). The browser UI consumes exactly this
API and computes nothing itself.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import corpus
from .corpus import CorpusProject, RevisionConflict


class ProjectStore:
    """Owns the project file; serializes mutations behind one lock."""

    def __init__(self, path, project: CorpusProject | None = None):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.project = project if project is not None else corpus.load_project(path)

    def patch_snippet(self, snippet_id: str, fields: dict, expected_revision: int):
        with self._lock:
            snippet = corpus.apply_patch(self.project, snippet_id, fields, expected_revision)
            corpus.save_project(self.project, self.path)
            return snippet, self.project.revision


def _snippet_json(s: corpus.Snippet) -> dict:
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


class SnippetPatch(BaseModel):
    expected_revision: int
    start_s: float | None = None
    end_s: float | None = None
    sentence: str | None = None
    tag: str | None = None
    locked: bool | None = None


def _downsample_curve(payload: dict, points: int) -> dict:
    scores = np.asarray(payload["scores"], dtype=float)
    frame_rate = float(payload["frame_rate"])
    start_s = float(payload.get("start_s", 0.0))
    if len(scores) <= points:
        times = start_s + np.arange(len(scores)) / frame_rate
        return {"times": times.tolist(), "scores": scores.tolist()}
    # bucket maxima keep narration peaks visible at timeline zoom levels
    edges = np.linspace(0, len(scores), points + 1).astype(int)
    out_scores = [float(scores[a:b].max()) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    mid = (edges[:-1] + edges[1:]) / 2.0
    times = (start_s + mid[: len(out_scores)] / frame_rate).tolist()
    return {"times": times, "scores": out_scores}


def create_app(store: ProjectStore, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="moviedesc curation API")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/project")
    def get_project():
        p = store.project
        return {
            "revision": p.revision,
            "movies": {
                mid: {"title": m.title, "duration_s": m.duration_s, "media": m.media}
                for mid, m in p.movies.items()
            },
            "snippets": [_snippet_json(s) for s in p.snippets],
        }

    @app.get("/movies/{movie_id}/snippets")
    def get_snippets(movie_id: str):
        if movie_id not in store.project.movies:
            raise HTTPException(status_code=404, detail=f"unknown movie {movie_id}")
        return {
            "revision": store.project.revision,
            "snippets": [_snippet_json(s) for s in store.project.for_movie(movie_id)],
        }

    @app.patch("/snippets/{snippet_id}")
    def patch_snippet(snippet_id: str, patch: SnippetPatch):
        fields = {
            k: v
            for k, v in patch.model_dump().items()
            if k != "expected_revision" and v is not None
        }
        try:
            snippet, revision = store.patch_snippet(snippet_id, fields, patch.expected_revision)
        except RevisionConflict as exc:
            raise HTTPException(
                status_code=409,
                detail={"error": str(exc), "revision": exc.actual},
            ) from None
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown snippet {snippet_id}") from None
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return {"revision": revision, "snippet": _snippet_json(snippet)}

    @app.get("/movies/{movie_id}/difference_curve")
    def get_curve(movie_id: str, points: int = Query(default=2000, ge=2, le=20000)):
        movie = store.project.movies.get(movie_id)
        if movie is None:
            raise HTTPException(status_code=404, detail=f"unknown movie {movie_id}")
        curve_path = movie.media.get("difference_curve")
        if not curve_path:
            raise HTTPException(status_code=404, detail="no difference curve for this movie")
        path = Path(curve_path)
        if not path.is_absolute():
            path = store.path.parent / path
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"curve file missing: {path}")
        payload = json.loads(path.read_text("utf-8"))
        return _downsample_curve(payload, points)

    @app.get("/pairs")
    def get_pairs(movie: str, min_iou: float = Query(default=0.75, ge=0.0, le=1.0)):
        if movie not in store.project.movies:
            raise HTTPException(status_code=404, detail=f"unknown movie {movie}")
        snippets = store.project.for_movie(movie)
        dvs = [s for s in snippets if s.source == "dvs"]
        script = [s for s in snippets if s.source == "script"]
        pairs = corpus.pair_overlapping(dvs, script, min_iou=min_iou)
        return {
            "revision": store.project.revision,
            "pairs": [{"dvs_id": d, "script_id": s, "iou": v} for d, s, v in pairs],
        }

    @app.get("/stats")
    def get_stats():
        stats = corpus.compute_stats(store.project)
        def row(st):
            return {
                "movies": st.movies,
                "words_before": st.words_before,
                "words_after": st.words_after,
                "sentences": st.sentences,
                "avg_clip_s": st.avg_clip_s,
                "total_h": st.total_h,
            }
        return {
            "revision": store.project.revision,
            "per_source": {k: row(v) for k, v in stats.per_source.items()},
            "total": row(stats.total),
        }

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
