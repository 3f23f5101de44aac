import { ApiClient } from "./api.js";
import { formatClock, formatHours, formatIou, formatSeconds } from "./format.js";
import { actionForKey } from "./keyboard.js";
import { CurationStore } from "./store.js";
import {
  BarLayout,
  DragState,
  Viewport,
  curvePoints,
  dragInterval,
  hitTestEdge,
  layoutBars,
  timeToPx,
} from "./timeline.js";
import type { CurvePayload, Snippet } from "./types.js";

const api = new ApiClient("");
const store = new CurationStore(api);

const els = {
  canvas: document.getElementById("timeline") as HTMLCanvasElement,
  movieSelect: document.getElementById("movie-select") as HTMLSelectElement,
  conflictBanner: document.getElementById("conflict-banner") as HTMLDivElement,
  reloadButton: document.getElementById("reload-button") as HTMLButtonElement,
  snippetPanel: document.getElementById("snippet-panel") as HTMLDivElement,
  snippetList: document.getElementById("snippet-list") as HTMLDivElement,
  statsView: document.getElementById("stats-view") as HTMLDivElement,
  pairsView: document.getElementById("pairs-view") as HTMLDivElement,
  iouSlider: document.getElementById("iou-slider") as HTMLInputElement,
  iouValue: document.getElementById("iou-value") as HTMLSpanElement,
  status: document.getElementById("status") as HTMLDivElement,
};

let curve: CurvePayload | null = null;
let drag: DragState | null = null;
let dragPreview: { start_s: number; end_s: number } | null = null;
let bars: BarLayout[] = [];

const LANE_TOP = [46, 78];
const BAR_HEIGHT = 24;
const CURVE_HEIGHT = 40;

function viewport(): Viewport {
  return {
    offsetS: store.view.zoom.offsetS,
    secondsPerPx: store.view.zoom.secondsPerPx,
    widthPx: els.canvas.width,
  };
}

function setStatus(text: string, isError = false): void {
  els.status.textContent = text;
  els.status.className = isError ? "status error" : "status";
}

function render(): void {
  const movie = store.view.activeMovie;
  const ctx = els.canvas.getContext("2d");
  if (!ctx || !movie) return;
  const vp = viewport();
  ctx.clearRect(0, 0, els.canvas.width, els.canvas.height);

  if (curve) {
    ctx.strokeStyle = "#90a4ae";
    ctx.beginPath();
    for (const [x, y] of curvePoints(curve, vp, CURVE_HEIGHT)) {
      ctx.lineTo(x, y);
    }
    ctx.stroke();
  }

  const snippets = store.movieSnippets(movie).map((s) => {
    if (dragPreview && drag && s.id === drag.snippetId) {
      return { ...s, start_s: dragPreview.start_s, end_s: dragPreview.end_s };
    }
    return s;
  });
  bars = layoutBars(snippets, vp);
  for (const bar of bars) {
    ctx.fillStyle = bar.color;
    ctx.globalAlpha = bar.snippetId === store.view.selectedSnippet ? 1.0 : 0.7;
    ctx.fillRect(bar.x, LANE_TOP[bar.lane], bar.width, BAR_HEIGHT);
  }
  ctx.globalAlpha = 1.0;

  // time ruler
  ctx.fillStyle = "#555";
  ctx.font = "10px sans-serif";
  const stepS = Math.max(1, Math.round((vp.secondsPerPx * 120) / 10) * 10);
  for (let t = Math.ceil(vp.offsetS / stepS) * stepS; ; t += stepS) {
    const x = timeToPx(t, vp);
    if (x > vp.widthPx) break;
    ctx.fillText(formatClock(t), x + 2, 12);
    ctx.fillRect(x, 14, 1, 6);
  }

  renderConflict();
  renderSnippetPanel();
  renderSnippetList();
  void renderStats();
}

function renderConflict(): void {
  const conflict = store.view.conflict;
  if (conflict) {
    els.conflictBanner.style.display = "block";
    els.conflictBanner.querySelector("span")!.textContent =
      `Project changed on the server (revision ${conflict.serverRevision}). ` +
      `Your ${store.view.pendingEdits.length} pending edit(s) were NOT applied.`;
  } else {
    els.conflictBanner.style.display = "none";
  }
}

function snippetRow(s: Snippet): string {
  const lock = s.locked ? " \u{1F512}" : "";
  return (
    `<b>${s.id}</b> [${formatSeconds(s.start_s)} → ${formatSeconds(s.end_s)}] ` +
    `<i>${s.tag}</i>${lock}<br>${s.sentence}`
  );
}

function playerLink(s: Snippet): string {
  // optional deep link into an external player; the template comes from the
  // movie's media map, e.g. "vlc://open?url=file.mkv&t={start}"
  const template = store.project?.movies[s.movie_id]?.media["player_url_template"];
  if (!template) return "";
  const url = template
    .replace("{start}", String(Math.floor(s.start_s)))
    .replace("{end}", String(Math.ceil(s.end_s)));
  return ` <a href="${url}">play</a>`;
}

function renderSnippetPanel(): void {
  const id = store.view.selectedSnippet;
  const s = id ? store.snippet(id) : undefined;
  els.snippetPanel.innerHTML = s
    ? snippetRow(s) +
      playerLink(s) +
      `<div class="hint">keys: a intro/end &middot; b screen text &middot; c irrelevant &middot; ` +
      `d audio &middot; k keep &middot; l lock</div>`
    : "<i>No snippet selected.</i>";
}

function renderSnippetList(): void {
  const movie = store.view.activeMovie;
  if (!movie) return;
  els.snippetList.innerHTML = store
    .movieSnippets(movie)
    .map(
      (s) =>
        `<div class="row ${s.id === store.view.selectedSnippet ? "selected" : ""}" ` +
        `data-id="${s.id}">${snippetRow(s)}</div>`,
    )
    .join("");
  for (const row of els.snippetList.querySelectorAll<HTMLDivElement>(".row")) {
    row.onclick = () => store.select(row.dataset.id ?? null);
  }
}

async function renderStats(): Promise<void> {
  // stats always come from the server (single source of truth); the local
  // kept-count preview just makes tagging feel immediate
  const movie = store.view.activeMovie;
  if (!movie) return;
  const localKept = store.keptSnippets(movie).length;
  try {
    const stats = await api.getStats();
    const rows = Object.entries(stats.per_source)
      .map(
        ([source, st]) =>
          `<tr><td>${source}</td><td>${st.sentences}</td><td>${st.words_after}</td>` +
          `<td>${formatSeconds(st.avg_clip_s)}</td><td>${formatHours(st.total_h)}</td></tr>`,
      )
      .join("");
    els.statsView.innerHTML =
      `<table><tr><th>source</th><th>sentences</th><th>words</th>` +
      `<th>avg clip</th><th>total</th></tr>${rows}</table>` +
      `<div class="hint">kept in view: ${localKept}</div>`;
  } catch {
    els.statsView.innerHTML = `<div class="hint">stats unavailable; kept in view: ${localKept}</div>`;
  }
}

async function renderPairs(): Promise<void> {
  const movie = store.view.activeMovie;
  if (!movie) return;
  const minIou = Number(els.iouSlider.value);
  els.iouValue.textContent = formatIou(minIou);
  try {
    const body = await api.getPairs(movie, minIou);
    els.pairsView.innerHTML = body.pairs
      .map((p) => {
        const dvs = store.snippet(p.dvs_id);
        const script = store.snippet(p.script_id);
        return (
          `<div class="pair"><span class="badge">IoU ${formatIou(p.iou)}</span>` +
          `<div class="dvs">${dvs?.sentence ?? p.dvs_id}</div>` +
          `<div class="script">${script?.sentence ?? p.script_id}</div></div>`
        );
      })
      .join("");
  } catch (error) {
    els.pairsView.innerHTML = `<div class="hint">pairs unavailable: ${String(error)}</div>`;
  }
}

function barAt(px: number, py: number): BarLayout | null {
  for (const bar of bars) {
    const top = LANE_TOP[bar.lane];
    if (py >= top && py <= top + BAR_HEIGHT && px >= bar.x - 6 && px <= bar.x + bar.width + 6) {
      return bar;
    }
  }
  return null;
}

function wireTimeline(): void {
  els.canvas.addEventListener("pointerdown", (event) => {
    const rect = els.canvas.getBoundingClientRect();
    const px = event.clientX - rect.left;
    const py = event.clientY - rect.top;
    const bar = barAt(px, py);
    if (!bar) return;
    store.select(bar.snippetId);
    const snippet = store.snippet(bar.snippetId);
    if (!snippet || snippet.locked) return;
    const edge = hitTestEdge(bar, px);
    if (edge) {
      drag = {
        snippetId: bar.snippetId,
        edge,
        originalStart: snippet.start_s,
        originalEnd: snippet.end_s,
      };
      els.canvas.setPointerCapture(event.pointerId);
    }
  });

  els.canvas.addEventListener("pointermove", (event) => {
    if (!drag) return;
    const rect = els.canvas.getBoundingClientRect();
    dragPreview = dragInterval(drag, event.clientX - rect.left, viewport());
    render();
  });

  els.canvas.addEventListener("pointerup", async () => {
    if (!drag || !dragPreview) {
      drag = null;
      return;
    }
    const { snippetId } = drag;
    const patch = { start_s: dragPreview.start_s, end_s: dragPreview.end_s };
    drag = null;
    dragPreview = null;
    try {
      const applied = await store.submitPatch(snippetId, patch);
      setStatus(applied ? `Saved interval for ${snippetId}` : "Conflict; see banner", !applied);
    } catch (error) {
      setStatus(String(error), true);
      render();
    }
  });
}

function wireKeyboard(): void {
  document.addEventListener("keydown", async (event) => {
    if (event.target instanceof HTMLInputElement) return;
    const action = actionForKey(event.key);
    const id = store.view.selectedSnippet;
    if (!action || !id) return;
    const snippet = store.snippet(id);
    if (!snippet) return;
    try {
      if (action.kind === "tag") {
        await store.submitPatch(id, { tag: action.tag });
        setStatus(`Tagged ${id} as ${action.tag}`);
      } else {
        await store.submitPatch(id, { locked: !snippet.locked });
        setStatus(snippet.locked ? `Unlocked ${id}` : `Locked ${id}`);
      }
    } catch (error) {
      setStatus(String(error), true);
    }
  });
}

async function loadCurve(): Promise<void> {
  const movie = store.view.activeMovie;
  if (!movie) return;
  try {
    curve = await api.getCurve(movie, els.canvas.width);
  } catch {
    curve = null; // no curve attached for this movie
  }
}

async function switchMovie(movieId: string): Promise<void> {
  store.view.activeMovie = movieId;
  store.view.selectedSnippet = null;
  await loadCurve();
  render();
  void renderPairs();
}

async function boot(): Promise<void> {
  await store.load();
  const project = store.project!;
  els.movieSelect.innerHTML = Object.entries(project.movies)
    .map(([id, m]) => `<option value="${id}">${m.title || id}</option>`)
    .join("");
  els.movieSelect.onchange = () => void switchMovie(els.movieSelect.value);
  els.reloadButton.onclick = () => void store.reloadAfterConflict();
  els.iouSlider.oninput = () => void renderPairs();
  store.subscribe(render);
  wireTimeline();
  wireKeyboard();
  await switchMovie(store.view.activeMovie ?? els.movieSelect.value);
  setStatus(`Loaded project at revision ${project.revision}`);
}

void boot();
