import type { CurvePayload, Snippet } from "./types.js";

/** Pure geometry for the timeline: the canvas renderer and the drag handler
 *  both go through these, so the math is testable without a DOM. */

export interface Viewport {
  offsetS: number;
  secondsPerPx: number;
  widthPx: number;
}

export function timeToPx(timeS: number, vp: Viewport): number {
  return (timeS - vp.offsetS) / vp.secondsPerPx;
}

export function pxToTime(px: number, vp: Viewport): number {
  return vp.offsetS + px * vp.secondsPerPx;
}

export interface BarLayout {
  snippetId: string;
  x: number;
  width: number;
  lane: 0 | 1; // dvs on top, script below
  color: string;
}

const TAG_COLORS: Record<string, string> = {
  keep: "#2e7d32",
  intro_ending: "#9e9e9e",
  screen_text: "#8d6e63",
  irrelevant: "#c62828",
  audio_related: "#6a1b9a",
};

export function barColor(snippet: Snippet): string {
  if (snippet.tag !== "keep") return TAG_COLORS[snippet.tag] ?? "#9e9e9e";
  return snippet.source === "dvs" ? TAG_COLORS.keep : "#1565c0";
}

export function layoutBars(snippets: Snippet[], vp: Viewport): BarLayout[] {
  const bars: BarLayout[] = [];
  for (const s of snippets) {
    const x = timeToPx(s.start_s, vp);
    const width = (s.end_s - s.start_s) / vp.secondsPerPx;
    if (x + width < 0 || x > vp.widthPx) continue;
    bars.push({
      snippetId: s.id,
      x,
      width: Math.max(width, 1),
      lane: s.source === "dvs" ? 0 : 1,
      color: barColor(s),
    });
  }
  return bars;
}

export type DragEdge = "start" | "end";

export interface DragState {
  snippetId: string;
  edge: DragEdge;
  originalStart: number;
  originalEnd: number;
}

export const MIN_INTERVAL_S = 0.05;

/** New interval from a drag, clamped so start stays strictly before end
 *  (mirror of the server-side invariant; the PATCH would be rejected
 *  anyway, the guard just keeps the UI honest while dragging). */
export function dragInterval(
  drag: DragState,
  pointerPx: number,
  vp: Viewport,
): { start_s: number; end_s: number } {
  const t = pxToTime(pointerPx, vp);
  if (drag.edge === "start") {
    const start = Math.max(0, Math.min(t, drag.originalEnd - MIN_INTERVAL_S));
    return { start_s: start, end_s: drag.originalEnd };
  }
  const end = Math.max(t, drag.originalStart + MIN_INTERVAL_S);
  return { start_s: drag.originalStart, end_s: end };
}

/** Which edge (if any) a pointer press at barX grabs; edges are 6 px wide. */
export function hitTestEdge(bar: BarLayout, px: number, tolerance = 6): DragEdge | null {
  if (Math.abs(px - bar.x) <= tolerance) return "start";
  if (Math.abs(px - (bar.x + bar.width)) <= tolerance) return "end";
  return null;
}

/** Polyline points for the server-provided curve; no resampling beyond what
 *  the API already did. */
export function curvePoints(
  curve: CurvePayload,
  vp: Viewport,
  heightPx: number,
): Array<[number, number]> {
  const maxScore = Math.max(...curve.scores, 1e-12);
  const points: Array<[number, number]> = [];
  for (let i = 0; i < curve.times.length; i++) {
    const x = timeToPx(curve.times[i], vp);
    if (x < -1 || x > vp.widthPx + 1) continue;
    const y = heightPx - (curve.scores[i] / maxScore) * heightPx;
    points.push([x, y]);
  }
  return points;
}
