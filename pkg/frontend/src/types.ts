/** Payload shapes of the curation API. The client renders these verbatim:
 *  every IoU, stat and curve value on screen originates from the server. */

export type Source = "dvs" | "script";

export type Tag =
  | "keep"
  | "intro_ending"
  | "screen_text"
  | "irrelevant"
  | "audio_related";

export interface Snippet {
  id: string;
  movie_id: string;
  start_s: number;
  end_s: number;
  sentence: string;
  source: Source;
  score: number | null;
  tag: Tag;
  locked: boolean;
}

export interface MovieMeta {
  title: string;
  duration_s: number | null;
  media: Record<string, string>;
}

export interface ProjectState {
  revision: number;
  movies: Record<string, MovieMeta>;
  snippets: Snippet[];
}

export interface SnippetPatch {
  start_s?: number;
  end_s?: number;
  sentence?: string;
  tag?: Tag;
  locked?: boolean;
}

export interface CurvePayload {
  times: number[];
  scores: number[];
}

export interface Pair {
  dvs_id: string;
  script_id: string;
  iou: number;
}

export interface SourceStats {
  movies: number;
  words_before: number;
  words_after: number;
  sentences: number;
  avg_clip_s: number;
  total_h: number;
}

export interface StatsPayload {
  revision: number;
  per_source: Record<string, SourceStats>;
  total: SourceStats;
}
