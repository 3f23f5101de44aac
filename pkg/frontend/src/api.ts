import type {
  CurvePayload,
  Pair,
  ProjectState,
  Snippet,
  SnippetPatch,
  StatsPayload,
} from "./types.js";

/** PATCH rejected because someone else moved the project forward. */
export class ConflictError extends Error {
  constructor(public readonly serverRevision: number) {
    super(`stale revision; server is at ${serverRevision}`);
    this.name = "ConflictError";
  }
}

export class ApiError extends Error {
  constructor(public readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client. All mutations carry the expected revision so the
 *  server can refuse silent overwrites. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (response.status === 409) {
      const body = await response.json();
      throw new ConflictError(body.detail?.revision ?? -1);
    }
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = await response.json();
        detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getProject(): Promise<ProjectState> {
    return this.request<ProjectState>("/project");
  }

  getSnippets(movieId: string): Promise<{ revision: number; snippets: Snippet[] }> {
    return this.request(`/movies/${encodeURIComponent(movieId)}/snippets`);
  }

  patchSnippet(
    snippetId: string,
    patch: SnippetPatch,
    expectedRevision: number,
  ): Promise<{ revision: number; snippet: Snippet }> {
    return this.request(`/snippets/${encodeURIComponent(snippetId)}`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ expected_revision: expectedRevision, ...patch }),
    });
  }

  getCurve(movieId: string, points = 2000): Promise<CurvePayload> {
    return this.request(
      `/movies/${encodeURIComponent(movieId)}/difference_curve?points=${points}`,
    );
  }

  getPairs(movieId: string, minIou: number): Promise<{ revision: number; pairs: Pair[] }> {
    return this.request(
      `/pairs?movie=${encodeURIComponent(movieId)}&min_iou=${minIou}`,
    );
  }

  getStats(): Promise<StatsPayload> {
    return this.request("/stats");
  }
}
