import { ApiClient, ConflictError } from "./api.js";
import type { ProjectState, Snippet, SnippetPatch } from "./types.js";

export interface PendingEdit {
  snippetId: string;
  patch: SnippetPatch;
}

export interface ViewState {
  activeMovie: string | null;
  zoom: { offsetS: number; secondsPerPx: number };
  selectedSnippet: string | null;
  pendingEdits: PendingEdit[];
  lastKnownRevision: number;
  conflict: { serverRevision: number } | null;
}

export function initialViewState(): ViewState {
  return {
    activeMovie: null,
    zoom: { offsetS: 0, secondsPerPx: 0.05 },
    selectedSnippet: null,
    pendingEdits: [],
    lastKnownRevision: -1,
    conflict: null,
  };
}

type Listener = () => void;

/** Single source of truth on the client: server state plus view state.
 *  Edits are optimistic only in the UI sense (kept as pending until the
 *  server confirms); the store never merges on conflict. */
export class CurationStore {
  project: ProjectState | null = null;
  view: ViewState = initialViewState();
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  async load(): Promise<void> {
    const project = await this.api.getProject();
    this.applyServerState(project);
  }

  applyServerState(project: ProjectState): void {
    if (this.project && project.revision < this.view.lastKnownRevision) {
      return; // never move backwards
    }
    this.project = project;
    this.view.lastKnownRevision = project.revision;
    this.view.conflict = null;
    if (!this.view.activeMovie) {
      this.view.activeMovie = Object.keys(project.movies)[0] ?? null;
    }
    this.notify();
  }

  snippet(id: string): Snippet | undefined {
    return this.project?.snippets.find((s) => s.id === id);
  }

  movieSnippets(movieId: string): Snippet[] {
    return this.project?.snippets.filter((s) => s.movie_id === movieId) ?? [];
  }

  select(snippetId: string | null): void {
    this.view.selectedSnippet = snippetId;
    this.notify();
  }

  /** Push one field change through the revision-checked PATCH.
   *
   * On success the confirmed snippet and revision replace local state. On a
   * 409 the edit stays in pendingEdits and the conflict banner state is set;
   * nothing is overwritten until the user reloads. */
  async submitPatch(snippetId: string, patch: SnippetPatch): Promise<boolean> {
    const target = this.snippet(snippetId);
    if (!target) throw new Error(`unknown snippet ${snippetId}`);
    if (target.locked && patch.locked === undefined) {
      throw new Error("snippet is locked; unlock it first");
    }
    const start = patch.start_s ?? target.start_s;
    const end = patch.end_s ?? target.end_s;
    if (!(start < end)) {
      throw new Error(`interval [${start}, ${end}) is empty`);
    }
    const edit: PendingEdit = { snippetId, patch };
    this.view.pendingEdits.push(edit);
    this.notify();
    try {
      const result = await this.api.patchSnippet(
        snippetId,
        patch,
        this.view.lastKnownRevision,
      );
      this.view.lastKnownRevision = result.revision;
      if (this.project) {
        this.project.revision = result.revision;
        const idx = this.project.snippets.findIndex((s) => s.id === snippetId);
        if (idx >= 0) this.project.snippets[idx] = result.snippet;
      }
      this.view.pendingEdits = this.view.pendingEdits.filter((e) => e !== edit);
      this.notify();
      return true;
    } catch (error) {
      if (error instanceof ConflictError) {
        this.view.conflict = { serverRevision: error.serverRevision };
        this.notify();
        return false;
      }
      this.view.pendingEdits = this.view.pendingEdits.filter((e) => e !== edit);
      this.notify();
      throw error;
    }
  }

  /** Reload after a conflict: server state wins, pending edits stay listed
   *  so the user can re-apply what still makes sense. */
  async reloadAfterConflict(): Promise<void> {
    const project = await this.api.getProject();
    this.project = project;
    this.view.lastKnownRevision = project.revision;
    this.view.conflict = null;
    this.notify();
  }

  /** Snippets the stats view should count: tag filtering applies instantly,
   *  before any server round-trip. */
  keptSnippets(movieId: string): Snippet[] {
    return this.movieSnippets(movieId).filter((s) => s.tag === "keep");
  }
}
