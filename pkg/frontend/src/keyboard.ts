import type { Tag } from "./types.js";

/** One-keystroke curation: the four filter categories plus keep and lock.
 *  Throughput matters more than discoverability here; the mapping mirrors
 *  the category letters used during manual alignment. */
export const TAG_KEYS: Record<string, Tag> = {
  a: "intro_ending",
  b: "screen_text",
  c: "irrelevant",
  d: "audio_related",
  k: "keep",
};

export const LOCK_KEY = "l";

export type KeyAction = { kind: "tag"; tag: Tag } | { kind: "lock" } | null;

export function actionForKey(key: string): KeyAction {
  const lower = key.toLowerCase();
  if (lower in TAG_KEYS) return { kind: "tag", tag: TAG_KEYS[lower] };
  if (lower === LOCK_KEY) return { kind: "lock" };
  return null;
}
