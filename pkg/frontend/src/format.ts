/** Display formatting. IoU badges show exactly 3 decimals so they can be
 *  compared one-to-one against CLI output. */

export function formatIou(value: number): string {
  return value.toFixed(3);
}

export function formatSeconds(value: number): string {
  return `${value.toFixed(2)}s`;
}

export function formatHours(value: number): string {
  return `${value.toFixed(3)} h`;
}

export function formatClock(totalSeconds: number): string {
  const sign = totalSeconds < 0 ? "-" : "";
  const t = Math.abs(totalSeconds);
  const h = Math.floor(t / 3600);
  const m = Math.floor((t % 3600) / 60);
  const s = t % 60;
  return `${sign}${h > 0 ? h + ":" : ""}${String(m).padStart(2, "0")}:${s
    .toFixed(1)
    .padStart(4, "0")}`;
}
