import type { Histogram, SortKey } from "./types";

function compareStrings(a: string, b: string): number {
  // plain code-unit comparison, mirroring the server's tie rule
  return a < b ? -1 : a > b ? 1 : 0;
}

/** Descending by the chosen metric; ties by label asc, then id asc. */
export function sortHistograms(histograms: Histogram[], key: SortKey): Histogram[] {
  const metric = (h: Histogram) => (key === "total" ? h.total_count : h.entropy);
  return [...histograms].sort(
    (a, b) =>
      metric(b) - metric(a) ||
      compareStrings(a.label, b.label) ||
      compareStrings(a.id, b.id),
  );
}
