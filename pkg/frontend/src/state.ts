import type { Histogram, SearchMode, SearchResult, SortKey } from "./types";

export interface Selection {
  entityId: number;
  surface: string;
}

export interface ViewState {
  histograms: Histogram[];
  /** null: all histograms visible; otherwise restricted by search. */
  visibleIds: string[] | null;
  badges: Record<string, "exact" | "semantic">;
  selected: Selection | null;
  searchQuery: string;
  searchMode: SearchMode;
  sortKey: SortKey;
  offset: number;
  limit: number;
}

export function initialState(): ViewState {
  return {
    histograms: [],
    visibleIds: null,
    badges: {},
    selected: null,
    searchQuery: "",
    searchMode: "exact",
    sortKey: "total",
    offset: 0,
    limit: 25,
  };
}

type Listener = (state: ViewState) => void;

export class Store {
  state: ViewState = initialState();
  private listeners: Listener[] = [];
  private requestSeq = 0;

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Stale-response guard: later requests win, earlier ones are dropped. */
  nextRequest(): number {
    return ++this.requestSeq;
  }

  isCurrent(token: number): boolean {
    return token === this.requestSeq;
  }

  setHistograms(histograms: Histogram[]): void {
    this.update({ histograms });
  }

  /** Appending keeps everything else (selection, search) untouched. */
  addHistogram(histogram: Histogram): void {
    this.update({ histograms: [...this.state.histograms, histogram] });
  }

  selectEntity(entityId: number, surface: string): void {
    this.update({ selected: { entityId, surface }, offset: 0 });
  }

  clearSelection(): void {
    this.update({ selected: null, offset: 0 });
  }

  applySearch(query: string, results: SearchResult[]): void {
    const visibleIds = results.map((r) => r.histogram_id);
    const badges: Record<string, "exact" | "semantic"> = {};
    for (const r of results) badges[r.histogram_id] = r.match_kind;
    const partial: Partial<ViewState> = { searchQuery: query, visibleIds, badges };
    // a selected bucket must stay visible; drop the selection otherwise
    if (this.state.selected !== null) {
      const visible = new Set(visibleIds);
      const stillShown = this.state.histograms.some(
        (h) =>
          visible.has(h.id) &&
          h.buckets.some((b) => b.entity_id === this.state.selected!.entityId),
      );
      if (!stillShown) {
        partial.selected = null;
        partial.offset = 0;
      }
    }
    this.update(partial);
  }

  clearSearch(): void {
    this.update({ searchQuery: "", visibleIds: null, badges: {} });
  }

  visibleHistograms(): Histogram[] {
    if (this.state.visibleIds === null) return this.state.histograms;
    const byId = new Map(this.state.histograms.map((h) => [h.id, h]));
    return this.state.visibleIds
      .map((id) => byId.get(id))
      .filter((h): h is Histogram => h !== undefined);
  }
}
