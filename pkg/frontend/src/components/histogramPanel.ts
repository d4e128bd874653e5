import { sortHistograms } from "../sort";
import type { Store } from "../state";
import type { Histogram, SortKey } from "../types";

const VISIBLE_BAR_CAP = 12;

export interface HistogramPanel {
  render(): void;
}

export function createHistogramPanel(container: HTMLElement, store: Store): HistogramPanel {
  const doc = container.ownerDocument;
  const expanded = new Set<string>();

  const header = doc.createElement("div");
  header.className = "panel-header";
  const title = doc.createElement("h2");
  title.textContent = "Histograms";
  const sortSelect = doc.createElement("select");
  sortSelect.dataset.testid = "sort-select";
  for (const [value, text] of [
    ["total", "sort by total count"],
    ["entropy", "sort by entropy"],
  ]) {
    const option = doc.createElement("option");
    option.value = value;
    option.textContent = text;
    sortSelect.appendChild(option);
  }
  // client-side re-sort: the full payload is already loaded
  sortSelect.onchange = () => store.update({ sortKey: sortSelect.value as SortKey });
  header.append(title, sortSelect);

  const list = doc.createElement("div");
  list.className = "histogram-list";
  list.dataset.testid = "histogram-list";
  container.append(header, list);

  function renderBar(histogram: Histogram, maxCount: number, bucketIndex: number): HTMLElement {
    const bucket = histogram.buckets[bucketIndex];
    const row = doc.createElement("button");
    row.type = "button";
    row.className = "bar-row";
    row.dataset.testid = "bar";
    row.dataset.entityId = String(bucket.entity_id);
    const isSelected = store.state.selected?.entityId === bucket.entity_id;
    if (isSelected) row.classList.add("selected");

    const fill = doc.createElement("span");
    fill.className = "bar-fill";
    fill.style.width = `${Math.max(2, Math.round((bucket.count / maxCount) * 100))}%`;
    const label = doc.createElement("span");
    label.className = "bar-label";
    label.textContent = bucket.surface;
    const count = doc.createElement("span");
    count.className = "bar-count";
    count.textContent = String(bucket.count);
    row.append(fill, label, count);

    row.onclick = () => {
      if (isSelected) store.clearSelection();
      else store.selectEntity(bucket.entity_id, bucket.surface);
    };
    return row;
  }

  function renderHistogram(histogram: Histogram): HTMLElement {
    const card = doc.createElement("div");
    card.className = "histogram-card";
    card.dataset.testid = "histogram";
    card.dataset.histogramId = histogram.id;

    const head = doc.createElement("div");
    head.className = "histogram-head";
    const label = doc.createElement("strong");
    label.textContent = histogram.label;
    head.appendChild(label);
    if (histogram.source === "user") {
      const badge = doc.createElement("span");
      badge.className = "badge badge-user";
      badge.textContent = "user";
      head.appendChild(badge);
    }
    const kind = store.state.badges[histogram.id];
    if (kind !== undefined) {
      const badge = doc.createElement("span");
      badge.className = `badge badge-${kind}`;
      badge.dataset.testid = "match-badge";
      badge.textContent = kind;
      head.appendChild(badge);
    }
    const total = doc.createElement("span");
    total.className = "histogram-total";
    total.textContent = `${histogram.total_count} hits`;
    head.appendChild(total);
    card.appendChild(head);

    const maxCount = Math.max(...histogram.buckets.map((b) => b.count));
    const cap = expanded.has(histogram.id) ? histogram.buckets.length : VISIBLE_BAR_CAP;
    histogram.buckets.slice(0, cap).forEach((_, i) => {
      card.appendChild(renderBar(histogram, maxCount, i));
    });
    if (histogram.buckets.length > VISIBLE_BAR_CAP) {
      const toggle = doc.createElement("button");
      toggle.type = "button";
      toggle.className = "show-more";
      toggle.dataset.testid = "show-more";
      toggle.textContent = expanded.has(histogram.id)
        ? "show fewer"
        : `show all ${histogram.buckets.length}`;
      toggle.onclick = () => {
        if (expanded.has(histogram.id)) expanded.delete(histogram.id);
        else expanded.add(histogram.id);
        render();
      };
      card.appendChild(toggle);
    }
    return card;
  }

  function render(): void {
    list.textContent = "";
    const visible = sortHistograms(store.visibleHistograms(), store.state.sortKey);
    sortSelect.value = store.state.sortKey;
    if (visible.length === 0) {
      const empty = doc.createElement("p");
      empty.className = "empty-state";
      empty.dataset.testid = "panel-empty";
      empty.textContent =
        store.state.visibleIds !== null
          ? "no histograms match this search"
          : "no histograms in this artifact";
      list.appendChild(empty);
      return;
    }
    for (const histogram of visible) list.appendChild(renderHistogram(histogram));
  }

  store.subscribe(render);
  return { render };
}
