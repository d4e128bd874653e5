import type { ApiClient } from "../api";
import type { Store } from "../state";
import { highlight } from "../tokenize";

export interface ExampleTable {
  /** Fetch and render the page for the current state. */
  refresh(): Promise<void>;
}

export function createExampleTable(
  container: HTMLElement,
  api: ApiClient,
  store: Store,
): ExampleTable {
  const doc = container.ownerDocument;

  const header = doc.createElement("div");
  header.className = "panel-header";
  const title = doc.createElement("h2");
  title.textContent = "Examples";
  const filterChip = doc.createElement("span");
  filterChip.className = "filter-chip";
  filterChip.dataset.testid = "filter-chip";
  filterChip.hidden = true;
  const clearButton = doc.createElement("button");
  clearButton.type = "button";
  clearButton.textContent = "×";
  clearButton.dataset.testid = "clear-selection";
  clearButton.onclick = () => store.clearSelection();
  header.append(title, filterChip);

  const status = doc.createElement("div");
  status.className = "table-status";
  status.dataset.testid = "table-status";

  const body = doc.createElement("div");
  body.className = "example-rows";
  body.dataset.testid = "example-rows";

  const pager = doc.createElement("div");
  pager.className = "pager";
  const prev = doc.createElement("button");
  prev.type = "button";
  prev.textContent = "prev";
  prev.dataset.testid = "prev-page";
  const pageInfo = doc.createElement("span");
  pageInfo.dataset.testid = "page-info";
  const next = doc.createElement("button");
  next.type = "button";
  next.textContent = "next";
  next.dataset.testid = "next-page";
  pager.append(prev, pageInfo, next);

  container.append(header, status, body, pager);

  prev.onclick = () => {
    store.update({ offset: Math.max(0, store.state.offset - store.state.limit) });
  };
  next.onclick = () => {
    store.update({ offset: store.state.offset + store.state.limit });
  };

  function renderError(message: string): void {
    body.textContent = "";
    status.textContent = "";
    const banner = doc.createElement("div");
    banner.className = "error-banner";
    banner.dataset.testid = "table-error";
    banner.textContent = `could not load examples: ${message} `;
    const retry = doc.createElement("button");
    retry.type = "button";
    retry.textContent = "retry";
    retry.dataset.testid = "table-retry";
    retry.onclick = () => void refresh();
    banner.appendChild(retry);
    body.appendChild(banner);
  }

  async function refresh(): Promise<void> {
    const { selected, offset, limit } = store.state;
    const token = store.nextRequest();
    try {
      const page = await api.examples({
        offset,
        limit,
        entityId: selected?.entityId,
      });
      if (!store.isCurrent(token)) return; // a newer request superseded this one

      if (selected !== null) {
        filterChip.textContent = `entity: ${selected.surface} `;
        filterChip.appendChild(clearButton);
        filterChip.hidden = false;
      } else {
        filterChip.hidden = true;
      }

      body.textContent = "";
      const surfaceTokens = selected !== null ? selected.surface.split(" ") : [];
      for (const example of page.examples) {
        const row = doc.createElement("div");
        row.className = "example-row";
        row.dataset.testid = "example-row";
        const idCell = doc.createElement("span");
        idCell.className = "example-id";
        idCell.textContent = `#${example.id}`;
        const textCell = doc.createElement("span");
        textCell.className = "example-text";
        if (surfaceTokens.length > 0) {
          textCell.appendChild(highlight(example.text, surfaceTokens, doc));
        } else {
          textCell.textContent = example.text;
        }
        row.append(idCell, textCell);
        body.appendChild(row);
      }

      const first = page.total === 0 ? 0 : offset + 1;
      const last = Math.min(offset + limit, page.total);
      pageInfo.textContent = `${first}–${last} of ${page.total}`;
      status.textContent = selected !== null ? `${page.total} matching examples` : "";
      prev.disabled = offset === 0;
      next.disabled = offset + limit >= page.total;
    } catch (error) {
      if (!store.isCurrent(token)) return;
      renderError(error instanceof Error ? error.message : String(error));
    }
  }

  return { refresh };
}
