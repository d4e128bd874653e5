import { ApiError, type ApiClient } from "../api";
import type { Store } from "../state";
import type { SearchMode } from "../types";

export interface SearchBar {
  /** Run the current query; exposed for tests and the submit handler. */
  run(): Promise<void>;
}

export function createSearchBar(container: HTMLElement, api: ApiClient, store: Store): SearchBar {
  const doc = container.ownerDocument;

  const form = doc.createElement("form");
  form.className = "search-bar";
  const input = doc.createElement("input");
  input.type = "search";
  input.placeholder = "search histograms…";
  input.dataset.testid = "search-input";
  const mode = doc.createElement("select");
  mode.dataset.testid = "search-mode";
  for (const value of ["exact", "semantic"] as const) {
    const option = doc.createElement("option");
    option.value = value;
    option.textContent = value;
    mode.appendChild(option);
  }
  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.textContent = "search";
  submit.dataset.testid = "search-submit";
  const clear = doc.createElement("button");
  clear.type = "button";
  clear.textContent = "clear";
  clear.dataset.testid = "search-clear";
  form.append(input, mode, submit, clear);

  const banner = doc.createElement("div");
  banner.className = "error-banner";
  banner.dataset.testid = "search-error";
  banner.hidden = true;

  container.append(form, banner);

  async function run(): Promise<void> {
    banner.hidden = true;
    const query = input.value.trim();
    store.update({ searchMode: mode.value as SearchMode });
    if (query === "") {
      store.clearSearch();
      return;
    }
    try {
      const results = await api.search(query, mode.value as SearchMode);
      store.applySearch(query, results);
    } catch (error) {
      // provider failures get a banner; the panel itself is left alone,
      // which keeps "error" visually distinct from "no results"
      banner.textContent =
        error instanceof ApiError
          ? `search failed (${error.status}): ${error.message}`
          : `search failed: ${String(error)}`;
      banner.hidden = false;
    }
  }

  form.onsubmit = (event) => {
    event.preventDefault();
    void run();
  };
  clear.onclick = () => {
    input.value = "";
    banner.hidden = true;
    store.clearSearch();
  };

  return { run };
}
