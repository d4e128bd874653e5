import { ApiClient } from "./api";
import { createCreateDialog } from "./components/createDialog";
import { createExampleTable } from "./components/exampleTable";
import { createHistogramPanel } from "./components/histogramPanel";
import { createSearchBar } from "./components/searchBar";
import { Store } from "./state";

export async function boot(root: HTMLElement, api: ApiClient): Promise<Store> {
  const doc = root.ownerDocument;
  const store = new Store();

  const header = doc.createElement("header");
  const title = doc.createElement("h1");
  title.textContent = "texthist";
  const searchHost = doc.createElement("div");
  const dialogHost = doc.createElement("div");
  header.append(title, searchHost, dialogHost);

  const main = doc.createElement("main");
  const tableHost = doc.createElement("section");
  tableHost.className = "examples-pane";
  const panelHost = doc.createElement("section");
  panelHost.className = "histograms-pane";
  main.append(tableHost, panelHost);
  root.append(header, main);

  createSearchBar(searchHost, api, store);
  createCreateDialog(dialogHost, api, store);
  const panel = createHistogramPanel(panelHost, store);
  const table = createExampleTable(tableHost, api, store);

  // refetch the table only when its inputs change; the panel re-renders
  // from the already-loaded payload
  let lastTableKey = "";
  store.subscribe((state) => {
    const key = JSON.stringify([state.selected?.entityId ?? null, state.offset, state.limit]);
    if (key !== lastTableKey) {
      lastTableKey = key;
      void table.refresh();
    }
  });

  store.setHistograms(await api.histograms("total"));
  await table.refresh();
  panel.render();
  return store;
}

declare global {
  interface Window {
    __texthistBooted?: Promise<Store>;
  }
}

if (typeof document !== "undefined" && document.getElementById("app") !== null) {
  window.__texthistBooted = boot(document.getElementById("app")!, new ApiClient(""));
}
