import { beforeEach, describe, expect, it } from "vitest";

import type { ApiClient } from "../src/api";
import { createCreateDialog } from "../src/components/createDialog";
import { Store } from "../src/state";
import type { Histogram, PendingCategory } from "../src/types";

const PENDING: PendingCategory = {
  id: "cat-1",
  category: "stds",
  llm_examples: ["hiv", "syphilis"],
  suggestions: [
    { entity_id: 3, surface: "hiv", similarity: 0.58 },
    { entity_id: 7, surface: "syphilis", similarity: 0.4 },
  ],
};

const CREATED: Histogram = {
  id: "user-1",
  label: "stds",
  source: "user",
  total_count: 9,
  entropy: 0.6,
  buckets: [{ entity_id: 3, surface: "hiv", count: 9 }],
};

function fakeApi(overrides: Partial<Record<string, unknown>> = {}): ApiClient {
  return {
    createCategory: async () => PENDING,
    createHistogram: async () => CREATED,
    ...overrides,
  } as unknown as ApiClient;
}

let host: HTMLElement;
let store: Store;

beforeEach(() => {
  document.body.innerHTML = "";
  host = document.createElement("div");
  document.body.appendChild(host);
  store = new Store();
});

function query<T extends HTMLElement>(selector: string): T {
  const el = host.querySelector<T>(selector);
  if (el === null) throw new Error(`missing ${selector}`);
  return el;
}

describe("create dialog", () => {
  it("shows generated examples and suggestion checkboxes after the category step", async () => {
    const dialog = createCreateDialog(host, fakeApi(), store);
    dialog.open();
    query<HTMLInputElement>("[data-testid=category-input]").value = "stds";
    await dialog.submitCategory();
    expect(query("[data-testid=llm-examples]").textContent).toContain("hiv, syphilis");
    expect(host.querySelectorAll("[data-testid=suggestion]").length).toBe(2);
    expect(query<HTMLInputElement>("[data-testid=label-input]").value).toBe("stds");
  });

  it("keeps confirm disabled until a box is checked, and re-disables at zero", async () => {
    const dialog = createCreateDialog(host, fakeApi(), store);
    dialog.open();
    query<HTMLInputElement>("[data-testid=category-input]").value = "stds";
    await dialog.submitCategory();

    const confirm = query<HTMLButtonElement>("[data-testid=dialog-confirm]");
    expect(confirm.disabled).toBe(true);

    const box = query<HTMLInputElement>("[data-testid=suggestion] input");
    box.checked = true;
    box.onchange!(new Event("change"));
    expect(confirm.disabled).toBe(false);

    box.checked = false;
    box.onchange!(new Event("change"));
    expect(confirm.disabled).toBe(true);
  });

  it("confirming posts the checked ids and appends the histogram to the store", async () => {
    const calls: unknown[] = [];
    const api = fakeApi({
      createHistogram: async (pendingId: string, label: string, ids: number[]) => {
        calls.push([pendingId, label, ids]);
        return CREATED;
      },
    });
    const dialog = createCreateDialog(host, api, store);
    dialog.open();
    query<HTMLInputElement>("[data-testid=category-input]").value = "stds";
    await dialog.submitCategory();
    const box = query<HTMLInputElement>("[data-testid=suggestion] input");
    box.checked = true;
    box.onchange!(new Event("change"));
    await dialog.confirm();

    expect(calls).toEqual([["cat-1", "stds", [3]]]);
    expect(store.state.histograms.map((h) => h.id)).toEqual(["user-1"]);
    expect(query<HTMLElement>("[data-testid=create-dialog]").hidden).toBe(true);
  });

  it("explains when nothing in the dataset matched", async () => {
    const api = fakeApi({
      createCategory: async () => ({ ...PENDING, suggestions: [] }),
    });
    const dialog = createCreateDialog(host, api, store);
    dialog.open();
    query<HTMLInputElement>("[data-testid=category-input]").value = "unknown";
    await dialog.submitCategory();
    expect(query("[data-testid=no-suggestions]").textContent).toContain("nothing");
    expect(query<HTMLButtonElement>("[data-testid=dialog-confirm]").hidden).toBe(true);
  });

  it("surfaces provider errors inline", async () => {
    const api = fakeApi({
      createCategory: async () => {
        throw new Error("provider down");
      },
    });
    const dialog = createCreateDialog(host, api, store);
    dialog.open();
    query<HTMLInputElement>("[data-testid=category-input]").value = "x";
    await dialog.submitCategory();
    const error = query("[data-testid=dialog-error]");
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain("provider down");
  });

  it("a blank label keeps confirm disabled", async () => {
    const dialog = createCreateDialog(host, fakeApi(), store);
    dialog.open();
    query<HTMLInputElement>("[data-testid=category-input]").value = "stds";
    await dialog.submitCategory();
    const box = query<HTMLInputElement>("[data-testid=suggestion] input");
    box.checked = true;
    box.onchange!(new Event("change"));
    const label = query<HTMLInputElement>("[data-testid=label-input]");
    label.value = "   ";
    label.oninput!(new Event("input"));
    expect(query<HTMLButtonElement>("[data-testid=dialog-confirm]").disabled).toBe(true);
  });
});
