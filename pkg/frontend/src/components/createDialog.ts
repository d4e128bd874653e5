import { ApiError, type ApiClient } from "../api";
import type { Store } from "../state";
import type { PendingCategory } from "../types";

export interface CreateDialog {
  open(): void;
  close(): void;
  /** Step 1-3: expand the typed category into suggestions. */
  submitCategory(): Promise<void>;
  /** Step 4-5: post the checked selection as a new histogram. */
  confirm(): Promise<void>;
}

export function createCreateDialog(
  container: HTMLElement,
  api: ApiClient,
  store: Store,
): CreateDialog {
  const doc = container.ownerDocument;
  let pending: PendingCategory | null = null;

  const openButton = doc.createElement("button");
  openButton.type = "button";
  openButton.textContent = "+ new histogram";
  openButton.dataset.testid = "dialog-open";

  const overlay = doc.createElement("div");
  overlay.className = "dialog-overlay";
  overlay.dataset.testid = "create-dialog";
  overlay.hidden = true;

  const dialog = doc.createElement("div");
  dialog.className = "dialog";

  const heading = doc.createElement("h3");
  heading.textContent = "Create a histogram";

  const categoryForm = doc.createElement("form");
  const categoryInput = doc.createElement("input");
  categoryInput.placeholder = "category, e.g. body parts";
  categoryInput.dataset.testid = "category-input";
  const categorySubmit = doc.createElement("button");
  categorySubmit.type = "submit";
  categorySubmit.textContent = "suggest entities";
  categorySubmit.dataset.testid = "category-submit";
  categoryForm.append(categoryInput, categorySubmit);

  const errorLine = doc.createElement("p");
  errorLine.className = "error-banner";
  errorLine.dataset.testid = "dialog-error";
  errorLine.hidden = true;

  const examplesLine = doc.createElement("p");
  examplesLine.className = "llm-examples";
  examplesLine.dataset.testid = "llm-examples";
  examplesLine.hidden = true;

  const suggestionBox = doc.createElement("div");
  suggestionBox.className = "suggestions";
  suggestionBox.dataset.testid = "suggestions";

  const labelInput = doc.createElement("input");
  labelInput.placeholder = "histogram label";
  labelInput.dataset.testid = "label-input";
  labelInput.hidden = true;

  const confirmButton = doc.createElement("button");
  confirmButton.type = "button";
  confirmButton.textContent = "create histogram";
  confirmButton.dataset.testid = "dialog-confirm";
  confirmButton.disabled = true;
  confirmButton.hidden = true;

  const closeButton = doc.createElement("button");
  closeButton.type = "button";
  closeButton.textContent = "cancel";
  closeButton.dataset.testid = "dialog-cancel";

  dialog.append(
    heading,
    categoryForm,
    errorLine,
    examplesLine,
    suggestionBox,
    labelInput,
    confirmButton,
    closeButton,
  );
  overlay.appendChild(dialog);
  container.append(openButton, overlay);

  function checkedIds(): number[] {
    const boxes = suggestionBox.querySelectorAll<HTMLInputElement>("input[type=checkbox]");
    const ids: number[] = [];
    boxes.forEach((box) => {
      if (box.checked) ids.push(Number(box.value));
    });
    return ids;
  }

  function updateConfirmGate(): void {
    // zero checked boxes or a blank label keeps confirm disabled
    confirmButton.disabled = checkedIds().length === 0 || labelInput.value.trim() === "";
  }

  function reset(): void {
    pending = null;
    categoryInput.value = "";
    labelInput.value = "";
    labelInput.hidden = true;
    confirmButton.hidden = true;
    confirmButton.disabled = true;
    examplesLine.hidden = true;
    errorLine.hidden = true;
    suggestionBox.textContent = "";
  }

  async function submitCategory(): Promise<void> {
    errorLine.hidden = true;
    const category = categoryInput.value.trim();
    if (category === "") return;
    try {
      pending = await api.createCategory(category);
    } catch (error) {
      errorLine.textContent =
        error instanceof ApiError
          ? `suggestion lookup failed (${error.status}): ${error.message}`
          : String(error);
      errorLine.hidden = false;
      return;
    }

    suggestionBox.textContent = "";
    if (pending.llm_examples.length > 0) {
      examplesLine.textContent = `generated examples: ${pending.llm_examples.join(", ")}`;
      examplesLine.hidden = false;
    } else {
      examplesLine.hidden = true;
    }

    if (pending.suggestions.length === 0) {
      const none = doc.createElement("p");
      none.className = "empty-state";
      none.dataset.testid = "no-suggestions";
      none.textContent = "nothing in the dataset matched this category";
      suggestionBox.appendChild(none);
      labelInput.hidden = true;
      confirmButton.hidden = true;
      return;
    }

    for (const suggestion of pending.suggestions) {
      const row = doc.createElement("label");
      row.className = "suggestion-row";
      row.dataset.testid = "suggestion";
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.value = String(suggestion.entity_id);
      box.onchange = updateConfirmGate;
      const text = doc.createElement("span");
      text.textContent = `${suggestion.surface} (${suggestion.similarity.toFixed(2)})`;
      row.append(box, text);
      suggestionBox.appendChild(row);
    }
    labelInput.value = pending.category;
    labelInput.hidden = false;
    confirmButton.hidden = false;
    updateConfirmGate();
  }

  async function confirm(): Promise<void> {
    if (pending === null || confirmButton.disabled) return;
    errorLine.hidden = true;
    try {
      const histogram = await api.createHistogram(
        pending.id,
        labelInput.value.trim(),
        checkedIds(),
      );
      // integrate without reload: append to the already-loaded payload
      store.addHistogram(histogram);
      close();
    } catch (error) {
      errorLine.textContent =
        error instanceof ApiError
          ? `creation failed (${error.status}): ${error.message}`
          : String(error);
      errorLine.hidden = false;
    }
  }

  function open(): void {
    reset();
    overlay.hidden = false;
  }

  function close(): void {
    overlay.hidden = true;
    reset();
  }

  openButton.onclick = open;
  closeButton.onclick = close;
  categoryForm.onsubmit = (event) => {
    event.preventDefault();
    void submitCategory();
  };
  confirmButton.onclick = () => void confirm();
  labelInput.oninput = updateConfirmGate;

  return { open, close, submitCategory, confirm };
}
