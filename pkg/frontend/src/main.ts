/** DOM wiring: binds the controls to the state machine and paints reports. */

import { ApiClient } from "./api.js";
import { AppController } from "./app.js";
import { ByteIndex } from "./byteOffsets.js";
import { RequestScheduler } from "./scheduler.js";
import { buildSegments, hitSegments, type Segment } from "./segments.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const documentInput = el<HTMLTextAreaElement>("document-input");
const uploadButton = el<HTMLButtonElement>("upload");
const queryInput = el<HTMLInputElement>("query");
const unbiasedToggle = el<HTMLInputElement>("unbiased");
const windowInput = el<HTMLInputElement>("window-size");
const poolingSelect = el<HTMLSelectElement>("pooling");
const underlineSlider = el<HTMLInputElement>("underline-pct");
const highlightSlider = el<HTMLInputElement>("highlight-pct");
const underlineValue = el<HTMLSpanElement>("underline-value");
const highlightValue = el<HTMLSpanElement>("highlight-value");
const modeSelect = el<HTMLSelectElement>("mode");
const topKInput = el<HTMLInputElement>("top-k");
const exportButton = el<HTMLButtonElement>("export-card");
const view = el<HTMLDivElement>("document-view");
const hitsList = el<HTMLOListElement>("hits");
const statusLine = el<HTMLParagraphElement>("status");
const errorLine = el<HTMLParagraphElement>("error");

function browserDownload(filename: string, content: string, mimeType: string): void {
  const blob = new Blob([content], { type: mimeType });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

const controller = new AppController(
  new ApiClient(""),
  new RequestScheduler(150),
  browserDownload,
);

function paint(segments: Segment[]): void {
  view.replaceChildren();
  for (const segment of segments) {
    if (segment.tier === "plain") {
      view.append(document.createTextNode(segment.text));
    } else {
      const span = document.createElement("span");
      span.className = segment.tier;
      span.textContent = segment.text;
      view.append(span);
    }
  }
}

controller.onChange((state) => {
  underlineValue.textContent = `${state.underlinePct}%`;
  highlightValue.textContent = `${state.highlightPct}%`;
  exportButton.disabled = !controller.exportEnabled;
  errorLine.textContent = state.error ?? "";
  errorLine.hidden = state.error === null;

  const bits: string[] = [];
  if (state.documentId !== null) bits.push(`${state.tokenCount} tokens`);
  if (state.pending) bits.push("updating…");
  else if (state.cacheHit !== null) bits.push(state.cacheHit ? "cached" : "rescored");
  statusLine.textContent = bits.join(" · ");

  if (state.mode === "summarize") {
    hitsList.hidden = true;
    paint(buildSegments(state.documentText, state.spans ?? []));
  } else {
    paint(hitSegments(state.documentText, state.hits ?? []));
    hitsList.hidden = false;
    hitsList.replaceChildren();
    const index = new ByteIndex(state.documentText);
    for (const hit of state.hits ?? []) {
      const item = document.createElement("li");
      item.textContent = `score ${hit.score.toFixed(4)} — ${index.slice(hit.byte_start, hit.byte_end)}`;
      hitsList.append(item);
    }
  }
});

uploadButton.addEventListener("click", () => {
  void controller.uploadDocument(documentInput.value);
});
queryInput.addEventListener("input", () => controller.setQuery(queryInput.value));
unbiasedToggle.addEventListener("change", () => {
  queryInput.disabled = unbiasedToggle.checked;
  controller.setUnbiased(unbiasedToggle.checked);
});
windowInput.addEventListener("change", () => controller.setWindow(Number(windowInput.value)));
poolingSelect.addEventListener("change", () => controller.setPooling(poolingSelect.value));
underlineSlider.addEventListener("input", () =>
  controller.setUnderlinePct(Number(underlineSlider.value)),
);
highlightSlider.addEventListener("input", () =>
  controller.setHighlightPct(Number(highlightSlider.value)),
);
topKInput.addEventListener("change", () => controller.setTopK(Number(topKInput.value)));
modeSelect.addEventListener("change", () => {
  const searching = modeSelect.value === "search";
  topKInput.disabled = !searching;
  controller.setMode(searching ? "search" : "summarize");
});
exportButton.addEventListener("click", () => {
  void controller.exportCard();
});
