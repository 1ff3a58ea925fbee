/**
 * DOM wiring: renders the controller's view into #app.
 */

import { ApiClient } from "./api.js";
import { SessionController, View } from "./controller.js";
import { Labels, loadLabels } from "./labels.js";
import { RatingDimension, RATING_RANGES } from "./schema.js";

const DIMENSIONS: RatingDimension[] = [
  "informativeness",
  "elocution",
  "interruption",
  "length_rating",
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

function renderRatings(
  labels: Labels,
  view: Extract<View, { screen: "task" }>,
  controller: SessionController,
): HTMLElement {
  const wrap = el("div", { class: "ratings" });
  for (const dimension of DIMENSIONS) {
    const [lo, hi] = RATING_RANGES[dimension];
    const block = el("fieldset", { class: "dimension" });
    block.appendChild(el("legend", {}, labels[dimension]?.title ?? dimension));
    for (let value = lo; value <= hi; value++) {
      const id = `${dimension}-${value}`;
      const input = el("input", {
        type: "radio",
        name: dimension,
        id,
        value: String(value),
      });
      if (view.form.ratings[dimension] === value) input.checked = true;
      input.addEventListener("change", () => controller.rate(dimension, value));
      const label = el(
        "label",
        { for: id },
        labels[dimension]?.options?.[String(value)] ?? String(value),
      );
      block.appendChild(input);
      block.appendChild(label);
    }
    wrap.appendChild(block);
  }
  return wrap;
}

function renderTask(
  root: HTMLElement,
  labels: Labels,
  api: ApiClient,
  view: Extract<View, { screen: "task" }>,
  controller: SessionController,
) {
  root.replaceChildren();
  root.appendChild(el("h2", {}, view.task.question));

  const audio = el("audio", { controls: "", src: api.audioUrl(view.task) });
  audio.addEventListener("play", () => {
    if (!view.form.audioPlayed) controller.audioPlayed();
  });
  root.appendChild(audio);
  if (!view.form.audioPlayed) {
    root.appendChild(el("p", { class: "hint" }, "Play the audio before rating."));
  }

  root.appendChild(renderRatings(labels, view, controller));

  const typedWrap = el("div", { class: "typed-key" });
  typedWrap.appendChild(el("label", { for: "typed-key" }, labels.typed_key?.title ?? "Answer"));
  const typed = el("input", { type: "text", id: "typed-key", value: view.form.typedKey });
  typed.addEventListener("input", () => controller.typeKey(typed.value));
  typedWrap.appendChild(typed);
  root.appendChild(typedWrap);

  for (const problem of view.errors) {
    root.appendChild(el("p", { class: "error" }, problem));
  }

  const submit = el("button", { id: "submit" }, view.form.submitting ? "Submitting..." : "Submit");
  (submit as HTMLButtonElement).disabled = !controller.submittable;
  submit.addEventListener("click", () => void controller.submit());
  root.appendChild(submit);
}

async function start() {
  const root = document.getElementById("app");
  if (!root) return;
  const labels = await loadLabels();
  const api = new ApiClient("");

  const workerId = window.localStorage.getItem("worker_id") ?? "";
  if (!workerId) {
    root.replaceChildren();
    root.appendChild(el("h2", {}, "Enter your worker id"));
    const input = el("input", { type: "text", id: "worker-id" });
    const go = el("button", {}, "Start");
    go.addEventListener("click", () => {
      if (input.value.trim()) {
        window.localStorage.setItem("worker_id", input.value.trim());
        void start();
      }
    });
    root.appendChild(input);
    root.appendChild(go);
    return;
  }

  const controller = new SessionController(api, workerId, (view) => {
    if (view.screen === "task") {
      renderTask(root, labels, api, view, controller);
    } else if (view.screen === "done") {
      root.replaceChildren(el("h2", {}, "All done - thank you!"));
    } else {
      root.replaceChildren();
      root.appendChild(el("h2", {}, "Connection problem"));
      root.appendChild(el("p", { class: "error" }, view.message));
      const retry = el("button", {}, "Retry");
      retry.addEventListener("click", () => void controller.loadNext());
      root.appendChild(retry);
    }
  });
  await controller.loadNext();
}

void start();
