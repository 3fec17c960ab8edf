/**
 * Browser shell: binds the controller to the static page in
 * public/index.html.  Everything interesting lives in the controller and
 * the renderers; this file only moves strings into panels and reads
 * form values out of inputs.
 */
import { ApiClient } from "./client.js";
import { UiController } from "./controller.js";
import { renderJobHistory } from "./render.js";
import { Engine, Mode } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function bind(controller: UiController): void {
  const specText = el<HTMLTextAreaElement>("spec-text");
  const specPanel = el<HTMLElement>("spec-panel");
  const modelPanel = el<HTMLElement>("model-panel");
  const assumptionPanel = el<HTMLElement>("assumption-panel");
  const resultPanel = el<HTMLElement>("result-panel");
  const jobsPanel = el<HTMLElement>("jobs-panel");
  const moduleSelect = el<HTMLSelectElement>("module-select");
  const distanceInput = el<HTMLInputElement>("distance-input");
  const engineSelect = el<HTMLSelectElement>("engine-select");
  const modeSelect = el<HTMLSelectElement>("mode-select");

  el<HTMLButtonElement>("load-spec").addEventListener("click", async () => {
    const view = await controller.loadSpec(specText.value);
    specPanel.innerHTML = view.html;
    moduleSelect.innerHTML = controller.state.modules
      .map((m) => `<option value="${m}">${m}</option>`)
      .join("");
    if (controller.state.modules.length > 0) {
      controller.selectModule(controller.state.modules[0]!);
    }
  });

  el<HTMLButtonElement>("show-model").addEventListener("click", async () => {
    modelPanel.innerHTML = (await controller.showModel()).html;
  });

  moduleSelect.addEventListener("change", () => {
    const view = controller.selectModule(moduleSelect.value);
    if (!view.ok) assumptionPanel.innerHTML = view.html;
  });

  distanceInput.addEventListener("change", () => {
    const view = controller.setDistance(Number(distanceInput.value));
    if (!view.ok) assumptionPanel.innerHTML = view.html;
  });

  engineSelect.addEventListener("change", () => {
    controller.setEngine(engineSelect.value as Engine);
  });
  modeSelect.addEventListener("change", () => {
    controller.setMode(modeSelect.value as Mode);
  });

  el<HTMLButtonElement>("generate-assumption").addEventListener("click", async () => {
    assumptionPanel.innerHTML = (await controller.generateAssumption()).html;
  });

  el<HTMLButtonElement>("run-verification").addEventListener("click", async () => {
    const launched = await controller.runVerification();
    jobsPanel.innerHTML = launched.html;
    if (!launched.ok || launched.jobId === undefined) return;
    resultPanel.innerHTML = `<p class="pending">job ${launched.jobId} running...</p>`;
    const finished = await controller.awaitResult(launched.jobId);
    resultPanel.innerHTML = finished.html;
    jobsPanel.innerHTML = renderJobHistory(controller.state.jobs);
  });
}

if (typeof document !== "undefined") {
  const base = (window as { AGRMC_API?: string }).AGRMC_API ?? "";
  const controller = new UiController(new ApiClient(base));
  document.addEventListener("DOMContentLoaded", () => bind(controller));
}
