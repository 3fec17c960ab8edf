/**
 * HTML renderers for every panel.  All of them are pure string
 * functions over backend payloads: no arithmetic, no reformatting of
 * numbers, so each displayed figure is the backend's own value.  That is
 * the property the integration suite pins by comparing rendered output
 * against intercepted response bodies.
 */
import {
  AgrResult,
  AssumptionResponse,
  CounterexampleDoc,
  ModelPage,
  MonoResult,
  SpecResponse,
  StrategyRecord,
  VerificationResult,
} from "./types.js";
import { renderSvg, RenderOptions } from "./graph.js";
import { strategyRows } from "./strategy.js";
import { JobEntry } from "./workspace.js";

export function esc(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderSpecReport(spec: SpecResponse): string {
  const groups = spec.groups
    .map((g) => {
      const goal = g.goal === null ? "" : ` <code>${esc(g.goal)}</code>`;
      return `<li><strong>${esc(g.name)}</strong> {${g.members.map(esc).join(", ")}}${goal}</li>`;
    })
    .join("");
  let totality: string;
  if (spec.report.total === null) {
    totality = `<p class="totality skipped">totality check skipped: ${esc(spec.report.skipped ?? "")}</p>`;
  } else if (spec.report.total) {
    totality = `<p class="totality ok">total: no gaps, stuttering never needed</p>`;
  } else {
    const gaps = (spec.report.gaps ?? [])
      .map(
        (g) =>
          `<li>${esc(g.module)} at ${esc(g.state)} under ${esc(
            Object.entries(g.inputs)
              .map(([k, v]) => `${k}=${v}`)
              .join(", "),
          )}</li>`,
      )
      .join("");
    totality =
      `<p class="totality gaps">${spec.report.gapCount} gap(s); the composition ` +
      `stutters there</p><ul class="gap-list">${gaps}</ul>`;
  }
  return (
    `<section class="spec-report" data-spec-id="${esc(spec.specId)}">` +
    `<p>modules: ${spec.modules.map(esc).join(", ")}</p>` +
    `<ul class="group-list">${groups}</ul>${totality}</section>`
  );
}

export function renderModelSummary(page: ModelPage): string {
  return (
    `<p class="model-summary">${page.totalStates} states / ` +
    `${page.totalTransitions} transitions</p>`
  );
}

/**
 * Model explorer body.  Models beyond the page threshold are not drawn;
 * the panel degrades to summary statistics plus the export link, which
 * is the designed behaviour for state spaces no canvas can hold.
 */
export function renderModelPanel(
  page: ModelPage,
  opts: RenderOptions = {},
): string {
  const summary = renderModelSummary(page);
  if (page.totalStates > page.pageSize) {
    const href = `/api/spec/${encodeURIComponent(page.specId)}/model?page=1&pageSize=${page.pageSize}`;
    return (
      `<section class="model-panel oversized">${summary}` +
      `<p>too large to draw (page threshold ${page.pageSize}); ` +
      `<a class="export-link" href="${esc(href)}" download="model.json">download the paged export</a></p>` +
      `</section>`
    );
  }
  return (
    `<section class="model-panel">${summary}` +
    renderSvg(page, opts) +
    `</section>`
  );
}

export function renderAssumptionPanel(a: AssumptionResponse): string {
  return (
    `<section class="assumption-panel" data-assumption-id="${esc(a.assumptionId)}">` +
    `<h3>${esc(a.name)} (for ${esc(a.target)})</h3>` +
    `<p class="assumption-sizes">${a.states} states / ${a.transitions} transitions</p>` +
    renderSvg(a.model) +
    `<details><summary>surface form</summary><pre>${esc(a.text)}</pre></details>` +
    `</section>`
  );
}

export function renderVerdictBadge(verdict: "Yes" | "No" | "Inconclusive"): string {
  return `<span class="verdict verdict-${verdict.toLowerCase()}">${verdict}</span>`;
}

export function renderStrategyTable(records: StrategyRecord[]): string {
  const rows = strategyRows(records)
    .map(
      (r) =>
        `<tr><td>${esc(r.agent)}</td><td>${esc(r.localState)}</td>` +
        `<td>${esc(r.observed)}</td><td class="chosen-action">${esc(r.actionId)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="strategy-table"><thead><tr>` +
    `<th>agent</th><th>local state</th><th>observed inputs</th><th>action</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderCounterexample(cex: CounterexampleDoc): string {
  const items = cex.states
    .map((s, i) => {
      const valuation = Object.entries(s.valuation)
        .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
        .map(([k, v]) => `${k}=${v}`)
        .join(", ");
      const loop = cex.loopStart === i ? ` <em class="loop-mark">loop target</em>` : "";
      return `<li data-state-index="${s.index}">${esc(valuation)}${loop}</li>`;
    })
    .join("");
  const closing =
    cex.loopStart === null
      ? ""
      : `<p class="lasso-note">path returns to step ${cex.loopStart + 1} and repeats forever</p>`;
  return `<ol class="counterexample">${items}</ol>${closing}`;
}

function renderResultCore(
  verdict: "Yes" | "No" | "Inconclusive",
  strategy: StrategyRecord[] | null,
  counterexample: CounterexampleDoc | null,
): string {
  let body = "";
  if (verdict === "Yes" && strategy !== null) {
    body = renderStrategyTable(strategy);
  } else if (counterexample !== null) {
    body = renderCounterexample(counterexample);
  }
  return renderVerdictBadge(verdict) + body;
}

export function renderMonoResult(result: MonoResult): string {
  return (
    `<section class="result mono-result">` +
    `<p class="result-sizes">${result.states} states / ${result.transitions} transitions</p>` +
    `<p class="result-formula"><code>${esc(result.formula)}</code></p>` +
    renderResultCore(result.verdict, result.strategy, result.counterexample) +
    `</section>`
  );
}

export function renderAgrResult(result: AgrResult): string {
  const tasks = result.tasks
    .map(
      (t) =>
        `<li class="agr-task"><strong>${esc(t.target)}</strong> with ${esc(t.assumption)}: ` +
        `<span class="task-sizes">${t.states} states / ${t.transitions} transitions</span> ` +
        renderVerdictBadge(t.verdict) +
        `</li>`,
    )
    .join("");
  return (
    `<section class="result agr-result">` +
    `<p class="result-formula"><code>${esc(result.formula)}</code></p>` +
    `<ul class="task-list">${tasks}</ul>` +
    renderResultCore(result.verdict, result.strategy, null) +
    `</section>`
  );
}

export function renderResult(result: VerificationResult): string {
  return result.mode === "mono" ? renderMonoResult(result) : renderAgrResult(result);
}

/**
 * Backend failures are shown with the server's message untouched, plus a
 * retry button carrying the action that failed.
 */
export function renderError(message: string, retryAction: string): string {
  return (
    `<div class="error-panel" role="alert">` +
    `<p class="error-message">${esc(message)}</p>` +
    `<button type="button" data-retry="${esc(retryAction)}">retry</button>` +
    `</div>`
  );
}

export function renderValidation(message: string): string {
  return `<p class="validation-message">${esc(message)}</p>`;
}

export function renderJobHistory(jobs: JobEntry[]): string {
  const rows = jobs
    .map(
      (j) =>
        `<tr data-job-id="${esc(j.jobId)}"><td>${esc(j.jobId)}</td>` +
        `<td>${esc(j.mode)}/${esc(j.engine)}</td><td>d=${j.distance}</td>` +
        `<td class="job-status">${esc(j.status)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="job-history"><thead><tr>` +
    `<th>job</th><th>run</th><th>bound</th><th>status</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}
