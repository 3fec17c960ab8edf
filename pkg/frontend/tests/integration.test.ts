/**
 * End-to-end flow against the real verification service.  A tap on the
 * API client records every raw response body; each assertion about what
 * the UI shows is made against those recorded bytes, so a displayed
 * verdict, size, or strategy cell that the backend did not send would
 * fail here.
 */
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ChildProcess, spawn } from "node:child_process";
import { readFileSync } from "node:fs";

import { ApiClient, Exchange } from "../src/client.js";
import { UiController } from "../src/controller.js";
import { strategyStateHighlights } from "../src/strategy.js";

const SPEC_TEXT = readFileSync(
  new URL("../../specs/voting2.stv", import.meta.url),
  "utf8",
);

function esc(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function observedLabel(inputValuation: Record<string, string>): string {
  return Object.entries(inputValuation)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${k}=${v}`)
    .join(", ");
}

let proc: ChildProcess | undefined;
const exchanges: Exchange[] = [];
let client: ApiClient;
let controller: UiController;

function bootService(): Promise<string> {
  return new Promise((resolve, reject) => {
    const child = spawn(
      "python3",
      ["-m", "agrmc.service", "--port", "0", "--workers", "2"],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
    proc = child;
    let out = "";
    let errOut = "";
    child.stdout.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const m = out.match(/listening on (http:\/\/[\d.]+:\d+)/);
      if (m) resolve(m[1]!);
    });
    child.stderr.on("data", (chunk: Buffer) => {
      errOut += chunk.toString();
    });
    child.on("exit", (code) =>
      reject(new Error(`service exited with ${code}: ${errOut}`)),
    );
    setTimeout(
      () => reject(new Error(`service never announced a port: ${out} ${errOut}`)),
      30_000,
    );
  });
}

function lastBody(): string {
  return exchanges[exchanges.length - 1]!.body;
}

beforeAll(async () => {
  const base = await bootService();
  client = new ApiClient(base, fetch, (e) => exchanges.push(e));
  controller = new UiController(client);
});

afterAll(() => {
  proc?.kill();
});

describe("end-to-end flow against the live service", () => {
  it("loads the benchmark spec with one POST and shows its modules", async () => {
    const view = await controller.loadSpec(SPEC_TEXT);
    expect(view.ok).toBe(true);
    expect(exchanges).toHaveLength(1);
    expect(exchanges[0]!.status).toBe(200);

    const raw = JSON.parse(exchanges[0]!.body);
    expect(raw.modules).toContain("Voter1");
    expect(view.html).toContain(`data-spec-id="${raw.specId}"`);
    expect(controller.state.modules).toEqual(raw.modules);
  });

  it("shows the composed model with the backend-reported sizes", async () => {
    const before = exchanges.length;
    const view = await controller.showModel();
    expect(view.ok).toBe(true);
    expect(exchanges).toHaveLength(before + 1);

    const raw = JSON.parse(lastBody());
    expect(raw.totalStates).toBe(529);
    expect(raw.totalTransitions).toBe(1925);
    expect(view.html).toContain(
      `${raw.totalStates} states / ${raw.totalTransitions} transitions`,
    );
    expect(view.html).toContain("<svg"); // fits the page, so it is drawn
  });

  it("rejects a stale module selection without any traffic", () => {
    const before = exchanges.length;
    const view = controller.selectModule("Ghost");
    expect(view.ok).toBe(false);
    expect(view.rejectedLocally).toBe(true);
    expect(view.html).toContain("is not part of the loaded spec");
    expect(exchanges).toHaveLength(before);
  });

  it("generates the distance-1 assumption for Voter1", async () => {
    expect(controller.selectModule("Voter1").ok).toBe(true);
    expect(controller.setDistance(1).ok).toBe(true);

    const before = exchanges.length;
    const view = await controller.generateAssumption();
    expect(view.ok).toBe(true);
    expect(exchanges).toHaveLength(before + 1);

    const raw = JSON.parse(lastBody());
    expect(raw.states).toBe(21);
    expect(raw.transitions).toBe(57);
    expect(view.html).toContain(`data-assumption-id="${raw.assumptionId}"`);
    expect(view.html).toContain(`${raw.states} states / ${raw.transitions} transitions`);
    expect(view.html).toContain(esc(raw.name));
    expect(controller.state.assumptionId).toBe(raw.assumptionId);
  });

  it("runs AGR/DFS; every displayed figure byte-matches the job payload", async () => {
    controller.setMode("agr");
    controller.setEngine("dfs");

    const before = exchanges.length;
    const launched = await controller.runVerification();
    expect(launched.ok).toBe(true);
    expect(exchanges).toHaveLength(before + 1);
    const jobId = launched.jobId!;
    expect(JSON.parse(lastBody()).jobId).toBe(jobId);

    const outcome = await controller.awaitResult(jobId, { intervalMs: 100 });
    expect(outcome.ok).toBe(true);

    const polls = exchanges.filter((e) => e.path === `/api/job/${jobId}/result`);
    expect(polls.length).toBeGreaterThanOrEqual(1);
    for (const p of polls.slice(0, -1)) expect(p.status).toBe(409);
    expect(polls[polls.length - 1]!.status).toBe(200);

    const payload = JSON.parse(polls[polls.length - 1]!.body);
    expect(payload.status).toBe("done");
    const r = payload.result;
    expect(r.mode).toBe("agr");
    expect(r.verdict).toBe("Yes");
    expect(r.tasks).toHaveLength(1);
    expect(r.tasks[0].target).toBe("Voter1");
    expect(r.tasks[0].assumptionStates).toBe(21);
    expect(r.tasks[0].states).toBe(161);
    expect(r.tasks[0].transitions).toBe(537);

    // verdict, formula, and task sizes in the panel are the payload's bytes
    expect(outcome.html).toContain(
      `<span class="verdict verdict-${r.verdict.toLowerCase()}">${r.verdict}</span>`,
    );
    expect(outcome.html).toContain(`<code>${esc(r.formula)}</code>`);
    expect(outcome.html).toContain(
      `<span class="task-sizes">${r.tasks[0].states} states / ${r.tasks[0].transitions} transitions</span>`,
    );

    // the strategy table is exactly the payload's records, row for row
    for (const rec of r.strategy) {
      expect(outcome.html).toContain(
        `<td>${esc(rec.agent)}</td><td>${esc(rec.localState)}</td>` +
          `<td>${esc(observedLabel(rec.inputValuation))}</td>` +
          `<td class="chosen-action">${esc(rec.actionId)}</td>`,
      );
    }
    expect(outcome.html.match(/class="chosen-action"/g)).toHaveLength(
      r.strategy.length,
    );

    // highlight set for the on-graph overlay derives from the same records
    expect(strategyStateHighlights(r.strategy, "Voter1").size).toBeGreaterThan(0);
  });

  it("runs the monolithic engine and traces its sizes the same way", async () => {
    controller.setMode("mono");
    const launched = await controller.runVerification();
    expect(launched.ok).toBe(true);
    const outcome = await controller.awaitResult(launched.jobId!, { intervalMs: 100 });
    expect(outcome.ok).toBe(true);

    const polls = exchanges.filter(
      (e) => e.path === `/api/job/${launched.jobId}/result` && e.status === 200,
    );
    const payload = JSON.parse(polls[polls.length - 1]!.body);
    const r = payload.result;
    expect(r.mode).toBe("mono");
    expect(r.verdict).toBe("Yes");
    expect(r.states).toBe(529);
    expect(r.transitions).toBe(1925);
    expect(outcome.html).toContain(
      `<p class="result-sizes">${r.states} states / ${r.transitions} transitions</p>`,
    );
    expect(outcome.html.match(/class="chosen-action"/g)).toHaveLength(
      r.strategy.length,
    );
  });

  it("surfaces a real backend error verbatim with a retry affordance", async () => {
    const scratch = new UiController(client);
    const view = await scratch.loadSpec("MODULE broken\nnot a spec\n");
    expect(view.ok).toBe(false);
    expect(view.rejectedLocally).toBeUndefined();

    const raw = JSON.parse(lastBody());
    expect(typeof raw.error).toBe("string");
    expect(raw.error.length).toBeGreaterThan(0);
    expect(view.html).toContain(esc(raw.error));
    expect(view.html).toContain('data-retry="load-spec"');
  });
});
