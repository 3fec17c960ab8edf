import { describe, expect, it } from "vitest";

import {
  canGenerateAssumption,
  canVerify,
  initialWorkspace,
  jobQueued,
  jobStatus,
  panViewport,
  selectModule,
  setDistance,
  specLoaded,
  WorkspaceState,
  zoomViewport,
} from "../src/workspace.js";
import { specResponseFixture } from "./helpers.js";

function loaded() {
  return specLoaded(initialWorkspace(), "MODULE ...", specResponseFixture());
}

describe("workspace invariants", () => {
  it("loads a spec and keeps no stale selection", () => {
    const state = loaded();
    expect(state.specId).toBe("sabc1234567");
    expect(state.modules).toEqual(["Voter1", "Voter2", "Coercer"]);
    expect(state.selectedModule).toBeNull();
  });

  it("accepts only modules of the loaded spec", () => {
    const state = loaded();
    const ok = selectModule(state, "Voter1");
    expect(ok.ok).toBe(true);
    if (ok.ok) expect(ok.state.selectedModule).toBe("Voter1");

    const bad = selectModule(state, "Ghost");
    expect(bad.ok).toBe(false);
    if (!bad.ok) expect(bad.message).toContain('"Ghost"');
    // original state untouched on rejection
    expect(state.selectedModule).toBeNull();
  });

  it("drops a selection the next spec does not contain", () => {
    let state = loaded();
    const picked = selectModule(state, "Voter2");
    if (picked.ok) state = picked.state;
    const next = specLoaded(state, "MODULE ...", {
      ...specResponseFixture(),
      specId: "sother000000",
      modules: ["Alice", "Bob"],
    });
    expect(next.selectedModule).toBeNull();
    expect(next.assumptionId).toBeNull();
  });

  it("keeps a selection the next spec still contains", () => {
    let state = loaded();
    const picked = selectModule(state, "Voter1");
    if (picked.ok) state = picked.state;
    const next = specLoaded(state, "MODULE ...", specResponseFixture());
    expect(next.selectedModule).toBe("Voter1");
  });

  it.each([0, -1, 1.5, NaN])("rejects distance %s", (d) => {
    const outcome = setDistance(loaded(), d as number);
    expect(outcome.ok).toBe(false);
    if (!outcome.ok) expect(outcome.message).toContain(">= 1");
  });

  it("accepts integer distances from 1 up", () => {
    const outcome = setDistance(loaded(), 3);
    expect(outcome.ok).toBe(true);
    if (outcome.ok) expect(outcome.state.distance).toBe(3);
  });

  it("changing module or distance invalidates a chosen assumption", () => {
    let state: WorkspaceState = { ...loaded(), assumptionId: "a0000000000" };
    const picked = selectModule(state, "Coercer");
    if (picked.ok) state = picked.state;
    expect(state.assumptionId).toBeNull();

    state = { ...state, assumptionId: "a0000000000" };
    const bumped = setDistance(state, 2);
    if (bumped.ok) state = bumped.state;
    expect(state.assumptionId).toBeNull();
  });
});

describe("action gates", () => {
  it("assumption gate needs a spec and a valid module", () => {
    expect(canGenerateAssumption(initialWorkspace()).ok).toBe(false);
    expect(canGenerateAssumption(loaded()).ok).toBe(false);

    let state = loaded();
    const picked = selectModule(state, "Voter1");
    if (picked.ok) state = picked.state;
    const gate = canGenerateAssumption(state);
    expect(gate.ok).toBe(true);
    if (gate.ok) expect(gate.module).toBe("Voter1");

    // stale selection: spec changed underneath
    const stale = { ...state, modules: ["Other"] };
    const rejected = canGenerateAssumption(stale);
    expect(rejected.ok).toBe(false);
    if (!rejected.ok) expect(rejected.message).toContain("Voter1");
  });

  it("verify gate needs a spec and a sane bound", () => {
    expect(canVerify(initialWorkspace()).ok).toBe(false);
    expect(canVerify(loaded()).ok).toBe(true);
    expect(canVerify({ ...loaded(), distance: 0 }).ok).toBe(false);
  });
});

describe("job history and viewport", () => {
  it("tracks queued jobs and status updates", () => {
    let state = loaded();
    state = jobQueued(state, {
      jobId: "j0",
      specId: state.specId!,
      mode: "agr",
      engine: "dfs",
      distance: 1,
      status: "queued",
    });
    state = jobStatus(state, "j0", "done");
    expect(state.jobs).toHaveLength(1);
    expect(state.jobs[0]!.status).toBe("done");
  });

  it("pans additively and clamps zoom", () => {
    let state = panViewport(loaded(), 10, -5);
    state = panViewport(state, 10, -5);
    expect(state.viewport).toMatchObject({ x: 20, y: -10 });
    for (let i = 0; i < 30; i++) state = zoomViewport(state, 2);
    expect(state.viewport.zoom).toBe(8);
    for (let i = 0; i < 60; i++) state = zoomViewport(state, 0.5);
    expect(state.viewport.zoom).toBe(0.125);
  });
});
