/**
 * Workspace state machine.  Pure: every user action is a function from
 * state to either a new state or a rejection carrying a validation
 * message.  Rejections are decided entirely client side, before any
 * backend call is attempted, which is what keeps a stale module
 * selection from ever reaching the wire.
 */
import { Engine, Mode, SpecResponse } from "./types.js";

export interface JobEntry {
  jobId: string;
  specId: string;
  mode: Mode;
  engine: Engine;
  distance: number;
  status: string;
}

export interface Viewport {
  x: number;
  y: number;
  zoom: number;
}

export interface WorkspaceState {
  specId: string | null;
  specText: string;
  modules: string[];
  groups: SpecResponse["groups"];
  selectedModule: string | null;
  distance: number;
  engine: Engine;
  mode: Mode;
  /** assumption chosen for verification, if any */
  assumptionId: string | null;
  jobs: JobEntry[];
  viewport: Viewport;
}

export type Rejected = { ok: false; message: string };
export type Accepted = { ok: true; state: WorkspaceState };
export type Outcome = Accepted | Rejected;

export function initialWorkspace(): WorkspaceState {
  return {
    specId: null,
    specText: "",
    modules: [],
    groups: [],
    selectedModule: null,
    distance: 1,
    engine: "dfs",
    mode: "agr",
    assumptionId: null,
    jobs: [],
    viewport: { x: 0, y: 0, zoom: 1 },
  };
}

export function specLoaded(
  state: WorkspaceState,
  text: string,
  response: SpecResponse,
): WorkspaceState {
  // a fresh spec invalidates everything derived from the old one
  const keepSelection =
    state.selectedModule !== null && response.modules.includes(state.selectedModule);
  return {
    ...state,
    specId: response.specId,
    specText: text,
    modules: response.modules,
    groups: response.groups,
    selectedModule: keepSelection ? state.selectedModule : null,
    assumptionId: null,
  };
}

export function selectModule(state: WorkspaceState, name: string): Outcome {
  if (!state.modules.includes(name)) {
    return {
      ok: false,
      message: `module "${name}" is not part of the loaded spec`,
    };
  }
  return { ok: true, state: { ...state, selectedModule: name, assumptionId: null } };
}

export function setDistance(state: WorkspaceState, distance: number): Outcome {
  if (!Number.isInteger(distance) || distance < 1) {
    return { ok: false, message: "distance bound must be an integer >= 1" };
  }
  return { ok: true, state: { ...state, distance, assumptionId: null } };
}

export function setEngine(state: WorkspaceState, engine: Engine): WorkspaceState {
  return { ...state, engine };
}

export function setMode(state: WorkspaceState, mode: Mode): WorkspaceState {
  return { ...state, mode };
}

export function useAssumption(
  state: WorkspaceState,
  assumptionId: string | null,
): WorkspaceState {
  return { ...state, assumptionId };
}

export function jobQueued(state: WorkspaceState, entry: JobEntry): WorkspaceState {
  return { ...state, jobs: [...state.jobs, entry] };
}

export function jobStatus(
  state: WorkspaceState,
  jobId: string,
  status: string,
): WorkspaceState {
  return {
    ...state,
    jobs: state.jobs.map((j) => (j.jobId === jobId ? { ...j, status } : j)),
  };
}

export function panViewport(state: WorkspaceState, dx: number, dy: number): WorkspaceState {
  const { x, y, zoom } = state.viewport;
  return { ...state, viewport: { x: x + dx, y: y + dy, zoom } };
}

export function zoomViewport(state: WorkspaceState, factor: number): WorkspaceState {
  const zoom = Math.min(8, Math.max(0.125, state.viewport.zoom * factor));
  return { ...state, viewport: { ...state.viewport, zoom } };
}

/** Gate for the assumption panel: a target module must be validly selected. */
export function canGenerateAssumption(
  state: WorkspaceState,
): { ok: true; module: string } | Rejected {
  if (state.specId === null) return { ok: false, message: "load a spec first" };
  if (state.selectedModule === null) {
    return { ok: false, message: "select a target module first" };
  }
  if (!state.modules.includes(state.selectedModule)) {
    return {
      ok: false,
      message: `module "${state.selectedModule}" is not part of the loaded spec`,
    };
  }
  return { ok: true, module: state.selectedModule };
}

/** Gate for launching a verification run. */
export function canVerify(state: WorkspaceState): { ok: true } | Rejected {
  if (state.specId === null) return { ok: false, message: "load a spec first" };
  if (!Number.isInteger(state.distance) || state.distance < 1) {
    return { ok: false, message: "distance bound must be an integer >= 1" };
  }
  return { ok: true };
}
