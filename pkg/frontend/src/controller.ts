/**
 * Workflow driver sitting between the DOM shell and the API client.
 * Each public method is one user action: it gates on workspace
 * invariants (rejections never touch the network), performs at most one
 * backend call, folds the response into the workspace, and returns the
 * rendered panel.  The DOM layer only places returned strings.
 */
import { ApiClient, ApiError } from "./client.js";
import {
  renderAssumptionPanel,
  renderError,
  renderJobHistory,
  renderModelPanel,
  renderResult,
  renderSpecReport,
  renderValidation,
} from "./render.js";
import {
  canGenerateAssumption,
  canVerify,
  initialWorkspace,
  jobQueued,
  jobStatus,
  selectModule,
  setDistance,
  specLoaded,
  useAssumption,
  WorkspaceState,
} from "./workspace.js";
import { AssumptionResponse, Engine, JobResult, Mode } from "./types.js";

export interface ActionView {
  /** rendered panel HTML, or a validation/error message */
  html: string;
  /** false when the action was rejected before or at the backend */
  ok: boolean;
  /** true when no backend call was made (client-side rejection) */
  rejectedLocally?: boolean;
}

export class UiController {
  state: WorkspaceState = initialWorkspace();
  lastAssumption: AssumptionResponse | null = null;

  constructor(private readonly client: ApiClient) {}

  private failure(err: unknown, retryAction: string): ActionView {
    const message = err instanceof ApiError ? err.message : String(err);
    return { html: renderError(message, retryAction), ok: false };
  }

  async loadSpec(text: string): Promise<ActionView> {
    try {
      const response = await this.client.postSpec(text);
      this.state = specLoaded(this.state, text, response);
      return { html: renderSpecReport(response), ok: true };
    } catch (err) {
      return this.failure(err, "load-spec");
    }
  }

  async showModel(pageSize?: number): Promise<ActionView> {
    if (this.state.specId === null) {
      return {
        html: renderValidation("load a spec first"),
        ok: false,
        rejectedLocally: true,
      };
    }
    try {
      const page = await this.client.getModelPage(this.state.specId, 1, pageSize);
      return { html: renderModelPanel(page), ok: true };
    } catch (err) {
      return this.failure(err, "show-model");
    }
  }

  selectModule(name: string): ActionView {
    const outcome = selectModule(this.state, name);
    if (!outcome.ok) {
      return {
        html: renderValidation(outcome.message),
        ok: false,
        rejectedLocally: true,
      };
    }
    this.state = outcome.state;
    return { html: "", ok: true };
  }

  setDistance(distance: number): ActionView {
    const outcome = setDistance(this.state, distance);
    if (!outcome.ok) {
      return {
        html: renderValidation(outcome.message),
        ok: false,
        rejectedLocally: true,
      };
    }
    this.state = outcome.state;
    return { html: "", ok: true };
  }

  setEngine(engine: Engine): void {
    this.state = { ...this.state, engine };
  }

  setMode(mode: Mode): void {
    this.state = { ...this.state, mode };
  }

  async generateAssumption(): Promise<ActionView> {
    const gate = canGenerateAssumption(this.state);
    if (!gate.ok) {
      return {
        html: renderValidation(gate.message),
        ok: false,
        rejectedLocally: true,
      };
    }
    try {
      const assumption = await this.client.postAssumption(
        this.state.specId!,
        gate.module,
        this.state.distance,
      );
      this.lastAssumption = assumption;
      this.state = useAssumption(this.state, assumption.assumptionId);
      return { html: renderAssumptionPanel(assumption), ok: true };
    } catch (err) {
      return this.failure(err, "generate-assumption");
    }
  }

  async runVerification(): Promise<ActionView & { jobId?: string }> {
    const gate = canVerify(this.state);
    if (!gate.ok) {
      return {
        html: renderValidation(gate.message),
        ok: false,
        rejectedLocally: true,
      };
    }
    try {
      const request = {
        specId: this.state.specId!,
        mode: this.state.mode,
        engine: this.state.engine,
        distance: this.state.distance,
        ...(this.state.assumptionId !== null && this.state.mode === "agr"
          ? { assumptionId: this.state.assumptionId }
          : {}),
      };
      const enqueued = await this.client.postVerify(request);
      this.state = jobQueued(this.state, {
        jobId: enqueued.jobId,
        specId: this.state.specId!,
        mode: this.state.mode,
        engine: this.state.engine,
        distance: this.state.distance,
        status: enqueued.status,
      });
      return { html: renderJobHistory(this.state.jobs), ok: true, jobId: enqueued.jobId };
    } catch (err) {
      return this.failure(err, "run-verification");
    }
  }

  /** Poll one job to completion and render its outcome. */
  async awaitResult(
    jobId: string,
    opts: { intervalMs?: number; timeoutMs?: number } = {},
  ): Promise<ActionView & { result?: JobResult }> {
    try {
      const result = await this.client.pollResult(jobId, opts);
      this.state = jobStatus(this.state, jobId, result.status);
      if (result.status === "failed") {
        return { html: renderError(result.error, "run-verification"), ok: false, result };
      }
      return { html: renderResult(result.result), ok: true, result };
    } catch (err) {
      return this.failure(err, "await-result");
    }
  }
}
