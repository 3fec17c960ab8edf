/**
 * Typed client for the verification service.  Every method is one
 * endpoint; responses are schema checked and the raw body of each
 * exchange is handed to an optional tap so tests (and the traceability
 * panel) can compare rendered output against exactly what came over the
 * wire.
 */
import {
  AssumptionResponse,
  AssumptionResponseSchema,
  Engine,
  JobRecord,
  JobRecordSchema,
  JobResult,
  JobResultSchema,
  Mode,
  ModelPage,
  ModelPageSchema,
  SpecResponse,
  SpecResponseSchema,
  VerifyEnqueued,
  VerifyEnqueuedSchema,
} from "./types.js";

/** Backend-reported failure; message is the server text, verbatim. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface Exchange {
  method: string;
  path: string;
  status: number;
  /** raw response body, byte for byte */
  body: string;
}

export interface VerifyRequest {
  specId: string;
  mode: Mode;
  engine?: Engine;
  distance?: number;
  assumptionId?: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
    private readonly tap?: (exchange: Exchange) => void,
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<string> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const text = await response.text();
    this.tap?.({ method, path, status: response.status, body: text });
    if (!response.ok) {
      let message = text;
      try {
        const parsed = JSON.parse(text);
        if (typeof parsed?.error === "string") message = parsed.error;
      } catch {
        // non-JSON error body: surface as is
      }
      throw new ApiError(response.status, message);
    }
    return text;
  }

  async postSpec(text: string): Promise<SpecResponse> {
    return SpecResponseSchema.parse(
      JSON.parse(await this.request("POST", "/api/spec", { text })),
    );
  }

  async getModelPage(specId: string, page = 1, pageSize?: number): Promise<ModelPage> {
    const params = new URLSearchParams({ page: String(page) });
    if (pageSize !== undefined) params.set("pageSize", String(pageSize));
    return ModelPageSchema.parse(
      JSON.parse(await this.request("GET", `/api/spec/${specId}/model?${params}`)),
    );
  }

  async postAssumption(
    specId: string,
    module: string,
    distance: number,
  ): Promise<AssumptionResponse> {
    return AssumptionResponseSchema.parse(
      JSON.parse(
        await this.request("POST", "/api/assumption", { specId, module, distance }),
      ),
    );
  }

  async postVerify(request: VerifyRequest): Promise<VerifyEnqueued> {
    return VerifyEnqueuedSchema.parse(
      JSON.parse(await this.request("POST", "/api/verify", request)),
    );
  }

  async getJob(jobId: string): Promise<JobRecord> {
    return JobRecordSchema.parse(
      JSON.parse(await this.request("GET", `/api/job/${jobId}`)),
    );
  }

  async getJobResult(jobId: string): Promise<JobResult> {
    return JobResultSchema.parse(
      JSON.parse(await this.request("GET", `/api/job/${jobId}/result`)),
    );
  }

  /**
   * Poll until the job leaves the queue.  A 409 means still running;
   * anything else is final.
   */
  async pollResult(
    jobId: string,
    opts: { intervalMs?: number; timeoutMs?: number } = {},
  ): Promise<JobResult> {
    const interval = opts.intervalMs ?? 200;
    const deadline = Date.now() + (opts.timeoutMs ?? 120_000);
    for (;;) {
      try {
        return await this.getJobResult(jobId);
      } catch (err) {
        if (!(err instanceof ApiError) || err.status !== 409) throw err;
      }
      if (Date.now() > deadline) {
        throw new ApiError(408, `job ${jobId} still running after timeout`);
      }
      await new Promise((resolve) => setTimeout(resolve, interval));
    }
  }
}
