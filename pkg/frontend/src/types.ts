/**
 * Schemas for every payload the backend serves.  Responses are validated
 * at the client boundary, so the rest of the UI code works with checked
 * types and any contract drift surfaces as a loud parse error instead of
 * NaN cells in a table.
 */
import { z } from "zod";

export const ValuationSchema = z.record(z.string(), z.string());

export const GapSchema = z.object({
  module: z.string(),
  state: z.string(),
  inputs: ValuationSchema,
});

export const TotalityReportSchema = z.object({
  total: z.boolean().nullable(),
  gapCount: z.number().nullable(),
  gaps: z.array(GapSchema).optional(),
  skipped: z.string().optional(),
});

export const GroupInfoSchema = z.object({
  name: z.string(),
  members: z.array(z.string()),
  goal: z.string().nullable(),
});

export const SpecResponseSchema = z.object({
  specId: z.string(),
  modules: z.array(z.string()),
  groups: z.array(GroupInfoSchema),
  report: TotalityReportSchema,
});
export type SpecResponse = z.infer<typeof SpecResponseSchema>;

// composed models use integer state ids, single modules use their own
const StateIdSchema = z.union([z.number(), z.string()]);

export const StateDocSchema = z.object({
  id: StateIdSchema,
  valuation: ValuationSchema,
});

export const TransitionDocSchema = z.object({
  src: StateIdSchema,
  module: z.string(),
  action: z.string(),
  dst: StateIdSchema,
});

export const ModelDocSchema = z.object({
  states: z.array(StateDocSchema),
  transitions: z.array(TransitionDocSchema),
  initial: StateIdSchema,
});
export type ModelDoc = z.infer<typeof ModelDocSchema>;

export const ModelPageSchema = ModelDocSchema.extend({
  specId: z.string(),
  page: z.number(),
  pageSize: z.number(),
  totalStates: z.number(),
  totalTransitions: z.number(),
  totalPages: z.number(),
});
export type ModelPage = z.infer<typeof ModelPageSchema>;

export const AssumptionResponseSchema = z.object({
  assumptionId: z.string(),
  target: z.string(),
  name: z.string(),
  states: z.number(),
  transitions: z.number(),
  text: z.string(),
  model: ModelDocSchema,
});
export type AssumptionResponse = z.infer<typeof AssumptionResponseSchema>;

export const StrategyRecordSchema = z.object({
  agent: z.string(),
  localState: z.string(),
  inputValuation: ValuationSchema,
  actionId: z.string(),
});
export type StrategyRecord = z.infer<typeof StrategyRecordSchema>;

export const CounterexampleSchema = z.object({
  states: z.array(z.object({ index: z.number(), valuation: ValuationSchema })),
  loopStart: z.number().nullable(),
});
export type CounterexampleDoc = z.infer<typeof CounterexampleSchema>;

const StatsSchema = z.record(z.string(), z.number());

const ResultCoreSchema = z.object({
  verdict: z.enum(["Yes", "No", "Inconclusive"]),
  stats: StatsSchema,
  strategy: z.array(StrategyRecordSchema).nullable(),
  counterexample: CounterexampleSchema.nullable(),
});

export const MonoResultSchema = ResultCoreSchema.extend({
  mode: z.literal("mono"),
  engine: z.enum(["dfs", "apprx"]),
  formula: z.string(),
  states: z.number(),
  transitions: z.number(),
  time_s: z.number(),
});
export type MonoResult = z.infer<typeof MonoResultSchema>;

export const AgrTaskResultSchema = ResultCoreSchema.extend({
  target: z.string(),
  goal: z.string(),
  assumption: z.string(),
  assumptionStates: z.number(),
  states: z.number(),
  transitions: z.number(),
  time_s: z.number(),
});
export type AgrTaskResult = z.infer<typeof AgrTaskResultSchema>;

export const AgrResultSchema = z.object({
  mode: z.literal("agr"),
  engine: z.enum(["dfs", "apprx"]),
  distance: z.number(),
  formula: z.string(),
  verdict: z.enum(["Yes", "No", "Inconclusive"]),
  tasks: z.array(AgrTaskResultSchema),
  strategy: z.array(StrategyRecordSchema).nullable(),
  time_s: z.number(),
});
export type AgrResult = z.infer<typeof AgrResultSchema>;

export const VerificationResultSchema = z.discriminatedUnion("mode", [
  MonoResultSchema,
  AgrResultSchema,
]);
export type VerificationResult = z.infer<typeof VerificationResultSchema>;

export const VerifyEnqueuedSchema = z.object({
  jobId: z.string(),
  status: z.string(),
});
export type VerifyEnqueued = z.infer<typeof VerifyEnqueuedSchema>;

export const JobRecordSchema = z.object({
  jobId: z.string(),
  request: z.object({
    specId: z.string(),
    mode: z.enum(["mono", "agr"]),
    engine: z.enum(["dfs", "apprx"]),
    distance: z.number(),
    assumptionId: z.string().nullable(),
  }),
  status: z.enum(["queued", "running", "done", "failed"]),
  created: z.number(),
  started: z.number().nullable(),
  finished: z.number().nullable(),
  result: z.unknown().nullable(),
  error: z.string().nullable(),
});
export type JobRecord = z.infer<typeof JobRecordSchema>;

export const JobResultSchema = z.discriminatedUnion("status", [
  z.object({ status: z.literal("done"), result: VerificationResultSchema }),
  z.object({ status: z.literal("failed"), error: z.string() }),
]);
export type JobResult = z.infer<typeof JobResultSchema>;

export type Mode = "mono" | "agr";
export type Engine = "dfs" | "apprx";
