/** Test doubles: a recording fetch and small payload fixtures. */
import {
  AgrResult,
  AssumptionResponse,
  ModelPage,
  MonoResult,
  SpecResponse,
} from "../src/types.js";

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export type Route = (call: RecordedCall) => { status: number; payload: unknown } | undefined;

/** fetch-like double: first matching route wins; calls are recorded. */
export function fakeFetch(routes: Route[]) {
  const calls: RecordedCall[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    const call: RecordedCall = {
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    };
    calls.push(call);
    for (const route of routes) {
      const hit = route(call);
      if (hit) {
        return new Response(JSON.stringify(hit.payload), {
          status: hit.status,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    return new Response(JSON.stringify({ error: `no route for ${url}` }), {
      status: 404,
    });
  };
  return { impl, calls };
}

export function specResponseFixture(): SpecResponse {
  return {
    specId: "sabc1234567",
    modules: ["Voter1", "Voter2", "Coercer"],
    groups: [
      {
        name: "GVoter1",
        members: ["Voter1"],
        goal: "<<Voter1>> G (!(pstatus1=T) | vote1=1)",
      },
      { name: "GVoter2", members: ["Voter2"], goal: null },
      { name: "GCoercer", members: ["Coercer"], goal: null },
    ],
    report: { total: true, gapCount: 0, gaps: [] },
  };
}

export function modelPageFixture(overrides: Partial<ModelPage> = {}): ModelPage {
  return {
    specId: "sabc1234567",
    page: 1,
    pageSize: 5000,
    totalStates: 3,
    totalTransitions: 3,
    totalPages: 1,
    initial: 0,
    states: [
      { id: 0, valuation: { e: "?", m: "?" } },
      { id: 1, valuation: { e: "1", m: "?" } },
      { id: 2, valuation: { e: "1", m: "a" } },
    ],
    transitions: [
      { src: 0, module: "E", action: "t0", dst: 1 },
      { src: 1, module: "M", action: "t1", dst: 2 },
      { src: 2, module: "M", action: "stutter", dst: 2 },
    ],
    ...overrides,
  };
}

export function assumptionFixture(): AssumptionResponse {
  return {
    assumptionId: "a1234567890",
    target: "Voter1",
    name: "A_Voter1",
    states: 21,
    transitions: 57,
    text: "MODULE A_Voter1  # synthetic\n...",
    model: {
      states: [
        { id: "q0", valuation: { pun1: "?" } },
        { id: "q1", valuation: { pun1: "T" } },
      ],
      transitions: [{ src: "q0", module: "A_Voter1", action: "t0", dst: "q1" }],
      initial: "q0",
    },
  };
}

export function agrResultFixture(): AgrResult {
  return {
    mode: "agr",
    engine: "dfs",
    distance: 1,
    formula: "<<Voter1>> G (!(pstatus1=T) | vote1=1)",
    verdict: "Yes",
    tasks: [
      {
        target: "Voter1",
        goal: "<<Voter1>> G (!(pstatus1=T) | vote1=1)",
        assumption: "A_Voter1",
        assumptionStates: 21,
        states: 161,
        transitions: 537,
        time_s: 0.01,
        verdict: "Yes",
        stats: { states: 161, transitions: 537, attempts: 1, time_s: 0.01 },
        strategy: [
          {
            agent: "Voter1",
            localState: "s_qqq",
            inputValuation: { pun1: "?" },
            actionId: "t1",
          },
        ],
        counterexample: null,
      },
    ],
    strategy: [
      {
        agent: "Voter1",
        localState: "s_qqq",
        inputValuation: { pun1: "?" },
        actionId: "t1",
      },
    ],
    time_s: 0.02,
  };
}

export function monoNoFixture(): MonoResult {
  return {
    mode: "mono",
    engine: "dfs",
    formula: "<<M>> G !((e=1 & m=b) | (e=2 & m=a))",
    states: 7,
    transitions: 17,
    verdict: "No",
    stats: { states: 7, transitions: 17, attempts: 2, time_s: 0.001 },
    strategy: null,
    counterexample: {
      states: [
        { index: 0, valuation: { e: "?", m: "?" } },
        { index: 1, valuation: { e: "1", m: "?" } },
        { index: 3, valuation: { e: "1", m: "b" } },
      ],
      loopStart: null,
    },
    time_s: 0.002,
  };
}
