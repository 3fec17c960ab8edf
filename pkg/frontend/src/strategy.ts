/**
 * View models for verification outcomes: the winning-strategy table, the
 * on-graph highlight sets derived from it, and a stepper for walking a
 * counterexample path (including around its loop).
 */
import { CounterexampleDoc, StrategyRecord } from "./types.js";
import { edgeKey } from "./graph.js";

export interface StrategyRow {
  agent: string;
  localState: string;
  /** observed inputs, rendered "k=v, k=v" in sorted key order */
  observed: string;
  actionId: string;
}

export function strategyRows(records: StrategyRecord[]): StrategyRow[] {
  return records.map((r) => ({
    agent: r.agent,
    localState: r.localState,
    observed: Object.entries(r.inputValuation)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${k}=${v}`)
      .join(", "),
    actionId: r.actionId,
  }));
}

/**
 * Local states of one agent that carry a strategy choice; used to
 * highlight the agent's module graph next to the table.
 */
export function strategyStateHighlights(
  records: StrategyRecord[],
  agent: string,
): Set<string | number> {
  const out = new Set<string | number>();
  for (const r of records) {
    if (r.agent === agent) out.add(r.localState);
  }
  return out;
}

/** Edge keys along a counterexample, for highlighting on the model graph. */
export function counterexampleEdgeHighlights(cex: CounterexampleDoc): Set<string> {
  const out = new Set<string>();
  const states = cex.states;
  for (let i = 0; i + 1 < states.length; i++) {
    out.add(edgeKey(states[i]!.index, states[i + 1]!.index));
  }
  if (cex.loopStart !== null && states.length > 0) {
    const last = states[states.length - 1]!;
    const back = states[cex.loopStart];
    if (back) out.add(edgeKey(last.index, back.index));
  }
  return out;
}

export interface CexStep {
  /** index into the path, 0 based */
  position: number;
  stateIndex: number;
  valuation: Record<string, string>;
  /** true once the stepper has wrapped through loopStart at least once */
  looped: boolean;
}

/**
 * Step-by-step playback of a counterexample.  For a safety violation the
 * path is finite and next() stops at the end; for a lasso, next() from
 * the last state wraps to loopStart and marks the walk as looped.
 */
export class CexPlayer {
  private position = 0;
  private looped = false;

  constructor(private readonly cex: CounterexampleDoc) {
    if (cex.states.length === 0) {
      throw new Error("counterexample has no states");
    }
  }

  get length(): number {
    return this.cex.states.length;
  }

  get isLasso(): boolean {
    return this.cex.loopStart !== null;
  }

  current(): CexStep {
    const entry = this.cex.states[this.position]!;
    return {
      position: this.position,
      stateIndex: entry.index,
      valuation: entry.valuation,
      looped: this.looped,
    };
  }

  /** Advance one step; returns the new current step. */
  next(): CexStep {
    if (this.position + 1 < this.cex.states.length) {
      this.position += 1;
    } else if (this.cex.loopStart !== null) {
      this.position = this.cex.loopStart;
      this.looped = true;
    }
    // finite path at its end: stay put
    return this.current();
  }

  /** Step back one position (never below the start). */
  prev(): CexStep {
    if (this.position > 0) this.position -= 1;
    return this.current();
  }

  reset(): CexStep {
    this.position = 0;
    this.looped = false;
    return this.current();
  }
}
