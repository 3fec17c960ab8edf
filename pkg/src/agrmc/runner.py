"""Shared verification driver for the CLI and the HTTP service.

Both front ends delegate here so a given (document, mode, engine) request
produces byte-identical result payloads no matter which surface issued it.
"""

from __future__ import annotations

import time

from .agr import _engine_fn, global_formula, verify_agr
from .composer import Caps, compose
from .export import counterexample_records, strategy_records
from .lang import ModuleDecl, SpecDocument, pretty_formula

__all__ = ["run_verification"]


def _result_fields(res, model, doc) -> dict:
    out: dict = {"verdict": res.verdict, "stats": res.stats}
    out["strategy"] = (
        strategy_records(res.strategy, doc) if res.strategy is not None else None
    )
    out["counterexample"] = (
        counterexample_records(res.counterexample, model)
        if res.counterexample is not None
        else None
    )
    return out


def run_verification(
    doc: SpecDocument,
    mode: str,
    engine: str = "dfs",
    distance: int = 1,
    assumption: ModuleDecl | None = None,
    caps: Caps | None = None,
) -> dict:
    """Run one verification request and return a JSON-ready payload.

    mode "mono" composes the full document; mode "agr" runs the
    assume-guarantee decomposition.  The payload always carries "verdict"
    plus enough structure to render strategies and counterexamples.
    """
    t0 = time.perf_counter()
    if mode == "mono":
        formula = global_formula(doc)
        model = compose(doc, caps=caps)
        res = _engine_fn(engine)(model, formula)
        payload = {
            "mode": "mono",
            "engine": engine,
            "formula": pretty_formula(formula),
            "states": model.n_states,
            "transitions": model.n_transitions,
        }
        payload.update(_result_fields(res, model, doc))
    elif mode == "agr":
        report = verify_agr(
            doc, distance=distance, engine=engine, caps=caps, assumption=assumption
        )
        tasks = []
        for t in report.tasks:
            pair = SpecDocument(
                (doc.modules_by_name[t.target], t.assumption), ()
            )
            entry = {
                "target": t.target,
                "goal": pretty_formula(t.goal),
                "assumption": t.assumption.name,
                "assumptionStates": len(t.assumption.states),
                "states": t.model_states,
                "transitions": t.model_transitions,
                "time_s": t.time_s,
            }
            entry.update(_result_fields(t.result, t.model, pair))
            tasks.append(entry)
        payload = {
            "mode": "agr",
            "engine": engine,
            "distance": distance,
            "formula": pretty_formula(report.global_formula),
            "verdict": report.combined,
            "tasks": tasks,
            "strategy": (
                strategy_records(report.strategy, doc)
                if report.strategy is not None
                else None
            ),
        }
    else:
        raise ValueError(f"unknown mode {mode!r}")
    payload["time_s"] = round(time.perf_counter() - t0, 6)
    return payload
