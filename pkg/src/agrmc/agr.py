"""Assume-guarantee orchestration.

The global claim is split along the declared groups: every group whose
GOAL names a coalition yields one task per coalition member.  Each task
verifies that member against a generated (or user-supplied) assumption
instead of the full environment, so the model a task touches stays
small.  All tasks Yes means the joint strategy exists and the global
conjunction holds; any other outcome is reported as Inconclusive, never
No, because a failure against an over-approximated environment proves
nothing about the real one.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .assumptions import generate_assumption
from .composer import Caps, _env_int, compose
from .engines import VerifyResult, dfs_synthesize, fixpoint_approx
from .lang import (
    And,
    Formula,
    InvalidParameter,
    ModuleDecl,
    SpecDocument,
    SpecError,
)
from .logic import INCONCLUSIVE, Strategy, YES


class MissingGoal(SpecError):
    """A coalition group is expected to carry a GOAL but does not."""


class MixedTemporalOperators(SpecError):
    """Local goals must all be G or all be F to conjoin."""


@dataclass
class AgrTask:
    """One member module checked against its environment summary."""

    target: str
    goal: Formula
    assumption: ModuleDecl
    result: VerifyResult | None = None
    model: object | None = None  # the composed target || assumption model
    model_states: int = 0
    model_transitions: int = 0
    time_s: float = 0.0


@dataclass
class AgrReport:
    global_formula: Formula
    tasks: list[AgrTask]
    combined: str
    strategy: Strategy | None = None
    time_s: float = 0.0


def _engine_fn(engine: str):
    if engine == "dfs":
        return dfs_synthesize
    if engine == "apprx":
        return fixpoint_approx
    raise InvalidParameter(f"unknown engine {engine!r}, expected dfs or apprx")


def coalition_goals(doc: SpecDocument) -> list[tuple[str, Formula]]:
    """(group name, goal) for every goal-bearing group, document order."""
    return [(g.name, g.goal) for g in doc.groups if g.goal is not None]


def global_formula(doc: SpecDocument) -> Formula:
    """Conjunction of the local goals under the joint coalition."""
    goals = coalition_goals(doc)
    if not goals:
        raise MissingGoal("no group declares a GOAL")
    operators = {f.operator for _, f in goals}
    if len(operators) > 1:
        raise MixedTemporalOperators(
            "local goals mix G and F; they cannot be conjoined"
        )
    coalition: list[str] = []
    for g in doc.groups:
        if g.goal is not None:
            for member in g.members:
                if member not in coalition:
                    coalition.append(member)
    pred = goals[0][1].pred
    for _, f in goals[1:]:
        pred = And(pred, f.pred)
    return Formula(tuple(coalition), operators.pop(), pred)


def verify_monolithic(
    doc: SpecDocument, engine: str = "dfs", caps: Caps | None = None
) -> VerifyResult:
    """Compose the whole system and run one engine on the conjunction."""
    formula = global_formula(doc)
    run = _engine_fn(engine)
    model = compose(doc, caps=caps)
    return run(model, formula)


def verify_agr(
    doc: SpecDocument,
    distance: int = 1,
    engine: str = "dfs",
    caps: Caps | None = None,
    assumption: ModuleDecl | None = None,
    workers: int | None = None,
) -> AgrReport:
    """Per-member compositional verification.

    Every coalition member named in a group goal is verified, with the
    coalition narrowed to just that member, against the composition of
    its module and its assumption.  A user-supplied assumption replaces
    the generated one for every task."""
    gf = global_formula(doc)  # also validates goals and operators
    run = _engine_fn(engine)
    goals = coalition_goals(doc)

    tasks: list[AgrTask] = []
    for _, goal in goals:
        for member in goal.coalition:
            local = Formula((member,), goal.operator, goal.pred)
            a = assumption
            if a is None:
                a = generate_assumption(doc, member, distance, caps=caps)
            tasks.append(AgrTask(target=member, goal=local, assumption=a))

    def run_task(task: AgrTask):
        t0 = time.perf_counter()
        pair = SpecDocument(
            (doc.modules_by_name[task.target], task.assumption), ()
        )
        model = compose(pair, caps=caps)
        task.model = model
        task.model_states = model.n_states
        task.model_transitions = model.n_transitions
        task.result = run(model, task.goal)
        task.time_s = round(time.perf_counter() - t0, 6)

    t0 = time.perf_counter()
    if workers is None:
        workers = _env_int("AGRMC_WORKERS", 4)
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_task, tasks))
    else:
        for task in tasks:
            run_task(task)

    if all(t.result.verdict == YES for t in tasks):
        joint = Strategy({})
        for t in tasks:
            for agent, moves in t.result.strategy.moves.items():
                joint.moves[agent] = dict(moves)
        return AgrReport(
            global_formula=gf,
            tasks=tasks,
            combined=YES,
            strategy=joint,
            time_s=round(time.perf_counter() - t0, 6),
        )
    return AgrReport(
        global_formula=gf,
        tasks=tasks,
        combined=INCONCLUSIVE,
        strategy=None,
        time_s=round(time.perf_counter() - t0, 6),
    )
