"""Verification engines.

dfs_synthesize searches the space of uniform strategies directly: it
explores the composition breadth first, and the first time it reaches a
coalition view with no assigned action it branches over the enabled
actions (declaration order) and recurses with the extended assignment.
Violations prune the branch.  Complete but worst case exponential.

fixpoint_approx computes two cheap bounds instead.  The upper bound is
the perfect-information winning set (coalition picks actions per state),
a gfp for G goals and an attractor lfp for F goals.  The lower bound
runs the same iteration over classes of states the coalition cannot
distinguish, and a whole class survives only if one common joint choice
works for every member.  Start set inside the lower bound: Yes, with
the strategy read off the recorded class choices.  Start set outside
the upper bound: No.  Anything else: Inconclusive.

Neither engine assumes scheduler fairness, so F goals fail whenever the
scheduler can starve the coalition forever; see the README caveat.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .lang import Formula
from .logic import (
    Counterexample,
    INCONCLUSIVE,
    NO,
    Strategy,
    YES,
    check_strategy,
    check_vars,
    coalition_indices,
    eval_pred,
    start_set,
)
from .model import Model, View


@dataclass
class VerifyResult:
    verdict: str
    strategy: Strategy | None = None
    counterexample: Counterexample | None = None
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# DFS synthesis


def _fill_strategy(
    model: Model,
    coalition: tuple[int, ...],
    assignment: dict[tuple[str, View], str],
) -> Strategy:
    """Total strategy: assigned views keep their action, everything else
    takes the first enabled action."""
    moves: dict[str, dict[View, str]] = {
        model.modules[mi].name: {} for mi in coalition
    }
    for (agent, view), action in assignment.items():
        moves[agent][view] = action
    for s in range(model.n_states):
        for mi in coalition:
            agent = model.modules[mi].name
            view = model.view_of(s, mi)
            if view not in moves[agent]:
                moves[agent][view] = model.enabled_actions(s, mi)[0]
    return Strategy(moves)


def dfs_synthesize(model: Model, formula: Formula) -> VerifyResult:
    check_vars(model, formula.pred)
    coalition = coalition_indices(model, formula)
    cset = set(coalition)
    agents = {mi: model.modules[mi].name for mi in coalition}
    starts = start_set(model, coalition)
    always = formula.operator == "G"
    attempts = [0]

    def edges_under(s: int, assignment) -> list[tuple[int, str, int]]:
        out = []
        for mi, action, dst in model.edges[s]:
            if mi in cset:
                chosen = assignment.get((agents[mi], model.view_of(s, mi)))
                assert chosen is not None
                if action != chosen:
                    continue
            out.append((mi, action, dst))
        return out

    def liveness_failure(assignment) -> Counterexample | None:
        """Lasso through goal-violating states, if one is reachable."""
        bad_starts = [
            s for s in starts if not eval_pred(model, s, formula.pred)
        ]
        region = set(bad_starts)
        queue = deque(bad_starts)
        while queue:
            s = queue.popleft()
            for _, _, dst in edges_under(s, assignment):
                if dst not in region and not eval_pred(
                    model, dst, formula.pred
                ):
                    region.add(dst)
                    queue.append(dst)
        color: dict[int, int] = {}
        dfs_parent: dict[int, int | None] = {}
        for root in bad_starts:
            if color.get(root):
                continue
            dfs_parent[root] = None
            color[root] = 1
            stack = [
                (
                    root,
                    [
                        d
                        for _, _, d in edges_under(root, assignment)
                        if d in region
                    ],
                )
            ]
            while stack:
                node, todo = stack[-1]
                if not todo:
                    color[node] = 2
                    stack.pop()
                    continue
                nxt = todo.pop(0)
                if color.get(nxt) == 1:
                    chain = [n for n, _ in stack]
                    loop = chain[chain.index(nxt) :]
                    prefix = [nxt]
                    while dfs_parent[prefix[-1]] is not None:
                        prefix.append(dfs_parent[prefix[-1]])
                    prefix.reverse()
                    return Counterexample(
                        tuple(prefix + loop[1:] + [nxt]),
                        loop_start=len(prefix) - 1,
                    )
                if color.get(nxt) is None:
                    color[nxt] = 1
                    dfs_parent[nxt] = node
                    stack.append(
                        (
                            nxt,
                            [
                                d
                                for _, _, d in edges_under(nxt, assignment)
                                if d in region
                            ],
                        )
                    )
        return None

    def attempt(assignment) -> tuple[bool, Counterexample | None]:
        attempts[0] += 1
        parents: dict[int, int | None] = {s: None for s in starts}
        queue = deque(starts)
        while queue:
            s = queue.popleft()
            if always and not eval_pred(model, s, formula.pred):
                path = [s]
                while parents[path[-1]] is not None:
                    path.append(parents[path[-1]])
                path.reverse()
                return False, Counterexample(tuple(path))
            for mi, action, dst in model.edges[s]:
                if mi in cset:
                    key = (agents[mi], model.view_of(s, mi))
                    chosen = assignment.get(key)
                    if chosen is None:
                        # first unassigned view: branch over its actions
                        last_cex = None
                        for option in model.enabled_actions(s, mi):
                            assignment[key] = option
                            ok, cex = attempt(assignment)
                            if ok:
                                return True, None
                            last_cex = cex
                            del assignment[key]
                        return False, last_cex
                    if action != chosen:
                        continue
                if dst not in parents:
                    parents[dst] = s
                    queue.append(dst)
        if always:
            return True, None
        cex = liveness_failure(assignment)
        return (cex is None), cex

    t0 = time.perf_counter()
    assignment: dict[tuple[str, View], str] = {}
    ok, cex = attempt(assignment)
    stats = {
        "states": model.n_states,
        "transitions": model.n_transitions,
        "attempts": attempts[0],
        "time_s": round(time.perf_counter() - t0, 6),
    }
    if ok:
        strategy = _fill_strategy(model, coalition, assignment)
        return VerifyResult(YES, strategy=strategy, stats=stats)
    return VerifyResult(NO, counterexample=cex, stats=stats)


# ---------------------------------------------------------------------------
# Fixpoint approximation


def _move_tables(model: Model, coalition: tuple[int, ...]):
    """Per state: destinations of uncontrolled moves, and per coalition
    member its action -> destination map."""
    cset = set(coalition)
    n = model.n_states
    noncoal: list[list[int]] = [[] for _ in range(n)]
    choice: list[dict[int, dict[str, int]]] = [
        {mi: {} for mi in coalition} for _ in range(n)
    ]
    for s in range(n):
        for mi, action, dst in model.edges[s]:
            if mi in cset:
                choice[s][mi][action] = dst
            else:
                noncoal[s].append(dst)
    return noncoal, choice


def approx_upper(model: Model, formula: Formula) -> set[int]:
    """Perfect-information winning set; an upper bound on every uniform
    strategy's winning set."""
    check_vars(model, formula.pred)
    coalition = coalition_indices(model, formula)
    n = model.n_states
    sat = [eval_pred(model, s, formula.pred) for s in range(n)]
    noncoal, choice = _move_tables(model, coalition)

    def controllable(s: int, target: set[int]) -> bool:
        if any(d not in target for d in noncoal[s]):
            return False
        for mi in coalition:
            if all(d not in target for d in choice[s][mi].values()):
                return False
        return True

    if formula.operator == "G":
        x = {s for s in range(n) if sat[s]}
        while True:
            drop = [s for s in x if not controllable(s, x)]
            if not drop:
                return x
            x.difference_update(drop)
    y = {s for s in range(n) if sat[s]}
    while True:
        add = [s for s in range(n) if s not in y and controllable(s, y)]
        if not add:
            return y
        y.update(add)


def approx_lower(
    model: Model, formula: Formula, global_classes: bool = False
) -> tuple[Strategy, set[int]]:
    """Uniform iteration: states are grouped by the coalition's joint
    view and a whole class survives only with one common choice; the
    choice is recorded so a strategy can be read off the fixpoint.

    By default a state's class is re-evaluated inside the current
    candidate set at each step.  With global_classes=True the classes
    are fixed once over the whole state space, which is coarser: a class
    with any member outside the candidates can never enter."""
    check_vars(model, formula.pred)
    coalition = coalition_indices(model, formula)
    agents = {mi: model.modules[mi].name for mi in coalition}
    n = model.n_states
    sat = [eval_pred(model, s, formula.pred) for s in range(n)]
    noncoal, choice = _move_tables(model, coalition)

    def view_key(s: int) -> tuple[View, ...]:
        return tuple(model.view_of(s, mi) for mi in coalition)

    def classes_of(states) -> list[list[int]]:
        groups: dict[tuple[View, ...], list[int]] = {}
        for s in sorted(states):
            groups.setdefault(view_key(s), []).append(s)
        return [groups[k] for k in sorted(groups)]

    def common_choice(cls: list[int], target: set[int]):
        """First joint action every class member can take into target,
        with its uncontrolled moves inside target too; None if no such."""
        if any(any(d not in target for d in noncoal[s]) for s in cls):
            return None
        rep = cls[0]
        # dict preserves edge insertion order, i.e. declaration order
        options = [list(choice[rep][mi].keys()) for mi in coalition]
        for joint in product(*options):
            ok = True
            for s in cls:
                for mi, action in zip(coalition, joint):
                    dst = choice[s][mi].get(action)
                    if dst is None or dst not in target:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return joint
        return None

    fixed_classes = classes_of(range(n)) if global_classes else None
    chosen: dict[tuple[View, ...], tuple[str, ...]] = {}
    if formula.operator == "G":
        x = {s for s in range(n) if sat[s]}
        while True:
            keep: set[int] = set()
            if global_classes:
                for cls in fixed_classes:
                    if all(s in x for s in cls) and common_choice(cls, x):
                        keep.update(cls)
            else:
                for cls in classes_of(x):
                    if common_choice(cls, x) is not None:
                        keep.update(cls)
            if keep == x:
                break
            x = keep
        for cls in classes_of(x):
            joint = common_choice(cls, x)
            if joint is not None:
                chosen.setdefault(view_key(cls[0]), joint)
        lower = x
    else:
        y = {s for s in range(n) if sat[s]}
        while True:
            added = False
            if global_classes:
                pending = [
                    [s for s in cls if s not in y] for cls in fixed_classes
                ]
                pending = [cls for cls in pending if cls]
            else:
                pending = classes_of(set(range(n)) - y)
            for cls in pending:
                joint = common_choice(cls, y)
                if joint is not None:
                    y.update(cls)
                    chosen.setdefault(view_key(cls[0]), joint)
                    added = True
            if not added:
                break
        lower = y

    assignment: dict[tuple[str, View], str] = {}
    for vk, joint in chosen.items():
        for mi, view, action in zip(coalition, vk, joint):
            assignment.setdefault((agents[mi], view), action)
    strategy = _fill_strategy(model, coalition, assignment)
    return strategy, lower


def fixpoint_approx(
    model: Model, formula: Formula, global_classes: bool = False
) -> VerifyResult:
    t0 = time.perf_counter()
    coalition = coalition_indices(model, formula)
    starts = start_set(model, coalition)
    upper = approx_upper(model, formula)
    stats = {
        "states": model.n_states,
        "transitions": model.n_transitions,
        "upper": len(upper),
        "starts": len(starts),
    }
    outside = [s for s in starts if s not in upper]
    if outside:
        stats["lower"] = None
        stats["time_s"] = round(time.perf_counter() - t0, 6)
        return VerifyResult(
            NO,
            counterexample=Counterexample((outside[0],)),
            stats=stats,
        )
    strategy, lower = approx_lower(model, formula, global_classes)
    stats["lower"] = len(lower)
    if all(s in lower for s in starts):
        # guard against extraction artifacts: the same single-agent view
        # can occur in two joint classes with different recorded choices,
        # in which case the read-off strategy may not realize the bound
        confirmed = check_strategy(model, strategy, formula)
        stats["time_s"] = round(time.perf_counter() - t0, 6)
        if confirmed.verdict == YES:
            return VerifyResult(YES, strategy=strategy, stats=stats)
        return VerifyResult(INCONCLUSIVE, stats=stats)
    stats["time_s"] = round(time.perf_counter() - t0, 6)
    return VerifyResult(INCONCLUSIVE, stats=stats)
