"""Goal evaluation and strategy checking on composed models.

A strategy for a coalition assigns one action to every view of every
member.  Views carry only the member's local state and its input values,
so two global states the member cannot tell apart get the same choice;
that is the uniformity requirement, and it is what makes synthesis hard.

The outcome of a strategy is judged from the whole start set: every
global state in which each coalition member's view coincides with its
view at the initial state.  The members cannot rule any of them out, so
all must satisfy the goal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .lang import And, Atom, Formula, Not, Or, Pred, SpecError, UnknownVariable
from .model import Model, View


class PartialStrategy(SpecError):
    """Raised when a strategy is consulted at a view it never defined."""

    def __init__(self, agent: str, view: View):
        self.agent = agent
        self.view = view
        super().__init__(
            f"strategy undefined for agent {agent} at view "
            f"(local={view.local}, inputs={view.inputs})"
        )

YES = "Yes"
NO = "No"
INCONCLUSIVE = "Inconclusive"


def atoms_of(pred: Pred) -> list[Atom]:
    out: list[Atom] = []
    stack = [pred]
    while stack:
        p = stack.pop()
        if isinstance(p, Atom):
            out.append(p)
        elif isinstance(p, Not):
            stack.append(p.sub)
        else:
            stack.append(p.left)
            stack.append(p.right)
    return out


def check_vars(model: Model, pred: Pred) -> None:
    for a in atoms_of(pred):
        if not model.has_var(a.var):
            raise UnknownVariable(
                f"goal references variable {a.var!r} absent from the model"
            )


def eval_pred(model: Model, state: int, pred: Pred) -> bool:
    if isinstance(pred, Atom):
        return model.value_of(state, pred.var) == pred.value
    if isinstance(pred, Not):
        return not eval_pred(model, state, pred.sub)
    if isinstance(pred, And):
        return eval_pred(model, state, pred.left) and eval_pred(
            model, state, pred.right
        )
    if isinstance(pred, Or):
        return eval_pred(model, state, pred.left) or eval_pred(
            model, state, pred.right
        )
    raise TypeError(f"not a predicate: {pred!r}")


def coalition_indices(model: Model, formula: Formula) -> tuple[int, ...]:
    missing = [a for a in formula.coalition if a not in model.module_index]
    if missing:
        raise UnknownVariable(
            f"coalition members {missing} are not modules of this model"
        )
    return tuple(model.module_index[a] for a in formula.coalition)


def start_set(model: Model, coalition: tuple[int, ...]) -> list[int]:
    """States the coalition cannot distinguish from the initial one."""
    init_views = [model.view_of(model.initial, mi) for mi in coalition]
    out = []
    for s in range(model.n_states):
        if all(
            model.view_of(s, mi) == iv
            for mi, iv in zip(coalition, init_views)
        ):
            out.append(s)
    return out


@dataclass
class Strategy:
    """Per-agent uniform choice: agent name -> view -> action id."""

    moves: dict[str, dict[View, str]] = field(default_factory=dict)

    def action(self, agent: str, view: View) -> str:
        try:
            return self.moves[agent][view]
        except KeyError:
            raise PartialStrategy(agent, view) from None

    def size(self) -> int:
        return sum(len(m) for m in self.moves.values())


@dataclass(frozen=True)
class Counterexample:
    """A violating path; loop_start marks the lasso cycle entry for
    liveness violations (None for safety)."""

    states: tuple[int, ...]
    loop_start: int | None = None


@dataclass
class CheckResult:
    verdict: str
    counterexample: Counterexample | None = None


def induced_edges(
    model: Model,
    coalition: tuple[int, ...],
    strategy: Strategy,
    state: int,
) -> list[tuple[int, str, int]]:
    """Outgoing edges once coalition members follow the strategy."""
    cset = set(coalition)
    out = []
    for mi, action, dst in model.edges[state]:
        if mi in cset:
            agent = model.modules[mi].name
            if strategy.action(agent, model.view_of(state, mi)) != action:
                continue
        out.append((mi, action, dst))
    return out


def _path_from_parents(parents: dict[int, int | None], end: int) -> list[int]:
    path = [end]
    while parents[path[-1]] is not None:
        path.append(parents[path[-1]])
    path.reverse()
    return path


def check_strategy(
    model: Model, strategy: Strategy, formula: Formula
) -> CheckResult:
    """Does the strategy enforce the goal from every start state?

    Safety violations come back as a shortest path to a bad state;
    liveness violations as a lasso that never reaches the goal.
    """
    check_vars(model, formula.pred)
    coalition = coalition_indices(model, formula)
    starts = start_set(model, coalition)

    if formula.operator == "G":
        parents: dict[int, int | None] = {s: None for s in starts}
        queue = deque(starts)
        while queue:
            s = queue.popleft()
            if not eval_pred(model, s, formula.pred):
                return CheckResult(
                    NO, Counterexample(tuple(_path_from_parents(parents, s)))
                )
            for _, _, dst in induced_edges(model, coalition, strategy, s):
                if dst not in parents:
                    parents[dst] = s
                    queue.append(dst)
        return CheckResult(YES)

    # F: a violation is an infinite run that never satisfies the goal,
    # i.e. a cycle lying inside the bad region and reachable from a start
    # state through bad states only (the relation is total).
    bad_starts = [
        s for s in starts if not eval_pred(model, s, formula.pred)
    ]
    region: set[int] = set(bad_starts)
    queue = deque(bad_starts)
    while queue:
        s = queue.popleft()
        for _, _, dst in induced_edges(model, coalition, strategy, s):
            if dst not in region and not eval_pred(model, dst, formula.pred):
                region.add(dst)
                queue.append(dst)

    # cycle hunt inside the region, iterative DFS with colors
    color: dict[int, int] = {}  # 1 gray, 2 black
    dfs_parent: dict[int, int | None] = {}
    for root in bad_starts:
        if color.get(root):
            continue
        dfs_parent[root] = None
        stack: list[tuple[int, list[int]]] = [
            (
                root,
                [
                    d
                    for _, _, d in induced_edges(
                        model, coalition, strategy, root
                    )
                    if d in region
                ],
            )
        ]
        color[root] = 1
        while stack:
            node, todo = stack[-1]
            if not todo:
                color[node] = 2
                stack.pop()
                continue
            nxt = todo.pop(0)
            if color.get(nxt) == 1:
                # lasso: gray stack from nxt to node, then back
                chain = [n for n, _ in stack]
                loop = chain[chain.index(nxt) :]
                prefix = _path_from_parents(dfs_parent, nxt)
                return CheckResult(
                    NO,
                    Counterexample(
                        tuple(prefix + loop[1:] + [nxt]),
                        loop_start=len(prefix) - 1,
                    ),
                )
            if color.get(nxt) is None:
                color[nxt] = 1
                dfs_parent[nxt] = node
                stack.append(
                    (
                        nxt,
                        [
                            d
                            for _, _, d in induced_edges(
                                model, coalition, strategy, nxt
                            )
                            if d in region
                        ],
                    )
                )
        color[root] = 2
    return CheckResult(YES)


def win_set(
    model: Model, strategy: Strategy, formula: Formula
) -> set[int]:
    """All states from which the strategy enforces the goal, regardless
    of the start set.  Exact, by backward analysis of the induced graph."""
    check_vars(model, formula.pred)
    coalition = coalition_indices(model, formula)
    n = model.n_states
    sat = [eval_pred(model, s, formula.pred) for s in range(n)]

    rev: list[list[int]] = [[] for _ in range(n)]
    fwd: list[list[int]] = [[] for _ in range(n)]
    for s in range(n):
        for _, _, dst in induced_edges(model, coalition, strategy, s):
            rev[dst].append(s)
            fwd[s].append(dst)

    if formula.operator == "G":
        # lose exactly from states that can reach a bad state
        losing = {s for s in range(n) if not sat[s]}
        queue = deque(losing)
        while queue:
            s = queue.popleft()
            for p in rev[s]:
                if p not in losing:
                    losing.add(p)
                    queue.append(p)
        return set(range(n)) - losing

    # F: lose from bad states that can reach a cycle of bad states
    # without passing through a goal state
    bad = [s for s in range(n) if not sat[s]]
    bad_set = set(bad)
    # cyclic cores inside the bad region, Tarjan without recursion
    idx = {}
    low = {}
    on_stack = set()
    order = []
    counter = [0]
    cyclic: set[int] = set()
    for root in bad:
        if root in idx:
            continue
        work = [(root, iter([d for d in fwd[root] if d in bad_set]))]
        idx[root] = low[root] = counter[0]
        counter[0] += 1
        order.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in idx:
                    idx[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    order.append(nxt)
                    on_stack.add(nxt)
                    work.append(
                        (nxt, iter([d for d in fwd[nxt] if d in bad_set]))
                    )
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], idx[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == idx[node]:
                scc = []
                while True:
                    member = order.pop()
                    on_stack.discard(member)
                    scc.append(member)
                    if member == node:
                        break
                if len(scc) > 1:
                    cyclic.update(scc)
                else:
                    only = scc[0]
                    if only in fwd[only] and only in bad_set:
                        cyclic.add(only)
    losing = set(cyclic)
    queue = deque(losing)
    while queue:
        s = queue.popleft()
        for p in rev[s]:
            if p in bad_set and p not in losing:
                losing.add(p)
                queue.append(p)
    return set(range(n)) - losing
