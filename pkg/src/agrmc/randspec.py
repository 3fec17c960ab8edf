"""Random small-system generator for differential testing.

Instances are built to stay cheap to brute force: the composed model is
capped and so is the number of uniform strategies of the (single)
coalition member, since oracle tests enumerate all of them.  Rejection
sampling keeps the interface deterministic: random_spec(seed) always
returns the same document.

Shape: 2 or 3 modules, each owning exactly one small-domain variable,
with a handful of control locations mapped onto the values (several
locations may share one).  Guards reference other modules' variables.
One module is the coalition: its group carries a random G or F goal.
"""

from __future__ import annotations

from random import Random

from .composer import Caps, ResourceLimit, compose
from .lang import (
    And,
    Atom,
    Formula,
    GroupDecl,
    Guard,
    GuardConstraint,
    ModuleDecl,
    Not,
    Or,
    Pred,
    SpecDocument,
    State,
    Transition,
    VarDecl,
)

_DOMAINS = (("a", "b"), ("a", "b", "c"), ("0", "1"), ("lo", "hi", "mid"))


def _random_pred(rng: Random, atoms: list[Atom], depth: int) -> Pred:
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(atoms)
    kind = rng.random()
    if kind < 0.25:
        return Not(_random_pred(rng, atoms, depth - 1))
    left = _random_pred(rng, atoms, depth - 1)
    right = _random_pred(rng, atoms, depth - 1)
    return And(left, right) if kind < 0.65 else Or(left, right)


def _random_module(
    rng: Random, name: str, var: str, domain: tuple[str, ...], inputs: list[tuple[str, tuple[str, ...]]]
) -> ModuleDecl:
    # more local states than values: distinct control locations can share
    # a valuation, which is what makes views coarser than states
    n_states = rng.randint(len(domain), len(domain) + 3)
    values = list(domain) + [
        rng.choice(domain) for _ in range(n_states - len(domain))
    ]
    rng.shuffle(values)
    states = tuple(
        State(f"s{i}_{v}", ((var, v),)) for i, v in enumerate(values)
    )
    init = rng.choice(states).id
    n_trans = rng.randint(n_states, 3 * n_states)
    transitions = []
    for n in range(n_trans):
        src = rng.choice(states).id
        dst = rng.choice(states).id
        constraints = []
        for iv, idom in inputs:
            roll = rng.random()
            if roll < 0.45:
                continue  # unconstrained
            if roll < 0.75:
                constraints.append(GuardConstraint(iv, "eq", rng.choice(idom)))
            elif roll < 0.92:
                constraints.append(GuardConstraint(iv, "neq", rng.choice(idom)))
            else:
                constraints.append(GuardConstraint(iv, "any", None))
        transitions.append(
            Transition(src, dst, Guard(tuple(constraints)), f"t{n}")
        )
    return ModuleDecl(
        name=name,
        state_vars=(VarDecl(var, domain),),
        input_vars=tuple(iv for iv, _ in inputs),
        states=states,
        init=init,
        transitions=tuple(transitions),
    )


def _strategy_space(model, member: str) -> int:
    """Number of uniform strategies of the member over occurring views."""
    mi = model.module_index[member]
    per_view: dict = {}
    for s in range(model.n_states):
        view = model.view_of(s, mi)
        if view not in per_view:
            per_view[view] = len(model.enabled_actions(s, mi))
    count = 1
    for n in per_view.values():
        count *= max(n, 1)
    return count


def _generate(rng: Random) -> SpecDocument:
    n_modules = rng.randint(2, 3)
    names = [f"M{i}" for i in range(1, n_modules + 1)]
    vars_ = [f"x{i}" for i in range(1, n_modules + 1)]
    domains = [rng.choice(_DOMAINS) for _ in names]

    modules = []
    for i, name in enumerate(names):
        # read one or two of the other modules' variables
        others = [j for j in range(n_modules) if j != i]
        rng.shuffle(others)
        n_inputs = rng.randint(1, min(2, len(others)))
        inputs = [(vars_[j], domains[j]) for j in sorted(others[:n_inputs])]
        modules.append(
            _random_module(rng, name, vars_[i], domains[i], inputs)
        )

    coalition_idx = rng.randrange(n_modules)
    atoms = []
    for i in range(n_modules):
        for v in domains[i]:
            atoms.append(Atom(vars_[i], v))
    rng.shuffle(atoms)
    pred = _random_pred(rng, atoms[: rng.randint(2, 4)], depth=2)
    operator = "G" if rng.random() < 0.7 else "F"
    goal = Formula((names[coalition_idx],), operator, pred)

    groups = []
    for i, name in enumerate(names):
        groups.append(
            GroupDecl(
                f"Grp{name}",
                (name,),
                goal if i == coalition_idx else None,
            )
        )
    return SpecDocument(tuple(modules), tuple(groups))


def random_spec(
    seed: int, max_states: int = 200, max_strategies: int = 1024
) -> SpecDocument:
    """Deterministic instance for one seed, kept small enough for brute
    force enumeration of every uniform coalition strategy."""
    caps = Caps(max_states=max_states + 1, max_transitions=100_000)
    for attempt in range(1000):
        rng = Random(seed * 1009 + attempt)
        doc = _generate(rng)
        try:
            model = compose(doc, caps=caps)
        except ResourceLimit:
            continue
        if model.n_states > max_states:
            continue
        goal = next(g.goal for g in doc.groups if g.goal is not None)
        if goal.operator == "G":
            from .logic import eval_pred

            # mostly drop instances already violated at the initial state;
            # they are trivially No and would dominate the corpus
            if not eval_pred(model, model.initial, goal.pred) and rng.random() < 0.85:
                continue
        member = goal.coalition[0]
        if _strategy_space(model, member) > max_strategies:
            continue
        return doc
    raise RuntimeError(f"no viable instance for seed {seed}")
