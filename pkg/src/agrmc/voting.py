"""Parametric voting scenario used as the scaling benchmark.

k voters, one coercer.  Voter i casts a vote for candidate 1 or 2, then
either shares the value with the coercer or refuses, then waits for the
coercer's punish/no-punish decision and records it.  The coercer watches
the reported values and decides each punishment once the corresponding
voter has reported.  The question is whether voter 1 can ensure that
being unpunished or having voted 1 always holds, seeing only its own
state and pun1.

All variable domains use '?' for "not yet" and '!' for a refused report.
State ids encode the local valuation with q for '?' and x for '!'.
"""

from __future__ import annotations

from itertools import product

from .lang import (
    Guard,
    GuardConstraint,
    GroupDecl,
    InvalidParameter,
    ModuleDecl,
    SpecDocument,
    State,
    Transition,
    VarDecl,
    parse_formula,
)


def _voter(i: int) -> ModuleDecl:
    vote, rep, pun, ps = f"vote{i}", f"reported{i}", f"pun{i}", f"pstatus{i}"

    def sid(v: str, r: str, p: str) -> str:
        tr = {"?": "q", "!": "x"}
        return "s_" + "".join(tr.get(c, c) for c in (v, r, p))

    states = []
    for v, r in [
        ("?", "?"),
        ("1", "?"),
        ("2", "?"),
        ("1", "1"),
        ("1", "!"),
        ("2", "!"),
        ("2", "2"),
    ]:
        states.append(State(sid(v, r, "?"), ((vote, v), (rep, r), (ps, "?"))))
    for v, r in [("1", "1"), ("1", "!"), ("2", "!"), ("2", "2")]:
        for p in ("T", "F"):
            states.append(State(sid(v, r, p), ((vote, v), (rep, r), (ps, p))))

    free = Guard()
    eq = lambda val: Guard((GuardConstraint(pun, "eq", val),))
    trans: list[tuple[str, str, Guard]] = [
        (sid("?", "?", "?"), sid("1", "?", "?"), free),  # vote 1
        (sid("?", "?", "?"), sid("2", "?", "?"), free),  # vote 2
        (sid("1", "?", "?"), sid("1", "1", "?"), free),  # share
        (sid("1", "?", "?"), sid("1", "!", "?"), free),  # refuse
        (sid("2", "?", "?"), sid("2", "!", "?"), free),  # refuse
        (sid("2", "?", "?"), sid("2", "2", "?"), free),  # share
    ]
    # waiting for the punish decision; outcome branch order mirrors the
    # source material, it is not uniform across the four report states
    outcomes = {
        ("1", "1"): ("T", "F"),
        ("1", "!"): ("F", "T"),
        ("2", "!"): ("T", "F"),
        ("2", "2"): ("F", "T"),
    }
    for (v, r), (first, second) in outcomes.items():
        c = sid(v, r, "?")
        trans.append((c, c, eq("?")))
        trans.append((c, sid(v, r, first), eq(first)))
        trans.append((c, sid(v, r, second), eq(second)))
    for v, r in [("1", "1"), ("1", "!"), ("2", "!"), ("2", "2")]:
        for p in ("T", "F"):
            trans.append((sid(v, r, p), sid(v, r, p), free))

    return ModuleDecl(
        name=f"Voter{i}",
        state_vars=(
            VarDecl(vote, ("?", "1", "2")),
            VarDecl(rep, ("?", "1", "2", "!")),
            VarDecl(ps, ("?", "T", "F")),
        ),
        input_vars=(pun,),
        states=tuple(states),
        init=sid("?", "?", "?"),
        transitions=tuple(
            Transition(s, d, g, f"t{n}") for n, (s, d, g) in enumerate(trans)
        ),
    )


def _coercer(k: int) -> ModuleDecl:
    puns = [f"pun{i}" for i in range(1, k + 1)]
    reps = [f"reported{i}" for i in range(1, k + 1)]

    def sid(vals: tuple[str, ...]) -> str:
        return "c_" + "".join("q" if v == "?" else v for v in vals)

    states = [
        State(sid(vals), tuple(zip(puns, vals)))
        for vals in product("?TF", repeat=k)
    ]

    trans: list[tuple[str, str, Guard]] = []
    for vals in product("?TF", repeat=k):
        src = sid(vals)
        wait = Guard(
            tuple(
                GuardConstraint(reps[i], "eq", "?")
                for i in range(k)
                if vals[i] == "?"
            )
        )
        trans.append((src, src, wait))
        for i in range(k):
            if vals[i] != "?":
                continue
            decided = Guard((GuardConstraint(reps[i], "neq", "?"),))
            for verdict in ("T", "F"):
                dst = sid(vals[:i] + (verdict,) + vals[i + 1 :])
                trans.append((src, dst, decided))

    return ModuleDecl(
        name="Coercer",
        state_vars=tuple(VarDecl(p, ("?", "T", "F")) for p in puns),
        input_vars=tuple(reps),
        states=tuple(states),
        init=sid(tuple("?" * k)),
        transitions=tuple(
            Transition(s, d, g, f"t{n}") for n, (s, d, g) in enumerate(trans)
        ),
    )


VOTING_GOAL = '<<Voter1>> G (!(pstatus1=T) | vote1=1)'


def generate_simple_voting(k: int) -> SpecDocument:
    """The k-voter instance.  Reachable composed state space is 23^k.

    Groups: one per module; only Voter1's group carries a goal, so the
    coalition is the singleton {Voter1}."""
    if k < 1:
        raise InvalidParameter(f"need at least one voter, got {k}")
    modules = tuple(_voter(i) for i in range(1, k + 1)) + (_coercer(k),)
    groups = [GroupDecl("GVoter1", ("Voter1",), parse_formula(VOTING_GOAL))]
    for i in range(2, k + 1):
        groups.append(GroupDecl(f"GVoter{i}", (f"Voter{i}",), None))
    groups.append(GroupDecl("GCoercer", ("Coercer",), None))
    return SpecDocument(modules, tuple(groups))
