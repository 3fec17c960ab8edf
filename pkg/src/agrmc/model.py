"""Explicit global models produced by composition.

A global state is one local state per module.  Edges carry the moving
module and the local action id; "stutter" marks the synthetic self loop a
module gets in states where none of its transitions is enabled, which
keeps every module schedulable and the global relation total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .lang import (
    Guard,
    ModuleDecl,
    SpecDocument,
    Transition,
    UnknownAgent,
    guard_satisfied,
)

STUTTER = "stutter"


class View(NamedTuple):
    """What a module can observe: its own local state plus the current
    values of its declared inputs, in declaration order."""

    local: str
    inputs: tuple[str, ...]


@dataclass
class Model:
    doc: SpecDocument
    modules: tuple[ModuleDecl, ...]  # composition order
    states: list[tuple[str, ...]]  # index -> local state ids per module
    initial: int
    edges: list[list[tuple[int, str, int]]]  # src -> [(module_idx, action, dst)]
    n_transitions: int = 0

    def __post_init__(self):
        self.module_index = {m.name: i for i, m in enumerate(self.modules)}
        # var -> (owning module idx, local state id -> value)
        self._var_lookup: dict[str, tuple[int, dict[str, str]]] = {}
        for i, m in enumerate(self.modules):
            for v in m.state_vars:
                table = {s.id: s.value(v.name) for s in m.states}
                self._var_lookup[v.name] = (i, table)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def value_of(self, state: int, var: str) -> str:
        idx, table = self._var_lookup[var]
        return table[self.states[state][idx]]

    def valuation(self, state: int) -> dict[str, str]:
        out = {}
        for var, (idx, table) in self._var_lookup.items():
            out[var] = table[self.states[state][idx]]
        return out

    def has_var(self, var: str) -> bool:
        return var in self._var_lookup

    def agent_index(self, agent: int | str) -> int:
        if isinstance(agent, int):
            return agent
        try:
            return self.module_index[agent]
        except KeyError:
            raise UnknownAgent(f"no module named {agent!r}") from None

    def view_of(self, state: int, agent: int | str) -> View:
        module_idx = self.agent_index(agent)
        m = self.modules[module_idx]
        local = self.states[state][module_idx]
        inputs = tuple(self.value_of(state, iv) for iv in m.input_vars)
        return View(local, inputs)

    def indistinguishable(self, agent: int | str, s: int, t: int) -> bool:
        """Two global states look the same to an agent when its local state
        and its observed input values coincide."""
        return self.view_of(s, agent) == self.view_of(t, agent)

    def enabled_actions(self, state: int, module_idx: int) -> tuple[str, ...]:
        """Actions of the module with an outgoing edge here, in declaration
        order (stutter last when present)."""
        return tuple(
            a for mi, a, _ in self.edges[state] if mi == module_idx
        )

    def successors(self, state: int) -> list[tuple[int, str, int]]:
        return self.edges[state]

    def state_key(self, state: int) -> tuple[str, ...]:
        return self.states[state]


def enabled_local(
    module: ModuleDecl, local_id: str, inputs: Mapping[str, str]
) -> tuple[Transition, ...]:
    """Local transitions of `module` enabled at `local_id` under the given
    input valuation, in declaration order."""
    return tuple(
        t
        for t in module.transitions_by_src.get(local_id, ())
        if guard_satisfied(t.guard, inputs)
    )


def enabled_transitions(
    module: ModuleDecl, local_id: str, inputs: Mapping[str, str]
) -> tuple[Transition, ...]:
    """Like enabled_local, but total: when no declared transition fires,
    the result is the synthetic stutter self-loop, so every module always
    has a move and the composed relation never deadlocks."""
    moves = enabled_local(module, local_id, inputs)
    if moves:
        return moves
    return (Transition(local_id, local_id, Guard(), STUTTER),)
