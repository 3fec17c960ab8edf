"""Interleaving composition of modules into an explicit global model.

One module moves per global step.  A module's transition is enabled when
its guard is satisfied by the current values of its input variables,
which are owned by other modules in the composition.  Modules with no
enabled transition contribute a synthetic "stutter" self loop so the
global relation stays total.

Exploration is a BFS from the initial state; state and edge order is
deterministic (modules in composition order, transitions in declaration
order), which downstream engines rely on.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .lang import SpecDocument, UnknownVariable
from .model import Model, enabled_transitions


class ResourceLimit(Exception):
    """Composition exceeded a configured cap.

    kind is one of "states", "transitions", "memory".
    """

    def __init__(self, kind: str, detail: str):
        self.kind = kind
        super().__init__(f"resource limit ({kind}): {detail}")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(float(raw))
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}") from None


@dataclass(frozen=True)
class Caps:
    max_states: int = 10_000_000
    max_transitions: int = 100_000_000
    max_memory_mib: int = 512

    @classmethod
    def from_env(cls) -> "Caps":
        """Defaults, overridable through AGRMC_STATE_CAP,
        AGRMC_TRANS_CAP and AGRMC_MEM_CAP (MiB)."""
        return cls(
            max_states=_env_int("AGRMC_STATE_CAP", cls.max_states),
            max_transitions=_env_int("AGRMC_TRANS_CAP", cls.max_transitions),
            max_memory_mib=_env_int("AGRMC_MEM_CAP", cls.max_memory_mib),
        )


def _estimate_bytes(n_states: int, n_modules: int, n_transitions: int) -> int:
    # state tuple: one slot per module plus object header; edge: 4 words
    return n_states * (8 * n_modules + 40) + n_transitions * 32


_MEM_CHECK_STRIDE = 4096


def compose(
    doc: SpecDocument,
    modules: list[str] | None = None,
    caps: Caps | None = None,
) -> Model:
    """Compose the named modules (default: all, in document order).

    The selection must be input closed: every input of a selected module
    must be owned by another selected module.
    """
    if caps is None:
        caps = Caps.from_env()
    if modules is None:
        selected = doc.modules
    else:
        by_name = doc.modules_by_name
        missing = [m for m in modules if m not in by_name]
        if missing:
            raise UnknownVariable(f"unknown modules: {missing}")
        selected = tuple(by_name[m] for m in modules)

    owners: dict[str, int] = {}
    for i, m in enumerate(selected):
        for v in m.state_vars:
            owners[v.name] = i
    for m in selected:
        for iv in m.input_vars:
            if iv not in owners:
                raise UnknownVariable(
                    f"input {iv!r} of module {m.name} is not owned by any "
                    "module in this composition"
                )

    # var value lookup: input var -> (owner idx, local id -> value)
    lookup: dict[str, tuple[int, dict[str, str]]] = {}
    for i, m in enumerate(selected):
        for v in m.state_vars:
            lookup[v.name] = (i, {s.id: s.value(v.name) for s in m.states})

    # per module: where to read each input from, and a move cache keyed
    # by (local state, observed input values); the cache pays off because
    # many global states share a module's view
    slots = [
        tuple(lookup[iv] for iv in m.input_vars) for m in selected
    ]
    move_cache: list[dict[tuple, tuple[tuple[str, str], ...]]] = [
        {} for _ in selected
    ]

    init = tuple(m.init for m in selected)
    index: dict[tuple[str, ...], int] = {init: 0}
    states: list[tuple[str, ...]] = [init]
    edges: list[list[tuple[int, str, int]]] = [[]]
    n_transitions = 0
    n_modules = len(selected)
    mem_cap_bytes = caps.max_memory_mib * 1024 * 1024
    since_mem_check = 0

    queue = deque([0])
    while queue:
        src = queue.popleft()
        key = states[src]
        out = edges[src]
        for mi, m in enumerate(selected):
            local = key[mi]
            ivals = tuple(table[key[oi]] for oi, table in slots[mi])
            cached = move_cache[mi].get((local, ivals))
            if cached is None:
                inputs = dict(zip(m.input_vars, ivals))
                cached = tuple(
                    (t.action, t.dst)
                    for t in enabled_transitions(m, local, inputs)
                )
                move_cache[mi][(local, ivals)] = cached
            for action, dst_local in cached:
                dst_key = key[:mi] + (dst_local,) + key[mi + 1 :]
                dst = index.get(dst_key)
                if dst is None:
                    dst = len(states)
                    if dst >= caps.max_states:
                        raise ResourceLimit(
                            "states",
                            f"more than {caps.max_states} states",
                        )
                    index[dst_key] = dst
                    states.append(dst_key)
                    edges.append([])
                    queue.append(dst)
                out.append((mi, action, dst))
                n_transitions += 1
            if n_transitions > caps.max_transitions:
                raise ResourceLimit(
                    "transitions",
                    f"more than {caps.max_transitions} transitions",
                )
            since_mem_check += 1
            if since_mem_check >= _MEM_CHECK_STRIDE:
                since_mem_check = 0
                est = _estimate_bytes(len(states), n_modules, n_transitions)
                if est > mem_cap_bytes:
                    raise ResourceLimit(
                        "memory",
                        f"estimated {est // (1024 * 1024)} MiB exceeds "
                        f"{caps.max_memory_mib} MiB "
                        f"({len(states)} states, {n_transitions} transitions)",
                    )

    return Model(
        doc=doc,
        modules=selected,
        states=states,
        initial=0,
        edges=edges,
        n_transitions=n_transitions,
    )
