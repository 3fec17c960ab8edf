"""Assumption generation for compositional verification.

To verify a target module against the rest of the system without
composing everything, the environment is summarized as a single
assumption module:

  1. take the modules within the requested communication distance of the
     target, then close the set under input ownership so the summarized
     part has no dangling internal reads;
  2. compose that source set openly: guards on target-owned variables
     stay on the edges as residual constraints instead of resolving;
  3. merge product states that agree on the retained variables: the
     target's inputs plus every write-stable source variable (one whose
     value-changing transitions are all unguarded).  Transition guards
     survive the merge verbatim, so the quotient simulates the product
     by construction.

The assumption declares exactly the target's external inputs as its
state variables; retained distinctions beyond those live in the state
ids.  Variables owned by modules beyond the source set are kept chaotic:
they may take any domain value at any time.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .composer import Caps, ResourceLimit, _estimate_bytes, _MEM_CHECK_STRIDE, compose
from .lang import (
    Guard,
    GuardConstraint,
    InvalidParameter,
    ModuleDecl,
    SpecDocument,
    State,
    Transition,
    UnknownModule,
    VarDecl,
)


def communication_graph(doc: SpecDocument) -> dict[str, set[str]]:
    """Undirected module adjacency: an edge whenever one module reads a
    variable the other owns."""
    adj: dict[str, set[str]] = {m.name: set() for m in doc.modules}
    owners = doc.owner_of
    for m in doc.modules:
        for iv in m.input_vars:
            other = owners.get(iv)
            if other is not None and other != m.name:
                adj[m.name].add(other)
                adj[other].add(m.name)
    return adj


def communication_distance(doc: SpecDocument, a: str, b: str) -> float:
    for name in (a, b):
        if name not in doc.modules_by_name:
            raise UnknownModule(f"unknown module {name!r}")
    if a == b:
        return 0
    adj = communication_graph(doc)
    dist = {a: 0}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        for nxt in sorted(adj[cur]):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                if nxt == b:
                    return dist[nxt]
                queue.append(nxt)
    return math.inf


def close_modules(
    doc: SpecDocument, target: str | list[str] | tuple[str, ...], distance: int
) -> list[str]:
    """Modules within the given communication distance of any target,
    excluding the targets themselves, in document order."""
    if isinstance(target, str):
        target = [target]
    if distance < 1:
        raise InvalidParameter(f"distance must be at least 1, got {distance}")
    for name in target:
        if name not in doc.modules_by_name:
            raise UnknownModule(f"unknown module {name!r}")
    adj = communication_graph(doc)
    dist = {name: 0 for name in target}
    queue = deque(target)
    while queue:
        cur = queue.popleft()
        if dist[cur] >= distance:
            continue
        for nxt in sorted(adj[cur]):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    targets = set(target)
    return [m.name for m in doc.modules if m.name in dist and m.name not in targets]


def _source_closure(
    doc: SpecDocument, targets: set[str], close: list[str]
) -> list[str]:
    """Close the module set under input ownership, never pulling in a
    target."""
    owners = doc.owner_of
    chosen = set(close)
    frontier = deque(close)
    while frontier:
        m = doc.modules_by_name[frontier.popleft()]
        for iv in m.input_vars:
            owner = owners[iv]
            if owner not in chosen and owner not in targets:
                chosen.add(owner)
                frontier.append(owner)
    return [m.name for m in doc.modules if m.name in chosen]


def _var_domain(doc: SpecDocument, var: str) -> tuple[str, ...]:
    owner = doc.modules_by_name[doc.owner_of[var]]
    return next(v.domain for v in owner.state_vars if v.name == var)


def _var_init(doc: SpecDocument, var: str) -> str:
    owner = doc.modules_by_name[doc.owner_of[var]]
    return owner.states_by_id[owner.init].value(var)


def _write_stable(module: ModuleDecl, var: str) -> bool:
    values = {s.id: s.value(var) for s in module.states}
    for t in module.transitions:
        if values[t.src] != values[t.dst] and any(
            c.op != "any" for c in t.guard.constraints
        ):
            return False
    return True


_GuardKey = tuple[tuple[str, str, str], ...]


def _canon_guard(constraints) -> _GuardKey:
    # any-constraints are vacuous; dropping them lets equal guards merge
    return tuple(
        sorted(
            (c.var, c.op, c.value or "")
            for c in constraints
            if c.op != "any"
        )
    )


def _guard_from_key(key: _GuardKey) -> Guard:
    return Guard(
        tuple(
            GuardConstraint(var, op, None if op == "any" else value)
            for var, op, value in key
        )
    )


@dataclass
class OpenProduct:
    """Reachable open composition of the source set with residual guards
    on the free (target-owned) variables."""

    source: list[str]
    far_vars: list[str]
    free_vars: list[str]
    obs_vars: list[str]
    keep_vars: list[str]
    states: list[tuple]  # raw product states (far values ++ local ids)
    init: int
    keys: list[tuple[str, ...]]  # merged states (keep_vars values)
    key_init: int
    merged_edges: set[tuple[int, _GuardKey, int]]
    key_of: list[int]  # raw state -> merged state


def open_product(
    doc: SpecDocument,
    target: str | list[str] | tuple[str, ...],
    distance: int = 1,
    caps: Caps | None = None,
) -> OpenProduct:
    if isinstance(target, str):
        target = [target]
    if caps is None:
        caps = Caps.from_env()
    targets = set(target)
    close = close_modules(doc, list(target), distance)
    source = _source_closure(doc, targets, close)
    source_set = set(source)
    mods = [doc.modules_by_name[name] for name in source]
    owners = doc.owner_of

    target_inputs: list[str] = []
    for name in target:
        for iv in doc.modules_by_name[name].input_vars:
            if owners[iv] not in targets and iv not in target_inputs:
                target_inputs.append(iv)
    far_vars = [iv for iv in target_inputs if owners[iv] not in source_set]
    obs_vars = list(target_inputs)

    free_vars: list[str] = []
    for m in mods:
        for iv in m.input_vars:
            if owners[iv] in targets and iv not in free_vars:
                free_vars.append(iv)

    stable: list[str] = []
    for m in mods:
        for v in m.state_vars:
            if v.name not in obs_vars and _write_stable(m, v.name):
                stable.append(v.name)
    keep_vars = obs_vars + stable

    far_domains = [_var_domain(doc, v) for v in far_vars]
    n_far = len(far_vars)

    # var -> how to read it off a product state
    lookup: dict[str, tuple[int, dict[str, str] | None]] = {}
    for fi, v in enumerate(far_vars):
        lookup[v] = (fi, None)
    for mi, m in enumerate(mods):
        for v in m.state_vars:
            lookup[v.name] = (n_far + mi, {s.id: s.value(v.name) for s in m.states})

    def value_of(state: tuple, var: str) -> str:
        slot, table = lookup[var]
        return state[slot] if table is None else table[state[slot]]

    def key_of_state(state: tuple) -> tuple[str, ...]:
        return tuple(value_of(state, v) for v in keep_vars)

    init_state = tuple(_var_init(doc, v) for v in far_vars) + tuple(
        m.init for m in mods
    )
    index: dict[tuple, int] = {init_state: 0}
    states: list[tuple] = [init_state]
    keys: list[tuple[str, ...]] = [key_of_state(init_state)]
    key_index: dict[tuple[str, ...], int] = {keys[0]: 0}
    key_of: list[int] = [0]
    merged_edges: set[tuple[int, _GuardKey, int]] = set()
    n_dims = n_far + len(mods)
    mem_cap = caps.max_memory_mib * 1024 * 1024
    since_check = 0

    def intern(state: tuple) -> int:
        idx = index.get(state)
        if idx is None:
            idx = len(states)
            if idx >= caps.max_states:
                raise ResourceLimit(
                    "states", f"more than {caps.max_states} product states"
                )
            index[state] = idx
            states.append(state)
            key = key_of_state(state)
            kidx = key_index.get(key)
            if kidx is None:
                kidx = len(keys)
                key_index[key] = kidx
                keys.append(key)
            key_of.append(kidx)
            queue.append(idx)
        return idx

    queue = deque([0])
    while queue:
        src = queue.popleft()
        state = states[src]
        moves: list[tuple[_GuardKey, tuple]] = []
        for fi, domain in enumerate(far_domains):
            for val in domain:
                if val != state[fi]:
                    moves.append(((), state[:fi] + (val,) + state[fi + 1 :]))
        for mi, m in enumerate(mods):
            slot = n_far + mi
            local = state[slot]
            for t in m.transitions_by_src.get(local, ()):
                residual = []
                ok = True
                for c in t.guard.constraints:
                    if c.var in free_vars:
                        if c.op != "any":
                            residual.append(c)
                        continue
                    value = value_of(state, c.var)
                    if c.op == "eq" and value != c.value:
                        ok = False
                        break
                    if c.op == "neq" and value == c.value:
                        ok = False
                        break
                if not ok:
                    continue
                dst_state = state[:slot] + (t.dst,) + state[slot + 1 :]
                moves.append((_canon_guard(residual), dst_state))
        for guard_key, dst_state in moves:
            dst = intern(dst_state)
            merged_edges.add((key_of[src], guard_key, key_of[dst]))
            since_check += 1
            if since_check >= _MEM_CHECK_STRIDE:
                since_check = 0
                est = _estimate_bytes(len(states), n_dims, len(merged_edges))
                if est > mem_cap:
                    raise ResourceLimit(
                        "memory",
                        f"assumption product estimate exceeds "
                        f"{caps.max_memory_mib} MiB "
                        f"({len(states)} product states)",
                    )

    return OpenProduct(
        source=source,
        far_vars=far_vars,
        free_vars=free_vars,
        obs_vars=obs_vars,
        keep_vars=keep_vars,
        states=states,
        init=0,
        keys=keys,
        key_init=key_of[0],
        merged_edges=merged_edges,
        key_of=key_of,
    )


def _fresh_name(doc: SpecDocument, base: str) -> str:
    name = base
    while name in doc.modules_by_name:
        name += "_"
    return name


def generate_assumption(
    doc: SpecDocument,
    target: list[str] | tuple[str, ...] | str,
    distance: int = 1,
    caps: Caps | None = None,
    name: str | None = None,
) -> ModuleDecl:
    """Summarize everything but the target modules into one module the
    target can be verified against."""
    if isinstance(target, str):
        target = [target]
    if not target:
        raise UnknownModule("assumption needs at least one target module")
    for t in target:
        if t not in doc.modules_by_name:
            raise UnknownModule(f"unknown module {t!r}")
    if name is None:
        name = _fresh_name(doc, "A_" + "_".join(target))

    owners = doc.owner_of
    targets = set(target)
    has_external_input = any(
        owners[iv] not in targets
        for t in target
        for iv in doc.modules_by_name[t].input_vars
    )
    if not has_external_input or not close_modules(doc, list(target), distance):
        # nothing observable to summarize: a single chaos-free state
        return ModuleDecl(
            name=name,
            state_vars=(),
            input_vars=(),
            states=(State("a0", ()),),
            init="a0",
            transitions=(Transition("a0", "a0", Guard(), "t0"),),
            synthetic=True,
            provenance=f"trivial assumption for {'+'.join(target)}",
        )

    prod = open_product(doc, target, distance, caps=caps)
    provenance = (
        f"assumption for {'+'.join(target)} at distance {distance}, "
        f"source {'+'.join(prod.source) or 'none'}"
    )

    obs_idx = [prod.keep_vars.index(v) for v in prod.obs_vars]
    state_vars = tuple(
        VarDecl(v, _var_domain(doc, v)) for v in prod.obs_vars
    )
    states = tuple(
        State(
            f"a{i}",
            tuple(
                (v, key[j]) for v, j in zip(prod.obs_vars, obs_idx)
            ),
        )
        for i, key in enumerate(prod.keys)
    )
    ordered = sorted(prod.merged_edges)
    transitions = tuple(
        Transition(f"a{s}", f"a{d}", _guard_from_key(g), f"t{n}")
        for n, (s, g, d) in enumerate(ordered)
    )
    return ModuleDecl(
        name=name,
        state_vars=state_vars,
        input_vars=tuple(prod.free_vars),
        states=states,
        init=f"a{prod.key_init}",
        transitions=transitions,
        synthetic=True,
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# Quotients


def quotient_reduce(module: ModuleDecl) -> ModuleDecl:
    """Coarsest partition that respects declared-variable labels and is
    stable under (guard, destination block) signatures.

    Signatures are multisets: two moves with the same guard into the same
    block stay two moves, so the abstraction never collapses branching
    degree.  Edges are emitted from one representative per block (all
    members share the signature, so the choice is immaterial), keeping
    parallel duplicates, which makes the operation idempotent."""
    ids = [s.id for s in module.states]
    label = {s.id: s.valuation for s in module.states}
    block: dict[str, int] = {}
    # initial partition by label
    seen: dict[tuple, int] = {}
    for sid in ids:
        block[sid] = seen.setdefault(label[sid], len(seen))
    while True:
        sigs: dict[str, tuple] = {}
        for sid in ids:
            counts: dict[tuple, int] = {}
            for t in module.transitions_by_src.get(sid, ()):
                key = (_canon_guard(t.guard.constraints), block[t.dst])
                counts[key] = counts.get(key, 0) + 1
            sigs[sid] = (block[sid], tuple(sorted(counts.items())))
        regroup: dict[tuple, int] = {}
        new_block = {}
        for sid in ids:
            new_block[sid] = regroup.setdefault(sigs[sid], len(regroup))
        if len(regroup) == len(set(block.values())):
            break
        block = new_block

    n_blocks = len(set(block.values()))
    # stable naming: blocks ordered by first member
    order: dict[int, int] = {}
    for sid in ids:
        order.setdefault(block[sid], len(order))
    rep: dict[int, str] = {}
    for sid in ids:
        rep.setdefault(order[block[sid]], sid)
    edge_list = []
    for b in range(n_blocks):
        for t in module.transitions_by_src.get(rep[b], ()):
            edge_list.append(
                (b, _canon_guard(t.guard.constraints), order[block[t.dst]])
            )
    transitions = tuple(
        Transition(f"q{s}", f"q{d}", _guard_from_key(g), f"t{n}")
        for n, (s, g, d) in enumerate(sorted(edge_list))
    )
    states = tuple(
        State(f"q{b}", label[rep[b]]) for b in range(n_blocks)
    )
    return ModuleDecl(
        name=module.name,
        state_vars=module.state_vars,
        input_vars=module.input_vars,
        states=states,
        init=f"q{order[block[module.init]]}",
        transitions=transitions,
        synthetic=module.synthetic,
        provenance=(module.provenance + " quotient").strip(),
    )


def abstract_then_quotient(
    doc: SpecDocument,
    module_name: str,
    keep_state_vars: list[str],
    keep_inputs: list[str],
) -> ModuleDecl:
    """Literal projection recipe: hide state variables, existentially
    drop guard constraints on hidden inputs, then quotient."""
    if module_name not in doc.modules_by_name:
        raise UnknownModule(f"unknown module {module_name!r}")
    m = doc.modules_by_name[module_name]
    kept_vars = tuple(v for v in m.state_vars if v.name in keep_state_vars)
    kept_inputs = tuple(iv for iv in m.input_vars if iv in keep_inputs)
    states = tuple(
        State(
            s.id,
            tuple((v, x) for v, x in s.valuation if v in keep_state_vars),
        )
        for s in m.states
    )
    transitions = tuple(
        Transition(
            t.src,
            t.dst,
            Guard(
                tuple(
                    c for c in t.guard.constraints if c.var in keep_inputs
                )
            ),
            t.action,
        )
        for t in m.transitions
    )
    projected = ModuleDecl(
        name=m.name,
        state_vars=kept_vars,
        input_vars=kept_inputs,
        states=states,
        init=m.init,
        transitions=transitions,
        synthetic=True,
        provenance=f"projection of {m.name}",
    )
    return quotient_reduce(projected)


# ---------------------------------------------------------------------------
# Coverage check


@dataclass(frozen=True)
class CoverageReport:
    """Outcome of the path-coverage audit.

    ok means every checked projected path of the full composition is a
    path of target || assumption.  On failure, trace holds the offending
    composition path as (label, valuation) steps and depth its length."""

    ok: bool
    pairs_explored: int
    depth_reached: int
    trace: tuple | None = None


def check_path_coverage(
    doc: SpecDocument,
    target: str,
    assumption: ModuleDecl,
    caps: Caps | None = None,
    max_depth: int | None = None,
    max_pairs: int = 2_000_000,
) -> CoverageReport:
    """Audit that the assumption over-approximates the real environment.

    Every reachable finite path of the full composition, projected onto
    the target's own transitions and the values of the target's input
    variables (environment steps that change neither are collapsed),
    must be reproducible in target || assumption.  Checked as a weak
    simulation by subset construction: walk the full composition while
    tracking every silently-reachable candidate state on the abstract
    side; a visible step with no matching candidate is a violation.

    max_depth bounds the audited composition-path length; None checks
    the whole reachable product of (state, candidate set) pairs, which
    covers paths of every length."""
    if target not in doc.modules_by_name:
        raise UnknownModule(f"unknown module {target!r}")
    full = compose(doc, caps=caps)
    tmodule = doc.modules_by_name[target]
    ag_doc = SpecDocument((tmodule, assumption), ())
    ag = compose(ag_doc, caps=caps)
    tmi_full = full.module_index[target]
    tmi_ag = ag.module_index[target]

    ag_view = [ag.view_of(s, tmi_ag) for s in range(ag.n_states)]

    def closure(states: frozenset[int]) -> frozenset[int]:
        """Add everything reachable through assumption steps that keep
        the target's view unchanged."""
        out = set(states)
        queue = deque(states)
        while queue:
            a = queue.popleft()
            here = ag_view[a]
            for mi, _, dst in ag.edges[a]:
                if mi != tmi_ag and dst not in out and ag_view[dst] == here:
                    out.add(dst)
                    queue.append(dst)
        return frozenset(out)

    def trace_back(parents, node):
        steps = []
        while node is not None:
            node, label = parents[node]
            if label is not None:
                steps.append(label)
        steps.reverse()
        return tuple(steps)

    start_view = full.view_of(full.initial, tmi_full)
    init_cands = closure(frozenset({ag.initial}))
    root = (full.initial, init_cands)
    if ag_view[ag.initial] != start_view:
        return CoverageReport(False, 0, 0, trace=())
    parents: dict = {root: (None, None)}
    queue = deque([(root, 0)])
    pairs = 0
    max_seen_depth = 0
    while queue:
        (fstate, cands), depth = queue.popleft()
        pairs += 1
        max_seen_depth = max(max_seen_depth, depth)
        if max_depth is not None and depth >= max_depth:
            continue
        fview = full.view_of(fstate, tmi_full)
        for mi, action, fdst in full.edges[fstate]:
            label = (full.modules[mi].name, action, full.valuation(fdst))
            if mi == tmi_full:
                # the target itself moves: match the very same action
                matched = frozenset(
                    adst
                    for a in cands
                    for ami, aact, adst in ag.edges[a]
                    if ami == tmi_ag and aact == action
                )
            else:
                nview = full.view_of(fdst, tmi_full)
                if nview == fview:
                    # silent environment step, nothing to match
                    matched = cands
                else:
                    matched = frozenset(
                        adst
                        for a in cands
                        for ami, _, adst in ag.edges[a]
                        if ami != tmi_ag and ag_view[adst] == nview
                    )
            if not matched:
                trail = trace_back(parents, (fstate, cands)) + (label,)
                return CoverageReport(False, pairs, depth + 1, trace=trail)
            node = (fdst, closure(matched))
            if node not in parents:
                if len(parents) >= max_pairs:
                    raise ResourceLimit(
                        "states",
                        f"coverage check exceeded {max_pairs} pairs",
                    )
                parents[node] = ((fstate, cands), label)
                queue.append((node, depth + 1))
    return CoverageReport(True, pairs, max_seen_depth)
