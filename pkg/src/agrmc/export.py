"""Export formats for models and modules, plus the matching loader.

JSON schema:
    {"states": [{"id": ..., "valuation": {...}}, ...],
     "transitions": [{"src": ..., "module": ..., "action": ..., "dst": ...}, ...],
     "initial": ...}

Global models use integer state indices as ids; single modules use their
state ids.  Output is byte deterministic: states in index order,
transitions in source order, object keys sorted.
"""

from __future__ import annotations

import json

from .lang import ModuleDecl, SpecDocument
from .logic import Counterexample, Strategy
from .model import Model


def as_document(obj: Model | ModuleDecl) -> dict:
    if isinstance(obj, Model):
        states = [
            {"id": i, "valuation": obj.valuation(i)}
            for i in range(obj.n_states)
        ]
        transitions = [
            {
                "src": src,
                "module": obj.modules[mi].name,
                "action": action,
                "dst": dst,
            }
            for src in range(obj.n_states)
            for mi, action, dst in obj.edges[src]
        ]
        return {
            "states": states,
            "transitions": transitions,
            "initial": obj.initial,
        }
    states = [
        {"id": s.id, "valuation": dict(s.valuation)} for s in obj.states
    ]
    transitions = [
        {"src": t.src, "module": obj.name, "action": t.action, "dst": t.dst}
        for t in obj.transitions
    ]
    return {"states": states, "transitions": transitions, "initial": obj.init}


def export_json(obj: Model | ModuleDecl) -> str:
    return json.dumps(as_document(obj), sort_keys=True, indent=1) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(obj: Model | ModuleDecl, graph_name: str = "model") -> str:
    doc = as_document(obj)
    index = {s["id"]: n for n, s in enumerate(doc["states"])}
    lines = [f"digraph {graph_name} {{"]
    lines.append("  rankdir=LR;")
    for n, s in enumerate(doc["states"]):
        label = ", ".join(f"{k}={v}" for k, v in sorted(s["valuation"].items()))
        label = label or str(s["id"])
        shape = ' peripheries=2' if s["id"] == doc["initial"] else ""
        lines.append(f'  n{n} [label="{_dot_escape(label)}"{shape}];')
    for t in doc["transitions"]:
        label = f'{t["module"]}.{t["action"]}'
        lines.append(
            f'  n{index[t["src"]]} -> n{index[t["dst"]]} '
            f'[label="{_dot_escape(label)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def strategy_records(strategy: Strategy, doc: SpecDocument) -> list[dict]:
    """Order-canonical record list: one (agent, localState,
    inputValuation, actionId) row per defined view."""
    records = []
    for agent in sorted(strategy.moves):
        module = doc.modules_by_name[agent]
        for view in sorted(strategy.moves[agent]):
            records.append(
                {
                    "agent": agent,
                    "localState": view.local,
                    "inputValuation": dict(zip(module.input_vars, view.inputs)),
                    "actionId": strategy.moves[agent][view],
                }
            )
    return records


def counterexample_records(cex: Counterexample, model: Model) -> dict:
    """Counterexample path with full valuations; loopStart marks where a
    lasso closes (null for plain safety violations)."""
    return {
        "states": [
            {"index": s, "valuation": model.valuation(s)} for s in cex.states
        ],
        "loopStart": cex.loop_start,
    }


def load_model(text: str | dict) -> dict:
    """Parse an exported JSON document back into its dict form, with
    shape checks; raises ValueError on malformed input."""
    doc = json.loads(text) if isinstance(text, str) else text
    if not isinstance(doc, dict):
        raise ValueError("model document must be a JSON object")
    for key in ("states", "transitions", "initial"):
        if key not in doc:
            raise ValueError(f"model document lacks {key!r}")
    ids = set()
    for s in doc["states"]:
        if "id" not in s or "valuation" not in s:
            raise ValueError("state records need id and valuation")
        if s["id"] in ids:
            raise ValueError(f"duplicate state id {s['id']!r}")
        ids.add(s["id"])
    if doc["initial"] not in ids:
        raise ValueError("initial state is not a declared state")
    for t in doc["transitions"]:
        for key in ("src", "module", "action", "dst"):
            if key not in t:
                raise ValueError(f"transition records need {key!r}")
        if t["src"] not in ids or t["dst"] not in ids:
            raise ValueError("transition endpoint is not a declared state")
    return doc


def is_isomorphic(a: Model | ModuleDecl | dict, b: Model | ModuleDecl | dict) -> bool:
    """Structure equality up to state renaming.  Because one (src,
    module, action) triple never has two destinations, the bijection is
    forced from the initial states outward.  Assumes every state is
    reachable from the initial one, which holds for every composed
    model and generated assumption; anything unreachable fails the
    check."""
    da = a if isinstance(a, dict) else as_document(a)
    db = b if isinstance(b, dict) else as_document(b)
    if len(da["states"]) != len(db["states"]):
        return False
    if len(da["transitions"]) != len(db["transitions"]):
        return False

    def tables(doc):
        val = {s["id"]: s["valuation"] for s in doc["states"]}
        out: dict = {s["id"]: {} for s in doc["states"]}
        for t in doc["transitions"]:
            key = (t["module"], t["action"])
            if key in out[t["src"]]:
                return None, None  # nondeterministic labels: not supported
            out[t["src"]][key] = t["dst"]
        return val, out

    va, ea = tables(da)
    vb, eb = tables(db)
    if va is None or vb is None:
        return False

    pairing = {da["initial"]: db["initial"]}
    queue = [da["initial"]]
    matched_edges = 0
    while queue:
        x = queue.pop()
        y = pairing[x]
        if va[x] != vb[y]:
            return False
        if set(ea[x]) != set(eb[y]):
            return False
        for key, xd in ea[x].items():
            matched_edges += 1
            yd = eb[y][key]
            if xd in pairing:
                if pairing[xd] != yd:
                    return False
            else:
                if yd in set(pairing.values()):
                    return False
                pairing[xd] = yd
                queue.append(xd)
    return len(pairing) == len(da["states"]) and matched_edges == len(
        da["transitions"]
    )
