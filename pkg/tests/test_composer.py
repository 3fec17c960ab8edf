import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agrmc import Caps, ResourceLimit, compose, export_json, random_spec
from agrmc.model import STUTTER
from agrmc.voting import generate_simple_voting


def test_voting_state_counts_frozen():
    # full interleaving composition of the voting system: 23 reachable
    # (voter, punish-flag) combinations per voter, times the coercer
    for k, states, transitions in ((1, 23, 53), (2, 529, 1925), (3, 12167, 60817)):
        m = compose(generate_simple_voting(k))
        assert m.n_states == states == 23**k
        assert m.n_transitions == transitions


def test_initial_state_is_product_of_inits(voting2_doc, voting2_model):
    key = voting2_model.state_key(voting2_model.initial)
    assert key == tuple(m.init for m in voting2_doc.modules)


def test_one_module_moves_per_step(voting2_doc, voting2_model):
    m = voting2_model
    names = [mod.name for mod in voting2_doc.modules]
    for s in range(0, m.n_states, 37):
        for mi, action, dst in m.edges[s]:
            assert 0 <= mi < len(names)
            src_key = m.state_key(s)
            dst_key = m.state_key(dst)
            for j, (a, b) in enumerate(zip(src_key, dst_key)):
                if j != mi:
                    assert a == b  # frame: only the scheduled module moves


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_frame_condition_property(seed):
    doc = random_spec(seed)
    m = compose(doc)
    for s in range(m.n_states):
        for mi, action, dst in m.edges[s]:
            src_key, dst_key = m.state_key(s), m.state_key(dst)
            changed = [j for j in range(len(src_key)) if src_key[j] != dst_key[j]]
            assert changed in ([], [mi])
            if action == STUTTER:
                assert dst == s


def test_stutter_edges_close_deadlocks(gadget_model):
    m = gadget_model
    # every state has at least one outgoing edge per module
    for s in range(m.n_states):
        movers = {mi for mi, _, _ in m.edges[s]}
        assert movers == {0, 1}
    # e1/e2 rows only stutter on the E side
    stutters = [
        (m.state_key(s), mi)
        for s in range(m.n_states)
        for mi, a, d in m.edges[s]
        if a == STUTTER
    ]
    assert (("e1", "m0"), 0) in stutters


def test_state_cap():
    with pytest.raises(ResourceLimit) as err:
        compose(generate_simple_voting(2), caps=Caps(max_states=100))
    assert err.value.kind == "states"


def test_transition_cap():
    with pytest.raises(ResourceLimit) as err:
        compose(generate_simple_voting(2), caps=Caps(max_transitions=500))
    assert err.value.kind == "transitions"


def test_memory_cap():
    with pytest.raises(ResourceLimit) as err:
        compose(generate_simple_voting(3), caps=Caps(max_memory_mib=1))
    assert err.value.kind == "memory"


def test_caps_from_env(monkeypatch):
    monkeypatch.setenv("AGRMC_STATE_CAP", "123")
    monkeypatch.setenv("AGRMC_MEM_CAP", "77")
    caps = Caps.from_env()
    assert caps.max_states == 123
    assert caps.max_memory_mib == 77
    monkeypatch.delenv("AGRMC_STATE_CAP")
    assert Caps.from_env().max_states == 10_000_000


def test_compose_deterministic(voting2_doc):
    a = export_json(compose(voting2_doc))
    b = export_json(compose(voting2_doc))
    assert a == b
