import pytest

from agrmc import UnknownAgent, parse_spec
from agrmc.model import STUTTER, View, enabled_transitions


def test_view_of_and_indistinguishable(voting2_model):
    m = voting2_model
    vi = m.module_index["Voter1"]
    v0 = m.view_of(m.initial, vi)
    assert isinstance(v0, View)
    assert v0.local == "s_qqq" and v0.inputs == ("?",)
    # name and index address the same agent
    assert m.view_of(m.initial, "Voter1") == v0
    same = [s for s in range(m.n_states) if m.view_of(s, vi) == v0]
    for s in same:
        assert m.indistinguishable(vi, m.initial, s)


def test_unknown_agent(voting2_model):
    with pytest.raises(UnknownAgent):
        voting2_model.agent_index("Nobody")


def test_enabled_actions_declaration_order(voting2_model):
    m = voting2_model
    vi = m.module_index["Voter1"]
    acts = m.enabled_actions(m.initial, vi)
    # the two vote branches, in the order the transitions were declared
    assert acts == ("t0", "t1")


def test_stutter_synthesized_when_stuck(gadget_doc):
    e = gadget_doc.modules_by_name["E"]
    # e1 has no declared outgoing transition: the module-level op serves
    # a synthetic self-loop instead
    moves = enabled_transitions(e, "e1", {})
    assert len(moves) == 1
    t = moves[0]
    assert t.action == STUTTER and t.src == t.dst == "e1"
    # but where moves exist, no stutter is offered
    real = enabled_transitions(e, "e0", {})
    assert [t.action for t in real] == ["t0", "t1"]


def test_stutter_respects_guards():
    doc = parse_spec(
        "MODULE W\nVAR w : { 0, 1 }\nINPUT g\n"
        "STATE w0 [ w=0 ]\nSTATE w1 [ w=1 ]\nINIT w0\n"
        "TRANS w0 -> w1 [ g=1 ];\n"
        "MODULE G\nVAR g : { 0, 1 }\nSTATE g0 [ g=0 ]\nSTATE g1 [ g=1 ]\n"
        "INIT g0\nTRANS g0 -> g1 [ ];\n"
    )
    w = doc.modules_by_name["W"]
    blocked = enabled_transitions(w, "w0", {"g": "0"})
    assert [t.action for t in blocked] == [STUTTER]
    open_ = enabled_transitions(w, "w0", {"g": "1"})
    assert [t.action for t in open_] == ["t0"]


def test_value_of_and_valuation(voting2_model):
    m = voting2_model
    val = m.valuation(m.initial)
    assert val["vote1"] == "?" and val["pun1"] == "?"
    assert m.value_of(m.initial, "vote2") == "?"
    assert m.has_var("pun2") and not m.has_var("nope")
