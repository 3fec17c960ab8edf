import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agrmc import (
    PartialStrategy,
    Strategy,
    check_strategy,
    compose,
    global_formula,
    parse_spec,
    random_spec,
    win_set,
)
from agrmc.logic import start_set
from oracle import coalition_indices, strategy_space, win_states

TWO_PHASE = """MODULE P
VAR p : { 0, 1, 2 }
STATE p0 [ p=0 ]
STATE p1 [ p=1 ]
STATE p2 [ p=2 ]
INIT p0
TRANS p0 -> p1 [ ];
TRANS p0 -> p2 [ ];
TRANS p1 -> p1 [ ];
TRANS p2 -> p2 [ ];
GROUP GP { P } GOAL "<<P>> G !(p=2)"
"""


def _strategy_for(model, doc, choices):
    """choices: {agent: {local_state: action}}, inputs ignored for 1-module."""
    s = Strategy()
    for agent, per_state in choices.items():
        mi = model.module_index[agent]
        table = {}
        for st_ in range(model.n_states):
            v = model.view_of(st_, mi)
            if v.local in per_state:
                table[v] = per_state[v.local]
        s.moves[agent] = table
    return s


def test_safety_pass_and_fail():
    doc = parse_spec(TWO_PHASE)
    m = compose(doc)
    f = global_formula(doc)
    good = _strategy_for(m, doc, {"P": {"p0": "t0", "p1": "t2", "p2": "t3"}})
    res = check_strategy(m, good, f)
    assert res.verdict == "Yes" and res.counterexample is None
    bad = _strategy_for(m, doc, {"P": {"p0": "t1", "p1": "t2", "p2": "t3"}})
    res = check_strategy(m, bad, f)
    assert res.verdict == "No"
    path = res.counterexample.states
    assert m.value_of(path[-1], "p") == "2"
    assert res.counterexample.loop_start is None  # safety: plain path
    assert path[0] in start_set(m, (m.module_index["P"],))


def test_liveness_lasso_counterexample():
    # second module lets the scheduler starve P forever: F p=1 fails
    doc = parse_spec(
        TWO_PHASE.replace('GOAL "<<P>> G !(p=2)"', 'GOAL "<<P>> F p=1"')
        + "MODULE Q\nVAR q : { 0 }\nSTATE q0 [ q=0 ]\nINIT q0\nTRANS q0 -> q0 [ ];\nGROUP GQ { Q }\n"
    )
    m = compose(doc)
    f = global_formula(doc)
    s = _strategy_for(m, doc, {"P": {"p0": "t0", "p1": "t2", "p2": "t3"}})
    res = check_strategy(m, s, f)
    assert res.verdict == "No"
    cex = res.counterexample
    assert cex is not None and cex.loop_start is not None
    loop = cex.states[cex.loop_start :]
    assert all(m.value_of(x, "p") != "1" for x in cex.states)
    assert loop[-1] == cex.states[cex.loop_start] or loop  # lasso closes


def test_partial_strategy_raises():
    doc = parse_spec(TWO_PHASE)
    m = compose(doc)
    f = global_formula(doc)
    s = _strategy_for(m, doc, {"P": {"p0": "t0"}})  # p1/p2 views missing
    with pytest.raises(PartialStrategy) as err:
        check_strategy(m, s, f)
    assert err.value.agent == "P"


def test_start_set_voting(voting2_model):
    m = voting2_model
    mi = m.module_index["Voter1"]
    starts = start_set(m, (mi,))
    v0 = m.view_of(m.initial, mi)
    expected = [s for s in range(m.n_states) if m.view_of(s, mi) == v0]
    assert starts == expected
    assert m.initial in starts


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_win_set_matches_independent_oracle(seed):
    """Package win_set (hand-rolled BFS/SCC) against the networkx oracle,
    for every uniform strategy of the instance."""
    doc = random_spec(seed, max_strategies=64)
    m = compose(doc)
    f = global_formula(doc)
    coalition = coalition_indices(m, f)
    for sigma in strategy_space(m, coalition):
        s = Strategy()
        for (mi, view), act in sigma.items():
            s.moves.setdefault(m.modules[mi].name, {})[view] = act
        assert set(win_set(m, s, f)) == win_states(m, f, sigma)
