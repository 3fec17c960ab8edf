import pytest

from agrmc import (
    check_strategy,
    compose,
    dfs_synthesize,
    fixpoint_approx,
    global_formula,
    parse_spec,
)
from agrmc.engines import approx_lower, approx_upper
from oracle import exhaustive_truth_set


def _by_key(model, states):
    return sorted(model.state_key(s) for s in states)


class TestGadget:
    """Hidden-choice instance separating the three verdict sources: the
    exact search says No, the approximation cannot tell."""

    def test_dfs_no(self, gadget_model, gadget_formula):
        res = dfs_synthesize(gadget_model, gadget_formula)
        assert res.verdict == "No"
        assert res.counterexample is not None
        assert res.stats["attempts"] >= 2  # backtracked at least once

    def test_apprx_inconclusive(self, gadget_model, gadget_formula):
        res = fixpoint_approx(gadget_model, gadget_formula)
        assert res.verdict == "Inconclusive"
        assert res.stats["upper"] == 5
        assert res.stats["lower"] == 2

    def test_strict_sandwich(self, gadget_model, gadget_formula):
        m = gadget_model
        upper = set(approx_upper(m, gadget_formula))
        _, lower = approx_lower(m, gadget_formula)
        lower = set(lower)
        truth = exhaustive_truth_set(m, gadget_formula)
        assert lower < truth < upper  # all three strictly separate
        assert _by_key(m, upper) == [
            ("e0", "m0"),
            ("e1", "m0"),
            ("e1", "ma"),
            ("e2", "m0"),
            ("e2", "mb"),
        ]
        assert _by_key(m, truth) == [
            ("e1", "m0"),
            ("e1", "ma"),
            ("e2", "m0"),
            ("e2", "mb"),
        ]
        assert _by_key(m, lower) == [("e1", "ma"), ("e2", "mb")]

    def test_global_classes_coarser(self, gadget_model, gadget_formula):
        _, local = approx_lower(gadget_model, gadget_formula)
        _, fixed = approx_lower(gadget_model, gadget_formula, global_classes=True)
        assert set(fixed) <= set(local)
        assert len(fixed) == 0  # bad-state classmates kill both survivor classes
        res = fixpoint_approx(gadget_model, gadget_formula, global_classes=True)
        assert res.verdict == "Inconclusive"


class TestVoting:
    def test_dfs_yes_with_checked_strategy(self, voting2_model, voting2_doc):
        f = global_formula(voting2_doc)
        res = dfs_synthesize(voting2_model, f)
        assert res.verdict == "Yes"
        assert check_strategy(voting2_model, res.strategy, f).verdict == "Yes"
        assert res.stats["states"] == 529

    def test_apprx_conclusive_k2(self, voting2_model, voting2_doc):
        res = fixpoint_approx(voting2_model, global_formula(voting2_doc))
        assert res.verdict == "Yes"

    def test_apprx_conclusive_k3(self, voting3_model, voting3_doc):
        res = fixpoint_approx(voting3_model, global_formula(voting3_doc))
        assert res.verdict == "Yes"


SOLO = """MODULE T
VAR t : { 0, 1 }
STATE off [ t=0 ]
STATE on [ t=1 ]
INIT off
TRANS off -> on [ ];
TRANS on -> on [ ];
GROUP GT { T } GOAL "<<T>> F t=1"
"""


def test_eventually_holds_without_competition():
    # a single module is scheduled at every step, so F is winnable
    doc = parse_spec(SOLO)
    m = compose(doc)
    res = dfs_synthesize(m, global_formula(doc))
    assert res.verdict == "Yes"


def test_eventually_starved_by_scheduler():
    # an independent second module gives the scheduler an infinite detour
    doc = parse_spec(
        SOLO
        + "MODULE S\nVAR s : { 0 }\nSTATE s0 [ s=0 ]\nINIT s0\nTRANS s0 -> s0 [ ];\nGROUP GS { S }\n"
    )
    m = compose(doc)
    f = global_formula(doc)
    res = dfs_synthesize(m, f)
    assert res.verdict == "No"
    assert res.counterexample.loop_start is not None
    apx = fixpoint_approx(m, f)
    assert apx.verdict in ("No", "Inconclusive")


def test_verify_result_stats_shape(gadget_model, gadget_formula):
    d = dfs_synthesize(gadget_model, gadget_formula)
    assert {"states", "transitions", "attempts", "time_s"} <= set(d.stats)
    a = fixpoint_approx(gadget_model, gadget_formula)
    assert {"states", "transitions", "upper", "lower", "starts", "time_s"} <= set(
        a.stats
    )


def test_yes_strategies_are_total_on_coalition_views(voting2_model, voting2_doc):
    f = global_formula(voting2_doc)
    res = dfs_synthesize(voting2_model, f)
    m = voting2_model
    mi = m.module_index["Voter1"]
    views = {m.view_of(s, mi) for s in range(m.n_states)}
    assert views <= set(res.strategy.moves["Voter1"])
