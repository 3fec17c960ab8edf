import pytest

from agrmc import (
    MissingGoal,
    MixedTemporalOperators,
    check_strategy,
    compose,
    generate_assumption,
    global_formula,
    parse_module,
    parse_spec,
    verify_agr,
    verify_monolithic,
)
from agrmc.lang import GroupDecl, SpecDocument, parse_formula


def _strip_goals(doc):
    groups = tuple(GroupDecl(g.name, g.members, None) for g in doc.groups)
    return SpecDocument(doc.modules, groups)


def test_monolithic_voting2(voting2_doc):
    res = verify_monolithic(voting2_doc, engine="dfs")
    assert res.verdict == "Yes"
    assert verify_monolithic(voting2_doc, engine="apprx").verdict == "Yes"


def test_agr_voting2_yes_and_transfer(voting2_doc, voting2_model):
    report = verify_agr(voting2_doc, distance=1, engine="dfs")
    assert report.combined == "Yes"
    assert len(report.tasks) == 1
    task = report.tasks[0]
    assert task.target == "Voter1"
    assert task.model_states == 161
    assert task.model_transitions == 537
    assert task.result.verdict == "Yes"
    # the compositional strategy must win on the full composition too
    f = global_formula(voting2_doc)
    assert check_strategy(voting2_model, report.strategy, f).verdict == "Yes"


def test_agr_task_smaller_than_mono(voting3_doc, voting3_model):
    report = verify_agr(voting3_doc, engine="dfs")
    assert report.combined == "Yes"
    for task in report.tasks:
        assert task.model_states < voting3_model.n_states
        assert task.model_transitions < voting3_model.n_transitions


def test_agr_never_answers_no(gadget_doc):
    # make the goal local to M but unachievable: M must eventually move
    doc = parse_spec(
        "\n".join(
            [
                "MODULE E",
                "VAR e : { ?, 1, 2 }",
                "VAR go : { 0, 1 }",
                "STATE e0 [ e=?, go=0 ]",
                "STATE e1 [ e=1, go=1 ]",
                "STATE e2 [ e=2, go=1 ]",
                "INIT e0",
                "TRANS e0 -> e1 [ ];",
                "TRANS e0 -> e2 [ ];",
                "MODULE M",
                "VAR m : { ?, a, b }",
                "INPUT go",
                "STATE m0 [ m=? ]",
                "STATE ma [ m=a ]",
                "STATE mb [ m=b ]",
                "INIT m0",
                "TRANS m0 -> m0 [ go=0 ];",
                "TRANS m0 -> ma [ go=1 ];",
                "TRANS m0 -> mb [ go=1 ];",
                "GROUP GE { E }",
                'GROUP GM { M } GOAL "<<M>> G m=?"',
            ]
        )
    )
    assert verify_monolithic(doc, engine="dfs").verdict == "No"
    report = verify_agr(doc, engine="dfs")
    assert report.combined == "Inconclusive"  # decomposition never proves No
    assert report.strategy is None


def test_missing_goal(voting2_doc):
    stripped = _strip_goals(voting2_doc)
    with pytest.raises(MissingGoal):
        verify_monolithic(stripped)
    with pytest.raises(MissingGoal):
        verify_agr(stripped)


def test_mixed_temporal_operators(voting2_doc):
    groups = list(voting2_doc.groups)
    groups[1] = GroupDecl("GVoter2", ("Voter2",), parse_formula("<<Voter2>> F vote2=1"))
    doc = SpecDocument(voting2_doc.modules, tuple(groups))
    with pytest.raises(MixedTemporalOperators):
        global_formula(doc)
    with pytest.raises(MixedTemporalOperators):
        verify_agr(doc)


def test_global_formula_single_goal(voting2_doc):
    f = global_formula(voting2_doc)
    assert f.coalition == ("Voter1",)
    assert f.operator == "G"


def test_global_formula_conjoins_goals(voting2_doc):
    groups = list(voting2_doc.groups)
    groups[1] = GroupDecl(
        "GVoter2", ("Voter2",), parse_formula("<<Voter2>> G !(pstatus2=T)")
    )
    doc = SpecDocument(voting2_doc.modules, tuple(groups))
    f = global_formula(doc)
    assert f.coalition == ("Voter1", "Voter2")
    assert f.operator == "G"
    from agrmc.lang import And

    assert isinstance(f.pred, And)
    report = verify_agr(doc, engine="dfs")
    assert len(report.tasks) == 2
    assert {t.target for t in report.tasks} == {"Voter1", "Voter2"}


WEAK_ASSUMPTION = """MODULE A_weak
VAR pun1 : { ?, T, F }
STATE a0 [ pun1=? ]
INIT a0
TRANS a0 -> a0 [ ];
"""


def test_user_assumption_replaces_generated(voting2_doc):
    weak = parse_module(WEAK_ASSUMPTION)
    report = verify_agr(voting2_doc, assumption=weak, engine="dfs")
    task = report.tasks[0]
    assert task.assumption.name == "A_weak"
    assert task.model_states < 161  # much less environment to explore
    assert report.combined == "Yes"  # sound only if the assumption covers;
    # check_path_coverage is the audit for that (see assumption tests)


def test_worker_count_does_not_change_result(voting3_doc):
    a = verify_agr(voting3_doc, engine="dfs", workers=1)
    b = verify_agr(voting3_doc, engine="dfs", workers=4)
    assert a.combined == b.combined == "Yes"


def test_agr_apprx_engine(voting2_doc):
    report = verify_agr(voting2_doc, engine="apprx")
    assert report.combined == "Yes"
