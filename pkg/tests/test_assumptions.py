import pytest

from agrmc import (
    InvalidParameter,
    UnknownModule,
    check_path_coverage,
    close_modules,
    communication_distance,
    compose,
    export_json,
    generate_assumption,
    parse_module,
    pretty_print,
)
from agrmc.assumptions import abstract_then_quotient, quotient_reduce
from agrmc.lang import SpecDocument


class TestCommunication:
    def test_distances(self, voting2_doc):
        assert communication_distance(voting2_doc, "Voter1", "Coercer") == 1
        assert communication_distance(voting2_doc, "Voter1", "Voter2") == 2
        assert communication_distance(voting2_doc, "Voter1", "Voter1") == 0

    def test_close_modules(self, voting2_doc):
        assert close_modules(voting2_doc, "Voter1", 1) == ["Coercer"]
        assert close_modules(voting2_doc, "Voter1", 2) == ["Voter2", "Coercer"]

    def test_close_modules_monotone(self, voting3_doc):
        prev: set = set()
        for d in (1, 2, 3):
            cur = set(close_modules(voting3_doc, "Voter1", d))
            assert prev <= cur
            prev = cur

    def test_close_modules_errors(self, voting2_doc):
        with pytest.raises(InvalidParameter):
            close_modules(voting2_doc, "Voter1", 0)
        with pytest.raises(UnknownModule):
            close_modules(voting2_doc, "Nobody", 1)


class TestGenerateAssumption:
    def test_voting2_sizes_frozen(self, voting2_doc):
        a = generate_assumption(voting2_doc, "Voter1", 1)
        assert len(a.states) == 21
        assert len(a.transitions) == 57
        assert a.synthetic

    def test_declared_vars_are_target_inputs(self, voting2_doc):
        a = generate_assumption(voting2_doc, "Voter1", 1)
        assert [v.name for v in a.state_vars] == ["pun1"]
        # free inputs resolve against the target's own variables
        assert set(a.input_vars) <= {"vote1", "reported1", "pstatus1"}

    def test_surface_round_trip(self, voting2_doc):
        a = generate_assumption(voting2_doc, "Voter1", 1)
        parsed = parse_module(pretty_print(a))
        assert export_json(parsed) == export_json(a)

    def test_trivial_when_no_external_inputs(self, gadget_doc):
        a = generate_assumption(gadget_doc, "E", 1)
        assert len(a.states) == 1 and len(a.transitions) == 1
        t = a.transitions[0]
        assert t.src == t.dst and not t.guard.constraints

    def test_composed_sizes_frozen(self, voting2_doc):
        a = generate_assumption(voting2_doc, "Voter1", 1)
        pair = SpecDocument((voting2_doc.modules_by_name["Voter1"], a), ())
        m = compose(pair)
        assert m.n_states == 161
        assert m.n_transitions == 537

    def test_voting3_sizes_frozen(self, voting3_doc):
        a = generate_assumption(voting3_doc, "Voter1", 1)
        assert len(a.states) == 147
        assert len(a.transitions) == 537
        assert [v.name for v in a.state_vars] == ["pun1"]

    def test_distance_insensitive_on_voting(self, voting3_doc):
        # the input-ownership closure already pulls in every module at
        # distance 1, so larger radii change nothing here
        a1 = generate_assumption(voting3_doc, "Voter1", 1)
        a2 = generate_assumption(voting3_doc, "Voter1", 2)
        assert export_json(a1) == export_json(a2)

    def test_unknown_target(self, voting2_doc):
        with pytest.raises(UnknownModule):
            generate_assumption(voting2_doc, "Nobody", 1)


class TestQuotient:
    def test_projected_coercer_nine_states(self, voting3_doc):
        atq = abstract_then_quotient(
            voting3_doc, "Coercer", keep_state_vars=["pun1"], keep_inputs=["reported1"]
        )
        # 3 punish values x 0/1/2 still-undecided other voters
        assert len(atq.states) == 9
        assert len(atq.states) < 27
        per_value: dict = {}
        for s in atq.states:
            per_value.setdefault(dict(s.valuation)["pun1"], 0)
            per_value[dict(s.valuation)["pun1"]] += 1
        assert per_value == {"?": 3, "T": 3, "F": 3}

    def test_idempotent(self, voting3_doc):
        atq = abstract_then_quotient(
            voting3_doc, "Coercer", keep_state_vars=["pun1"], keep_inputs=["reported1"]
        )
        again = quotient_reduce(atq)
        assert len(again.states) == len(atq.states)
        assert len(again.transitions) == len(atq.transitions)

    def test_quotient_preserves_init_label(self, voting2_doc):
        c = voting2_doc.modules_by_name["Coercer"]
        q = quotient_reduce(c)
        init_val = dict(next(s for s in q.states if s.id == q.init).valuation)
        assert init_val == {"pun1": "?", "pun2": "?"}


WEAK_ASSUMPTION = """MODULE A_weak
VAR pun1 : { ?, T, F }
STATE a0 [ pun1=? ]
INIT a0
TRANS a0 -> a0 [ ];
"""


class TestPathCoverage:
    def test_voting2_bounded_and_full(self, voting2_doc):
        a = generate_assumption(voting2_doc, "Voter1", 1)
        bounded = check_path_coverage(voting2_doc, "Voter1", a, max_depth=12)
        assert bounded.ok and bounded.trace is None
        full = check_path_coverage(voting2_doc, "Voter1", a)
        assert full.ok
        assert full.pairs_explored >= bounded.pairs_explored

    def test_weak_assumption_caught(self, voting2_doc):
        # pun1 frozen at '?' misses the punish step the real coercer takes
        weak = parse_module(WEAK_ASSUMPTION)
        report = check_path_coverage(voting2_doc, "Voter1", weak)
        assert not report.ok
        assert report.trace  # a concrete escaping path comes back

    def test_trivial_assumption_covers_closed_target(self, gadget_doc):
        a = generate_assumption(gadget_doc, "E", 1)
        report = check_path_coverage(gadget_doc, "E", a)
        assert report.ok

    def test_unknown_target(self, voting2_doc):
        with pytest.raises(UnknownModule):
            check_path_coverage(voting2_doc, "Nobody", parse_module(WEAK_ASSUMPTION))
