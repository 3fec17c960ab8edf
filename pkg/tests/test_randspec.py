from agrmc import compose, dfs_synthesize, random_spec
from agrmc.lang import parse_formula, pretty_formula, pretty_print
from agrmc.randspec import _strategy_space

SEEDS = range(100)


def test_deterministic_per_seed():
    for seed in (0, 7, 42):
        assert pretty_print(random_spec(seed)) == pretty_print(random_spec(seed))


def test_corpus_respects_budgets():
    operators = set()
    sizes = []
    for seed in SEEDS:
        doc = random_spec(seed)
        goals = [g.goal for g in doc.groups if g.goal is not None]
        assert len(goals) == 1
        goal = goals[0]
        assert len(goal.coalition) == 1
        # the goal survives a surface round trip
        assert pretty_formula(parse_formula(pretty_formula(goal))) == pretty_formula(goal)
        model = compose(doc)
        sizes.append(model.n_states)
        assert model.n_states <= 200
        assert _strategy_space(model, goal.coalition[0]) <= 1024
        operators.add(goal.operator)
    assert operators == {"G", "F"}
    assert sum(1 for n in sizes if n >= 5) >= 30  # not degenerate


def test_corpus_not_verdict_skewed():
    verdicts = {"Yes": 0, "No": 0}
    for seed in SEEDS:
        doc = random_spec(seed)
        goal = next(g.goal for g in doc.groups if g.goal is not None)
        res = dfs_synthesize(compose(doc), goal)
        verdicts[res.verdict] += 1
    assert verdicts["Yes"] >= 25
    assert verdicts["No"] >= 25
