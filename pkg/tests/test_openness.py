from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from miskit import benchmarks as bench
from miskit.dsl import parse_condition
from miskit.interference import Token
from miskit.openness import (
    COMPONENT_SCHEMA, DEFAULT_SCHEMA, STEP_TYPES, AddAvail, AddOutAlternative, AddState,
    EditScript, InapplicableStep, InsertDecisionEntry, RemoveState, apply_script, classify_costs,
    expand, openness_family_fit, openness_report, reduce,
)
from miskit.unfolding import unfold

from randmis import fresh_agent, random_mis

GOLDEN = Path(__file__).resolve().parent.parent / "benchmarks"


def test_expand_ttc1_with_second_train():
    m = expand(bench.ttc(1), bench.train(2))
    assert m.card == 3
    assert {"try_2", "grant"} <= m.symbols
    assert "tr_2" in m.agent_names


def test_expand_replaces_namesake_in_place():
    m = bench.ttc(2)
    ids = [a.id for a in m.agents]
    again = expand(m, bench.train(1))
    assert [a.id for a in again.agents] == ids


def test_reduce_keeps_alphabets():
    m = bench.ttc(2)
    r = reduce(m, m.agent("tr_2"))
    assert r.card == 2
    assert "try_2" in r.symbols and "tr_2" in r.agent_names


def test_reduce_of_a_stranger_is_identity():
    m = bench.ttc(1)
    assert reduce(m, bench.train(5)) == m


def test_empty_script_costs_nothing():
    m = bench.ttc(1)
    assert apply_script(m, EditScript()) == (m, 0)


def test_script_cost_is_additive():
    s = bench.dc1_script(3)
    half = len(s) // 2
    a, b = EditScript(s.steps[:half]), EditScript(s.steps[half:])
    assert (a + b).cost() == a.cost() + b.cost() == s.cost()


def test_inverse_steps_cost_the_same():
    for n in (1, 2):
        for step in bench.ttc_script(n):
            assert step.inverse().cost() == step.cost()
            assert step.inverse().inverse() == step


def test_reverse_restores_model():
    m = expand(bench.ttc(2), bench.train(3))
    script = bench.ttc_script(2)
    grown, _ = apply_script(m, script)
    back, _ = apply_script(grown, script.reverse())
    assert back.agents == m.agents
    # symbols introduced by the script stay declared
    assert back.symbols - m.symbols == {"grant_3"}


def test_inapplicable_step_reports_index():
    s = EditScript((AddState("ctrl", "extra"), AddState("ctrl", "extra")))
    with pytest.raises(InapplicableStep) as err:
        apply_script(bench.ttc(1), s)
    assert err.value.index == 1


def test_unknown_module_is_inapplicable():
    with pytest.raises(InapplicableStep):
        apply_script(bench.ttc(1), EditScript((RemoveState("nobody", "s"),)))


def test_decision_entry_cost():
    step = InsertDecisionEntry("ctrl", 0, parse_condition("s = tun_free and try_9 in H"), {"grant_9"})
    # two atoms, one connective, one value symbol
    assert step.cost() == 3 + 3 + 1 + 1


def test_step_costs_follow_schema():
    assert AddAvail("ctrl", "x", "inform").cost() == DEFAULT_SCHEMA.avail
    alt = AddOutAlternative("ctrl", "x", "inform", {Token("grant", "tr_1")})
    assert alt.cost() == DEFAULT_SCHEMA.out_alternative + DEFAULT_SCHEMA.token


def test_script_text_round_trip():
    for s in (bench.ttc_script(2), bench.dc1_script(3), bench.dc2_script(4)):
        assert EditScript.from_text(s.to_text()) == s


def test_script_text_checks_stated_cost():
    text = bench.ttc_script(1).to_text().replace("} 4\n", "} 5\n", 1)
    with pytest.raises(ValueError):
        EditScript.from_text(text)


@pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.script")), ids=lambda p: p.name)
def test_golden_scripts_match_generators(path):
    family, n = path.stem.split("_")[:2]
    assert EditScript.from_text(path.read_text()) == bench.family_scripts(family, int(n))


def test_every_step_type_serializes():
    seen = {type(s).__name__ for n in (3, 4) for s in bench.dc2_script(n)}
    seen |= {type(s).__name__ for s in bench.ttc_script(1)}
    seen |= {type(s.inverse()).__name__ for s in bench.dc2_script(3)}
    assert seen <= set(STEP_TYPES)


def test_dc1_cost_under_component_schema():
    assert bench.dc1_script(3).cost(COMPONENT_SCHEMA) == 52
    assert bench.dc1_script(3).cost() == 54


def test_breakdown_sums_to_cost():
    s = bench.dc2_script(4)
    assert sum(s.breakdown().values()) == s.cost()


def test_report_checks_cardinality_and_constraint():
    rep = openness_report(bench.ttc(2), bench.train(3), bench.ttc_script(2),
                          constraint=bench.mutual_exclusion(3), base="ttc_2")
    assert rep.card_ok and rep.constraint_ok and rep.cost == 28
    assert rep.result == bench.ttc(3)
    assert rep.to_data()["cost"] == 28 and "cost" in rep.table()


def test_reduction_direction():
    m = bench.ttc(2)
    rep = openness_report(m, m.agent("tr_2"), EditScript(), direction="reduction")
    assert rep.cost == 0 and rep.result.card == 2


def test_classify_costs():
    assert classify_costs([0, 0]) == "O(0)"
    assert classify_costs([54, 54, 54]) == "O(1)"
    assert classify_costs([84, 94, 104]) == "O(n)"
    assert classify_costs([1, 5, 6]) == "unclassified"
    assert classify_costs([]) == "unclassified"


def test_family_fit_checks_result():
    with pytest.raises(AssertionError):
        openness_family_fit(bench.ttc, lambda n: EditScript(), lambda n: bench.train(n + 1), [1])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_reduce_then_expand_restores(seed):
    m = random_mis(seed)
    for a in m.agents:
        assert expand(reduce(m, a), a) == m


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_fresh_agent_round_trip_preserves_unfolding(seed):
    m = random_mis(seed)
    z = fresh_agent(seed)
    back = reduce(expand(m, z), z)
    n1, n2 = unfold(m), unfold(back)
    assert set(n1.states) == set(n2.states) and n1.trans == n2.trans
