from miskit import benchmarks as bench
from miskit.interference import TRUE, Has, decision_list
from miskit.model import MIS, Agent, Module, agent_symbols, namesakes, validate
from miskit.openness import reduce

from randmis import random_mis


def loop_agent(aid="solo", prop="p"):
    mod = Module(name=aid, states=("s",), init={"s"}, avail={"s": {"nop"}},
                 out={("s", "nop"): {frozenset()}},
                 in_list=decision_list((TRUE, {"idle"})),
                 trans={("s", "nop", "idle"): {"s"}},
                 props={prop}, valuation={prop: {"s"}})
    return Agent(aid, (mod,))


def rules(report):
    return {v.rule for v in report}


def test_ttc2_is_clean():
    assert list(validate(bench.ttc(2))) == []


def test_shared_proposition_is_reported():
    m = MIS.build([loop_agent("a", "in_tunnel"), loop_agent("b", "in_tunnel")])
    assert "Π disjointness" in rules(validate(m).errors)


def test_missing_true_guard_is_reported():
    a = loop_agent()
    mod = a.modules[0].with_(in_list=decision_list((Has("idle"), {"idle"})))
    m = MIS.build([Agent("solo", (mod,))])
    assert "decision list totality" in rules(validate(m).errors)


def test_empty_init_is_only_a_warning():
    a = loop_agent()
    m = MIS.build([Agent("solo", (a.modules[0].with_(init=frozenset()),))])
    rep = validate(m)
    assert rep.ok and rep.warnings


def test_empty_alternatives_is_an_error():
    a = loop_agent()
    m = MIS.build([Agent("solo", (a.modules[0].with_(out={}),))])
    assert "out defined" in rules(validate(m).errors)


def test_undeclared_symbol_is_an_error():
    a = loop_agent()
    m = MIS(frozenset({"solo"}), frozenset({"nop"}), frozenset(), (a,))
    assert "declared symbol" in rules(validate(m).errors)


def test_agent_symbols_of_a_train():
    names, acts, syms = agent_symbols(bench.train(1))
    assert {"tr_1", "ctrl"} <= names
    assert "try_1" in syms and "approach" in acts


def test_agent_symbols_of_a_loop():
    assert agent_symbols(loop_agent()) == ({"solo"}, {"nop"}, {"idle"})


def test_agent_symbols_of_a_cryptographer():
    _, _, syms = agent_symbols(bench.dc1_crypto(2, 3))
    assert {"h_2", "t_2", "h_1", "eq", "diff"} <= syms


def test_namesakes():
    m = bench.ttc(2)
    ctrl = m.agent("ctrl")
    assert namesakes(loop_agent("fresh"), m) == []
    assert namesakes(ctrl, m) == [ctrl]
    assert namesakes(ctrl, reduce(m, ctrl)) == []


def test_cardinality_and_idempotent_validation():
    for seed in range(30):
        m = random_mis(seed)
        assert m.card == len(m.agents)
        assert validate(m) == validate(m)


def test_agent_symbols_monotone_under_added_entries():
    a = loop_agent()
    before = agent_symbols(a)
    mod = a.modules[0]
    grown = mod.with_(avail={"s": {"nop", "go"}},
                      out={("s", "nop"): {frozenset()},
                           ("s", "go"): {frozenset({("ping", "other")})}})
    after = agent_symbols(Agent("solo", (grown,)))
    assert all(x <= y for x, y in zip(before, after))


def test_equality_ignores_agent_order():
    m = bench.ttc(2)
    assert m == m.with_agents(tuple(reversed(m.agents)))
