import pytest

from miskit import benchmarks as bench
from miskit.analysis import reachable
from miskit.interference import TRUE, decision_list
from miskit.metrics import (
    global_complexity, in_degree, interaction_complexity, out_degree, sparseness_check, system_ic,
)
from miskit.model import MIS, Agent, Module
from miskit.openness import RenameSymbol, apply_script, EditScript
from miskit.unfolding import unfold


def talker(recipient):
    mod = Module(name="solo", states=("s",), init={"s"}, avail={"s": {"nop"}},
                 out={("s", "nop"): {frozenset({("idle", recipient)})}},
                 in_list=decision_list((TRUE, {"idle"})),
                 trans={("s", "nop", "idle"): {"s"}})
    return Agent("solo", (mod,))


def test_self_addressed_tokens_do_not_count():
    a = talker("solo")
    assert out_degree(a.modules[0], "solo", "s") == 0


def test_broadcast_counts():
    a = talker("*")
    assert out_degree(a.modules[0], "solo", "s") == 1


def test_train_request_sends_one_token():
    tr = bench.train(1).modules[0]
    assert out_degree(tr, "tr_1", "tun_needed") == 1


def test_in_degree_ignores_guards_for_other_states():
    tr = bench.train(1).modules[0]
    # each state tests exactly one symbol: appr, grant, enter, left
    assert {q: in_degree(tr, q) for q in tr.states} == dict.fromkeys(tr.states, 1)


def test_profile_total_is_sum_of_states():
    prof = interaction_complexity(bench.ttc(2), "ctrl")
    assert prof.total == sum(prof.out_degree.values()) + sum(prof.in_degree.values())
    assert all(v >= 0 for v in prof.out_degree.values())


def test_ic_has_constant_first_differences_for_ttc():
    ics = [system_ic(bench.ttc(n)) for n in (2, 3, 4, 5)]
    diffs = {b - a for a, b in zip(ics, ics[1:])}
    assert len(diffs) == 1


def test_gc_is_reachable_triple_count():
    assert global_complexity(bench.ttc(1)) == reachable(unfold(bench.ttc(1)))[1]


def test_gc_strictly_increasing():
    gcs = [global_complexity(bench.ttc(n)) for n in (1, 2, 3)]
    assert gcs[0] < gcs[1] < gcs[2]


def test_single_agent_family_is_not_multi_agent():
    fam = lambda n: MIS.build([talker("solo")])
    rep = sparseness_check(fam, range(1, 4), name="solo")
    assert not rep.multi_agent and not rep.verdict
    assert "card < 2" in rep.verdict_text()


def test_report_table_and_data_agree():
    rep = sparseness_check(bench.ttc, range(1, 3), name="ttc")
    data = rep.to_data()
    assert [r["IC"] for r in data["rows"]] == [r.ic for r in rep.rows]
    assert "verdict" in rep.table()
    assert all(r.ratio >= 0 for r in rep.rows)


def test_unknown_class_rejected():
    with pytest.raises(ValueError):
        sparseness_check(bench.ttc, [1], cls="cubic")


def test_renaming_a_symbol_keeps_ic():
    m = bench.ttc(2)
    mod = m.module("tr_1")
    m2, _ = apply_script(m, EditScript((RenameSymbol.counted(mod, "symbol", "appr", "near"),)))
    assert system_ic(m2) == system_ic(m)
