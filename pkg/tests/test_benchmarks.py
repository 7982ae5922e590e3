import pytest

from miskit import benchmarks as bench
from miskit.analysis import check_invariant
from miskit.interference import BROADCAST
from miskit.model import validate
from miskit.unfolding import unfold


def test_ttc2_controller_states():
    ctrl = bench.ttc(2).module("ctrl")
    assert {"tun_free", "tr_1granted", "tr_2granted", "infd"} <= set(ctrl.states)


def test_train_can_enter_once_granted():
    tr = bench.train(1).modules[0]
    assert "enter" in tr.d("granted")


@pytest.mark.parametrize("n", range(1, 6))
def test_ttc_instances_validate(n):
    assert validate(bench.ttc(n)).ok


@pytest.mark.parametrize("family", ["dc1", "dc2", "dc0"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_dc_instances_validate(family, n):
    assert validate(bench.generate(family, n)).ok


def test_sabotaged_controller_differs_only_in_release():
    good, bad = bench.ttc(2).module("ctrl"), bench.ttc_sabotaged(2).module("ctrl")
    assert good.states == bad.states and good.in_list != bad.in_list


def test_dc2_uses_no_broadcast():
    for mod in bench.dc2(4).modules:
        for alts in mod.out.values():
            assert all(t.recipient != BROADCAST for alt in alts for t in alt)


def test_dc0_cryptographers_are_identical_up_to_id():
    a, b = bench.dc0_crypto(1), bench.dc0_crypto(2)
    text_a = repr(a).replace("_1", "_#")
    text_b = repr(b).replace("_2", "_#")
    assert text_a == text_b


def test_new_agent_matches_family_member():
    for fam in bench.FAMILIES:
        n = bench.MIN_N[fam]
        grown = bench.generate(fam, n + 1)
        joiner = bench.new_agent(fam, n)
        assert grown.agent(joiner.id) == joiner


def test_too_small_instances_rejected():
    with pytest.raises(ValueError):
        bench.dc1(2)
    with pytest.raises(ValueError):
        bench.generate("nope", 3)


@pytest.mark.parametrize("family", ["dc1", "dc2"])
def test_at_most_one_payer(family):
    n = unfold(bench.generate(family, 3))
    assert check_invariant(n, bench.at_most_one_payer(family, 3))


def test_complete_states_are_reachable():
    n = unfold(bench.dc1(3))
    from miskit.analysis import evaluate, parse_predicate
    p = parse_predicate(bench.protocol_complete("dc1", 3))
    assert any(evaluate(n, p, q) for q in n.states)
