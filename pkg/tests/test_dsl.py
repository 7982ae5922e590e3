from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from miskit import benchmarks as bench
from miskit.analysis import reachable
from miskit.dsl import (
    ParseError, export_graph, mis_from_data, mis_to_data, ncegs_to_data, parse,
    parse_condition, parse_with_diagnostics, print_mis,
)
from miskit.unfolding import unfold

from randmis import random_mis

GOLDEN = Path(__file__).resolve().parent.parent / "benchmarks"

LOOP = """
mis {
  agtnames: solo;
  act: nop;
  in: idle;
}
agent solo {
  module solo {
    states: s;
    init: s;
    avail { s: nop; }
    out { (s, nop) -> {}; }
    in_list { true -> {idle}; }
    trans { (s, nop, idle) -> s; }
    props: ;
    pi { }
  }
}
"""


def test_round_trip_ttc1():
    m = bench.ttc(1)
    assert parse(print_mis(m)) == m


def test_print_is_canonical_for_equal_models():
    assert print_mis(bench.ttc(2)) == print_mis(bench.ttc(2))
    m = bench.ttc(2)
    assert print_mis(m) == print_mis(parse(print_mis(m)))


def test_print_keeps_entry_order():
    text = print_mis(bench.ttc(2))
    assert text.index("try_1 in H") < text.index("try_2 in H") < text.index("-> {no_reqs}")


def test_entry_after_true_warns():
    text = LOOP.replace("true -> {idle};", "true -> {idle}; s = s -> {idle};")
    m, diags = parse_with_diagnostics(text)
    assert m is not None and len(m.module("solo").in_list) == 1
    assert any("unreachable decision entry" in d.message and d.severity == "warning" for d in diags)


def test_undeclared_symbol_reports_name_and_span():
    text = LOOP.replace("(s, nop) -> {}", "(s, nop) -> {ping -> solo}")
    with pytest.raises(ParseError) as err:
        parse(text)
    d = err.value.diagnostics[0]
    assert "ping" in d.message
    line = text.splitlines()[d.span.line - 1]
    assert line[d.span.column - 1:].startswith("ping")


def test_garbage_has_located_error():
    _, diags = parse_with_diagnostics("this is not a model")
    assert diags and diags[0].severity == "error"
    assert diags[0].span.line == 1


def test_every_syntax_error_points_inside_text():
    text = LOOP
    for cut in range(5, len(text), 37):
        broken = text[:cut]
        m, diags = parse_with_diagnostics(broken)
        if m is None:
            lines = broken.splitlines() or [""]
            for d in diags:
                assert 1 <= d.span.line <= len(lines) + 1


def test_keywords_are_usable_as_state_names():
    m = bench.ttc(1)  # train has states named `out` and `in`
    assert parse(print_mis(m)).module("tr_1").states == ("out", "tun_needed", "granted", "in")


def test_condition_parsing_round_trip():
    for text in ["s = a and x in H", "not (count(x) >= 2 or y in H)", "true",
                 "(s = a or s = b) and not not x in H"]:
        c = parse_condition(text)
        assert parse_condition(str(c)) == c


@pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.mis")), ids=lambda p: p.name)
def test_golden_files_are_byte_identical(path):
    family, n = path.stem.split("_")
    assert print_mis(bench.generate(family, int(n))) == path.read_text()


def test_benchmarks_round_trip_through_text_and_data():
    for fam in bench.FAMILIES:
        for n in range(bench.MIN_N[fam], bench.MIN_N[fam] + 3):
            m = bench.generate(fam, n)
            assert parse(print_mis(m)) == m
            assert mis_from_data(mis_to_data(m)) == m


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_random_models_round_trip(seed):
    m = random_mis(seed)
    text = print_mis(m)
    again = parse(text)
    assert again == m
    assert print_mis(again) == text


def test_graph_export_single_loop():
    dot = export_graph(unfold(parse(LOOP)))
    assert dot.count("->") == 1
    assert dot.count("label=") == 2


def test_graph_export_matches_reachable_count():
    n = unfold(bench.ttc(1))
    dot = export_graph(n)
    nodes = [ln for ln in dot.splitlines() if ln.strip().startswith("s") and "->" not in ln]
    assert len(nodes) == reachable(n)[0]


def test_graph_export_dc1_has_unique_ids():
    dot = export_graph(unfold(bench.dc1(3)))
    ids = [ln.split()[0] for ln in dot.splitlines() if ln.startswith("  s") and "->" not in ln]
    assert len(ids) == len(set(ids))


def test_ncegs_data_lists_epistemic_classes():
    n = unfold(bench.ttc(1))
    data = ncegs_to_data(n)
    assert len(data["states"]) == 5
    assert sum(len(c) for c in data["epistemic"]["ctrl"]) == 5
