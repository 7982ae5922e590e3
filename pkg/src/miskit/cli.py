"""Command-line front end: ``miskit <command> ...``.

Exit codes: 0 success, 1 property violated or negative verdict, 2 usage or
parse error, 3 exploration budget exceeded or stuck model.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import analysis, benchmarks, dsl, metrics, openness
from .model import validate
from .unfolding import DEFAULT_BUDGET, ExplorationBudgetExceeded, UnfoldingError, unfold

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def _range(text: str) -> range:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("MISKIT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise _Usage(f"MISKIT_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def _emit(args, text: str, data) -> None:
    if args.format == "data":
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}") from None
    mis, diags = dsl.parse_with_diagnostics(text)
    if mis is None:
        raise _ParseFailure(path, diags)
    return mis


class _ParseFailure(Exception):
    def __init__(self, path, diags):
        self.path, self.diags = path, diags


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- commands -----------------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {args.file}: {e.strerror}") from None
    mis, diags = dsl.parse_with_diagnostics(text)
    lines = [f"{args.file}:{d}" for d in diags]
    ok = mis is not None and not diags
    if mis is not None and not diags:
        lines.append(f"{args.file}: ok ({mis.card} agents, {len(mis.modules)} modules)")
    data = {"file": args.file, "ok": ok,
            "diagnostics": [{"severity": d.severity, "line": d.span.line,
                             "column": d.span.column, "message": d.message} for d in diags]}
    _emit(args, "\n".join(lines), data)
    if mis is None:
        return EXIT_USAGE
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_unfold(args) -> int:
    m = _load(args.file)
    n = unfold(m, reachable_only=not args.full, budget=_budget(args))
    states, triples = len(n.states), n.transition_count()
    if args.out:
        _write(args.out, dsl.to_json(dsl.ncegs_to_data(n)))
    text = f"states: {states}\ntransitions: {triples}\ninitial: {len(n.init)}"
    _emit(args, text, {"states": states, "transitions": triples, "initial": len(n.init)})
    return EXIT_OK


def cmd_check(args) -> int:
    m = _load(args.file)
    n = unfold(m, budget=_budget(args))
    pred = _predicate(args.invariant)
    try:
        res = analysis.check_invariant(n, pred)
    except ValueError as e:
        raise _Usage(str(e)) from None
    if res:
        _emit(args, "invariant holds", {"result": "holds"})
        return EXIT_OK
    tr = res.trace
    _emit(args, f"invariant violated; counterexample of length {len(tr)}:\n{tr.format()}",
          {"result": "violated",
           "trace": {"states": [list(q) for q in tr.states],
                     "actions": [list(a) for a in tr.actions]}})
    return EXIT_VIOLATED


def cmd_epistemic(args) -> int:
    m = _load(args.file)
    n = unfold(m, budget=_budget(args))
    try:
        res = analysis.epistemic_check(n, args.agent, _predicate(args.scope), _predicate(args.secret))
    except (ValueError, KeyError) as e:
        raise _Usage(f"bad query: {e}") from None
    if res:
        _emit(args, "holds", {"result": "holds"})
        return EXIT_OK
    _emit(args, f"witness: ({', '.join(res.state)})",
          {"result": "witness", "state": list(res.state)})
    return EXIT_VIOLATED


def cmd_metrics(args) -> int:
    fam = _family(args.family)
    rep = metrics.sparseness_check(lambda n: benchmarks.generate(fam, n), args.range,
                                   args.cls, name=fam, budget=_budget(args))
    _emit(args, rep.table(), rep.to_data())
    return EXIT_OK if rep.verdict else EXIT_VIOLATED


def cmd_openness(args) -> int:
    fam = _family(args.family)
    fit = openness.openness_family_fit(
        lambda n: benchmarks.generate(fam, n),
        lambda n: benchmarks.family_scripts(fam, n),
        lambda n: benchmarks.new_agent(fam, n),
        args.range)
    _emit(args, f"family {fam}\n" + fit.table(),
          {"family": fam, "costs": {str(k): v for k, v in sorted(fit.costs.items())},
           "verdict": fit.verdict})
    return EXIT_OK if fit.verdict != "unclassified" else EXIT_VIOLATED


def cmd_gen(args) -> int:
    fam = _family(args.family)
    try:
        m = benchmarks.generate(fam, args.n)
    except ValueError as e:
        raise _Usage(str(e)) from None
    text = dsl.print_mis(m)
    if args.out:
        _write(args.out, text)
        _emit(args, f"wrote {args.out}", {"family": fam, "n": args.n, "out": args.out})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_export(args) -> int:
    m = _load(args.file)
    if not (args.graph or args.json):
        raise _Usage("export needs --graph PATH and/or --json PATH")
    written = []
    if args.json:
        _write(args.json, dsl.to_json(dsl.mis_to_data(m)))
        written.append(args.json)
    if args.graph:
        n = unfold(m, budget=_budget(args))
        _write(args.graph, dsl.export_graph(n))
        written.append(args.graph)
    _emit(args, "\n".join(f"wrote {p}" for p in written), {"written": written})
    return EXIT_OK


def _predicate(text: str):
    try:
        return analysis.parse_predicate(text)
    except dsl.ParseError as e:
        raise _Usage(f"bad predicate: {e}") from None


def _family(name: str) -> str:
    if name not in benchmarks.FAMILIES:
        raise _Usage(f"unknown family {name!r}; choose from {', '.join(benchmarks.FAMILIES)}")
    return name


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="miskit", description="Modular interpreted systems toolkit.")
    p.add_argument("--format", choices=("text", "data"), default="text",
                   help="human-readable tables (default) or JSON")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_budget(sp):
        sp.add_argument("--budget", type=int, default=None,
                        help=f"state budget (default MISKIT_BUDGET or {DEFAULT_BUDGET})")

    sp = sub.add_parser("validate", help="parse and validate a .mis file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("unfold", help="unfold a model and report its size")
    sp.add_argument("file")
    sp.add_argument("--full", action="store_true", help="enumerate every tuple of local states")
    sp.add_argument("--out", help="write the unfolded model as JSON")
    with_budget(sp)
    sp.set_defaults(func=cmd_unfold)

    sp = sub.add_parser("check", help="check a state invariant")
    sp.add_argument("file")
    sp.add_argument("--invariant", required=True)
    with_budget(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("epistemic", help="check that an agent cannot rule out the secret being false")
    sp.add_argument("file")
    sp.add_argument("--agent", required=True)
    sp.add_argument("--scope", required=True)
    sp.add_argument("--secret", required=True)
    with_budget(sp)
    sp.set_defaults(func=cmd_epistemic)

    sp = sub.add_parser("metrics", help="interaction and global complexity over a family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--range", required=True, type=_range)
    sp.add_argument("--class", dest="cls", choices=metrics.CLASSES, default="logtime")
    with_budget(sp)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("openness", help="cost of growing a family by one agent")
    sp.add_argument("--family", required=True)
    sp.add_argument("--range", required=True, type=_range)
    sp.set_defaults(func=cmd_openness)

    sp = sub.add_parser("gen", help="write a benchmark instance as .mis")
    sp.add_argument("--family", required=True)
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("export", help="export a model as DOT graph and/or JSON")
    sp.add_argument("file")
    sp.add_argument("--graph", help="DOT file for the unfolded model")
    sp.add_argument("--json", help="JSON file for the model itself")
    with_budget(sp)
    sp.set_defaults(func=cmd_export)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Usage as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except _ParseFailure as e:
        for d in e.diags:
            print(f"{e.path}:{d}", file=sys.stderr)
        return EXIT_USAGE
    except ExplorationBudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except UnfoldingError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
