"""Text format for MIS models (``.mis``), plus JSON and DOT exports.

Example::

    mis {
      agtnames: ctrl, tr_1;
      act: approach, nop;
      in: appr, idle;
    }
    agent tr_1 {
      module tr_1 {
        states: out, tun_needed;
        init: out;
        avail { out: approach, nop; }
        out { (out, nop) -> {idle -> tr_1}; (out, approach) -> {appr -> tr_1}; }
        in_list { s = out and appr in H -> {appr}; true -> {idle}; }
        trans { (out, nop, idle) -> out; (out, approach, appr) -> tun_needed; }
        props: ;
        pi { }
      }
    }
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import NamedTuple

from .interference import (
    BROADCAST,
    COMPARATORS,
    And,
    Condition,
    Count,
    DecisionEntry,
    DecisionList,
    Has,
    Not,
    Or,
    StateIs,
    Token,
    TrueCond,
    TRUE,
    condition_states,
    condition_symbols,
)
from .model import MIS, Agent, Module, validate


class SourceSpan(NamedTuple):
    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.span}: {self.severity}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class _Syntax(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.span = span


# -- lexer ------------------------------------------------------------------------

class Tok(NamedTuple):
    kind: str  # NAME, INT, OP, EOF
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<INT>[0-9]+)
  | (?P<OP>->|!=|<=|>=|[{}()\[\],;:|*=<>])
""", re.VERBOSE)


def tokenize(text: str) -> list[Tok]:
    toks, line, col, pos = [], 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise _Syntax(f"unexpected character {text[pos]!r}", SourceSpan(line, col, 1))
        kind, val = m.lastgroup, m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("NAME", "INT", "OP"):
                toks.append(Tok(kind, val, SourceSpan(line, col, len(val))))
            col += len(val)
        pos = m.end()
    toks.append(Tok("EOF", "", SourceSpan(line, col, 0)))
    return toks


class TokenStream:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0

    def peek(self, k: int = 0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("OP", "NAME") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Tok:
        t = self.peek()
        if not self.at(text):
            raise _Syntax(f"expected {text!r}, found {_describe(t)}", t.span)
        return self.next()

    def name(self, what: str = "identifier") -> Tok:
        t = self.peek()
        if t.kind != "NAME":
            raise _Syntax(f"expected {what}, found {_describe(t)}", t.span)
        return self.next()

    def integer(self) -> Tok:
        t = self.peek()
        if t.kind != "INT":
            raise _Syntax(f"expected integer, found {_describe(t)}", t.span)
        return self.next()


def _describe(t: Tok) -> str:
    return "end of input" if t.kind == "EOF" else repr(t.text)


# -- conditions -------------------------------------------------------------------

def parse_condition_tokens(ts: TokenStream, refs: list | None = None) -> Condition:
    """``or`` < ``and`` < ``not`` < atoms; records symbol/state references."""
    return _cond_or(ts, refs)


def _cond_or(ts, refs):
    args = [_cond_and(ts, refs)]
    while ts.accept("or"):
        args.append(_cond_and(ts, refs))
    return args[0] if len(args) == 1 else Or(tuple(args))


def _cond_and(ts, refs):
    args = [_cond_not(ts, refs)]
    while ts.accept("and"):
        args.append(_cond_not(ts, refs))
    return args[0] if len(args) == 1 else And(tuple(args))


def _cond_not(ts, refs):
    if ts.at("not") and not ts.at("in", 1):
        ts.next()
        return Not(_cond_not(ts, refs))
    return _cond_atom(ts, refs)


def _cond_atom(ts, refs):
    t = ts.peek()
    if ts.accept("("):
        c = _cond_or(ts, refs)
        ts.expect(")")
        return c
    if t.kind != "NAME":
        raise _Syntax(f"expected condition, found {_describe(t)}", t.span)
    if t.text == "s" and ts.at("=", 1):
        ts.next()
        ts.next()
        q = ts.name("state")
        _ref(refs, "state", q)
        return StateIs(q.text)
    if t.text == "count" and ts.at("(", 1):
        ts.next()
        ts.next()
        sym = ts.name("symbol")
        ts.expect(")")
        op = ts.peek()
        if op.text not in COMPARATORS:
            raise _Syntax(f"expected comparator, found {_describe(op)}", op.span)
        ts.next()
        k = ts.integer()
        _ref(refs, "symbol", sym)
        return Count(sym.text, op.text, int(k.text))
    if ts.at("in", 1):
        ts.next()
        ts.next()
        h = ts.name("H")
        if h.text != "H":
            raise _Syntax("expected 'H' after 'in'", h.span)
        _ref(refs, "symbol", t)
        return Has(t.text)
    if t.text == "true":
        ts.next()
        return TRUE
    raise _Syntax(f"expected condition, found {_describe(t)}", t.span)


def _ref(refs, kind, tok):
    if refs is not None:
        refs.append((kind, tok.text, tok.span))


def parse_condition(text: str) -> Condition:
    ts = TokenStream(tokenize(text))
    try:
        c = parse_condition_tokens(ts)
        if ts.peek().kind != "EOF":
            raise _Syntax(f"unexpected {_describe(ts.peek())}", ts.peek().span)
    except _Syntax as e:
        raise ParseError([Diagnostic("error", str(e), e.span)]) from None
    return c


# -- parser -----------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.ts = TokenStream(tokenize(text))
        self.diags: list[Diagnostic] = []
        # (kind, name, span, module_name, module_states)
        self.refs: list = []

    def warn(self, msg, span):
        self.diags.append(Diagnostic("warning", msg, span))

    def error(self, msg, span):
        self.diags.append(Diagnostic("error", msg, span))

    def name_list(self, terminator=";"):
        out = []
        if self.ts.at(terminator):
            self.ts.next()
            return out
        out.append(self.ts.name())
        while self.ts.accept(","):
            out.append(self.ts.name())
        self.ts.expect(terminator)
        return out

    def parse(self):
        ts = self.ts
        ts.expect("mis")
        ts.expect("{")
        alph = {}
        for key in ("agtnames", "act", "in"):
            ts.expect(key)
            ts.expect(":")
            alph[key] = self.name_list()
        ts.expect("}")
        agents, agent_spans = [], {}
        while ts.at("agent"):
            start = ts.next()
            aid = ts.name("agent name")
            agent_spans[aid.text] = aid.span
            ts.expect("{")
            mods = []
            while ts.at("module"):
                mods.append(self.module())
            if not mods:
                raise _Syntax("agent needs at least one module", ts.peek().span)
            ts.expect("}")
            agents.append(Agent(aid.text, tuple(mods)))
            self.refs.append(("agent", aid.text, aid.span, None, None))
        if ts.peek().kind != "EOF":
            t = ts.peek()
            raise _Syntax(f"expected 'agent', found {_describe(t)}", t.span)
        mis = MIS(frozenset(t.text for t in alph["agtnames"]),
                  frozenset(t.text for t in alph["act"]),
                  frozenset(t.text for t in alph["in"]), tuple(agents))
        self.check_refs(mis)
        return mis, agent_spans

    def module(self) -> Module:
        ts = self.ts
        ts.expect("module")
        mname = ts.name("module name")
        ts.expect("{")
        local_refs = []

        ts.expect("states")
        ts.expect(":")
        states = self.name_list()
        ts.expect("init")
        ts.expect(":")
        init = self.name_list()
        local_refs += [("state", t.text, t.span) for t in init]

        avail = {}
        ts.expect("avail")
        ts.expect("{")
        while not ts.at("}"):
            q = ts.name("state")
            ts.expect(":")
            acts = self.name_list()
            local_refs.append(("state", q.text, q.span))
            local_refs += [("action", a.text, a.span) for a in acts]
            avail.setdefault(q.text, set()).update(a.text for a in acts)
        ts.expect("}")

        out = {}
        ts.expect("out")
        ts.expect("{")
        while not ts.at("}"):
            ts.expect("(")
            q = ts.name("state")
            ts.expect(",")
            a = ts.name("action")
            ts.expect(")")
            ts.expect("->")
            local_refs += [("state", q.text, q.span), ("action", a.text, a.span)]
            alts = [self.token_set(local_refs)]
            while ts.accept("|"):
                alts.append(self.token_set(local_refs))
            ts.expect(";")
            out.setdefault((q.text, a.text), set()).update(alts)
        ts.expect("}")

        entries = []
        ts.expect("in_list")
        ts.expect("{")
        seen_true = None
        while not ts.at("}"):
            start = ts.peek().span
            refs = []
            guard = parse_condition_tokens(ts, refs)
            ts.expect("->")
            vals = self.value_set(refs)
            ts.expect(";")
            local_refs += refs
            if seen_true is not None:
                self.warn("unreachable decision entry (follows an entry with guard true); dropped", start)
                continue
            if isinstance(guard, TrueCond) and seen_true is None:
                seen_true = start
            if not vals:
                self.error("decision entry value must be nonempty", start)
                continue
            entries.append(DecisionEntry(guard, frozenset(vals)))
        close = ts.expect("}")
        if not entries or not isinstance(entries[-1].guard, TrueCond):
            self.error(f"decision list of module {mname.text!r} is not total: "
                       "missing final 'true ->' entry", close.span)

        trans = {}
        ts.expect("trans")
        ts.expect("{")
        while not ts.at("}"):
            ts.expect("(")
            q = ts.name("state")
            ts.expect(",")
            a = ts.name("action")
            ts.expect(",")
            g = ts.name("symbol")
            ts.expect(")")
            ts.expect("->")
            targets = [ts.name("state")]
            while ts.accept(","):
                targets.append(ts.name("state"))
            ts.expect(";")
            local_refs += [("state", q.text, q.span), ("action", a.text, a.span),
                           ("symbol", g.text, g.span)]
            local_refs += [("state", t.text, t.span) for t in targets]
            trans.setdefault((q.text, a.text, g.text), set()).update(t.text for t in targets)
        ts.expect("}")

        ts.expect("props")
        ts.expect(":")
        props = self.name_list()
        valuation = {}
        ts.expect("pi")
        ts.expect("{")
        while not ts.at("}"):
            p = ts.name("proposition")
            ts.expect(":")
            qs = self.name_list()
            local_refs += [("state", t.text, t.span) for t in qs]
            local_refs.append(("prop", p.text, p.span))
            valuation.setdefault(p.text, set()).update(t.text for t in qs)
        ts.expect("}")
        ts.expect("}")

        state_names = tuple(t.text for t in states)
        prop_names = frozenset(t.text for t in props)
        for kind, name, span in local_refs:
            self.refs.append((kind, name, span, mname.text, (state_names, prop_names)))
        return Module(
            name=mname.text, states=state_names, init=frozenset(t.text for t in init),
            avail=avail, out=out, in_list=DecisionList(tuple(entries)), trans=trans,
            props=prop_names, valuation=valuation,
        )

    def token_set(self, refs) -> frozenset:
        ts = self.ts
        ts.expect("{")
        toks = []
        if not ts.at("}"):
            toks.append(self.token(refs))
            while ts.accept(","):
                toks.append(self.token(refs))
        ts.expect("}")
        return frozenset(toks)

    def token(self, refs) -> Token:
        ts = self.ts
        sym = ts.name("symbol")
        ts.expect("->")
        refs.append(("symbol", sym.text, sym.span))
        if ts.accept("*"):
            return Token(sym.text, BROADCAST)
        r = ts.name("recipient")
        refs.append(("agent", r.text, r.span))
        return Token(sym.text, r.text)

    def value_set(self, refs) -> list:
        ts = self.ts
        ts.expect("{")
        vals = []
        if not ts.at("}"):
            vals.append(ts.name("symbol"))
            while ts.accept(","):
                vals.append(ts.name("symbol"))
        ts.expect("}")
        refs += [("symbol", v.text, v.span) for v in vals]
        return [v.text for v in vals]

    def check_refs(self, mis: MIS):
        pools = {"agent": mis.agent_names, "action": mis.actions, "symbol": mis.symbols}
        label = {"agent": "agent name", "action": "action", "symbol": "interaction symbol"}
        for kind, name, span, mod, local in self.refs:
            if kind in pools:
                if name not in pools[kind]:
                    self.error(f"undeclared {label[kind]} {name!r}", span)
            elif kind == "state":
                if name not in local[0]:
                    self.error(f"undeclared state {name!r} in module {mod!r}", span)
            elif kind == "prop":
                if name not in local[1]:
                    self.error(f"undeclared proposition {name!r} in module {mod!r}", span)


def parse_with_diagnostics(text: str):
    """Parse ``text``; returns ``(mis or None, diagnostics)``."""
    p = _Parser(text)
    try:
        mis, agent_spans = p.parse()
    except _Syntax as e:
        return None, p.diags + [Diagnostic("error", str(e), e.span)]
    if any(d.severity == "error" for d in p.diags):
        return None, p.diags
    for v in validate(mis):
        aid = v.location.split("/")[0]
        span = agent_spans.get(aid, SourceSpan(1, 1, 0))
        p.diags.append(Diagnostic(v.severity, f"{v.location}.{v.field}: {v.rule}: {v.message}", span))
    if any(d.severity == "error" for d in p.diags):
        return None, p.diags
    return mis, p.diags


def parse(text: str) -> MIS:
    """Parse a ``.mis`` document, raising :class:`ParseError` on any error."""
    mis, diags = parse_with_diagnostics(text)
    if mis is None:
        raise ParseError([d for d in diags if d.severity == "error"])
    return mis


# -- printer ----------------------------------------------------------------------

def _names(xs) -> str:
    return ", ".join(xs)


def format_token_set(alt) -> str:
    return "{" + ", ".join(str(t) for t in sorted(alt)) + "}"


def _alt_key(alt):
    return sorted(alt)


def print_mis(m: MIS) -> str:
    """Canonical text: sorted alphabets, declaration order for agents/modules/states."""
    lines = [
        "mis {",
        f"  agtnames: {_names(sorted(m.agent_names))};",
        f"  act: {_names(sorted(m.actions))};",
        f"  in: {_names(sorted(m.symbols))};",
        "}",
    ]
    for a in m.agents:
        lines.append(f"agent {a.id} {{")
        for mod in a.modules:
            lines += ["  " + ln for ln in _print_module(mod)]
        lines.append("}")
    return "\n".join(lines) + "\n"


def _print_module(mod: Module) -> list[str]:
    order = {q: i for i, q in enumerate(mod.states)}
    skey = lambda q: (order.get(q, len(order)), q)
    out = [f"module {mod.name} {{",
           f"  states: {_names(mod.states)};",
           f"  init: {_names(sorted(mod.init, key=skey))};",
           "  avail {"]
    for q in sorted(mod.avail, key=skey):
        out.append(f"    {q}: {_names(sorted(mod.avail[q]))};")
    out.append("  }")
    out.append("  out {")
    for (q, a) in sorted(mod.out, key=lambda k: (skey(k[0]), k[1])):
        alts = " | ".join(format_token_set(t) for t in sorted(mod.out[(q, a)], key=_alt_key))
        out.append(f"    ({q}, {a}) -> {alts};")
    out.append("  }")
    out.append("  in_list {")
    for e in mod.in_list:
        out.append(f"    {e};")
    out.append("  }")
    out.append("  trans {")
    for (q, a, g) in sorted(mod.trans, key=lambda k: (skey(k[0]), k[1], k[2])):
        targets = _names(sorted(mod.trans[(q, a, g)], key=skey))
        out.append(f"    ({q}, {a}, {g}) -> {targets};")
    out.append("  }")
    out.append(f"  props: {_names(sorted(mod.props))};")
    out.append("  pi {")
    for p in sorted(mod.valuation):
        out.append(f"    {p}: {_names(sorted(mod.valuation[p], key=skey))};")
    out.append("  }")
    out.append("}")
    return out


# -- structured data ----------------------------------------------------------------

def mis_to_data(m: MIS) -> dict:
    return {
        "agtnames": sorted(m.agent_names),
        "act": sorted(m.actions),
        "in": sorted(m.symbols),
        "agents": [
            {"id": a.id, "modules": [_module_to_data(mod) for mod in a.modules]}
            for a in m.agents
        ],
    }


def _module_to_data(mod: Module) -> dict:
    return {
        "name": mod.name,
        "states": list(mod.states),
        "init": [q for q in mod.states if q in mod.init],
        "d": {q: sorted(mod.avail[q]) for q in mod.states if q in mod.avail},
        "out": [
            {"state": q, "action": a,
             "alternatives": [[list(t) for t in sorted(alt)]
                              for alt in sorted(mod.out[(q, a)], key=_alt_key)]}
            for (q, a) in mod.situated_actions() if (q, a) in mod.out
        ],
        "in_list": [{"guard": str(e.guard), "value": sorted(e.value)} for e in mod.in_list],
        "o": [
            {"state": q, "action": a, "symbol": g, "targets": sorted(mod.trans[(q, a, g)])}
            for (q, a, g) in sorted(mod.trans)
        ],
        "props": sorted(mod.props),
        "pi": {p: sorted(mod.valuation[p]) for p in sorted(mod.valuation)},
    }


def mis_from_data(data: dict) -> MIS:
    agents = []
    for a in data["agents"]:
        mods = []
        for md in a["modules"]:
            mods.append(Module(
                name=md["name"],
                states=tuple(md["states"]),
                init=frozenset(md["init"]),
                avail={q: frozenset(v) for q, v in md["d"].items()},
                out={(o["state"], o["action"]): frozenset(
                    frozenset(Token(*t) for t in alt) for alt in o["alternatives"])
                    for o in md["out"]},
                in_list=DecisionList(tuple(
                    DecisionEntry(parse_condition(e["guard"]), frozenset(e["value"]))
                    for e in md["in_list"])),
                trans={(o["state"], o["action"], o["symbol"]): frozenset(o["targets"])
                       for o in md["o"]},
                props=frozenset(md["props"]),
                valuation={p: frozenset(v) for p, v in md["pi"].items()},
            ))
        agents.append(Agent(a["id"], tuple(mods)))
    return MIS(frozenset(data["agtnames"]), frozenset(data["act"]),
               frozenset(data["in"]), tuple(agents))


def ncegs_to_data(n) -> dict:
    index = {q: i for i, q in enumerate(n.states)}
    return {
        "modules": list(n.module_names),
        "agents": {a: [n.module_names[i] for i in n.agent_indices(a)] for a in n.agents},
        "states": [list(q) for q in n.states],
        "init": [index[q] for q in n.init if q in index],
        "transitions": [
            {"source": index[q], "action": list(a), "targets": sorted(index[r] for r in succ)}
            for (q, a), succ in sorted(n.trans.items())
        ],
        "valuation": {p: sorted(index[q] for q in qs) for p, qs in sorted(n.valuation.items())},
        "epistemic": {
            a: sorted(sorted(index[q] for q in cls) for cls in n.epistemic_classes(a).values())
            for a in n.agents
        },
    }


def to_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


# -- graph export -------------------------------------------------------------------

def _dot_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(n) -> str:
    """DOT digraph: one node per global state, one edge per joint action and successor."""
    index = {q: i for i, q in enumerate(n.states)}
    init = set(n.init)
    lines = ["digraph ncegs {", "  rankdir=LR;", "  node [shape=box];"]
    for q, i in index.items():
        props = [p for p in sorted(n.valuation) if q in n.valuation[p]]
        label = "(" + ", ".join(q) + ")"
        if props:
            label += "\\n" + ", ".join(props)
        attrs = [f"label={_dot_str(label)}"]
        if q in init:
            attrs.append("peripheries=2")
            attrs.append('initial="true"')
        lines.append(f"  s{i} [{', '.join(attrs)}];")
    for (q, a), succ in sorted(n.trans.items()):
        if q not in index:
            continue
        for r in sorted(succ):
            if r in index:
                lines.append(f"  s{index[q]} -> s{index[r]} [label={_dot_str('(' + ', '.join(a) + ')')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
