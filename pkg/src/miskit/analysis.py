"""Reachability, invariant checking and epistemic queries over an explicit model."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

from .dsl import Diagnostic, ParseError, TokenStream, _Syntax, _describe, tokenize
from .unfolding import NCEGS


# -- state predicates ------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Prop:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Local:
    module: str
    state: str

    def __str__(self) -> str:
        return f"local({self.module}, {self.state})"


@dataclass(frozen=True)
class PAnd:
    args: tuple

    def __str__(self) -> str:
        return " and ".join(_pwrap(a) for a in self.args)


@dataclass(frozen=True)
class POr:
    args: tuple

    def __str__(self) -> str:
        return " or ".join(_pwrap(a) for a in self.args)


@dataclass(frozen=True)
class PNot:
    arg: "Predicate"

    def __str__(self) -> str:
        return f"not {_pwrap(self.arg)}"


Predicate = Union[Const, Prop, Local, PAnd, POr, PNot]
TRUE_P, FALSE_P = Const(True), Const(False)


def _pwrap(p) -> str:
    return str(p) if isinstance(p, (Const, Prop, Local, PNot)) else f"({p})"


def conj(*ps) -> Predicate:
    ps = tuple(ps)
    return TRUE_P if not ps else ps[0] if len(ps) == 1 else PAnd(ps)


def disj(*ps) -> Predicate:
    ps = tuple(ps)
    return FALSE_P if not ps else ps[0] if len(ps) == 1 else POr(ps)


def parse_predicate(text: str) -> Predicate:
    """Parse ``local(m, s)``, proposition names, ``and or not true false`` and parentheses."""
    try:
        ts = TokenStream(tokenize(text))
        p = _p_or(ts)
        if ts.peek().kind != "EOF":
            raise _Syntax(f"unexpected {_describe(ts.peek())}", ts.peek().span)
    except _Syntax as e:
        raise ParseError([Diagnostic("error", str(e), e.span)]) from None
    return p


def _p_or(ts):
    args = [_p_and(ts)]
    while ts.accept("or"):
        args.append(_p_and(ts))
    return disj(*args)


def _p_and(ts):
    args = [_p_not(ts)]
    while ts.accept("and"):
        args.append(_p_not(ts))
    return conj(*args)


def _p_not(ts):
    if ts.accept("not"):
        return PNot(_p_not(ts))
    if ts.accept("("):
        p = _p_or(ts)
        ts.expect(")")
        return p
    t = ts.name("predicate")
    if t.text == "true":
        return TRUE_P
    if t.text == "false":
        return FALSE_P
    if t.text == "local" and ts.at("("):
        ts.next()
        mod = ts.name("module")
        ts.expect(",")
        st = ts.name("state")
        ts.expect(")")
        return Local(mod.text, st.text)
    return Prop(t.text)


def as_predicate(p) -> Predicate:
    return parse_predicate(p) if isinstance(p, str) else p


def check_predicate(n: NCEGS, p: Predicate) -> None:
    """Raise ``ValueError`` if ``p`` mentions an unknown proposition or module."""
    if isinstance(p, Prop):
        if p.name not in n.valuation:
            raise ValueError(f"unknown proposition {p.name!r}")
    elif isinstance(p, Local):
        if p.module not in n.module_names:
            raise ValueError(f"unknown module {p.module!r}")
    elif isinstance(p, (PAnd, POr)):
        for a in p.args:
            check_predicate(n, a)
    elif isinstance(p, PNot):
        check_predicate(n, p.arg)


def evaluate(n: NCEGS, p: Predicate, q: tuple) -> bool:
    if isinstance(p, Const):
        return p.value
    if isinstance(p, Prop):
        return n.holds(p.name, q)
    if isinstance(p, Local):
        return q[n.module_position(p.module)] == p.state
    if isinstance(p, PAnd):
        return all(evaluate(n, a, q) for a in p.args)
    if isinstance(p, POr):
        return any(evaluate(n, a, q) for a in p.args)
    if isinstance(p, PNot):
        return not evaluate(n, p.arg, q)
    raise TypeError(f"not a predicate: {p!r}")


# -- reachability ------------------------------------------------------------------

def _bfs(n: NCEGS):
    """Breadth-first closure from init; returns (order, parent map)."""
    parent = {}
    order = []
    queue = deque()
    for q in n.init:
        if q not in parent:
            parent[q] = None
            order.append(q)
            queue.append(q)
    while queue:
        q = queue.popleft()
        for a, r in n.edges(q):
            if r not in parent:
                parent[r] = (q, a)
                order.append(r)
                queue.append(r)
    return order, parent


def reachable_states(n: NCEGS) -> list:
    return _bfs(n)[0]


def reachable(n: NCEGS) -> tuple[int, int]:
    """(state count, transition triple count) over the closure of the initial states."""
    order = reachable_states(n)
    triples = sum(1 for q in order for _ in n.edges(q))
    return len(order), triples


@dataclass(frozen=True)
class Trace:
    """Alternating states and joint actions, starting at an initial state."""

    states: tuple
    actions: tuple

    def __len__(self) -> int:
        return len(self.actions)

    @property
    def last(self) -> tuple:
        return self.states[-1]

    def is_valid(self, n: NCEGS) -> bool:
        if not self.states or self.states[0] not in n.init:
            return False
        for i, a in enumerate(self.actions):
            if self.states[i + 1] not in n.trans.get((self.states[i], a), ()):
                return False
        return True

    def format(self) -> str:
        lines = []
        for i, q in enumerate(self.states):
            lines.append(f"{i:>3}  ({', '.join(q)})")
            if i < len(self.actions):
                lines.append(f"     --({', '.join(self.actions[i])})-->")
        return "\n".join(lines)


@dataclass(frozen=True)
class Holds:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Counterexample:
    trace: Trace

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Witness:
    state: tuple

    def __bool__(self) -> bool:
        return False


def _trace_to(parent: dict, q: tuple) -> Trace:
    states, actions = [q], []
    while parent[q] is not None:
        q, a = parent[q]
        states.append(q)
        actions.append(a)
    return Trace(tuple(reversed(states)), tuple(reversed(actions)))


def check_invariant(n: NCEGS, p) -> Holds | Counterexample:
    """Holds iff ``p`` is true in every reachable state; else a shortest trace to a violation."""
    p = as_predicate(p)
    check_predicate(n, p)
    parent = {}
    queue = deque()
    for q in n.init:
        if q in parent:
            continue
        parent[q] = None
        if not evaluate(n, p, q):
            return Counterexample(_trace_to(parent, q))
        queue.append(q)
    while queue:
        q = queue.popleft()
        for a, r in n.edges(q):
            if r in parent:
                continue
            parent[r] = (q, a)
            if not evaluate(n, p, r):
                return Counterexample(_trace_to(parent, r))
            queue.append(r)
    return Holds()


def epistemic_check(n: NCEGS, agent: str, scope, secret) -> Holds | Witness:
    """Holds iff in every reachable scope-and-secret state the agent cannot rule out
    an indistinguishable reachable scope state where the secret is false."""
    scope, secret = as_predicate(scope), as_predicate(secret)
    check_predicate(n, scope)
    check_predicate(n, secret)
    idx = n.agent_indices(agent)
    order = reachable_states(n)
    alternatives = set()
    candidates = []
    for q in order:
        if not evaluate(n, scope, q):
            continue
        view = tuple(q[i] for i in idx)
        if evaluate(n, secret, q):
            candidates.append((q, view))
        else:
            alternatives.add(view)
    for q, view in candidates:
        if view not in alternatives:
            return Witness(q)
    return Holds()
