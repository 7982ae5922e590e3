"""Expansion and reduction of a MIS, costed edit scripts and openness accounting.

An edit script is a list of small structural steps, each with a cost taken
from a :class:`CostSchema`. The cost of a script that turns ``M (+) a`` into a
member of a model class bounds the degree of openness from above; nothing
here searches for a cheaper script.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Callable, ClassVar, Iterable

from .interference import (
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
    rename_in_condition,
    iter_atoms,
)
from .model import MIS, Agent, Module, agent_symbols, module_symbols


# -- model operators ----------------------------------------------------------------

def expand(m: MIS, a: Agent) -> MIS:
    """Add ``a``, replacing any agent with the same id, and widen the alphabets."""
    names, acts, syms = agent_symbols(a)
    agents, placed = [], False
    for b in m.agents:
        if b.id == a.id:
            if not placed:
                agents.append(a)
                placed = True
        else:
            agents.append(b)
    if not placed:
        agents.append(a)
    return MIS(m.agent_names | names, m.actions | acts, m.symbols | syms, tuple(agents))


def reduce(m: MIS, a: Agent) -> MIS:
    """Drop ``a`` if it is an agent of ``m``; alphabets are kept."""
    return m.with_agents(tuple(b for b in m.agents if b != a))


# -- costs --------------------------------------------------------------------------

@dataclass(frozen=True)
class CostSchema:
    """Symbol counts charged per edit.

    The defaults reproduce the reference totals for growing the cryptographer
    families (54 and 10n + 54). ``state`` is the one weight fitted to those
    totals; :data:`COMPONENT_SCHEMA` charges a new state like an availability
    entry instead and gives 52 for the same DC1 script.
    """

    state: int = 4
    init: int = 1
    avail: int = 2
    out_alternative: int = 3
    token: int = 1
    state_atom: int = 3
    has_atom: int = 3
    count_atom: int = 4
    true_atom: int = 1
    connective: int = 1
    value_symbol: int = 1
    guard_step: int = 1
    trans_target: int = 3
    prop: int = 1
    valuation_state: int = 2
    rename: int = 2

    def atom(self, c: Condition) -> int:
        if isinstance(c, StateIs):
            return self.state_atom
        if isinstance(c, Has):
            return self.has_atom
        if isinstance(c, Count):
            return self.count_atom
        if isinstance(c, TrueCond):
            return self.true_atom
        raise TypeError(f"not an atom: {c!r}")

    def condition(self, c: Condition) -> int:
        if isinstance(c, (And, Or)):
            return sum(self.condition(a) for a in c.args) + self.connective * (len(c.args) - 1)
        if isinstance(c, Not):
            return self.condition(c.arg) + self.connective
        return self.atom(c)


DEFAULT_SCHEMA = CostSchema()
COMPONENT_SCHEMA = CostSchema(state=2)

CATEGORIES = ("d", "out", "in", "o", "other")


class StepError(Exception):
    pass


class InapplicableStep(Exception):
    def __init__(self, index: int, reason: str):
        self.index, self.reason = index, reason
        super().__init__(f"step {index}: {reason}")


# -- steps --------------------------------------------------------------------------

def _token_set(tokens) -> frozenset:
    return frozenset(Token(*t) for t in tokens)


def _ensure_condition(c) -> Condition:
    if isinstance(c, str):
        from .dsl import parse_condition
        return parse_condition(c)
    return c


@dataclass(frozen=True)
class EditStep:
    """Base class; subclasses define ``_apply``, ``cost`` and ``inverse``."""

    module: str
    category: ClassVar[str] = "other"

    def apply(self, m: MIS) -> MIS:
        try:
            mod = m.module(self.module)
        except KeyError:
            raise StepError(f"no module named {self.module!r}") from None
        new = self._apply(mod)
        out = m.replace_module(self.module, new)
        names, acts, syms = module_symbols(new)
        return MIS(out.agent_names | names, out.actions | acts, out.symbols | syms, out.agents)

    def _apply(self, mod: Module) -> Module:
        raise NotImplementedError

    def cost(self, schema: CostSchema = DEFAULT_SCHEMA) -> int:
        raise NotImplementedError

    def inverse(self) -> "EditStep":
        raise NotImplementedError

    # serialization: every field is a str, int, token, token set, condition or value set
    def args(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Token):
                v = list(v)
            elif isinstance(v, frozenset) and f.name in ("tokens", "alternative"):
                v = sorted(list(t) for t in v)
            elif isinstance(v, frozenset):
                v = sorted(v)
            elif f.name in ("guard", "atom"):
                v = str(v)
            out[f.name] = v
        return out

    @classmethod
    def from_args(cls, args: dict) -> "EditStep":
        kw = {}
        for f in fields(cls):
            v = args[f.name]
            if f.name == "token":
                v = Token(*v)
            elif f.name in ("tokens", "alternative"):
                v = _token_set(v)
            elif f.name == "value":
                v = frozenset(v)
            elif f.name in ("guard", "atom"):
                v = _ensure_condition(v)
            kw[f.name] = v
        return cls(**kw)


# states and initial states

@dataclass(frozen=True)
class AddState(EditStep):
    state: str
    category: ClassVar[str] = "d"

    def _apply(self, mod):
        if self.state in mod.states:
            raise StepError(f"state {self.state!r} already in {mod.name}")
        return mod.with_(states=mod.states + (self.state,))

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.state

    def inverse(self):
        return RemoveState(self.module, self.state)


@dataclass(frozen=True)
class RemoveState(EditStep):
    state: str
    category: ClassVar[str] = "d"

    def _apply(self, mod):
        if self.state not in mod.states:
            raise StepError(f"state {self.state!r} not in {mod.name}")
        if _state_occurrences(mod, self.state) > 1:
            raise StepError(f"state {self.state!r} is still referenced in {mod.name}")
        return mod.with_(states=tuple(q for q in mod.states if q != self.state))

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.state

    def inverse(self):
        return AddState(self.module, self.state)


@dataclass(frozen=True)
class AddInit(EditStep):
    state: str
    category: ClassVar[str] = "d"

    def _apply(self, mod):
        if self.state not in mod.states or self.state in mod.init:
            raise StepError(f"cannot make {self.state!r} initial in {mod.name}")
        return mod.with_(init=mod.init | {self.state})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.init

    def inverse(self):
        return RemoveInit(self.module, self.state)


@dataclass(frozen=True)
class RemoveInit(EditStep):
    state: str
    category: ClassVar[str] = "d"

    def _apply(self, mod):
        if self.state not in mod.init:
            raise StepError(f"{self.state!r} is not initial in {mod.name}")
        return mod.with_(init=mod.init - {self.state})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.init

    def inverse(self):
        return AddInit(self.module, self.state)


# availability

@dataclass(frozen=True)
class AddAvail(EditStep):
    state: str
    action: str
    category: ClassVar[str] = "d"

    def _apply(self, mod):
        if self.state not in mod.states:
            raise StepError(f"unknown state {self.state!r} in {mod.name}")
        if self.action in mod.d(self.state):
            raise StepError(f"{self.action!r} already available at {self.state!r}")
        avail = dict(mod.avail)
        avail[self.state] = mod.d(self.state) | {self.action}
        return mod.with_(avail=avail)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.avail

    def inverse(self):
        return RemoveAvail(self.module, self.state, self.action)


@dataclass(frozen=True)
class RemoveAvail(EditStep):
    state: str
    action: str
    category: ClassVar[str] = "d"

    def _apply(self, mod):
        if self.action not in mod.d(self.state):
            raise StepError(f"{self.action!r} not available at {self.state!r}")
        if mod.alternatives(self.state, self.action) or any(
                k[:2] == (self.state, self.action) for k in mod.trans):
            raise StepError(f"({self.state}, {self.action}) still has out or o entries")
        avail = dict(mod.avail)
        avail[self.state] = mod.d(self.state) - {self.action}
        return mod.with_(avail=avail)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.avail

    def inverse(self):
        return AddAvail(self.module, self.state, self.action)


# out alternatives and tokens

def _set_alts(mod, key, alts):
    out = dict(mod.out)
    out[key] = frozenset(alts)
    return mod.with_(out=out)


@dataclass(frozen=True)
class AddOutAlternative(EditStep):
    state: str
    action: str
    tokens: frozenset
    category: ClassVar[str] = "out"

    def __post_init__(self):
        object.__setattr__(self, "tokens", _token_set(self.tokens))

    def _apply(self, mod):
        if self.action not in mod.d(self.state):
            raise StepError(f"({self.state}, {self.action}) is not a situated action")
        alts = mod.alternatives(self.state, self.action)
        if self.tokens in alts:
            raise StepError("alternative already present")
        return _set_alts(mod, (self.state, self.action), alts | {self.tokens})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.out_alternative + schema.token * len(self.tokens)

    def inverse(self):
        return RemoveOutAlternative(self.module, self.state, self.action, self.tokens)


@dataclass(frozen=True)
class RemoveOutAlternative(EditStep):
    state: str
    action: str
    tokens: frozenset
    category: ClassVar[str] = "out"

    def __post_init__(self):
        object.__setattr__(self, "tokens", _token_set(self.tokens))

    def _apply(self, mod):
        alts = mod.alternatives(self.state, self.action)
        if self.tokens not in alts:
            raise StepError("alternative not present")
        return _set_alts(mod, (self.state, self.action), alts - {self.tokens})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.out_alternative + schema.token * len(self.tokens)

    def inverse(self):
        return AddOutAlternative(self.module, self.state, self.action, self.tokens)


@dataclass(frozen=True)
class AddOutToken(EditStep):
    """Add ``token`` to the alternative currently equal to ``alternative``."""

    state: str
    action: str
    alternative: frozenset
    token: Token
    category: ClassVar[str] = "out"

    def __post_init__(self):
        object.__setattr__(self, "alternative", _token_set(self.alternative))
        object.__setattr__(self, "token", Token(*self.token))

    def _apply(self, mod):
        alts = mod.alternatives(self.state, self.action)
        grown = self.alternative | {self.token}
        if self.alternative not in alts or self.token in self.alternative or grown in alts:
            raise StepError("cannot add token to that alternative")
        return _set_alts(mod, (self.state, self.action), (alts - {self.alternative}) | {grown})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.token

    def inverse(self):
        return RemoveOutToken(self.module, self.state, self.action,
                              self.alternative | {self.token}, self.token)


@dataclass(frozen=True)
class RemoveOutToken(EditStep):
    """Remove ``token`` from the alternative currently equal to ``alternative``."""

    state: str
    action: str
    alternative: frozenset
    token: Token
    category: ClassVar[str] = "out"

    def __post_init__(self):
        object.__setattr__(self, "alternative", _token_set(self.alternative))
        object.__setattr__(self, "token", Token(*self.token))

    def _apply(self, mod):
        alts = mod.alternatives(self.state, self.action)
        shrunk = self.alternative - {self.token}
        if self.alternative not in alts or self.token not in self.alternative or shrunk in alts:
            raise StepError("cannot remove token from that alternative")
        return _set_alts(mod, (self.state, self.action), (alts - {self.alternative}) | {shrunk})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.token

    def inverse(self):
        return AddOutToken(self.module, self.state, self.action,
                           self.alternative - {self.token}, self.token)


# decision lists

def _set_entries(mod, entries):
    return mod.with_(in_list=DecisionList(tuple(entries)))


@dataclass(frozen=True)
class InsertDecisionEntry(EditStep):
    position: int
    guard: Condition
    value: frozenset
    category: ClassVar[str] = "in"

    def __post_init__(self):
        object.__setattr__(self, "guard", _ensure_condition(self.guard))
        object.__setattr__(self, "value", frozenset(self.value))

    def _apply(self, mod):
        entries = list(mod.in_list.entries)
        if not 0 <= self.position <= len(entries):
            raise StepError(f"position {self.position} out of range")
        if not self.value:
            raise StepError("empty value")
        entries.insert(self.position, DecisionEntry(self.guard, self.value))
        return _set_entries(mod, entries)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.condition(self.guard) + schema.value_symbol * len(self.value)

    def inverse(self):
        return RemoveDecisionEntry(self.module, self.position, self.guard, self.value)


@dataclass(frozen=True)
class RemoveDecisionEntry(EditStep):
    position: int
    guard: Condition
    value: frozenset
    category: ClassVar[str] = "in"

    def __post_init__(self):
        object.__setattr__(self, "guard", _ensure_condition(self.guard))
        object.__setattr__(self, "value", frozenset(self.value))

    def _apply(self, mod):
        entries = list(mod.in_list.entries)
        if not 0 <= self.position < len(entries) or \
                entries[self.position] != DecisionEntry(self.guard, self.value):
            raise StepError(f"no matching entry at position {self.position}")
        del entries[self.position]
        return _set_entries(mod, entries)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.condition(self.guard) + schema.value_symbol * len(self.value)

    def inverse(self):
        return InsertDecisionEntry(self.module, self.position, self.guard, self.value)


_CONNECTIVES = {"and": And, "or": Or}


@dataclass(frozen=True)
class AddGuardAtom(EditStep):
    """Extend the guard at ``position`` with one more conjunct or disjunct."""

    position: int
    connective: str
    atom: Condition
    category: ClassVar[str] = "in"

    def __post_init__(self):
        object.__setattr__(self, "atom", _ensure_condition(self.atom))
        if self.connective not in _CONNECTIVES:
            raise ValueError(f"connective must be 'and' or 'or', got {self.connective!r}")

    def _apply(self, mod):
        entries = list(mod.in_list.entries)
        if not 0 <= self.position < len(entries):
            raise StepError(f"position {self.position} out of range")
        e = entries[self.position]
        kind = _CONNECTIVES[self.connective]
        g = e.guard
        new = kind(g.args + (self.atom,)) if isinstance(g, kind) else kind((g, self.atom))
        entries[self.position] = DecisionEntry(new, e.value)
        return _set_entries(mod, entries)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.condition(self.atom) + schema.guard_step

    def inverse(self):
        return RemoveGuardAtom(self.module, self.position, self.connective, self.atom)


@dataclass(frozen=True)
class RemoveGuardAtom(EditStep):
    """Drop the last conjunct or disjunct of the guard at ``position``."""

    position: int
    connective: str
    atom: Condition
    category: ClassVar[str] = "in"

    def __post_init__(self):
        object.__setattr__(self, "atom", _ensure_condition(self.atom))
        if self.connective not in _CONNECTIVES:
            raise ValueError(f"connective must be 'and' or 'or', got {self.connective!r}")

    def _apply(self, mod):
        entries = list(mod.in_list.entries)
        if not 0 <= self.position < len(entries):
            raise StepError(f"position {self.position} out of range")
        e = entries[self.position]
        g = e.guard
        kind = _CONNECTIVES[self.connective]
        if not isinstance(g, kind) or g.args[-1] != self.atom:
            raise StepError(f"guard does not end with {self.connective} {self.atom}")
        rest = g.args[:-1]
        new = rest[0] if len(rest) == 1 else kind(rest)
        entries[self.position] = DecisionEntry(new, e.value)
        return _set_entries(mod, entries)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.condition(self.atom) + schema.guard_step

    def inverse(self):
        return AddGuardAtom(self.module, self.position, self.connective, self.atom)


# local transitions

@dataclass(frozen=True)
class AddTransTarget(EditStep):
    state: str
    action: str
    symbol: str
    target: str
    category: ClassVar[str] = "o"

    def _apply(self, mod):
        key = (self.state, self.action, self.symbol)
        if self.action not in mod.d(self.state) or self.target not in mod.states:
            raise StepError(f"({self.state}, {self.action}) -> {self.target} is not well-formed")
        if self.target in mod.o(*key):
            raise StepError("transition target already present")
        trans = dict(mod.trans)
        trans[key] = mod.o(*key) | {self.target}
        return mod.with_(trans=trans)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.trans_target

    def inverse(self):
        return RemoveTransTarget(self.module, self.state, self.action, self.symbol, self.target)


@dataclass(frozen=True)
class RemoveTransTarget(EditStep):
    state: str
    action: str
    symbol: str
    target: str
    category: ClassVar[str] = "o"

    def _apply(self, mod):
        key = (self.state, self.action, self.symbol)
        if self.target not in mod.o(*key):
            raise StepError("transition target not present")
        trans = dict(mod.trans)
        trans[key] = mod.o(*key) - {self.target}
        return mod.with_(trans=trans)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.trans_target

    def inverse(self):
        return AddTransTarget(self.module, self.state, self.action, self.symbol, self.target)


# propositions

@dataclass(frozen=True)
class AddProp(EditStep):
    prop: str

    def _apply(self, mod):
        if self.prop in mod.props:
            raise StepError(f"proposition {self.prop!r} already present")
        return mod.with_(props=mod.props | {self.prop})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.prop

    def inverse(self):
        return RemoveProp(self.module, self.prop)

    def apply(self, m):
        for other in m.modules:
            if self.prop in other.props:
                raise StepError(f"proposition {self.prop!r} already used by {other.name}")
        return super().apply(m)


@dataclass(frozen=True)
class RemoveProp(EditStep):
    prop: str

    def _apply(self, mod):
        if self.prop not in mod.props or mod.valuation.get(self.prop):
            raise StepError(f"cannot remove proposition {self.prop!r}")
        return mod.with_(props=mod.props - {self.prop})

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.prop

    def inverse(self):
        return AddProp(self.module, self.prop)


@dataclass(frozen=True)
class AddValuationState(EditStep):
    prop: str
    state: str

    def _apply(self, mod):
        cur = mod.valuation.get(self.prop, frozenset())
        if self.prop not in mod.props or self.state not in mod.states or self.state in cur:
            raise StepError(f"cannot add {self.state!r} to the valuation of {self.prop!r}")
        val = dict(mod.valuation)
        val[self.prop] = cur | {self.state}
        return mod.with_(valuation=val)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.valuation_state

    def inverse(self):
        return RemoveValuationState(self.module, self.prop, self.state)


@dataclass(frozen=True)
class RemoveValuationState(EditStep):
    prop: str
    state: str

    def _apply(self, mod):
        cur = mod.valuation.get(self.prop, frozenset())
        if self.state not in cur:
            raise StepError(f"{self.state!r} not in the valuation of {self.prop!r}")
        val = dict(mod.valuation)
        val[self.prop] = cur - {self.state}
        return mod.with_(valuation=val)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.valuation_state

    def inverse(self):
        return AddValuationState(self.module, self.prop, self.state)


# renaming

RENAME_KINDS = ("symbol", "agent", "action", "state")


def _state_occurrences(mod: Module, q: str) -> int:
    return _occurrences(mod, "state", q)


def _occurrences(mod: Module, kind: str, x: str) -> int:
    n = 0
    if kind == "state":
        n += mod.states.count(x) + (x in mod.init) + (x in mod.avail)
        n += sum(k[0] == x for k in mod.out)
        n += sum((k[0] == x) + (x in v) for k, v in mod.trans.items())
        n += sum(x in v for v in mod.valuation.values())
        for e in mod.in_list:
            n += sum(isinstance(a, StateIs) and a.state == x for a in iter_atoms(e.guard))
    elif kind == "action":
        n += sum(x in v for v in mod.avail.values())
        n += sum(k[1] == x for k in mod.out)
        n += sum(k[1] == x for k in mod.trans)
    elif kind == "agent":
        n += sum(t.recipient == x for alts in mod.out.values() for alt in alts for t in alt)
    elif kind == "symbol":
        n += sum(t.symbol == x for alts in mod.out.values() for alt in alts for t in alt)
        for e in mod.in_list:
            n += (x in e.value)
            n += sum(isinstance(a, (Has, Count)) and a.symbol == x for a in iter_atoms(e.guard))
        n += sum(k[2] == x for k in mod.trans)
    return n


def _rename_module(mod: Module, kind: str, old: str, new: str) -> Module:
    r = lambda v: new if v == old else v
    if kind == "state":
        return mod.with_(
            states=tuple(r(q) for q in mod.states),
            init={r(q) for q in mod.init},
            avail={r(q): v for q, v in mod.avail.items()},
            out={(r(q), a): v for (q, a), v in mod.out.items()},
            in_list=DecisionList(tuple(
                DecisionEntry(rename_in_condition(e.guard, "state", old, new), e.value)
                for e in mod.in_list)),
            trans={(r(q), a, g): {r(t) for t in v} for (q, a, g), v in mod.trans.items()},
            valuation={p: {r(q) for q in v} for p, v in mod.valuation.items()},
        )
    if kind == "action":
        return mod.with_(
            avail={q: {r(a) for a in v} for q, v in mod.avail.items()},
            out={(q, r(a)): v for (q, a), v in mod.out.items()},
            trans={(q, r(a), g): v for (q, a, g), v in mod.trans.items()},
        )
    if kind == "agent":
        return mod.with_(out={
            k: {frozenset(Token(t.symbol, r(t.recipient)) for t in alt) for alt in alts}
            for k, alts in mod.out.items()})
    return mod.with_(
        out={k: {frozenset(Token(r(t.symbol), t.recipient) for t in alt) for alt in alts}
             for k, alts in mod.out.items()},
        in_list=DecisionList(tuple(
            DecisionEntry(rename_in_condition(e.guard, "symbol", old, new), {r(v) for v in e.value})
            for e in mod.in_list)),
        trans={(q, a, r(g)): v for (q, a, g), v in mod.trans.items()},
    )


@dataclass(frozen=True)
class RenameSymbol(EditStep):
    """Rename every occurrence of ``old`` (of the given kind) inside one module.

    ``occurrences`` records how many places change; it is checked on apply and
    enters the cost, so a rename is charged by the amount of text it touches.
    """

    kind: str
    old: str
    new: str
    occurrences: int

    def __post_init__(self):
        if self.kind not in RENAME_KINDS:
            raise ValueError(f"rename kind must be one of {RENAME_KINDS}")

    def _apply(self, mod):
        found = _occurrences(mod, self.kind, self.old)
        if found == 0:
            raise StepError(f"{self.kind} {self.old!r} does not occur in {mod.name}")
        if found != self.occurrences:
            raise StepError(f"{self.kind} {self.old!r} occurs {found} times, script says {self.occurrences}")
        if _occurrences(mod, self.kind, self.new):
            raise StepError(f"{self.kind} {self.new!r} already occurs in {mod.name}")
        return _rename_module(mod, self.kind, self.old, self.new)

    def cost(self, schema=DEFAULT_SCHEMA):
        return schema.rename + self.occurrences

    def inverse(self):
        return RenameSymbol(self.module, self.kind, self.new, self.old, self.occurrences)

    @classmethod
    def counted(cls, mod: Module, kind: str, old: str, new: str) -> "RenameSymbol":
        return cls(mod.name, kind, old, new, _occurrences(mod, kind, old))


STEP_TYPES = {cls.__name__: cls for cls in (
    AddState, RemoveState, AddInit, RemoveInit, AddAvail, RemoveAvail,
    AddOutAlternative, RemoveOutAlternative, AddOutToken, RemoveOutToken,
    InsertDecisionEntry, RemoveDecisionEntry, AddGuardAtom, RemoveGuardAtom,
    AddTransTarget, RemoveTransTarget, AddProp, RemoveProp,
    AddValuationState, RemoveValuationState, RenameSymbol,
)}


# -- scripts ------------------------------------------------------------------------

@dataclass(frozen=True)
class EditScript:
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: "EditScript") -> "EditScript":
        return EditScript(self.steps + other.steps)

    def cost(self, schema: CostSchema = DEFAULT_SCHEMA) -> int:
        return sum(s.cost(schema) for s in self.steps)

    def breakdown(self, schema: CostSchema = DEFAULT_SCHEMA) -> dict:
        out = dict.fromkeys(CATEGORIES, 0)
        for s in self.steps:
            out[s.category] += s.cost(schema)
        return out

    def reverse(self) -> "EditScript":
        return EditScript(tuple(s.inverse() for s in reversed(self.steps)))

    def to_text(self, schema: CostSchema = DEFAULT_SCHEMA) -> str:
        lines = []
        for s in self.steps:
            args = json.dumps(s.args(), sort_keys=True, separators=(", ", ": "))
            lines.append(f"{type(s).__name__} {args} {s.cost(schema)}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str, schema: CostSchema = DEFAULT_SCHEMA) -> "EditScript":
        steps = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, _, rest = line.partition(" ")
            if name not in STEP_TYPES:
                raise ValueError(f"line {lineno}: unknown step {name!r}")
            payload, _, cost = rest.rpartition(" ")
            try:
                step = STEP_TYPES[name].from_args(json.loads(payload))
                stated = int(cost)
            except (ValueError, KeyError, TypeError) as e:
                raise ValueError(f"line {lineno}: malformed step: {e}") from None
            if stated != step.cost(schema):
                raise ValueError(f"line {lineno}: stated cost {stated} != schema cost {step.cost(schema)}")
            steps.append(step)
        return cls(tuple(steps))


def apply_script(m: MIS, script: EditScript, schema: CostSchema = DEFAULT_SCHEMA) -> tuple[MIS, int]:
    """Apply the steps in order; returns the new model and the accumulated cost."""
    total = 0
    for i, step in enumerate(script.steps):
        try:
            m = step.apply(m)
        except StepError as e:
            raise InapplicableStep(i, str(e)) from None
        total += step.cost(schema)
    return m, total


# -- reports ------------------------------------------------------------------------

@dataclass
class OpennessReport:
    base: str
    agent: str
    direction: str
    cost: int
    card_ok: bool
    constraint_ok: bool | None
    breakdown: dict
    result: MIS | None = None

    def to_data(self) -> dict:
        return {
            "base": self.base, "agent": self.agent, "direction": self.direction,
            "cost": self.cost, "card_ok": self.card_ok,
            "constraint_ok": self.constraint_ok, "breakdown": dict(self.breakdown),
        }

    def table(self) -> str:
        rows = [("base", self.base), ("agent", self.agent), ("direction", self.direction),
                ("cost", str(self.cost)), ("card check", "ok" if self.card_ok else "FAILED")]
        if self.constraint_ok is not None:
            rows.append(("constraint", "holds" if self.constraint_ok else "VIOLATED"))
        rows += [(f"cost[{k}]", str(v)) for k, v in self.breakdown.items()]
        w = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(w)}  {v}" for k, v in rows)


def openness_report(m: MIS, a: Agent, script: EditScript, constraint=None,
                    direction: str = "expansion", schema: CostSchema = DEFAULT_SCHEMA,
                    base: str = "M", budget: int | None = None) -> OpennessReport:
    """Account ``script`` applied to ``m (+) a`` (or ``m (-) a``).

    ``constraint`` may be a state predicate (text or parsed), checked as an
    invariant of the resulting model, or a callable taking the unfolded model
    and returning a truthy result.
    """
    if direction not in ("expansion", "reduction"):
        raise ValueError("direction must be 'expansion' or 'reduction'")
    start = expand(m, a) if direction == "expansion" else reduce(m, a)
    result, cost = apply_script(start, script, schema)
    card_ok = result.card == start.card
    constraint_ok = None
    if constraint is not None:
        from .analysis import check_invariant
        from .unfolding import DEFAULT_BUDGET, unfold
        n = unfold(result, budget=budget or DEFAULT_BUDGET)
        verdict = constraint(n) if callable(constraint) else check_invariant(n, constraint)
        constraint_ok = bool(verdict)
    return OpennessReport(base, a.id, direction, cost, card_ok, constraint_ok,
                          script.breakdown(schema), result)


@dataclass
class OpennessFit:
    costs: dict  # n -> cost
    verdict: str

    def table(self) -> str:
        lines = ["    n  cost"] + [f"{n:>5}  {c:>4}" for n, c in sorted(self.costs.items())]
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def classify_costs(costs: list) -> str:
    if not costs:
        return "unclassified"
    if all(c == 0 for c in costs):
        return "O(0)"
    if len(set(costs)) == 1:
        return "O(1)"
    diffs = [b - a for a, b in zip(costs, costs[1:])]
    if len(set(diffs)) == 1 and diffs[0] != 0:
        return "O(n)"
    return "unclassified"


def openness_family_fit(family: Callable[[int], MIS], script_for: Callable[[int], EditScript],
                        new_agent: Callable[[int], Agent], ns: Iterable[int],
                        schema: CostSchema = DEFAULT_SCHEMA, verify: bool = True) -> OpennessFit:
    """Cost of growing ``family(n)`` by one agent for each ``n``; optionally checks the
    result equals ``family(n + 1)``."""
    costs = {}
    for n in ns:
        m = family(n)
        result, cost = apply_script(expand(m, new_agent(n)), script_for(n), schema)
        if verify and result != family(n + 1):
            raise AssertionError(f"script for n={n} does not produce the next family member")
        costs[n] = cost
    return OpennessFit(costs, classify_costs([costs[n] for n in sorted(costs)]))
