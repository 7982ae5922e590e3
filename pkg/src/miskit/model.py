"""MIS data model: modules, agents, the system tuple and structural checks."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, NamedTuple

from .interference import (
    BROADCAST,
    DecisionList,
    Token,
    condition_states,
    condition_symbols,
    TrueCond,
)


def _fs(xs) -> frozenset:
    return frozenset(xs)


@dataclass(frozen=True)
class Module:
    """One module ``(St, Init, d, out, in, o, Pi, pi)``.

    ``out`` maps a situated action ``(state, action)`` to a set of
    alternative token-sets; ``trans`` maps ``(state, action, symbol)`` to a
    set of successor states. Empty entries are dropped on construction.
    """

    name: str
    states: tuple
    init: frozenset = frozenset()
    avail: Mapping = field(default_factory=dict)
    out: Mapping = field(default_factory=dict)
    in_list: DecisionList = DecisionList()
    trans: Mapping = field(default_factory=dict)
    props: frozenset = frozenset()
    valuation: Mapping = field(default_factory=dict)

    def __post_init__(self):
        setattr_ = object.__setattr__
        setattr_(self, "states", tuple(self.states))
        setattr_(self, "init", _fs(self.init))
        setattr_(self, "avail", {q: _fs(a) for q, a in self.avail.items() if a})
        setattr_(self, "out", {
            tuple(k): _fs(_fs(Token(*t) for t in alt) for alt in alts)
            for k, alts in self.out.items() if alts
        })
        if not isinstance(self.in_list, DecisionList):
            setattr_(self, "in_list", DecisionList(tuple(self.in_list)))
        setattr_(self, "trans", {tuple(k): _fs(v) for k, v in self.trans.items() if v})
        setattr_(self, "props", _fs(self.props))
        setattr_(self, "valuation", {p: _fs(v) for p, v in self.valuation.items() if v})

    def d(self, state: str) -> frozenset:
        return self.avail.get(state, frozenset())

    def situated_actions(self):
        for q in self.states:
            for a in sorted(self.d(q)):
                yield q, a

    def alternatives(self, state: str, action: str) -> frozenset:
        return self.out.get((state, action), frozenset())

    def o(self, state: str, action: str, symbol: str) -> frozenset:
        return self.trans.get((state, action, symbol), frozenset())

    def with_(self, **changes) -> "Module":
        return replace(self, **changes)


@dataclass(frozen=True)
class Agent:
    id: str
    modules: tuple

    def __post_init__(self):
        object.__setattr__(self, "modules", tuple(self.modules))

    def module(self, name: str) -> Module:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)


@dataclass(frozen=True, eq=False)
class MIS:
    """System tuple ``(Agtnames, Act, In, Agt)``.

    Agents are kept in declaration order, which fixes the component order of
    global states, but equality treats the agent collection as a set.
    """

    agent_names: frozenset
    actions: frozenset
    symbols: frozenset
    agents: tuple

    def __post_init__(self):
        object.__setattr__(self, "agent_names", _fs(self.agent_names))
        object.__setattr__(self, "actions", _fs(self.actions))
        object.__setattr__(self, "symbols", _fs(self.symbols))
        object.__setattr__(self, "agents", tuple(self.agents))

    @classmethod
    def build(cls, agents: Iterable[Agent], agent_names=(), actions=(), symbols=()) -> "MIS":
        """Create a MIS whose alphabets cover everything the agents mention."""
        agents = tuple(agents)
        names, acts, syms = set(agent_names), set(actions), set(symbols)
        for a in agents:
            n, ac, sy = agent_symbols(a)
            names |= n
            acts |= ac
            syms |= sy
        return cls(names, acts, syms, agents)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MIS):
            return NotImplemented
        if (self.agent_names, self.actions, self.symbols) != (
                other.agent_names, other.actions, other.symbols):
            return False
        if len(self.agents) != len(other.agents):
            return False
        mine = {a.id: a for a in self.agents}
        theirs = {a.id: a for a in other.agents}
        return mine == theirs

    __hash__ = None

    @property
    def card(self) -> int:
        return len(self.agents)

    @property
    def modules(self) -> tuple:
        return tuple(m for a in self.agents for m in a.modules)

    @property
    def module_owners(self) -> tuple:
        return tuple(a.id for a in self.agents for _ in a.modules)

    def agent(self, agent_id: str) -> Agent:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise KeyError(agent_id)

    def module(self, name: str) -> Module:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)

    def module_index(self, name: str) -> int:
        for i, m in enumerate(self.modules):
            if m.name == name:
                return i
        raise KeyError(name)

    def owner_of(self, module_name: str) -> str:
        return self.module_owners[self.module_index(module_name)]

    def with_agents(self, agents) -> "MIS":
        return MIS(self.agent_names, self.actions, self.symbols, tuple(agents))

    def replace_module(self, name: str, new: Module) -> "MIS":
        agents = []
        for a in self.agents:
            mods = tuple(new if m.name == name else m for m in a.modules)
            agents.append(a if mods == a.modules else Agent(a.id, mods))
        return self.with_agents(agents)


# -- symbols -----------------------------------------------------------------

def module_symbols(m: Module) -> tuple[set, set, set]:
    names, acts, syms = set(), set(), set()
    for acts_here in m.avail.values():
        acts |= acts_here
    for (_, a), alts in m.out.items():
        acts.add(a)
        for alt in alts:
            for t in alt:
                syms.add(t.symbol)
                if t.recipient != BROADCAST:
                    names.add(t.recipient)
    for e in m.in_list:
        syms |= e.value
        syms |= condition_symbols(e.guard)
    for (_, a, g) in m.trans:
        acts.add(a)
        syms.add(g)
    return names, acts, syms


def agent_symbols(a: Agent) -> tuple[set, set, set]:
    """Agent names, actions and interaction symbols occurring in ``a``."""
    names, acts, syms = {a.id}, set(), set()
    for m in a.modules:
        n, ac, sy = module_symbols(m)
        names |= n
        acts |= ac
        syms |= sy
    return names, acts, syms


def namesakes(a: Agent, m: MIS) -> list[Agent]:
    return [b for b in m.agents if b.id == a.id]


# -- validation ----------------------------------------------------------------

class Violation(NamedTuple):
    location: str
    field: str
    rule: str
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.severity}: {self.location}.{self.field}: {self.rule}: {self.message}"


class ValidationReport(list):
    @property
    def errors(self) -> list[Violation]:
        return [v for v in self if v.severity == "error"]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self if v.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(m: MIS) -> ValidationReport:
    """Check every structural rule of a MIS; violations are returned, not raised."""
    report = ValidationReport()

    def bad(loc, fld, rule, msg, severity="error"):
        report.append(Violation(loc, fld, rule, msg, severity))

    seen_ids, seen_modules, prop_owner = set(), set(), {}
    for agent in m.agents:
        loc = agent.id
        if agent.id in seen_ids:
            bad(loc, "id", "unique agent id", f"agent id {agent.id!r} used twice")
        seen_ids.add(agent.id)
        if agent.id not in m.agent_names:
            bad(loc, "id", "agent name declared", f"{agent.id!r} not in agtnames")
        if not agent.modules:
            bad(loc, "modules", "nonempty modules", "agent has no modules")
        for mod in agent.modules:
            mloc = f"{agent.id}/{mod.name}"
            if mod.name in seen_modules:
                bad(mloc, "name", "unique module name", f"module name {mod.name!r} used twice")
            seen_modules.add(mod.name)
            for p in mod.props:
                if p in prop_owner:
                    bad(mloc, "props", "Π disjointness",
                        f"proposition {p!r} also belongs to module {prop_owner[p]!r}")
                else:
                    prop_owner[p] = mod.name
            _validate_module(m, mod, mloc, bad)
    return report


def _validate_module(m: MIS, mod: Module, loc: str, bad) -> None:
    states = set(mod.states)
    if len(states) != len(mod.states):
        bad(loc, "states", "unique states", "duplicate local state")
    if not mod.init <= states:
        bad(loc, "init", "init ⊆ states", f"unknown initial states {sorted(mod.init - states)}")
    if not mod.init:
        bad(loc, "init", "nonempty init", "module has no initial state", "warning")
    for q, acts in mod.avail.items():
        if q not in states:
            bad(loc, "d", "known state", f"availability given for unknown state {q!r}")
        for a in sorted(acts - m.actions):
            bad(loc, "d", "declared action", f"action {a!r} not in act")
    for q in mod.states:
        for a in sorted(mod.d(q)):
            if not mod.alternatives(q, a):
                bad(loc, "out", "out defined", f"no out alternative for situated action ({q}, {a})")
    for (q, a), alts in mod.out.items():
        if a not in mod.d(q):
            bad(loc, "out", "situated action", f"({q}, {a}) is not a situated action")
        for alt in alts:
            for t in alt:
                if t.symbol not in m.symbols:
                    bad(loc, "out", "declared symbol", f"token symbol {t.symbol!r} not in In")
                if t.recipient != BROADCAST and t.recipient not in m.agent_names:
                    bad(loc, "out", "declared recipient", f"recipient {t.recipient!r} not in agtnames")
    entries = mod.in_list.entries
    if not entries or not isinstance(entries[-1].guard, TrueCond):
        bad(loc, "in_list", "decision list totality", "last entry must have guard true")
    for i, e in enumerate(entries):
        for s in sorted(condition_symbols(e.guard) | set(e.value)):
            if s not in m.symbols:
                bad(loc, "in_list", "declared symbol", f"entry {i}: symbol {s!r} not in In")
        for q in sorted(condition_states(e.guard) - states):
            bad(loc, "in_list", "known state", f"entry {i}: unknown state {q!r}")
        if not e.value:
            bad(loc, "in_list", "nonempty value", f"entry {i} has empty value")
    for (q, a, g), targets in mod.trans.items():
        if a not in mod.d(q):
            bad(loc, "o", "situated action", f"({q}, {a}) is not a situated action")
        if g not in m.symbols:
            bad(loc, "o", "declared symbol", f"symbol {g!r} not in In")
        if not targets <= states:
            bad(loc, "o", "known state", f"unknown targets {sorted(targets - states)}")
    for p, qs in mod.valuation.items():
        if p not in mod.props:
            bad(loc, "pi", "declared proposition", f"{p!r} not in Π")
        if not qs <= states:
            bad(loc, "pi", "known state", f"unknown states {sorted(qs - states)}")
