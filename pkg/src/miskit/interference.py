"""Token multisets, guard conditions and decision lists.

A module's ``in`` function maps (local state, received multiset) to a set of
impressions. It is infinite in general, so it is written as an ordered list
of ``guard -> value`` entries; the first entry whose guard holds decides.
"""
from __future__ import annotations

import operator
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import NamedTuple, Union

BROADCAST = "*"

_COMPARATORS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}
COMPARATORS = tuple(_COMPARATORS)


class Token(NamedTuple):
    """A directed token: interaction symbol plus recipient (agent id or ``*``)."""

    symbol: str
    recipient: str = BROADCAST

    @property
    def is_broadcast(self) -> bool:
        return self.recipient == BROADCAST

    def __str__(self) -> str:
        return f"{self.symbol} -> {self.recipient}"


class TokenBag(Mapping):
    """Immutable multiset of interaction symbols.

    Zero counts are never stored, so two bags are equal iff their
    multiplicities agree everywhere.
    """

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[str] = ()):
        if isinstance(counts, Mapping):
            items = counts.items()
        else:
            tally: dict[str, int] = {}
            for sym in counts:
                tally[sym] = tally.get(sym, 0) + 1
            items = tally.items()
        clean = {}
        for sym, k in items:
            if k < 0:
                raise ValueError(f"negative multiplicity for {sym!r}")
            if k:
                clean[sym] = k
        self._counts = clean
        self._hash = None

    def __getitem__(self, sym: str) -> int:
        return self._counts[sym]

    def count(self, sym: str) -> int:
        return self._counts.get(sym, 0)

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, TokenBag):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == TokenBag(other)._counts
        return NotImplemented

    def __add__(self, other: "TokenBag") -> "TokenBag":
        return bag_union(self, other)

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}:{k}" for s, k in sorted(self._counts.items()))
        return f"TokenBag({{{inner}}})"


EMPTY_BAG = TokenBag()


def bag_union(a: TokenBag, b: TokenBag) -> TokenBag:
    """Multiset union: multiplicities add."""
    if not b:
        return a
    if not a:
        return b
    merged = dict(a._counts)
    for sym, k in b._counts.items():
        merged[sym] = merged.get(sym, 0) + k
    return TokenBag(merged)


def bag_of_deliveries(tokens: Iterable[Token], receiver: str) -> TokenBag:
    """Bag of symbols from ``tokens`` that reach agent ``receiver``.

    A token reaches the receiver when it names it or is broadcast. Each
    distinct directed token contributes one occurrence.
    """
    return TokenBag(t.symbol for t in set(tokens)
                    if t.recipient == receiver or t.recipient == BROADCAST)


# -- conditions --------------------------------------------------------------

@dataclass(frozen=True)
class TrueCond:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class StateIs:
    state: str

    def __str__(self) -> str:
        return f"s = {self.state}"


@dataclass(frozen=True)
class Has:
    symbol: str

    def __str__(self) -> str:
        return f"{self.symbol} in H"


@dataclass(frozen=True)
class Count:
    symbol: str
    op: str
    k: int

    def __post_init__(self):
        if self.op not in _COMPARATORS:
            raise ValueError(f"unknown comparator {self.op!r}")
        if self.k < 0:
            raise ValueError("count bound must be non-negative")

    def __str__(self) -> str:
        return f"count({self.symbol}) {self.op} {self.k}"


@dataclass(frozen=True)
class And:
    args: tuple

    def __str__(self) -> str:
        return " and ".join(_wrap(a, And) for a in self.args)


@dataclass(frozen=True)
class Or:
    args: tuple

    def __str__(self) -> str:
        return " or ".join(_wrap(a, Or) for a in self.args)


@dataclass(frozen=True)
class Not:
    arg: "Condition"

    def __str__(self) -> str:
        return f"not {_wrap(self.arg, Not)}"


Condition = Union[TrueCond, StateIs, Has, Count, And, Or, Not]
TRUE = TrueCond()
ATOMS = (TrueCond, StateIs, Has, Count)


def _wrap(c: Condition, parent: type) -> str:
    if isinstance(c, ATOMS):
        return str(c)
    if isinstance(c, Not) and parent is not Not:
        return str(c)
    return f"({c})"


def all_of(*args: Condition) -> Condition:
    """Conjunction that collapses the one-argument case."""
    return args[0] if len(args) == 1 else And(tuple(args))


def any_of(*args: Condition) -> Condition:
    """Disjunction that collapses the one-argument case."""
    return args[0] if len(args) == 1 else Or(tuple(args))


def eval_condition(c: Condition, state: str, bag: TokenBag) -> bool:
    if isinstance(c, TrueCond):
        return True
    if isinstance(c, StateIs):
        return state == c.state
    if isinstance(c, Has):
        return bag.count(c.symbol) >= 1
    if isinstance(c, Count):
        return _COMPARATORS[c.op](bag.count(c.symbol), c.k)
    if isinstance(c, And):
        return all(eval_condition(a, state, bag) for a in c.args)
    if isinstance(c, Or):
        return any(eval_condition(a, state, bag) for a in c.args)
    if isinstance(c, Not):
        return not eval_condition(c.arg, state, bag)
    raise TypeError(f"not a condition: {c!r}")


def iter_atoms(c: Condition) -> Iterator[Condition]:
    if isinstance(c, (And, Or)):
        for a in c.args:
            yield from iter_atoms(a)
    elif isinstance(c, Not):
        yield from iter_atoms(c.arg)
    else:
        yield c


def condition_symbols(c: Condition) -> set[str]:
    """Interaction symbols tested by membership or cardinality atoms."""
    return {a.symbol for a in iter_atoms(c) if isinstance(a, (Has, Count))}


def condition_states(c: Condition) -> set[str]:
    return {a.state for a in iter_atoms(c) if isinstance(a, StateIs)}


def state_consistent(c: Condition, state: str) -> bool:
    """False iff the guard is false in ``state`` whatever the bag contains.

    Uses three-valued evaluation: state atoms are decided, bag atoms unknown.
    """
    return _kleene(c, state) is not False


def _kleene(c: Condition, state: str):
    if isinstance(c, TrueCond):
        return True
    if isinstance(c, StateIs):
        return state == c.state
    if isinstance(c, (Has, Count)):
        return None
    if isinstance(c, Not):
        v = _kleene(c.arg, state)
        return None if v is None else not v
    vals = [_kleene(a, state) for a in c.args]
    if isinstance(c, And):
        if False in vals:
            return False
        return True if all(v is True for v in vals) else None
    if True in vals:
        return True
    return False if all(v is False for v in vals) else None


def rename_in_condition(c: Condition, kind: str, old: str, new: str) -> Condition:
    if isinstance(c, StateIs) and kind == "state" and c.state == old:
        return StateIs(new)
    if isinstance(c, Has) and kind == "symbol" and c.symbol == old:
        return Has(new)
    if isinstance(c, Count) and kind == "symbol" and c.symbol == old:
        return Count(new, c.op, c.k)
    if isinstance(c, And):
        return And(tuple(rename_in_condition(a, kind, old, new) for a in c.args))
    if isinstance(c, Or):
        return Or(tuple(rename_in_condition(a, kind, old, new) for a in c.args))
    if isinstance(c, Not):
        return Not(rename_in_condition(c.arg, kind, old, new))
    return c


# -- decision lists ------------------------------------------------------------

@dataclass(frozen=True)
class DecisionEntry:
    guard: Condition
    value: frozenset

    def __post_init__(self):
        object.__setattr__(self, "value", frozenset(self.value))
        if not self.value:
            raise ValueError("decision entry value must be nonempty")

    def __str__(self) -> str:
        return f"{self.guard} -> {{{', '.join(sorted(self.value))}}}"


@dataclass(frozen=True)
class DecisionList:
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> DecisionEntry:
        return self.entries[i]

    @property
    def is_total(self) -> bool:
        return bool(self.entries) and isinstance(self.entries[-1].guard, TrueCond)

    def values(self) -> frozenset:
        out = set()
        for e in self.entries:
            out |= e.value
        return frozenset(out)


def decision_list(*pairs) -> DecisionList:
    """Build a list from ``(guard, values)`` pairs."""
    return DecisionList(tuple(DecisionEntry(g, frozenset(v)) for g, v in pairs))


class DecisionListNotTotal(ValueError):
    pass


def eval_decision_list(dl: DecisionList, state: str, bag: TokenBag) -> frozenset:
    for entry in dl.entries:
        if eval_condition(entry.guard, state, bag):
            return entry.value
    raise DecisionListNotTotal("no decision entry matched; list lacks a final true guard")
