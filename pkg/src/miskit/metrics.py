"""Interaction complexity, global complexity and sparse-interaction verdicts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .interference import BROADCAST, condition_symbols, state_consistent
from .model import MIS, Module
from .unfolding import DEFAULT_BUDGET, unfold

CLASSES = ("constant", "logtime", "linear")


@dataclass
class AgentInteractionProfile:
    agent: str
    out_degree: dict = field(default_factory=dict)  # (module, state) -> int
    in_degree: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.out_degree.values()) + sum(self.in_degree.values())


def out_degree(mod: Module, owner: str, state: str) -> int:
    """Largest number of tokens one alternative sends to other agents (broadcast counts once)."""
    best = 0
    for a in mod.d(state):
        for alt in mod.alternatives(state, a):
            k = sum(1 for t in alt if t.recipient == BROADCAST or t.recipient != owner)
            best = max(best, k)
    return best


def in_degree(mod: Module, state: str) -> int:
    """Distinct symbols tested by guards that can still hold in ``state``."""
    syms = set()
    for e in mod.in_list:
        if state_consistent(e.guard, state):
            syms |= condition_symbols(e.guard)
    return len(syms)


def interaction_complexity(m: MIS, agent: str) -> AgentInteractionProfile:
    prof = AgentInteractionProfile(agent)
    for mod in m.agent(agent).modules:
        for q in mod.states:
            prof.out_degree[(mod.name, q)] = out_degree(mod, agent, q)
            prof.in_degree[(mod.name, q)] = in_degree(mod, q)
    return prof


def system_ic(m: MIS) -> int:
    return sum(interaction_complexity(m, a.id).total for a in m.agents)


def global_complexity(m: MIS, budget: int = DEFAULT_BUDGET) -> int:
    """Number of transition triples in the reachable unfolding."""
    return unfold(m, budget=budget).transition_count()


# -- sparseness ----------------------------------------------------------------------

def _class_fn(cls: str) -> Callable[[int], float]:
    if cls == "constant":
        return lambda gc: 1.0
    if cls == "logtime":
        return lambda gc: math.log2(gc) if gc > 1 else 1.0
    if cls == "linear":
        return lambda gc: float(max(gc, 1))
    raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")


@dataclass
class SparsenessRow:
    n: int
    card: int
    ic: int
    gc: int
    f_gc: float
    ratio: float


@dataclass
class SparsenessReport:
    family: str
    cls: str
    rows: list
    constant: float
    stabilizes: bool
    multi_agent: bool

    @property
    def sparse(self) -> bool:
        return self.stabilizes

    @property
    def verdict(self) -> bool:
        """Multi-agent design for the logtime class; plain sparseness otherwise."""
        if self.cls == "logtime":
            return self.stabilizes and self.multi_agent
        return self.stabilizes

    def verdict_text(self) -> str:
        if self.cls == "logtime":
            if not self.multi_agent:
                return "no multi-agent design (card < 2)"
            return "multi-agent design" if self.stabilizes else "no multi-agent design"
        return f"{self.cls}-sparse" if self.stabilizes else f"not {self.cls}-sparse"

    def to_data(self) -> dict:
        f_label = {"constant": "1", "logtime": "log2(GC)", "linear": "GC"}[self.cls]
        return {
            "family": self.family,
            "class": self.cls,
            "f": f_label,
            "rows": [
                {"n": r.n, "card": r.card, "IC": r.ic, "GC": r.gc,
                 "f(GC)": round(r.f_gc, 4), "IC/f(GC)": round(r.ratio, 4)}
                for r in self.rows
            ],
            "c": round(self.constant, 4),
            "stabilizes": self.stabilizes,
            "verdict": self.verdict_text(),
        }

    def table(self) -> str:
        f_label = {"constant": "1", "logtime": "log2(GC)", "linear": "GC"}[self.cls]
        head = ["n", "card", "IC", "GC", f_label, f"IC/{f_label}"]
        body = [[str(r.n), str(r.card), str(r.ic), str(r.gc), f"{r.f_gc:.3f}", f"{r.ratio:.3f}"]
                for r in self.rows]
        widths = [max(len(x) for x in col) for col in zip(head, *body)]
        fmt = lambda row: "  ".join(x.rjust(w) for x, w in zip(row, widths))
        lines = [f"family {self.family}, class {self.cls}", fmt(head)]
        lines += [fmt(r) for r in body]
        lines.append(f"c = {self.constant:.3f}; stabilizes: {'yes' if self.stabilizes else 'no'}")
        lines.append(f"verdict: {self.verdict_text()}")
        return "\n".join(lines)


def _stabilizes(ratios: list) -> bool:
    """The fitted constant settles: its maximum is not reached at the last instance,
    or the ratios do not increase over the upper half of the range."""
    if len(ratios) < 2:
        return True
    peak = max(ratios)
    if ratios[-1] < peak:
        return True
    top = ratios[len(ratios) // 2:]
    return all(b <= a + 1e-9 for a, b in zip(top, top[1:]))


def sparseness_check(family: Callable[[int], MIS], ns: Iterable[int], cls: str = "logtime",
                     name: str = "family", budget: int = DEFAULT_BUDGET) -> SparsenessReport:
    f = _class_fn(cls)
    rows = []
    for n in ns:
        m = family(n)
        ic = system_ic(m)
        gc = global_complexity(m, budget)
        fv = f(gc)
        rows.append(SparsenessRow(n, m.card, ic, gc, fv, ic / fv))
    ratios = [r.ratio for r in rows]
    return SparsenessReport(
        family=name, cls=cls, rows=rows,
        constant=max(ratios) if ratios else 0.0,
        stabilizes=_stabilizes(ratios),
        multi_agent=all(r.card >= 2 for r in rows),
    )
