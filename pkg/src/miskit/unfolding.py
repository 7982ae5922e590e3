"""Unfolding a MIS into an explicit nondeterministic concurrent epistemic game structure."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .interference import (
    EMPTY_BAG,
    TokenBag,
    bag_of_deliveries,
    bag_union,
    eval_decision_list,
)
from .model import MIS

DEFAULT_BUDGET = 10**6


class UnfoldingError(Exception):
    pass


class StuckModule(UnfoldingError):
    """A module has no successor for any of its possible impressions."""

    def __init__(self, module: str, state: str, action: str, impressions):
        self.module, self.state, self.action = module, state, action
        self.impressions = tuple(sorted(impressions))
        super().__init__(
            f"module {module!r} is stuck at ({state}, {action}) "
            f"for impressions {list(self.impressions)}")


class NoAvailableAction(UnfoldingError):
    def __init__(self, module: str, state: str):
        self.module, self.state = module, state
        super().__init__(f"module {module!r} has no available action in reachable state {state!r}")


class ExplorationBudgetExceeded(UnfoldingError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"state exploration exceeded the budget of {budget} states")


@dataclass(eq=False)
class NCEGS:
    """Explicit model: global states are tuples of local states in module order."""

    module_names: tuple
    module_owners: tuple
    agents: tuple
    states: tuple
    init: tuple
    trans: dict
    valuation: dict
    avail: tuple = field(repr=False, default=())

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCEGS):
            return NotImplemented
        return (self.module_names == other.module_names
                and self.module_owners == other.module_owners
                and set(self.states) == set(other.states)
                and set(self.init) == set(other.init)
                and self.trans == other.trans
                and self.valuation == other.valuation)

    @property
    def props(self) -> tuple:
        return tuple(sorted(self.valuation))

    def agent_indices(self, agent: str) -> tuple:
        idx = tuple(i for i, o in enumerate(self.module_owners) if o == agent)
        if not idx:
            raise KeyError(agent)
        return idx

    def module_position(self, name: str) -> int:
        return self.module_names.index(name)

    def view(self, agent: str, q: tuple) -> tuple:
        return tuple(q[i] for i in self.agent_indices(agent))

    def indistinguishable(self, agent: str, q: tuple, r: tuple) -> bool:
        return self.view(agent, q) == self.view(agent, r)

    def epistemic_classes(self, agent: str) -> dict:
        """Map each local view of ``agent`` to the states sharing it."""
        idx = self.agent_indices(agent)
        classes: dict = {}
        for q in self.states:
            classes.setdefault(tuple(q[i] for i in idx), []).append(q)
        return classes

    def holds(self, prop: str, q: tuple) -> bool:
        return q in self.valuation.get(prop, ())

    def edges(self, q: tuple):
        """Outgoing ``(joint action, successor)`` pairs in canonical order."""
        for (src, a), succ in self._out_index().get(q, ()):
            for r in sorted(succ):
                yield a, r

    def _out_index(self) -> dict:
        idx = getattr(self, "_out_cache", None)
        if idx is None:
            idx = {}
            for key in sorted(self.trans):
                idx.setdefault(key[0], []).append((key, self.trans[key]))
            self._out_cache = idx
        return idx

    def transition_count(self) -> int:
        return sum(len(v) for v in self.trans.values())


# -- per-step semantics ----------------------------------------------------------

class _Stepper:
    """Caches decision-list evaluations and delivered bags for one MIS."""

    def __init__(self, m: MIS):
        self.mis = m
        self.modules = m.modules
        self.owners = m.module_owners
        self._in_cache: dict = {}

    def impressions(self, i: int, state: str, bag: TokenBag) -> frozenset:
        key = (i, state, bag)
        v = self._in_cache.get(key)
        if v is None:
            v = eval_decision_list(self.modules[i].in_list, state, bag)
            self._in_cache[key] = v
        return v

    def delivered_options(self, q: tuple, a: tuple, receiver: str) -> list:
        """Per module, the distinct bags its out alternatives deliver to ``receiver``."""
        opts = []
        for j, mod in enumerate(self.modules):
            bags = {bag_of_deliveries(T, receiver) for T in mod.alternatives(q[j], a[j])}
            if len(bags) == 1 and EMPTY_BAG in bags:
                continue
            opts.append(bags)
        return opts

    def possible_interferences(self, q: tuple, a: tuple, i: int) -> frozenset:
        receiver = self.owners[i]
        opts = self.delivered_options(q, a, receiver)
        result = set()
        seen = set()
        for combo in itertools.product(*[sorted(o, key=_bag_key) for o in opts]):
            total = EMPTY_BAG
            for b in combo:
                total = bag_union(total, b)
            if total in seen:
                continue
            seen.add(total)
            result |= self.impressions(i, q[i], total)
        return frozenset(result)

    def local_successors(self, q: tuple, a: tuple, i: int, receiver_cache: dict) -> frozenset:
        owner = self.owners[i]
        oi = receiver_cache.get((owner, i))
        if oi is None:
            oi = self.possible_interferences(q, a, i)
            receiver_cache[(owner, i)] = oi
        mod = self.modules[i]
        succ = set()
        for g in oi:
            succ |= mod.o(q[i], a[i], g)
        if not succ:
            raise StuckModule(mod.name, q[i], a[i], oi)
        return frozenset(succ)

    def successors(self, q: tuple, a: tuple) -> frozenset:
        cache: dict = {}
        per_module = [sorted(self.local_successors(q, a, i, cache)) for i in range(len(q))]
        return frozenset(itertools.product(*per_module))

    def joint_actions(self, q: tuple):
        choices = []
        for mod, s in zip(self.modules, q):
            acts = sorted(mod.d(s))
            if not acts:
                raise NoAvailableAction(mod.name, s)
            choices.append(acts)
        return itertools.product(*choices)


def _bag_key(b: TokenBag):
    return sorted(b.items())


def possible_interferences(m: MIS, q: tuple, a: tuple, i: int) -> frozenset:
    """Impressions module ``i`` may receive when joint action ``a`` is taken at ``q``."""
    return _Stepper(m).possible_interferences(tuple(q), tuple(a), i)


def successors(m: MIS, q: tuple, a: tuple) -> frozenset:
    return _Stepper(m).successors(tuple(q), tuple(a))


def initial_states(m: MIS) -> list:
    inits = [[s for s in mod.states if s in mod.init] for mod in m.modules]
    return list(itertools.product(*inits))


def unfold(m: MIS, reachable_only: bool = True, budget: int = DEFAULT_BUDGET) -> NCEGS:
    """Build the explicit model of ``m``.

    With ``reachable_only`` the state set is the breadth-first closure of the
    initial states; otherwise every tuple of local states is enumerated.
    """
    stepper = _Stepper(m)
    mods = m.modules
    init = initial_states(m)
    trans: dict = {}
    if reachable_only:
        seen = set(init)
        order = list(init)
        if len(order) > budget:
            raise ExplorationBudgetExceeded(budget)
        queue = deque(init)
        while queue:
            q = queue.popleft()
            for a in stepper.joint_actions(q):
                succ = stepper.successors(q, a)
                trans[(q, a)] = succ
                for r in sorted(succ):
                    if r not in seen:
                        seen.add(r)
                        order.append(r)
                        if len(order) > budget:
                            raise ExplorationBudgetExceeded(budget)
                        queue.append(r)
        states = tuple(order)
    else:
        total = 1
        for mod in mods:
            total *= len(mod.states)
        if total > budget:
            raise ExplorationBudgetExceeded(budget)
        states = tuple(itertools.product(*[mod.states for mod in mods]))
        for q in states:
            if any(not mod.d(s) for mod, s in zip(mods, q)):
                continue
            for a in stepper.joint_actions(q):
                trans[(q, a)] = stepper.successors(q, a)

    state_set = set(states)
    valuation = {}
    for i, mod in enumerate(mods):
        for p in mod.props:
            locs = mod.valuation.get(p, frozenset())
            valuation[p] = frozenset(q for q in state_set if q[i] in locs)
    agents = tuple(dict.fromkeys(m.module_owners))
    avail = tuple(dict(mod.avail) for mod in mods)
    return NCEGS(
        module_names=tuple(mod.name for mod in mods),
        module_owners=m.module_owners,
        agents=agents,
        states=states,
        init=tuple(init),
        trans=trans,
        valuation=valuation,
        avail=avail,
    )
