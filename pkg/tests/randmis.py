"""Seeded random MIS for property tests.

Every situated action has an o-entry for every impression symbol, so the
generated models never get stuck and always unfold.
"""
import random

from miskit.interference import (
    COMPARATORS, TRUE, And, Count, DecisionEntry, DecisionList, Has, Not, Or, StateIs, Token,
)
from miskit.model import MIS, Agent, Module

SYMBOLS = ("x", "y", "z")
ACTIONS = ("a", "b")


def random_guard(rng, states, depth=2):
    roll = rng.random()
    if depth == 0 or roll < 0.5:
        kind = rng.choice(("state", "has", "count"))
        if kind == "state":
            return StateIs(rng.choice(states))
        if kind == "has":
            return Has(rng.choice(SYMBOLS))
        return Count(rng.choice(SYMBOLS), rng.choice(COMPARATORS), rng.randint(0, 2))
    if roll < 0.65:
        return Not(random_guard(rng, states, depth - 1))
    args = tuple(random_guard(rng, states, depth - 1) for _ in range(rng.randint(2, 3)))
    return And(args) if rng.random() < 0.5 else Or(args)


def random_module(rng, name, recipients, n_states=None):
    n_states = n_states or rng.randint(1, 3)
    states = tuple(f"{name}_s{k}" for k in range(n_states))
    init = set(rng.sample(states, rng.randint(1, min(2, n_states))))
    avail = {q: set(rng.sample(ACTIONS, rng.randint(1, 2))) for q in states}
    out = {}
    for q, acts in avail.items():
        for a in acts:
            alts = set()
            for _ in range(rng.randint(1, 2)):
                size = rng.randint(0, 2)
                alts.add(frozenset(Token(rng.choice(SYMBOLS), rng.choice(recipients))
                                   for _ in range(size)))
            out[(q, a)] = alts
    entries = [DecisionEntry(random_guard(rng, states),
                             frozenset(rng.sample(SYMBOLS, rng.randint(1, 2))))
               for _ in range(rng.randint(0, 3))]
    entries.append(DecisionEntry(TRUE, frozenset({rng.choice(SYMBOLS)})))
    trans = {}
    for q, acts in avail.items():
        for a in acts:
            for g in SYMBOLS:
                trans[(q, a, g)] = set(rng.sample(states, rng.randint(1, min(2, n_states))))
    prop = f"p_{name}"
    return Module(
        name=name, states=states, init=init, avail=avail, out=out,
        in_list=DecisionList(tuple(entries)), trans=trans,
        props={prop}, valuation={prop: set(rng.sample(states, rng.randint(0, n_states)))},
    )


def random_agent(rng, agent_id, recipients, n_modules=1):
    mods = tuple(random_module(rng, f"{agent_id}m{k}", recipients) for k in range(n_modules))
    return Agent(agent_id, mods)


def random_mis(seed, max_modules=3, extra_names=("Z",)):
    """2 or 3 agents holding at most ``max_modules`` modules in total.

    ``extra_names`` are agent names that may be addressed but are not present,
    which is what a fresh agent added later will be called.
    """
    rng = random.Random(seed)
    n_agents = rng.randint(2, 3) if max_modules >= 3 else 2
    ids = [f"A{k}" for k in range(n_agents)]
    budget = max_modules - n_agents
    counts = [1] * n_agents
    for _ in range(max(0, budget)):
        if rng.random() < 0.5:
            counts[rng.randrange(n_agents)] += 1
    recipients = ids + list(extra_names) + ["*"]
    agents = [random_agent(rng, aid, recipients, c) for aid, c in zip(ids, counts)]
    return MIS.build(agents, agent_names=extra_names)


def fresh_agent(seed, agent_id="Z", recipients=("A0", "A1", "Z", "*")):
    rng = random.Random(seed * 7919 + 1)
    return random_agent(rng, agent_id, list(recipients), rng.randint(1, 2))
