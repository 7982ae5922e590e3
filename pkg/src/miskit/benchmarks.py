"""Generators for the benchmark families, their predicates and growth scripts.

* ``ttc(n)``: n trains sharing a tunnel guarded by a controller.
* ``dc1(n)``: dining cryptographers with fixed neighbours and a broadcast channel.
* ``dc2(n)``: the same protocol over point-to-point channels with one counter per cryptographer.
* ``dc0(n)``: cryptographers without identifiers who agree on a payer through an
  oracle and pair up with neighbours on their own.

Notes on the train model: the train's entry on ``s = granted`` yields the
impression ``enter`` (the listing says ``granted``, which no transition
consumes), and leaving is keyed on the ``left`` impression the train actually
receives. The controller's actions ``accepting``, ``waiting`` and ``inform``
are added to the action alphabet. Each train owns its own proposition
``in_tunnel_i`` because propositions may not be shared between modules.
"""
from __future__ import annotations

from .interference import (
    TRUE,
    Count,
    Has,
    Not,
    StateIs,
    Token,
    all_of,
    any_of,
    decision_list,
)
from .model import MIS, Agent, Module
from .openness import (
    AddAvail,
    AddGuardAtom,
    AddOutAlternative,
    AddOutToken,
    AddState,
    AddTransTarget,
    AddValuationState,
    EditScript,
    InsertDecisionEntry,
    RemoveOutToken,
    RenameSymbol,
)

FAMILIES = ("ttc", "dc1", "dc2", "dc0")
MIN_N = {"ttc": 1, "dc1": 3, "dc2": 3, "dc0": 3}

NONE = frozenset({frozenset()})  # a single alternative sending nothing


def _check_n(family: str, n: int) -> None:
    if n < MIN_N[family]:
        raise ValueError(f"{family} needs n >= {MIN_N[family]}, got {n}")


def _single(*tokens) -> frozenset:
    return frozenset({frozenset(Token(*t) for t in tokens)})


# -- tunnel, trains and controller ------------------------------------------------------

def train(i: int) -> Agent:
    me = f"tr_{i}"
    mod = Module(
        name=me,
        states=("out", "tun_needed", "granted", "in"),
        init={"out"},
        avail={"out": {"nop", "approach"}, "tun_needed": {"request"},
               "granted": {"enter"}, "in": {"nop", "leave"}},
        out={
            ("out", "nop"): _single(("idle", me)),
            ("out", "approach"): _single(("appr", me)),
            ("tun_needed", "request"): _single((f"try_{i}", "ctrl")),
            ("granted", "enter"): _single(("enter", me)),
            ("in", "nop"): _single(("idle", me)),
            ("in", "leave"): _single(("left", "ctrl"), ("left", me)),
        },
        in_list=decision_list(
            (all_of(StateIs("out"), Has("appr")), {"appr"}),
            (all_of(StateIs("tun_needed"), Has("grant")), {"granted"}),
            (StateIs("tun_needed"), {"retry"}),
            (all_of(StateIs("granted"), Has("enter")), {"enter"}),
            (all_of(StateIs("in"), Has("left")), {"left"}),
            (TRUE, {"idle"}),
        ),
        trans={
            ("out", "nop", "idle"): {"out"},
            ("out", "approach", "appr"): {"tun_needed"},
            ("tun_needed", "request", "retry"): {"tun_needed"},
            ("tun_needed", "request", "granted"): {"granted"},
            ("granted", "enter", "enter"): {"in"},
            ("in", "nop", "idle"): {"in"},
            ("in", "leave", "left"): {"out"},
        },
        props={f"in_tunnel_{i}"},
        valuation={f"in_tunnel_{i}": {"in"}},
    )
    return Agent(me, (mod,))


def controller(n: int, sabotaged: bool = False) -> Agent:
    granted = [f"tr_{i}granted" for i in range(1, n + 1)]
    release = StateIs("infd") if sabotaged else all_of(StateIs("infd"), Has("left"))
    entries = [(all_of(StateIs("tun_free"), Has(f"try_{i}")), {f"grant_{i}"})
               for i in range(1, n + 1)]
    entries += [
        (StateIs("tun_free"), {"no_reqs"}),
        (any_of(*[StateIs(g) for g in granted]), {"infd"}),
        (release, {"ack_release"}),
        (StateIs("infd"), {"aw_leave"}),
        (TRUE, {"idle"}),
    ]
    out = {
        ("tun_free", "accepting"): _single(("aw_reqs", "*")),
        ("infd", "waiting"): _single(("aw_leave", "ctrl")),
    }
    trans = {
        ("tun_free", "accepting", "no_reqs"): {"tun_free"},
        ("infd", "waiting", "aw_leave"): {"infd"},
        ("infd", "waiting", "ack_release"): {"tun_free"},
    }
    avail = {"tun_free": {"accepting"}, "infd": {"waiting"}}
    for i, g in enumerate(granted, 1):
        avail[g] = {"inform"}
        out[(g, "inform")] = _single(("grant", f"tr_{i}"))
        trans[("tun_free", "accepting", f"grant_{i}")] = {g}
        trans[(g, "inform", "infd")] = {"infd"}
    mod = Module(
        name="ctrl", states=("tun_free", "infd", *granted), init={"tun_free"},
        avail=avail, out=out, in_list=decision_list(*entries), trans=trans,
        props={"tunnel_busy"}, valuation={"tunnel_busy": {"infd"}},
    )
    return Agent("ctrl", (mod,))


def ttc(n: int, sabotaged: bool = False) -> MIS:
    """n trains and a controller. ``sabotaged`` makes the controller release the
    tunnel without waiting for the ``left`` notification."""
    _check_n("ttc", n)
    return MIS.build([*(train(i) for i in range(1, n + 1)), controller(n, sabotaged)])


def ttc_sabotaged(n: int) -> MIS:
    return ttc(n, sabotaged=True)


def ttc_script(n: int) -> EditScript:
    """Controller edits that turn ``ttc(n) (+) tr_{n+1}`` into ``ttc(n+1)``."""
    k = n + 1
    g = f"tr_{k}granted"
    return EditScript((
        AddState("ctrl", g),
        AddAvail("ctrl", g, "inform"),
        AddOutAlternative("ctrl", g, "inform", {Token("grant", f"tr_{k}")}),
        InsertDecisionEntry("ctrl", n, all_of(StateIs("tun_free"), Has(f"try_{k}")), {f"grant_{k}"}),
        AddTransTarget("ctrl", "tun_free", "accepting", f"grant_{k}", g),
        AddTransTarget("ctrl", g, "inform", "infd", "infd"),
        AddGuardAtom("ctrl", k + 1, "or", StateIs(g)),
    ))


# -- dining cryptographers: shared pieces ---------------------------------------------

def _crypto(i: int, n: int, utter_to) -> Module:
    """Cryptographer with fixed neighbours; ``utter_to`` lists utterance recipients."""
    me, right = f"C_{i}", f"C_{i % n + 1}"
    left = (i - 2) % n + 1
    deciding = any_of(StateIs("same"), StateIs("differ"))
    return Module(
        name=me,
        states=("start", "same", "differ", "say_eq", "say_diff", "done_eq", "done_diff"),
        init={"start"},
        avail={"start": {"toss_h", "toss_t"}, "same": {"listen"}, "differ": {"listen"},
               "say_eq": {"say"}, "say_diff": {"say"}, "done_eq": {"nop"}, "done_diff": {"nop"}},
        out={
            ("start", "toss_h"): _single((f"h_{i}", me), (f"h_{i}", right)),
            ("start", "toss_t"): _single((f"t_{i}", me), (f"t_{i}", right)),
            ("same", "listen"): NONE,
            ("differ", "listen"): NONE,
            ("say_eq", "say"): _single(*[("eq", r) for r in utter_to]),
            ("say_diff", "say"): _single(*[("diff", r) for r in utter_to]),
            ("done_eq", "nop"): NONE,
            ("done_diff", "nop"): NONE,
        },
        in_list=decision_list(
            (all_of(StateIs("start"), Has(f"h_{i}"), Has(f"h_{left}")), {"same"}),
            (all_of(StateIs("start"), Has(f"t_{i}"), Has(f"t_{left}")), {"same"}),
            (StateIs("start"), {"differ"}),
            (all_of(deciding, Has("you_pay")), {"you_pay"}),
            (TRUE, {"idle"}),
        ),
        trans={
            ("start", "toss_h", "same"): {"same"},
            ("start", "toss_h", "differ"): {"differ"},
            ("start", "toss_t", "same"): {"same"},
            ("start", "toss_t", "differ"): {"differ"},
            ("same", "listen", "idle"): {"say_eq"},
            ("same", "listen", "you_pay"): {"say_diff"},
            ("differ", "listen", "idle"): {"say_diff"},
            ("differ", "listen", "you_pay"): {"say_eq"},
            ("say_eq", "say", "idle"): {"done_eq"},
            ("say_diff", "say", "idle"): {"done_diff"},
            ("done_eq", "nop", "idle"): {"done_eq"},
            ("done_diff", "nop", "idle"): {"done_diff"},
        },
        props={f"uttered_equal_{i}"},
        valuation={f"uttered_equal_{i}": {"done_eq"}},
    )


def who_pays(n: int) -> Agent:
    payers = [str(i) for i in range(1, n + 1)]
    states = ("start", "pay_none", *[f"pay_{p}" for p in payers])
    avail = {"start": {"choose_none", *[f"choose_{p}" for p in payers]}}
    out, trans = {}, {}
    for p in ["none", *payers]:
        out[("start", f"choose_{p}")] = _single((f"sel_{p}", "Who_pays"))
        trans[("start", f"choose_{p}", f"sel_{p}")] = {f"pay_{p}"}
        avail[f"pay_{p}"] = {"announce"}
        out[(f"pay_{p}", "announce")] = NONE if p == "none" else _single(("you_pay", f"C_{p}"))
        trans[(f"pay_{p}", "announce", "told")] = {f"pay_{p}"}
    entries = [(all_of(StateIs("start"), Has(f"sel_{p}")), {f"sel_{p}"}) for p in ["none", *payers]]
    entries += [(StateIs(f"pay_{p}"), {"told"}) for p in ["none", *payers]]
    entries.append((TRUE, {"idle"}))
    mod = Module(
        name="Who_pays", states=states, init={"start"}, avail=avail, out=out,
        in_list=decision_list(*entries), trans=trans,
        props={"nobody_pays", "paid_by_crypto"},
        valuation={"nobody_pays": {"pay_none"},
                   "paid_by_crypto": {f"pay_{p}" for p in payers}},
    )
    return Agent("Who_pays", (mod,))


def _counter_module(name: str, n: int, suffix: str = "") -> Module:
    entries = [(Count("diff", "=", k), {f"got_{k}"}) for k in range(1, n + 1)]
    entries += [(Has("eq"), {"got_0"}), (TRUE, {"idle"})]
    trans = {
        ("listen", "count", "idle"): {"listen"},
        ("listen", "count", "got_0"): {"even"},
        ("even", "nop", "idle"): {"even"},
        ("odd", "nop", "idle"): {"odd"},
    }
    for k in range(1, n + 1):
        trans[("listen", "count", f"got_{k}")] = {"odd" if k % 2 else "even"}
    return Module(
        name=name, states=("listen", "even", "odd"), init={"listen"},
        avail={"listen": {"count"}, "even": {"nop"}, "odd": {"nop"}},
        out={("listen", "count"): NONE, ("even", "nop"): NONE, ("odd", "nop"): NONE},
        in_list=decision_list(*entries), trans=trans,
        props={f"result_odd{suffix}"}, valuation={f"result_odd{suffix}": {"odd"}},
    )


def counter(n: int) -> Agent:
    return Agent("Counter", (_counter_module("Counter", n),))


def dc1_crypto(i: int, n: int) -> Agent:
    return Agent(f"C_{i}", (_crypto(i, n, ["*"]),))


def dc1(n: int) -> MIS:
    _check_n("dc1", n)
    return MIS.build([who_pays(n), counter(n), *(dc1_crypto(i, n) for i in range(1, n + 1))])


def dc2_crypto(i: int, n: int) -> Agent:
    recipients = [f"C_{k}" for k in range(1, n + 1)] + ["Counter"]
    return Agent(f"C_{i}", (_crypto(i, n, recipients), _counter_module(f"Counter_{i}", n, f"_{i}")))


def dc2(n: int) -> MIS:
    _check_n("dc2", n)
    return MIS.build([who_pays(n), counter(n), *(dc2_crypto(i, n) for i in range(1, n + 1))])


def _relink(n: int) -> list:
    """Insert C_{n+1} between C_n and C_1 in the coin ring (10 symbols)."""
    last, first, new = f"C_{n}", "C_1", f"C_{n + 1}"
    steps = []
    for c in ("h", "t"):
        coin = f"{c}_{n}"
        both = {Token(coin, last), Token(coin, first)}
        steps.append(RemoveOutToken(last, "start", f"toss_{c}", both, Token(coin, first)))
        steps.append(AddOutToken(last, "start", f"toss_{c}", {Token(coin, last)}, Token(coin, new)))
    for c in ("h", "t"):
        steps.append(RenameSymbol(first, "symbol", f"{c}_{n}", f"{c}_{n + 1}", 1))
    return steps


def _who_pays_steps(n: int) -> list:
    k = n + 1
    return [
        AddState("Who_pays", f"pay_{k}"),
        # nondeterministic choice of the new payer
        AddAvail("Who_pays", "start", f"choose_{k}"),
        AddOutAlternative("Who_pays", "start", f"choose_{k}", {Token(f"sel_{k}", "Who_pays")}),
        InsertDecisionEntry("Who_pays", 1 + n, all_of(StateIs("start"), Has(f"sel_{k}")), {f"sel_{k}"}),
        AddTransTarget("Who_pays", "start", f"choose_{k}", f"sel_{k}", f"pay_{k}"),
        # loop telling the new payer
        AddAvail("Who_pays", f"pay_{k}", "announce"),
        AddOutAlternative("Who_pays", f"pay_{k}", "announce", {Token("you_pay", f"C_{k}")}),
        InsertDecisionEntry("Who_pays", 2 * n + 3, StateIs(f"pay_{k}"), {"told"}),
        AddTransTarget("Who_pays", f"pay_{k}", "announce", "told", f"pay_{k}"),
        AddValuationState("Who_pays", "paid_by_crypto", f"pay_{k}"),
    ]


def _counter_steps(module: str, n: int) -> list:
    k = n + 1
    return [
        InsertDecisionEntry(module, n, Count("diff", "=", k), {f"got_{k}"}),
        AddTransTarget(module, "listen", "count", f"got_{k}", "odd" if k % 2 else "even"),
    ]


def dc1_script(n: int) -> EditScript:
    return EditScript(tuple(_relink(n) + _who_pays_steps(n) + _counter_steps("Counter", n)))


def dc2_script(n: int) -> EditScript:
    k = n + 1
    steps = _relink(n)
    for j in range(1, n + 1):
        me = f"C_{j}"
        old = [f"C_{x}" for x in range(1, n + 1)] + ["Counter"]
        for sym, st in (("eq", "say_eq"), ("diff", "say_diff")):
            alt = {Token(sym, r) for r in old}
            steps.append(AddOutToken(me, st, "say", alt, Token(sym, f"C_{k}")))
        steps += _counter_steps(f"Counter_{j}", n)
    return EditScript(tuple(steps + _who_pays_steps(n) + _counter_steps("Counter", n)))


# -- cryptographers without identifiers ---------------------------------------------------

_PAIRING = ("pair_nn", "ann_h", "ann_t", "lis_h", "lis_t")


def _dc0_crypto(i: int) -> Module:
    me = f"C_{i}"
    one_coin = any_of(
        all_of(Count("coin_h", "=", 1), Count("coin_t", "=", 0)),
        all_of(Count("coin_t", "=", 1), Count("coin_h", "=", 0)),
    )
    pairing = any_of(*[StateIs(q) for q in _PAIRING])
    success = all_of(pairing, Count("listening", "=", 1), one_coin)
    announce = {"announce_h", "announce_t"}
    avail = {"idle": {"wait"}, "pair_nn": announce | {"listen", "skip"},
             "ann_h": {"listen", "skip"}, "ann_t": {"listen", "skip"},
             "lis_h": announce | {"skip"}, "lis_t": announce | {"skip"},
             "same": {"check"}, "differ": {"check"},
             "say_eq": {"say"}, "say_diff": {"say"}, "done_eq": {"nop"}, "done_diff": {"nop"}}
    out = {("idle", "wait"): NONE, ("same", "check"): NONE, ("differ", "check"): NONE,
           ("say_eq", "say"): _single(("say_equal", "*")),
           ("say_diff", "say"): _single(("say_diff", "*")),
           ("done_eq", "nop"): NONE, ("done_diff", "nop"): NONE}
    trans = {("idle", "wait", "go"): {"pair_nn"}, ("idle", "wait", "idle"): {"idle"}}
    for q in _PAIRING:
        for a in avail[q]:
            out[(q, a)] = {"announce_h": _single(("coin_h", "*")),
                           "announce_t": _single(("coin_t", "*")),
                           "listen": _single(("listening", "*")), "skip": NONE}[a]
            trans[(q, a, "idle")] = {q}
    for c in "ht":
        trans[("pair_nn", f"announce_{c}", f"pair_{c}")] = {f"ann_{c}"}
        trans[("pair_nn", "listen", f"pair_{c}")] = {f"lis_{c}"}
        trans[("pair_nn", "skip", f"pair_{c}")] = {"pair_nn"}
        for mine in "ht":
            verdict = "same" if mine == c else "differ"
            trans[(f"ann_{mine}", "listen", f"pair_{c}")] = {verdict}
            trans[(f"lis_{mine}", f"announce_{c}", f"pair_{c}")] = {verdict}
            trans[(f"ann_{mine}", "skip", f"pair_{c}")] = {f"ann_{mine}"}
            trans[(f"lis_{mine}", "skip", f"pair_{c}")] = {f"lis_{mine}"}
    trans.update({
        ("same", "check", "idle"): {"say_eq"}, ("same", "check", "paying"): {"say_diff"},
        ("differ", "check", "idle"): {"say_diff"}, ("differ", "check", "paying"): {"say_eq"},
        ("say_eq", "say", "idle"): {"done_eq"}, ("say_diff", "say", "idle"): {"done_diff"},
        ("done_eq", "nop", "idle"): {"done_eq"}, ("done_diff", "nop", "idle"): {"done_diff"},
    })
    return Module(
        name=me,
        states=("idle", *_PAIRING, "same", "differ", "say_eq", "say_diff", "done_eq", "done_diff"),
        init={"idle"}, avail=avail, out=out,
        in_list=decision_list(
            (all_of(StateIs("idle"), Has("confirm")), {"go"}),
            (all_of(success, Has("coin_h")), {"pair_h"}),
            (all_of(success, Has("coin_t")), {"pair_t"}),
            (all_of(any_of(StateIs("same"), StateIs("differ")), Has("i_pay")), {"paying"}),
            (TRUE, {"idle"}),
        ),
        trans=trans,
        props={f"uttered_equal_{i}"},
        valuation={f"uttered_equal_{i}": {"done_eq"}},
    )


def _dc0_pay(i: int) -> Module:
    me = f"C_{i}"
    waiting = ("sent_want", "sent_no")
    trans = {
        ("decide", "want", "idle"): {"sent_want"},
        ("decide", "decline", "idle"): {"sent_no"},
        ("sent_want", "wait", "confirm"): {"paying"},
        ("sent_no", "wait", "confirm"): {"not_paying"},
        ("paying", "remind", "idle"): {"paying"},
        ("not_paying", "nop", "idle"): {"not_paying"},
    }
    for q in waiting:
        trans[(q, "wait", "retry")] = {"decide"}
        trans[(q, "wait", "idle")] = {q}
    return Module(
        name=f"Pay_{i}",
        states=("decide", "sent_want", "sent_no", "paying", "not_paying"),
        init={"decide"},
        avail={"decide": {"want", "decline"}, "sent_want": {"wait"}, "sent_no": {"wait"},
               "paying": {"remind"}, "not_paying": {"nop"}},
        out={("decide", "want"): _single(("want_pay", "Oracle")),
             ("decide", "decline"): _single(("no_pay", "Oracle")),
             ("sent_want", "wait"): NONE, ("sent_no", "wait"): NONE,
             ("paying", "remind"): _single(("i_pay", me)),
             ("not_paying", "nop"): NONE},
        in_list=decision_list(
            (Has("confirm"), {"confirm"}),
            (Has("retry"), {"retry"}),
            (TRUE, {"idle"}),
        ),
        trans=trans,
        props={f"paid_{i}"},
        valuation={f"paid_{i}": {"paying"}},
    )


def dc0_crypto(i: int, n: int | None = None) -> Agent:
    """Every cryptographer is the same agent up to its id (``n`` is ignored)."""
    return Agent(f"C_{i}", (_dc0_crypto(i), _dc0_pay(i)))


def oracle() -> Agent:
    listen = StateIs("listen")
    mod = Module(
        name="Oracle",
        states=("listen", "one", "none", "conflict", "done_one", "done_none"),
        init={"listen"},
        avail={"listen": {"judge"}, "one": {"confirm"}, "none": {"confirm"},
               "conflict": {"reject"}, "done_one": {"nop"}, "done_none": {"nop"}},
        out={("listen", "judge"): NONE,
             ("one", "confirm"): _single(("confirm", "*")),
             ("none", "confirm"): _single(("confirm", "*")),
             ("conflict", "reject"): _single(("retry", "*")),
             ("done_one", "nop"): NONE, ("done_none", "nop"): NONE},
        in_list=decision_list(
            (all_of(listen, Count("want_pay", ">=", 2)), {"clash"}),
            (all_of(listen, Has("want_pay")), {"one_payer"}),
            (listen, {"no_payer"}),
            (TRUE, {"idle"}),
        ),
        trans={
            ("listen", "judge", "clash"): {"conflict"},
            ("listen", "judge", "one_payer"): {"one"},
            ("listen", "judge", "no_payer"): {"none"},
            ("one", "confirm", "idle"): {"done_one"},
            ("none", "confirm", "idle"): {"done_none"},
            ("conflict", "reject", "idle"): {"listen"},
            ("done_one", "nop", "idle"): {"done_one"},
            ("done_none", "nop", "idle"): {"done_none"},
        },
        props={"paid_by_crypto"},
        valuation={"paid_by_crypto": {"one", "done_one"}},
    )
    return Agent("Oracle", (mod,))


def dc0_counter() -> Agent:
    mod = Module(
        name="Counter", states=("even", "odd"), init={"even"},
        avail={"even": {"count"}, "odd": {"count"}},
        out={("even", "count"): NONE, ("odd", "count"): NONE},
        in_list=decision_list((Count("say_diff", "=", 1), {"flip"}), (TRUE, {"idle"})),
        trans={("even", "count", "flip"): {"odd"}, ("odd", "count", "flip"): {"even"},
               ("even", "count", "idle"): {"even"}, ("odd", "count", "idle"): {"odd"}},
        props={"result_odd"}, valuation={"result_odd": {"odd"}},
    )
    return Agent("Counter", (mod,))


def dc0(n: int) -> MIS:
    _check_n("dc0", n)
    return MIS.build([oracle(), dc0_counter(), *(dc0_crypto(i) for i in range(1, n + 1))])


def dc0_script(n: int) -> EditScript:
    return EditScript(())


# -- family dispatch ------------------------------------------------------------------------

GENERATORS = {"ttc": ttc, "dc1": dc1, "dc2": dc2, "dc0": dc0}
_SCRIPTS = {"ttc": ttc_script, "dc1": dc1_script, "dc2": dc2_script, "dc0": dc0_script}
_NEW = {"ttc": lambda n: train(n + 1), "dc1": lambda n: dc1_crypto(n + 1, n + 1),
        "dc2": lambda n: dc2_crypto(n + 1, n + 1), "dc0": lambda n: dc0_crypto(n + 1)}


def generate(name: str, n: int) -> MIS:
    if name not in GENERATORS:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    return GENERATORS[name](n)


def new_agent(name: str, n: int) -> Agent:
    """The agent that joins ``family(n)`` to make ``family(n + 1)``."""
    return _NEW[name](n)


def family_scripts(name: str, n: int) -> EditScript:
    """Script turning ``family(n) (+) new_agent(name, n)`` into ``family(n + 1)``."""
    _check_n(name, n)
    return _SCRIPTS[name](n)


# -- predicates (text form, see analysis.parse_predicate) ---------------------------------------

def _and(parts) -> str:
    parts = list(parts)
    return " and ".join(f"({p})" for p in parts) if parts else "true"


def _or(parts) -> str:
    parts = list(parts)
    return " or ".join(f"({p})" for p in parts) if parts else "false"


def _iff(a: str, b: str) -> str:
    return f"(({a}) and ({b})) or (not ({a}) and not ({b}))"


def _xor_chain(parts) -> str:
    acc = "false"
    for p in parts:
        acc = f"(({acc}) and not ({p})) or (not ({acc}) and ({p}))"
    return acc


def mutual_exclusion(n: int) -> str:
    pairs = [f"not (local(tr_{i}, in) and local(tr_{j}, in))"
             for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return _and(pairs)


def paid(family: str, n: int, i: int) -> str:
    if family == "dc0":
        return f"local(Pay_{i}, paying)"
    return f"local(Who_pays, pay_{i})"


def some_paid(family: str, n: int) -> str:
    return "paid_by_crypto"


def protocol_complete(family: str, n: int) -> str:
    done = [f"local(C_{i}, done_eq) or local(C_{i}, done_diff)" for i in range(1, n + 1)]
    if family == "dc0":
        done.append("local(Oracle, done_one) or local(Oracle, done_none)")
    return _and(done)


def utterance_xor(n: int) -> str:
    """True iff an odd number of cryptographers said the coins differ."""
    return _xor_chain([f"not uttered_equal_{i}" for i in range(1, n + 1)])


def parity_correct(family: str, n: int) -> str:
    """In complete states both the utterances' XOR and the counter(s) report payment."""
    paid_any = some_paid(family, n)
    claims = [_iff(utterance_xor(n), paid_any), _iff("result_odd", paid_any)]
    if family == "dc2":
        claims += [_iff(f"result_odd_{i}", paid_any) for i in range(1, n + 1)]
    return f"not ({protocol_complete(family, n)}) or ({_and(claims)})"


def at_most_one_payer(family: str, n: int) -> str:
    return _and(f"not ({paid(family, n, i)} and {paid(family, n, j)})"
                for i in range(1, n + 1) for j in range(i + 1, n + 1))


def anonymity_query(family: str, n: int, observer: int = 1, suspect: int = 2):
    """(agent, scope, secret) for the check that ``C_observer`` cannot tell who paid."""
    scope = _and([protocol_complete(family, n), some_paid(family, n),
                  f"not ({paid(family, n, observer)})"])
    return f"C_{observer}", scope, paid(family, n, suspect)
