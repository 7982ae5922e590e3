"""Three dining cryptographers in the broadcast (dc1), direct-channel (dc2)
and identifier-free (dc0) variants.

For each variant the script checks that the parity of the utterances reveals
whether a cryptographer paid, then asks whether cryptographer 1 can tell which
colleague paid.
"""
from miskit import benchmarks as bench
from miskit.analysis import check_invariant, epistemic_check
from miskit.unfolding import unfold


def main():
    for fam in ("dc1", "dc2", "dc0"):
        g = unfold(bench.generate(fam, 3))
        parity = check_invariant(g, bench.parity_correct(fam, 3))
        print(f"{fam}(3): {len(g.states)} states, {g.transition_count()} transitions, "
              f"parity {'correct' if parity else 'WRONG'}")

    g = unfold(bench.dc1(3))
    for suspect in (2, 3):
        agent, scope, secret = bench.anonymity_query("dc1", 3, 1, suspect)
        res = epistemic_check(g, agent, scope, secret)
        print(f"C_1 cannot single out C_{suspect} as payer: {'yes' if res else 'no'}")

    # the payer always knows, which shows the check can fail
    res = epistemic_check(g, "Who_pays", bench.protocol_complete("dc1", 3), bench.paid("dc1", 3, 1))
    print(f"Who_pays can single out C_1: {'no' if res else 'yes, at ' + str(res.state)}")


if __name__ == "__main__":
    main()
