"""Trains sharing a one-lane tunnel.

Checks that at most one train is inside for one to three trains, then breaks
the controller's release guard and prints the shortest trace that puts two
trains inside at once.
"""
from miskit import benchmarks as bench
from miskit.analysis import check_invariant
from miskit.unfolding import unfold


def main():
    for n in (1, 2, 3):
        g = unfold(bench.ttc(n))
        verdict = check_invariant(g, bench.mutual_exclusion(n))
        print(f"ttc({n}): {len(g.states)} states, mutual exclusion "
              f"{'holds' if verdict else 'violated'}")

    g = unfold(bench.ttc_sabotaged(2))
    res = check_invariant(g, bench.mutual_exclusion(2))
    print("\ncontroller that releases the tunnel before the train reports it has left:")
    print(res.trace.format())


if __name__ == "__main__":
    main()
