"""Cost of letting one more agent join each benchmark family.

Prints the per-instance edit cost, the fitted growth class, and the
per-category breakdown of the script that adds a fourth cryptographer.
"""
from miskit import benchmarks as bench
from miskit.openness import COMPONENT_SCHEMA, openness_family_fit, openness_report


def main():
    for fam, ns in (("ttc", range(1, 5)), ("dc1", range(3, 7)),
                    ("dc2", range(3, 6)), ("dc0", range(3, 6))):
        fit = openness_family_fit(lambda n: bench.generate(fam, n),
                                  lambda n: bench.family_scripts(fam, n),
                                  lambda n: bench.new_agent(fam, n), ns)
        print(f"{fam}: costs {fit.costs} -> {fit.verdict}")

    rep = openness_report(bench.dc1(3), bench.new_agent("dc1", 3), bench.dc1_script(3),
                          constraint=bench.parity_correct("dc1", 4), base="dc1(3)")
    print("\n" + rep.table())
    print(f"\nsame script with new states priced like availability entries: "
          f"{bench.dc1_script(3).cost(COMPONENT_SCHEMA)}")


if __name__ == "__main__":
    main()
