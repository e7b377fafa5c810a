"""Run the axiom suite against honest and dishonest exponents.

The suite checks ten laws with seeded generators, so every run of this script
prints the same thing.  Below 1 the power mean stops being midpoint convex,
and the checker finds (and shrinks to) the classic two-point witness.

Run:  python3 demos/02_axiom_suite.py
"""

from meanlab import CheckConfig, builtin_power_mean_system, run_full_suite

cfg = CheckConfig(seed=42, trials=400)


def show(p):
    system = builtin_power_mean_system(p)
    print(f"--- {system.label} ---")
    for report in run_full_suite(system, cfg):
        status = "ok " if report.passed else "FAIL"
        line = f"  [{status}] {report.property_name:<16} trials={report.trials_run:<4}"
        line += f" worst={report.worst_residual:.2e}"
        if report.note:
            line += f"  ({report.note})"
        print(line)
        if report.counterexample is not None:
            ce = report.counterexample
            print(f"         witness: w={ce.w} x={ce.x} aux={ce.aux}")
            print(f"         lhs={ce.lhs}  rhs={ce.rhs}  residual={ce.residual:.3e}")
    print()


show(2.0)       # everything passes
show(0.5)       # convexity fails on the first, hand-picked trial
