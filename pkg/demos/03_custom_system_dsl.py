"""Define mean systems with the expression DSL and audit them.

A system is any rule (w, x) -> value.  The DSL builds one from a formula in
`w` and `x`; the suite then treats it as a black box.  The root-mean-square
written by hand passes every law, while dropping the root breaks consistency
with a one-atom counterexample.

Run:  python3 demos/03_custom_system_dsl.py
"""

from meanlab import (
    CheckConfig,
    ValueVector,
    Weighting,
    dsl_mean_system,
    eval_mean_expr,
    format_mean_expr,
    parse_mean_expr,
    run_full_suite,
    suite_passed,
)

tree = parse_mean_expr("sum(w * x^2) ^ 0.5")
print("parsed:", tree)
print("pretty:", format_mean_expr(tree))
print("value on w=(1/2,1/2), x=(1,7):",
      eval_mean_expr(tree, Weighting((0.5, 0.5)), ValueVector((1.0, 7.0))))
print()

cfg = CheckConfig(seed=0, trials=300)

rms = dsl_mean_system("sum(w*x^2)^0.5")
reports = run_full_suite(rms, cfg)
print(f"{rms.label!r}: all ten laws pass -> {suite_passed(reports)}")
print()

broken = dsl_mean_system("sum(w*x^2)")
print(f"{broken.label!r}:")
for report in run_full_suite(broken, cfg):
    if report.passed:
        continue
    ce = report.counterexample
    print(f"  {report.property_name} fails after {report.trials_run} trial(s)")
    print(f"    shrunk witness: w={ce.w} x={ce.x} aux={ce.aux}")
    print(f"    lhs={ce.lhs}  rhs={ce.rhs}")

# sum(w*x^2) on the single atom c keeps w=(1,) but squares the value:
# M((1,), (c)) = c^2 != c whenever c is not 0 or 1.
