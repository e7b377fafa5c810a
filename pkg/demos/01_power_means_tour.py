"""Tour of weighted power means: limits, transport, tensors, rational expansion.

Run:  python3 demos/01_power_means_tour.py
"""

import math
from fractions import Fraction

import numpy as np

from meanlab import (
    IndexMap,
    ValueVector,
    Weighting,
    embed,
    expand_rational,
    power_mean,
    pushforward,
    tensor_values,
    tensor_weights,
    uniform,
)

w = Weighting((0.2, 0.3, 0.5))
x = ValueVector((1.0, 4.0, 9.0))

print("weights", w.entries, " values", x.entries)
print()
print("exponent sweep (monotone in p):")
for p in (-math.inf, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0, math.inf):
    print(f"  p = {p:>5}: {power_mean(p, w, x):.6f}")

# the extremes only look at coordinates that carry weight
spiky = Weighting((0.0, 1.0))
tall = ValueVector((100.0, 3.0))
print()
print("max over the support ignores weight-zero coords:",
      power_mean(math.inf, spiky, tall))

# transport: merging coordinates via an index map preserves the mean
merge = IndexMap(3, 2, (0, 0, 1))
wm = pushforward(merge, w)
xm = ValueVector((power_mean(1.0, Weighting((0.4, 0.6)), ValueVector((1.0, 4.0))), 9.0))
print()
print("pushforward of weights along 3->2 merge:", wm.entries,
      "exact:", wm.exact)

# padding values with zeros along an injection never changes a norm
inj = IndexMap(2, 4, (3, 1))
print("embed (1, 2) into four slots via {0->3, 1->1}:",
      embed(inj, ValueVector((1.0, 2.0))).entries)

# tensor products multiply: M_p(w (x) v, x (x) y) = M_p(w, x) * M_p(v, y)
v = Weighting((0.25, 0.75))
y = ValueVector((2.0, 8.0))
lhs = power_mean(2.0, tensor_weights(w, v), tensor_values(x, y))
rhs = power_mean(2.0, w, x) * power_mean(2.0, v, y)
print()
print(f"tensor multiplicativity at p=2: {lhs:.12f} == {rhs:.12f}")

# rational weights reduce to a uniform mean over repeated coordinates
wr = Weighting((0.25, 0.75), exact=(Fraction(1, 4), Fraction(3, 4)))
xr = ValueVector((1.0, 5.0))
uw, ux = expand_rational(wr, xr)
print()
print("expand (1/4, 3/4) on (1, 5)  ->  uniform over", ux.entries)
print(f"  direct   M_3 = {power_mean(3.0, wr, xr):.15f}")
print(f"  expanded M_3 = {power_mean(3.0, uw, ux):.15f}")

# uniform weights and a single unit spike: the classic prefactor n^(-1/p)
print()
print("unit-spike prefactor, n = 16:")
spike = ValueVector(np.concatenate([[1.0], np.zeros(15)]))
for p in (1.0, 2.0, 4.0):
    print(f"  p = {p}: {power_mean(p, uniform(16), spike):.6f}"
          f"   (n^(-1/p) = {16.0 ** (-1.0 / p):.6f})")
