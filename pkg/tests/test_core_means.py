"""Core evaluation: frozen examples against independent oracles, then law
properties under seeded random sweeps."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from meanlab import (
    Exponent,
    IndexMap,
    NEG_INF,
    POS_INF,
    SignedVector,
    ValueVector,
    Weighting,
    ZERO,
    as_exponent,
    embed,
    expand_rational,
    norm_from_mean,
    normalize_weights,
    p_norm,
    power_mean,
    power_mean_oracle,
    pullback,
    pushforward,
    tensor_values,
    tensor_weights,
    uniform,
)


def W(*entries):
    return Weighting(np.array(entries, dtype=np.float64))


def V(*entries):
    return ValueVector(np.array(entries, dtype=np.float64))


def S(*entries):
    return SignedVector(np.array(entries, dtype=np.float64))


# ── Exponent type ─────────────────────────────────────────────────────────────


def test_exponent_parse_and_str():
    assert Exponent.parse("2").as_float() == 2.0
    assert Exponent.parse("p=2".removeprefix("p=")).as_float() == 2.0
    assert Exponent.parse("inf") == POS_INF
    assert Exponent.parse("-inf") == NEG_INF
    assert Exponent.parse("0") == ZERO
    assert str(POS_INF) == "inf" and str(NEG_INF) == "-inf" and str(ZERO) == "0"
    assert str(Exponent.finite(2.0)) == "2.0"
    with pytest.raises(ValueError):
        Exponent.parse("two")
    with pytest.raises(ValueError):
        Exponent.finite(0.0)  # the zero exponent has its own tag
    with pytest.raises(ValueError):
        Exponent.finite(math.inf)


def test_exponent_ordering():
    chain = [NEG_INF, Exponent.finite(-3.0), ZERO, Exponent.finite(0.25),
             Exponent.finite(2.0), POS_INF]
    for lo, hi in zip(chain, chain[1:]):
        assert lo < hi and hi > lo and lo <= hi and not hi <= lo
    assert as_exponent(2.0) == Exponent.finite(2.0)
    assert as_exponent(math.inf) == POS_INF
    assert as_exponent(0.0) == ZERO
    assert as_exponent(POS_INF) is POS_INF


def test_exponent_from_real_rejects_nan():
    with pytest.raises(ValueError):
        Exponent.from_real(math.nan)


# ── Container validation ──────────────────────────────────────────────────────


def test_weighting_validation():
    with pytest.raises(ValueError):
        W(-0.1, 1.1)  # negative entry
    with pytest.raises(ValueError):
        W(0.5, 0.6)  # sums to 1.1
    with pytest.raises(ValueError):
        W()  # empty
    with pytest.raises(ValueError):
        Weighting(np.array([0.5, 0.5]), exact=(Fraction(1, 3), Fraction(2, 3)))
    w = W(0.5, 0.5)
    with pytest.raises(ValueError):
        w.entries[0] = 0.9  # frozen storage
    assert W(0.0, 1.0, 0.0).support.tolist() == [False, True, False]


def test_value_vector_validation():
    with pytest.raises(ValueError):
        V(-1.0)
    with pytest.raises(ValueError):
        V(math.inf)
    with pytest.raises(ValueError):
        V()
    assert len(S()) == 0  # signed vectors may be empty and negative
    assert S(-2.0)[0] == -2.0


def test_index_map_validation():
    f = IndexMap(3, 2, (0, 0, 1))
    assert not f.injective and f.surjective
    assert IndexMap.identity(3).bijective
    with pytest.raises(ValueError):
        IndexMap(2, 2, (0, 2))  # image out of range
    with pytest.raises(ValueError):
        IndexMap(2, 2, (0,))  # wrong arity


def test_uniform_and_normalize():
    u = uniform(3)
    assert u.exact == (Fraction(1, 3),) * 3
    assert math.isclose(float(u.entries.sum()), 1.0, abs_tol=1e-15)
    w = normalize_weights([2.0, 6.0])
    assert w.entries.tolist() == [0.25, 0.75]
    with pytest.raises(ValueError):
        normalize_weights([0.0, 0.0])
    with pytest.raises(ValueError):
        uniform(0)


# ── Frozen evaluation examples ────────────────────────────────────────────────
# Each expected value is derived independently right here before being frozen.


def test_quadratic_mean_frozen():
    want = math.sqrt((1.0 ** 2 + 7.0 ** 2) / 2.0)  # = 5 exactly
    assert want == 5.0
    assert power_mean(2, uniform(2), V(1.0, 7.0)) == 5.0


def test_half_exponent_two_point_frozen():
    # (0.5·√1 + 0.5·√0)² = 0.25 — the midpoint-convexity witness value
    want = (0.5 * math.sqrt(1.0) + 0.5 * math.sqrt(0.0)) ** 2
    assert want == 0.25
    assert power_mean(0.5, W(0.5, 0.5), V(1.0, 0.0)) == 0.25


def test_geometric_mean_frozen():
    want = math.sqrt(4.0 * 9.0)  # = 6 exactly
    assert want == 6.0
    assert power_mean(ZERO, uniform(2), V(4.0, 9.0)) == 6.0
    assert power_mean(0, uniform(2), V(4.0, 9.0)) == 6.0


def test_extremes_respect_support():
    w = W(0.5, 0.5, 0.0)
    x = V(1.0, 2.0, 5.0)
    assert power_mean(POS_INF, w, x) == 2.0  # 5 carries no weight
    assert power_mean(NEG_INF, w, x) == 1.0
    assert power_mean(math.inf, W(0.2, 0.8), V(3.0, 7.0)) == 7.0


def test_zero_values_and_signs_of_p():
    # any zero on the support annihilates for p <= 0 ...
    assert power_mean(-1.0, W(0.5, 0.5), V(0.0, 4.0)) == 0.0
    assert power_mean(ZERO, W(0.5, 0.5), V(0.0, 4.0)) == 0.0
    assert power_mean(NEG_INF, W(0.5, 0.5), V(0.0, 4.0)) == 0.0
    # ... while p > 0 keeps the zero as an ordinary value
    assert power_mean(1.0, W(0.5, 0.5), V(0.0, 4.0)) == 2.0
    assert power_mean(POS_INF, W(0.5, 0.5), V(0.0, 4.0)) == 4.0
    assert power_mean(2.0, W(1.0), V(0.0)) == 0.0


def test_point_mass_is_exact():
    for p in (ZERO, NEG_INF, POS_INF, Exponent.finite(3.5), Exponent.finite(-7.0)):
        assert power_mean(p, W(0.0, 1.0), V(123.456, 0.7)) == 0.7


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        power_mean(2, W(1.0), V(1.0, 2.0))


def test_oracle_extreme_magnitudes_frozen():
    # Independent closed form: for x = (1e-200, 1e200), u_2, p = 200 the small
    # entry is negligible and M = 1e200 · (1/2)^(1/200).
    with mpmath.workprec(320):
        want = float(mpmath.mpf(10) ** 200 * mpmath.mpf(2) ** (mpmath.mpf(-1) / 200))
    got = power_mean_oracle(200.0, uniform(2), V(1e-200, 1e200), precision_bits=512)
    assert got == want
    fast = power_mean(200.0, uniform(2), V(1e-200, 1e200))
    assert math.isclose(fast, want, rel_tol=1e-13)


def test_oracle_matches_simple_cases():
    assert power_mean_oracle(2, uniform(2), V(1.0, 7.0)) == 5.0
    assert power_mean_oracle(ZERO, uniform(2), V(4.0, 9.0)) == 6.0
    assert power_mean_oracle(POS_INF, W(0.5, 0.5, 0.0), V(1.0, 2.0, 5.0)) == 2.0
    assert power_mean_oracle(-3.0, W(0.5, 0.5), V(0.0, 4.0)) == 0.0
    with pytest.raises(ValueError):
        power_mean_oracle(2, uniform(2), V(1.0, 7.0), precision_bits=16)


# ── Transport operations ──────────────────────────────────────────────────────


def test_pushforward_frozen():
    f = IndexMap(3, 2, (0, 0, 1))
    got = pushforward(f, W(0.2, 0.3, 0.5))
    assert got.entries.tolist() == [0.5, 0.5]


def test_pushforward_exact_fractions():
    f = IndexMap(3, 2, (0, 0, 1))
    w = Weighting(np.array([1 / 3, 1 / 3, 1 / 3]), exact=(Fraction(1, 3),) * 3)
    got = pushforward(f, w)
    assert got.exact == (Fraction(2, 3), Fraction(1, 3))


def test_pullback_frozen():
    f = IndexMap(3, 2, (0, 0, 1))
    assert pullback(f, V(5.0, 9.0)).entries.tolist() == [5.0, 5.0, 9.0]
    with pytest.raises(ValueError):
        pullback(IndexMap(0, 2, ()), V(5.0, 9.0))


def test_embed_zero_fill():
    f = IndexMap(2, 4, (3, 1))
    assert embed(f, S(7.0, -2.0)).entries.tolist() == [0.0, -2.0, 0.0, 7.0]
    with pytest.raises(ValueError):
        embed(IndexMap(2, 2, (0, 0)), S(1.0, 2.0))  # not injective


def test_tensor_row_major():
    w = tensor_weights(W(0.25, 0.75), W(0.5, 0.5))
    assert w.entries.tolist() == [0.125, 0.125, 0.375, 0.375]
    x = tensor_values(V(1.0, 2.0), V(3.0, 4.0))
    assert x.entries.tolist() == [3.0, 4.0, 6.0, 8.0]
    assert isinstance(tensor_values(S(1.0), S(-1.0)), SignedVector)
    with pytest.raises(TypeError):
        tensor_values(V(1.0), S(1.0))


def test_tensor_weights_exact():
    got = tensor_weights(uniform(2), uniform(3))
    assert got.exact == (Fraction(1, 6),) * 6


# ── Norms ─────────────────────────────────────────────────────────────────────


def test_p_norm_frozen():
    assert p_norm(1, S(1.0, -2.0, 3.0)) == 6.0
    assert p_norm(2, S(3.0, 4.0)) == 5.0
    assert p_norm(POS_INF, S(1.0, -2.0, 3.0)) == 3.0
    assert p_norm(2, S()) == 0.0
    assert p_norm(2, S(0.0, 0.0)) == 0.0
    with pytest.raises(ValueError):
        p_norm(0.5, S(1.0))  # q < 1 is not a norm


def test_two_ones_norm_curve():
    for q in (1.0, 1.5, 2.0, 3.0, 10.0):
        want = 2.0 ** (1.0 / q)
        assert math.isclose(p_norm(q, S(1.0, 1.0)), want, rel_tol=1e-15)
    assert p_norm(POS_INF, S(1.0, 1.0)) == 1.0


def test_norm_from_mean_frozen():
    # n^(1/q)·M_1(u_n, |x|) at q=1: 3 · (6/3) = 6
    assert norm_from_mean(lambda w, x: power_mean(1, w, x), 1, S(1.0, 2.0, 3.0)) == 6.0
    assert norm_from_mean(lambda w, x: power_mean(POS_INF, w, x), POS_INF, S(-5.0, 2.0)) == 5.0
    assert norm_from_mean(lambda w, x: power_mean(2, w, x), 2, S()) == 0.0


# ── Rational expansion ────────────────────────────────────────────────────────


def test_expand_rational_frozen():
    w = Weighting(np.array([1 / 3, 2 / 3]), exact=(Fraction(1, 3), Fraction(2, 3)))
    uw, ux = expand_rational(w, V(2.0, 5.0))
    assert uw.exact == (Fraction(1, 3),) * 3
    assert ux.entries.tolist() == [2.0, 5.0, 5.0]


def test_expand_rational_drops_zero_weight():
    w = Weighting(np.array([0.0, 1.0]), exact=(Fraction(0), Fraction(1)))
    uw, ux = expand_rational(w, V(9.0, 4.0))
    assert len(uw) == 1 and ux.entries.tolist() == [4.0]


def test_expand_rational_guards():
    with pytest.raises(ValueError):
        expand_rational(W(0.5, 0.5), V(1.0, 2.0))  # no exact fractions attached
    w = Weighting(np.array([1 / 997, 996 / 997]),
                  exact=(Fraction(1, 997), Fraction(996, 997)))
    with pytest.raises(ValueError):
        expand_rational(w, V(1.0, 2.0), max_size=100)


def test_expand_rational_preserves_the_mean():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        q = int(rng.integers(1, 60))
        counts = rng.multinomial(q, rng.dirichlet(np.ones(n)))
        w = Weighting(counts / q, exact=tuple(Fraction(int(c), q) for c in counts))
        x = V(*np.power(10.0, rng.uniform(-3, 3, n)))
        uw, ux = expand_rational(w, x)
        for p in (1.0, 2.0, ZERO, POS_INF):
            a, b = power_mean(p, w, x), power_mean(p, uw, ux)
            assert abs(a - b) <= 1e-12 * max(abs(a), abs(b), 1e-300)


# ── Law sweeps over seeded random inputs ──────────────────────────────────────

_P_GRID = [NEG_INF, Exponent.finite(-3.0), Exponent.finite(-1.0), ZERO,
           Exponent.finite(0.5), Exponent.finite(1.0), Exponent.finite(2.0),
           Exponent.finite(7.5), POS_INF]


def _random_weights(rng, n):
    g = rng.exponential(1.0, n)
    return Weighting(g / g.sum())


def test_internality_sweep():
    # min over support <= M <= max over support, allowing an ulp-scale margin
    rng = np.random.default_rng(101)
    for _ in range(300):
        n = int(rng.integers(1, 9))
        w = _random_weights(rng, n)
        x = V(*np.power(10.0, rng.uniform(-6, 6, n)))
        sup = x.entries[w.support]
        lo, hi = float(sup.min()), float(sup.max())
        for p in _P_GRID:
            m = power_mean(p, w, x)
            assert lo * (1 - 1e-12) <= m <= hi * (1 + 1e-12)


def test_homogeneity_sweep():
    rng = np.random.default_rng(102)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        w = _random_weights(rng, n)
        x = np.power(10.0, rng.uniform(-4, 4, n))
        c = float(10.0 ** rng.uniform(-3, 3))
        for p in (ZERO, Exponent.finite(-2.0), Exponent.finite(3.0), POS_INF):
            a = power_mean(p, w, ValueVector(c * x))
            b = c * power_mean(p, w, ValueVector(x))
            assert abs(a - b) <= 1e-12 * max(a, b)


def test_multiplicativity_sweep():
    rng = np.random.default_rng(103)
    for _ in range(200):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        w, v = _random_weights(rng, n), _random_weights(rng, m)
        x = V(*np.power(10.0, rng.uniform(-3, 3, n)))
        y = V(*np.power(10.0, rng.uniform(-3, 3, m)))
        for p in (Exponent.finite(1.0), Exponent.finite(2.5), ZERO, POS_INF):
            lhs = power_mean(p, tensor_weights(w, v), tensor_values(x, y))
            rhs = power_mean(p, w, x) * power_mean(p, v, y)
            assert abs(lhs - rhs) <= 1e-12 * max(lhs, rhs)


def test_duality_sweep():
    # M_{-p}(w, x) · M_p(w, 1/x) = 1 on strictly positive vectors
    rng = np.random.default_rng(104)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        w = _random_weights(rng, n)
        x = np.power(10.0, rng.uniform(-4, 4, n))
        for p in (0.5, 1.0, 2.0, 17.0):
            a = power_mean(-p, w, ValueVector(x))
            b = power_mean(p, w, ValueVector(1.0 / x))
            assert abs(a * b - 1.0) <= 1e-10


def test_exponent_monotonicity_sweep():
    rng = np.random.default_rng(105)
    grid = sorted(_P_GRID)
    for _ in range(150):
        n = int(rng.integers(2, 9))
        w = _random_weights(rng, n)
        x = V(*np.power(10.0, rng.uniform(-3, 3, n)))
        vals = [power_mean(p, w, x) for p in grid]
        for lo, hi in zip(vals, vals[1:]):
            assert lo <= hi * (1 + 1e-12)


def test_power_mean_tracks_oracle_spot_sweep():
    rng = np.random.default_rng(106)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        w = _random_weights(rng, n)
        x = V(*np.power(10.0, rng.uniform(-6, 6, n)))
        p = float(rng.choice([-30.0, -2.0, -0.5, 0.0, 0.5, 1.0, 3.0, 40.0]))
        got = power_mean(p, w, x)
        want = power_mean_oracle(p, w, x)
        assert abs(got - want) <= 1e-13 * max(abs(got), abs(want), 1e-300)


def test_norm_triangle_sweep():
    rng = np.random.default_rng(107)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        a = S(*(rng.standard_normal(n) * 10.0 ** rng.uniform(-3, 3)))
        b = S(*(rng.standard_normal(n) * 10.0 ** rng.uniform(-3, 3)))
        both = SignedVector(a.entries + b.entries)
        for q in (1.0, 1.5, 2.0, 3.0, POS_INF):
            na, nb, nab = p_norm(q, a), p_norm(q, b), p_norm(q, both)
            assert nab <= (na + nb) * (1 + 1e-12) + 1e-300


def test_norm_embed_and_permutation_exact():
    # zero-padding and shuffling leave the q-norm bit-for-bit unchanged
    rng = np.random.default_rng(108)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        m = n + int(rng.integers(0, 5))
        x = S(*(rng.standard_normal(n) * 10.0 ** rng.uniform(-4, 4)))
        images = tuple(int(i) for i in rng.choice(m, size=n, replace=False))
        padded = embed(IndexMap(n, m, images), x)
        shuffled = SignedVector(x.entries[rng.permutation(n)])
        for q in (1.0, 2.0, 2.7, POS_INF):
            want = p_norm(q, x)
            assert p_norm(q, padded) == want
            assert p_norm(q, shuffled) == want
