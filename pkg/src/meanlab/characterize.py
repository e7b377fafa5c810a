"""Identify which power mean a black-box system is, and verify the claim.

The probe family ``indicator_probe(system, s)`` evaluates the system on the
two-point configuration with values (1, 0) and weight ``s`` on the 1.  For the
power mean with exponent p > 0 this equals ``s**(1/p)``; for p = +inf it is
identically 1; for p <= 0 it is identically 0 (the zero annihilates).  Taking
logs turns the family into a line through the origin whose slope is 1/p, so a
least-squares fit over a fixed sample grid recovers the exponent.

``rational_sandwich`` brackets the system's value at an arbitrary weighting
between its values at two nearby rational weightings on a denominator-D grid,
one reachable from the target by moving weight only toward smaller values and
one only toward larger values.  For systems satisfying the transfer law the
three values are ordered, and the bracket width shrinks linearly in the grid
spacing.

``verify_characterization`` combines both: recover an exponent from the probe,
then stress-test the claim on uniform weightings, on exact rational weightings
(also cross-checked against the system's own value on the expanded uniform
form, which uses no recovered exponent at all), and on sandwich brackets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    Exponent,
    POS_INF,
    ValueVector,
    Weighting,
    expand_rational,
    power_mean,
    uniform,
)
from .systems import MeanSystem

__all__ = [
    "indicator_probe",
    "RecoveryResult",
    "recover_exponent",
    "SandwichResult",
    "rational_sandwich",
    "transfer_slope_estimate",
    "CharacterizationConfig",
    "StageReport",
    "CharacterizationReport",
    "verify_characterization",
    "recovery_to_dict",
    "sandwich_to_dict",
    "characterization_to_dict",
]

_TINY = 1e-300


def indicator_probe(system: MeanSystem, s: float) -> float:
    """Value of ``system`` on values (1, 0) with weight ``s`` on the 1."""
    if not 0.0 < s <= 1.0:
        raise ValueError("probe weight s must lie in (0, 1]")
    if s == 1.0:
        return system(Weighting(np.array([1.0])), ValueVector(np.array([1.0])))
    return system(Weighting(np.array([s, 1.0 - s])), ValueVector(np.array([1.0, 0.0])))


# ── Exponent recovery ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class RecoveryResult:
    """Outcome of fitting the probe family.

    ``reciprocal_slope`` is the fitted slope of -log(probe) against -log(s),
    clamped to [0, 1]; the recovered exponent is its reciprocal (+inf at 0).
    ``reciprocal_slope_raw`` is the unclamped fit, kept as a diagnostic.  When
    every probe value is (numerically) zero the system annihilates the zero
    value at all sampled weights — consistent with every exponent <= 0 but
    with no single one — and ``degenerate_zero`` is set with no exponent.
    ``single_point_gap`` compares the fit against the closed-form slope from
    the s = 1/2 sample alone, on the slope scale.
    """

    exponent: Exponent | None
    reciprocal_slope: float | None
    reciprocal_slope_raw: float | None
    fit_residual: float
    degenerate_zero: bool
    samples: tuple[tuple[float, float], ...]
    single_point_exponent: float | None
    single_point_gap: float | None


def recover_exponent(system: MeanSystem, sample_count: int = 30) -> RecoveryResult:
    """Fit the probe family on a fixed grid and return the implied exponent.

    The grid is t = 0.1, 0.2, ..., 0.1*sample_count in -log(s), plus t = log 2
    (i.e. s = 1/2 exactly) for the single-point cross-check.  Raises
    ``ValueError`` if a probe value is negative, above 1, non-finite, or zero
    at some sample points but not others; no single exponent produces that.
    """
    if sample_count < 2:
        raise ValueError("need at least two sample points")
    ts = [0.1 * k for k in range(1, sample_count + 1)]
    ss = [math.exp(-t) for t in ts]
    ts.append(math.log(2.0))
    ss.append(0.5)

    probes = [indicator_probe(system, s) for s in ss]
    for s, q in zip(ss, probes):
        if not math.isfinite(q) or q < 0.0:
            raise ValueError(f"probe value {q!r} at s={s!r} is not in [0, 1]")
        if q > 1.0 + 1e-9:
            raise ValueError(f"probe value {q!r} at s={s!r} exceeds 1")
    samples = tuple(zip(ts, probes))

    if max(probes) <= _TINY:
        return RecoveryResult(None, None, None, 0.0, True, samples, None, None)
    if min(probes) <= 0.0:
        raise ValueError(
            "probe hits zero at some sample points but not others; "
            "no single exponent is consistent with that"
        )

    phis = [-math.log(q) for q in probes]
    raw = math.fsum(t * f for t, f in zip(ts, phis)) / math.fsum(t * t for t in ts)
    scale = max(1.0, max(abs(f) for f in phis))
    fit_residual = max(abs(f - raw * t) for t, f in zip(ts, phis)) / scale

    slope = min(1.0, max(0.0, raw))
    exponent = POS_INF if slope == 0.0 else Exponent.finite(1.0 / slope)

    phi_half = phis[-1]
    single_slope = phi_half / math.log(2.0)
    single_exponent = math.inf if single_slope <= 0.0 else 1.0 / single_slope
    gap = abs(single_slope - slope)
    return RecoveryResult(exponent, slope, raw, fit_residual, False, samples,
                          single_exponent, gap)


# ── Rational sandwich brackets ────────────────────────────────────────────────


@dataclass(frozen=True)
class SandwichResult:
    """Bracketing rational weightings and the three system values."""

    w_lower: Weighting
    w_upper: Weighting
    denominator: int
    delta: float
    value_lower: float
    value_at: float
    value_upper: float

    @property
    def gap(self) -> float:
        return self.value_upper - self.value_lower

    @property
    def ordered(self) -> bool:
        tol = 1e-12 * max(1.0, abs(self.value_at))
        return (self.value_lower <= self.value_at + tol
                and self.value_at <= self.value_upper + tol)


def _sweep(w: Weighting, order: np.ndarray, denominator: int) -> Weighting:
    # Sweep in the given order, flooring each weight (plus accumulated carry)
    # to the grid; the carry flows to later positions in the sweep, and the
    # final position absorbs whatever remains.  Exact rational arithmetic.
    d = denominator
    numerators = [0] * len(order)
    carry = Fraction(0)
    for j, idx in enumerate(order[:-1]):
        exact = Fraction(float(w.entries[idx])) + carry
        k = math.floor(exact * d)
        numerators[idx] = k
        carry = exact - Fraction(k, d)
    assigned = sum(numerators)
    numerators[order[-1]] = d - assigned
    if numerators[order[-1]] < 0:
        raise ValueError("weights sum above 1 beyond tolerance; cannot bracket")
    exact = tuple(Fraction(k, d) for k in numerators)
    return Weighting(np.array([k / d for k in numerators]), exact=exact)


def rational_sandwich(system: MeanSystem, w: Weighting, x: ValueVector,
                      delta: float, max_denominator: int = 10 ** 6) -> SandwichResult:
    """Bracket ``system(w, x)`` between denominator-D rational weightings.

    D is the smallest integer with 2/D <= delta, so both brackets differ from
    ``w`` by less than delta in every coordinate.  The upper bracket is built
    by sweeping coordinates in ascending order of value (carry drifts toward
    larger values); the lower one sweeps descending.  Raises ``ValueError``
    when delta is out of range or D would exceed ``max_denominator``.
    """
    if not (0.0 < delta <= 1.0):
        raise ValueError("delta must lie in (0, 1]")
    if len(w) != len(x):
        raise ValueError("weighting and value vector must have equal length")
    d = math.ceil(2.0 / delta)
    if d > max_denominator:
        raise ValueError(f"denominator {d} exceeds max_denominator={max_denominator}")
    ascending = np.argsort(x.entries, kind="stable")
    w_upper = _sweep(w, ascending, d)
    w_lower = _sweep(w, ascending[::-1], d)
    return SandwichResult(
        w_lower=w_lower,
        w_upper=w_upper,
        denominator=d,
        delta=delta,
        value_lower=system(w_lower, x),
        value_at=system(w, x),
        value_upper=system(w_upper, x),
    )


def transfer_slope_estimate(system: MeanSystem, w: Weighting, x: ValueVector,
                            step: float) -> float:
    """Sum of finite-difference slopes along adjacent value-ordered transfers.

    For each adjacent pair in ascending order of value, move ``step`` weight
    from the smaller-value coordinate to the larger one and measure the change
    in the system's value per unit weight moved.  The sum bounds how fast the
    value can change under any combination of such transfers, which is exactly
    how sandwich brackets differ from their target.  Requires every weight to
    exceed ``step``.
    """
    order = np.argsort(x.entries, kind="stable")
    if np.any(w.entries[order[:-1]] < step):
        raise ValueError("every weight (except the largest-value one) must exceed step")
    base = system(w, x)
    total = 0.0
    for j in range(len(order) - 1):
        shifted = w.entries.copy()
        shifted[order[j]] -= step
        shifted[order[j + 1]] += step
        total += abs(system(Weighting(shifted), x) - base) / step
    return total


# ── Staged verification ───────────────────────────────────────────────────────


@dataclass(frozen=True)
class CharacterizationConfig:
    seed: int = 0
    trials: int = 120
    max_n: int = 8
    rel_tol: float = 1e-9
    slack: float = 1e-12
    deltas: tuple[float, ...] = (1e-2, 1e-3)
    weight_denominator_max: int = 100
    sample_count: int = 30

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.max_n < 2:
            raise ValueError("max_n must be at least 2")
        if not self.deltas or any(not 0.0 < d <= 1.0 for d in self.deltas):
            raise ValueError("deltas must be a nonempty tuple of values in (0, 1]")


@dataclass(frozen=True)
class StageReport:
    name: str
    passed: bool
    trials: int
    worst_residual: float
    detail: dict | None = None


@dataclass(frozen=True)
class CharacterizationReport:
    """Verdicts: 'consistent', 'counterexample', or 'degenerate'."""

    verdict: str
    recovery: RecoveryResult | None
    stages: tuple[StageReport, ...]
    note: str | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "consistent"


def _stage_rng(cfg: CharacterizationConfig, stage: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((cfg.seed, 100 + stage, trial))


def _stage_values(rng: np.random.Generator, n: int, zero_prob: float = 0.1) -> np.ndarray:
    vals = np.power(10.0, rng.uniform(-4.0, 4.0, n))
    vals[rng.random(n) < zero_prob] = 0.0
    return vals


def _stage_uniform(system: MeanSystem, cfg: CharacterizationConfig,
                   p: Exponent) -> StageReport:
    worst = 0.0
    for trial in range(cfg.trials):
        rng = _stage_rng(cfg, 0, trial)
        n = int(rng.integers(1, cfg.max_n + 1))
        x = ValueVector(_stage_values(rng, n))
        w = uniform(n)
        try:
            got = system(w, x)
        except ArithmeticError as exc:
            return StageReport("uniform", False, trial + 1, math.inf,
                               {"n": n, "x": x.entries.tolist(), "error": str(exc)})
        want = power_mean(p, w, x)
        resid = abs(got - want) / max(abs(got), abs(want), 1e-300)
        if resid > cfg.rel_tol:
            return StageReport("uniform", False, trial + 1, resid,
                               {"n": n, "x": x.entries.tolist(),
                                "system_value": got, "power_mean_value": want})
        worst = max(worst, resid)
    return StageReport("uniform", True, cfg.trials, worst)


def _rational_weighting(rng: np.random.Generator, n: int, denominator_max: int,
                        positive_only: bool) -> Weighting:
    q = int(rng.integers(max(2, n if positive_only else 2), denominator_max + 1))
    probs = rng.dirichlet(np.ones(n))
    if positive_only:
        counts = np.ones(n, dtype=np.int64) + rng.multinomial(q - n, probs)
    else:
        counts = rng.multinomial(q, probs)
    exact = tuple(Fraction(int(k), q) for k in counts)
    return Weighting(counts / q, exact=exact)


def _stage_rational(system: MeanSystem, cfg: CharacterizationConfig,
                    p: Exponent) -> StageReport:
    worst = 0.0
    for trial in range(cfg.trials):
        rng = _stage_rng(cfg, 1, trial)
        n = int(rng.integers(1, cfg.max_n + 1))
        w = _rational_weighting(rng, n, cfg.weight_denominator_max,
                                system.positivity_only)
        x = ValueVector(_stage_values(rng, n))
        try:
            got = system(w, x)
            uw, ux = expand_rational(w, x)
            via_uniform = system(uw, ux)
        except ArithmeticError as exc:
            return StageReport("rational", False, trial + 1, math.inf,
                               {"w": w.entries.tolist(), "x": x.entries.tolist(),
                                "error": str(exc)})
        want = power_mean(p, w, x)
        resid_p = abs(got - want) / max(abs(got), abs(want), 1e-300)
        resid_u = abs(got - via_uniform) / max(abs(got), abs(via_uniform), 1e-300)
        resid = max(resid_p, resid_u)
        if resid > cfg.rel_tol:
            return StageReport("rational", False, trial + 1, resid,
                               {"w": w.entries.tolist(), "x": x.entries.tolist(),
                                "system_value": got, "power_mean_value": want,
                                "expanded_uniform_value": via_uniform})
        worst = max(worst, resid)
    return StageReport("rational", True, cfg.trials, worst)


def _stage_sandwich(system: MeanSystem, cfg: CharacterizationConfig) -> StageReport:
    trials = max(1, cfg.trials // 4)
    worst = 0.0
    for trial in range(trials):
        rng = _stage_rng(cfg, 2, trial)
        n = int(rng.integers(2, cfg.max_n + 1))
        g = rng.exponential(1.0, n)
        w = Weighting(0.5 * g / g.sum() + 0.5 / n)  # every entry >= 1/(2n)
        x = ValueVector(np.power(10.0, rng.uniform(-3.0, 3.0, n)))
        for delta in cfg.deltas:
            try:
                sr = rational_sandwich(system, w, x, delta)
                slope = transfer_slope_estimate(system, w, x, delta)
            except ArithmeticError as exc:
                return StageReport("sandwich", False, trial + 1, math.inf,
                                   {"w": w.entries.tolist(), "x": x.entries.tolist(),
                                    "delta": delta, "error": str(exc)})
            scale = max(1.0, abs(sr.value_at))
            order_violation = max(sr.value_lower - sr.value_at,
                                  sr.value_at - sr.value_upper) / scale
            width_excess = (sr.gap - 4.0 * slope * delta) / scale - cfg.slack
            resid = max(order_violation - cfg.slack, width_excess)
            if resid > 0.0:
                return StageReport(
                    "sandwich", False, trial + 1, resid,
                    {"w": w.entries.tolist(), "x": x.entries.tolist(),
                     "delta": delta, "value_lower": sr.value_lower,
                     "value_at": sr.value_at, "value_upper": sr.value_upper,
                     "gap": sr.gap, "slope_estimate": slope})
            worst = max(worst, resid)
    return StageReport("sandwich", True, trials, worst)


def verify_characterization(system: MeanSystem,
                            cfg: CharacterizationConfig | None = None,
                            ) -> CharacterizationReport:
    """Recover an exponent, then stress-test the identification.

    Stages: (1) uniform weightings against the recovered power mean; (2) exact
    rational weightings against both the recovered power mean and the system's
    own value on the expanded uniform form; (3) sandwich brackets — ordering
    plus width at most 4 * slope * delta.  Any probe inconsistency or stage
    failure yields verdict 'counterexample'; an all-zero probe yields
    'degenerate' (exponent not identifiable from this probe family).
    """
    cfg = cfg or CharacterizationConfig()
    try:
        recovery = recover_exponent(system, cfg.sample_count)
    except ValueError as exc:
        return CharacterizationReport("counterexample", None, (), note=str(exc))
    except ArithmeticError as exc:
        return CharacterizationReport("counterexample", None, (),
                                      note=f"probe evaluation failed: {exc}")
    if recovery.degenerate_zero:
        return CharacterizationReport(
            "degenerate", recovery, (),
            note="probe is identically zero; exponent not identifiable")

    assert recovery.exponent is not None
    stages = (
        _stage_uniform(system, cfg, recovery.exponent),
        _stage_rational(system, cfg, recovery.exponent),
        _stage_sandwich(system, cfg),
    )
    verdict = "consistent" if all(s.passed for s in stages) else "counterexample"
    return CharacterizationReport(verdict, recovery, stages)


# ── Serialization ─────────────────────────────────────────────────────────────


def recovery_to_dict(result: RecoveryResult) -> dict:
    exponent = None if result.exponent is None else str(result.exponent)
    return {
        "exponent": exponent,
        "reciprocal_slope": result.reciprocal_slope,
        "reciprocal_slope_raw": result.reciprocal_slope_raw,
        "fit_residual": result.fit_residual,
        "degenerate_zero": result.degenerate_zero,
        "samples": [[t, q] for t, q in result.samples],
        "single_point_exponent": result.single_point_exponent,
        "single_point_gap": result.single_point_gap,
    }


def sandwich_to_dict(result: SandwichResult) -> dict:
    return {
        "w_lower": result.w_lower.entries.tolist(),
        "w_upper": result.w_upper.entries.tolist(),
        "denominator": result.denominator,
        "delta": result.delta,
        "value_lower": result.value_lower,
        "value_at": result.value_at,
        "value_upper": result.value_upper,
        "gap": result.gap,
        "ordered": result.ordered,
    }


def characterization_to_dict(report: CharacterizationReport) -> dict:
    d = {
        "verdict": report.verdict,
        "passed": report.passed,
        "recovery": recovery_to_dict(report.recovery) if report.recovery else None,
        "stages": [
            {
                "name": s.name,
                "passed": s.passed,
                "trials": s.trials,
                "worst_residual": s.worst_residual,
                "detail": s.detail,
            }
            for s in report.stages
        ],
    }
    if report.note is not None:
        d["note"] = report.note
    return d
