"""Audit harness for rational isometries of the disk into weighted products
of balls.

A candidate ``f = (f_1, ..., f_m)`` with weights ``λ_j`` is an isometry when

    ∏ (1 - ‖f_j(w)‖²)^{λ_j} = 1 - |w|².

For rational candidates the expected conclusion is rigid: the weights sum to
one and every factor is itself an isometry of the disk into its ball.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConclusionViolated, NotAnIsometry, PoleOnGrid
from .germ import DiskIsometry, evaluate, polar_grid
from .rational import (
    Poly,
    RationalMap,
    eval_rational,
    is_infinity,
    rational_from_json,
    rational_to_json,
)

__all__ = [
    "WeightedCandidate",
    "AuditReport",
    "IntakeResult",
    "weighted_residual",
    "rigidity_audit",
    "rationality_intake",
    "candidate_corpus",
    "candidate_to_json",
    "candidate_from_json",
]

PRECONDITION_TOL = 1e-9
POLE_MARGIN = 1e-6
PROPER_TOL = 1e-8
WEIGHT_TOL = 1e-10
FACTOR_TOL = 1e-8
BOUNDARY_SAMPLES = 128


@dataclass(frozen=True)
class WeightedCandidate:
    components: tuple  # tuple of tuples of RationalMap, one tuple per factor
    weights: tuple

    def __post_init__(self):
        comps = tuple(tuple(c) for c in self.components)
        weights = tuple(float(x) for x in self.weights)
        if len(comps) != len(weights) or not comps:
            raise ValueError("need one positive weight per factor")
        if any(not x > 0 for x in weights):
            raise ValueError("weights must be positive")
        for fj in comps:
            if not fj or all(c.is_zero or c.degree == 0 for c in fj):
                raise ValueError("every factor must be nonconstant")
            if any(abs(eval_rational(c, 0)) > 1e-12 for c in fj):
                raise ValueError("every factor must vanish at the origin")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", weights)

    @property
    def m(self) -> int:
        return len(self.components)

    def norms_squared(self, w) -> list:
        out = []
        for fj in self.components:
            acc = 0.0
            for c in fj:
                v = eval_rational(c, w)
                if is_infinity(v) or not np.isfinite(v):
                    raise PoleOnGrid(f"component has a pole at w = {w}")
                acc += abs(v) ** 2
            out.append(acc)
        return out

    def poles(self) -> list:
        return [complex(p) for fj in self.components for c in fj if c.den.degree > 0 for p in c.poles()]


def _pole_check(c: WeightedCandidate, grid):
    poles = c.poles()
    for w in grid:
        for p in poles:
            if abs(w - p) <= 1e-12 * max(1.0, abs(p)):
                raise PoleOnGrid(f"grid point {w} is a pole")


def weighted_residual(c: WeightedCandidate, grid) -> float:
    """``max |∏(1 - ‖f_j(w)‖²)^{λ_j} - (1 - |w|²)|`` over ``grid``.

    A factor leaving its ball makes the product undefined and yields ``inf``.
    """
    grid = [complex(w) for w in np.ravel(grid)]
    _pole_check(c, grid)
    worst = 0.0
    for w in grid:
        prod = 1.0
        for s, lam in zip(c.norms_squared(w), c.weights):
            base = 1 - s
            if base <= 0:
                return math.inf
            prod *= base**lam
        worst = max(worst, abs(prod - (1 - abs(w) ** 2)))
    return worst


@dataclass
class AuditReport:
    weighted_residual: float
    min_pole_distance: float
    properness_gap: float
    weight_sum: float
    factor_residual: float
    assertions: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.assertions.values())

    def to_json(self) -> dict:
        return {
            "weighted_residual": self.weighted_residual,
            "min_pole_distance": self.min_pole_distance,
            "properness_gap": self.properness_gap,
            "weight_sum": self.weight_sum,
            "factor_residual": self.factor_residual,
            "assertions": dict(self.assertions),
            "passed": self.passed,
        }


def rigidity_audit(c: WeightedCandidate, grid=None) -> AuditReport:
    """Check that an isometric rational candidate is a product of disk
    isometries with weights summing to one.

    Raises :class:`NotAnIsometry` if the weighted identity fails on the grid
    (200 points by default) and :class:`ConclusionViolated` if any of the
    four conclusions fails.
    """
    grid = polar_grid() if grid is None else np.ravel(grid)
    res = weighted_residual(c, grid)
    if not res < PRECONDITION_TOL:
        raise NotAnIsometry(f"weighted residual {res:.3e} on the grid")

    poles = c.poles()
    pole_gap = min((abs(abs(p) - 1) for p in poles), default=math.inf)

    circle = np.exp(2j * np.pi * np.arange(BOUNDARY_SAMPLES) / BOUNDARY_SAMPLES)
    proper = 0.0
    for b in circle:
        for s in c.norms_squared(complex(b)):
            proper = max(proper, abs(s - 1))

    wsum = float(math.fsum(c.weights))
    factor = 0.0
    for w in grid:
        w = complex(w)
        for s in c.norms_squared(w):
            factor = max(factor, abs((1 - s) - (1 - abs(w) ** 2)))

    report = AuditReport(
        float(res),
        float(pole_gap),
        float(proper),
        wsum,
        float(factor),
        {
            "no_boundary_poles": pole_gap > POLE_MARGIN,
            "factors_proper": proper <= PROPER_TOL,
            "weights_sum_to_one": abs(wsum - 1) <= WEIGHT_TOL,
            "factors_isometric": factor < FACTOR_TOL,
        },
    )
    if not report.passed:
        failed = [k for k, v in report.assertions.items() if not v]
        raise ConclusionViolated(", ".join(failed))
    return report


@dataclass
class IntakeResult:
    rational: bool
    degree: int | None
    inside_residual: float
    outside_residual: float

    @property
    def verdict(self) -> str:
        return "rational" if self.rational else "outside-hypothesis"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "degree": self.degree,
            "inside_residual": self.inside_residual,
            "outside_residual": self.outside_residual,
        }


def _pade(c, d):
    """Type ``(d, d)`` Padé approximant from Taylor coefficients ``c``."""
    if d == 0:
        return Poly([c[0]]), Poly([1])
    # q_0 = 1 and sum_j q_j c_{k-j} = 0 for k = d+1 .. 2d
    a = np.array([[c[k - j] if k - j >= 0 else 0 for j in range(1, d + 1)] for k in range(d + 1, 2 * d + 1)])
    b = -np.array([c[k] for k in range(d + 1, 2 * d + 1)])
    q = np.concatenate([[1.0], np.linalg.lstsq(a, b, rcond=None)[0]])
    p = np.array([sum(q[j] * c[k - j] for j in range(0, k + 1)) for k in range(d + 1)])
    return Poly(p), Poly(q)


def rationality_intake(
    iso: DiskIsometry,
    max_degree: int = 12,
    radius: float = 0.9,
    samples: int = 256,
    tol: float = 1e-10,
) -> IntakeResult:
    """Decide whether the first component of ``iso`` is a rational function.

    Taylor coefficients of ``f1`` come from samples on ``|w| = radius``.  For
    each ``d <= max_degree`` the ``(d, d)`` Padé approximant ``r`` is tested
    on fresh points of the disk and, since a rational ``f1`` would invert
    ``R`` on the whole sphere, by ``R(r(w)) = w`` on ``|w| = 2``.  Algebraic
    germs can be matched inside the disk but not outside it, so they end up
    outside the hypothesis of the rigidity statement.
    """
    if iso.degenerate:
        return IntakeResult(True, 0, 0.0, 0.0)
    nodes = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    vals = np.array([evaluate(iso, w)[0] for w in nodes])
    coeffs = np.fft.fft(vals) / samples / radius ** np.arange(samples)
    inner = 0.95 * np.exp(2j * np.pi * (np.arange(37) + 0.3) / 37)
    inner_vals = np.array([evaluate(iso, w)[0] for w in inner])
    outer = 2.0 * np.exp(2j * np.pi * (np.arange(29) + 0.1) / 29)
    best_in = best_out = math.inf
    for d in range(0, max_degree + 1):
        p, q = _pade(coeffs, d)
        r = RationalMap(p, q)
        fit_in = max(abs(eval_rational(r, w) - v) for w, v in zip(inner, inner_vals))
        fit_out = 0.0
        for w in outer:
            v = eval_rational(r, w)
            back = eval_rational(iso.R, v)
            fit_out = max(fit_out, math.inf if is_infinity(back) else abs(back - w) / abs(w))
        best_in, best_out = min(best_in, fit_in), min(best_out, fit_out)
        if fit_in < tol and fit_out < 1e-8:
            return IntakeResult(True, d, float(fit_in), float(fit_out))
    return IntakeResult(False, None, float(best_in), float(best_out))


def candidate_corpus(count: int = 24, seed: int = 0) -> list:
    """Rational isometric candidates: each factor is a rotated copy of ``w``
    placed along a unit vector, with random positive weights summing to 1."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        m = 1 + k % 4
        weights = rng.dirichlet(np.ones(m))
        comps = []
        for _ in range(m):
            dim = int(rng.integers(1, 4))
            u = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            u *= np.exp(1j * rng.uniform(0, 2 * np.pi)) / np.linalg.norm(u)
            comps.append(tuple(RationalMap(Poly([0, x]), Poly([1])) for x in u))
        out.append(WeightedCandidate(tuple(comps), tuple(weights)))
    return out


def candidate_to_json(c: WeightedCandidate) -> dict:
    return {
        "components": [[rational_to_json(r) for r in fj] for fj in c.components],
        "weights": list(c.weights),
    }


def candidate_from_json(obj) -> WeightedCandidate:
    comps = tuple(tuple(rational_from_json(r) for r in fj) for fj in obj["components"])
    return WeightedCandidate(comps, tuple(obj["weights"]))

