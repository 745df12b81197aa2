"""The one-parameter family ``f_{ζ,n}`` with ``R_ζ(z) = z((ζ̄z - 1)/(z - ζ))ⁿ``.

Closed forms for its ramification, the regime split at
``|ζ| = (n-1)/(n+1)``, rotation equivariance, and a numerical check that
for ``n = 2`` and small ``|ζ|`` the isometry extends past the closed disk.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._jsonutil import encode_complex
from .branch import branch_data
from .errors import (
    ContinuationFailure,
    CrossCheckMismatch,
    HypothesisViolated,
    InvalidZeta,
    SampleAtSingularity,
)
from .germ import DiskIsometry, _continue, evaluate, polar_grid, solve_germ, verify
from .rational import Poly, RationalMap, coefficient_distance, eval_rational, is_infinity
from .unitary import build_family_unitary

__all__ = [
    "RamificationProfile",
    "ExtensionReport",
    "critical_modulus",
    "closed_form_ramification",
    "closed_form_R",
    "family_map",
    "rotation_equivariance_residual",
    "boundary_extension_check",
    "second_component_residual",
    "sweep",
    "sweep_csv",
    "SWEEP_COLUMNS",
]

REGIME_TOL = 1e-12
CLOSED_FORM_TOL = 1e-12
RAMIFICATION_MATCH = 1e-8

SWEEP_COLUMNS = (
    "zeta_re",
    "zeta_im",
    "n",
    "regime",
    "a_plus_re",
    "a_plus_im",
    "a_minus_re",
    "a_minus_im",
    "max_residual",
)


def _check_zeta(zeta) -> complex:
    zeta = complex(zeta)
    if not (0 < abs(zeta) < 1):
        raise InvalidZeta(f"zeta must satisfy 0 < |zeta| < 1, got {zeta}")
    return zeta


def critical_modulus(n: int) -> float:
    return (n - 1) / (n + 1)


@dataclass(frozen=True)
class RamificationProfile:
    zeta: complex
    n: int
    a_plus: complex
    a_minus: complex
    regime: str  # "A_n", "Critical" or "B_n"
    discriminant: float
    branch_plus: complex
    branch_minus: complex

    @property
    def branch_values_coincide(self) -> bool:
        return abs(self.branch_plus - self.branch_minus) <= 1e-8

    def to_json(self) -> dict:
        return {
            "zeta": encode_complex(self.zeta),
            "n": self.n,
            "regime": self.regime,
            "discriminant": self.discriminant,
            "a_plus": encode_complex(self.a_plus),
            "a_minus": encode_complex(self.a_minus),
            "branch_plus": encode_complex(self.branch_plus),
            "branch_minus": encode_complex(self.branch_minus),
            "branch_values_coincide": self.branch_values_coincide,
        }


def closed_form_R(zeta, n: int) -> RationalMap:
    zeta = _check_zeta(zeta)
    num = Poly([0, 1])
    den = Poly([1])
    for _ in range(n):
        num = num * Poly([-1, zeta.conjugate()])
        den = den * Poly([-zeta, 1])
    return RationalMap(num, den)


def closed_form_ramification(zeta, n: int, cross_check: bool = False) -> RamificationProfile:
    """The two ramification points ``a±`` besides ``ζ`` and ``1/ζ̄``.

    With ``r = |ζ|`` the discriminant is
    ``D = (n-1)² - (2n²+2) r² + (n+1)² r⁴`` and
    ``a± = ((n+1) r² + 1 - n ± √D) / (2ζ̄)``, taking ``+i√|D|`` for ``a+``
    when ``D < 0``.  ``cross_check`` compares against numerically computed
    roots of ``p'q - pq'``.
    """
    zeta = _check_zeta(zeta)
    n = int(n)
    if n < 2:
        raise ValueError("n must be at least 2")
    r2 = abs(zeta) ** 2
    disc = (n - 1) ** 2 - (2 * n * n + 2) * r2 + (n + 1) ** 2 * r2 * r2
    gap = abs(zeta) - critical_modulus(n)
    if abs(gap) < REGIME_TOL:
        regime = "Critical"
    elif gap > 0:
        regime = "A_n"
    else:
        regime = "B_n"
    if regime == "Critical":
        # D vanishes to first order in the gap; its square root would turn
        # rounding noise of size 1e-16 into a spurious split of size 1e-8
        root = 0.0
    else:
        root = math.sqrt(disc) if disc >= 0 else 1j * math.sqrt(-disc)
    base = (n + 1) * r2 + 1 - n
    a_plus = (base + root) / (2 * zeta.conjugate())
    a_minus = (base - root) / (2 * zeta.conjugate())
    R = closed_form_R(zeta, n)
    profile = RamificationProfile(
        zeta,
        n,
        complex(a_plus),
        complex(a_minus),
        regime,
        float(disc),
        complex(eval_rational(R, a_plus)),
        complex(eval_rational(R, a_minus)),
    )
    if cross_check:
        pts = [p for p, _ in branch_data(R).ramification if not is_infinity(p)]
        for a in (profile.a_plus, profile.a_minus):
            if min(abs(a - p) for p in pts) > RAMIFICATION_MATCH:
                raise CrossCheckMismatch(f"closed-form point {a} is not a critical point")
    return profile


def family_map(zeta, n: int) -> DiskIsometry:
    """The isometry built from :func:`build_family_unitary`, with its ``R``
    checked against the closed form."""
    frame = build_family_unitary(zeta, n)
    iso = solve_germ(frame)
    gap = coefficient_distance(iso.R, closed_form_R(zeta, n))
    if gap >= CLOSED_FORM_TOL:
        raise CrossCheckMismatch(f"determinant R differs from closed form by {gap:.3e}")
    return iso


def rotation_equivariance_residual(zeta, theta: float, n: int, samples) -> float:
    """``max |R_{ζe^{iθ}}(z) - e^{-i(n-1)θ} R_ζ(e^{-iθ}z)|`` with both maps
    built from their frames."""
    zeta = _check_zeta(zeta)
    rot = cmath.exp(1j * theta)
    left = solve_germ(build_family_unitary(zeta * rot, n)).R
    right = solve_germ(build_family_unitary(zeta, n)).R
    twist = cmath.exp(-1j * (n - 1) * theta)
    worst = 0.0
    for z in np.ravel(samples):
        z = complex(z)
        if abs(z - zeta * rot) <= 1e-9:
            raise SampleAtSingularity(f"sample {z} is a pole")
        a = eval_rational(left, z)
        b = eval_rational(right, z / rot)
        if is_infinity(a) or is_infinity(b):
            raise SampleAtSingularity(f"sample {z} is a pole")
        worst = max(worst, abs(a - twist * b))
    return worst


@dataclass
class ExtensionReport:
    zeta: complex
    eps: float
    branch_margin: float
    branch_distance: float
    continuation_residual: float
    max_abs_f1_on_circle: float
    min_component_pole_distance: float
    checks: dict
    failure: Optional[str] = None
    iso: Optional[DiskIsometry] = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "zeta": encode_complex(self.zeta),
            "eps": self.eps,
            "branch_margin": self.branch_margin,
            "branch_distance": self.branch_distance,
            "continuation_residual": self.continuation_residual,
            "max_abs_f1_on_circle": self.max_abs_f1_on_circle,
            "min_component_pole_distance": self.min_component_pole_distance,
            "checks": dict(self.checks),
            "failure": self.failure,
            "passed": self.passed,
        }


def boundary_extension_check(
    zeta, eps: float = 0.05, n: int = 2, branch_margin: float = 0.01, samples: int = 64
) -> ExtensionReport:
    """Evidence that ``f_{ζ,2}`` extends holomorphically past the closed disk.

    Four checks: (i) every finite branch value of ``R_ζ`` keeps at least
    ``branch_margin`` from the unit circle; (ii) radial continuation reaches
    ``|w| = 1 + eps`` with ``|R(f1) - w| < 1e-9``; (iii) ``|f1| < 1`` on the
    unit circle; (iv) ``f1`` keeps ``1e-6`` away from the poles of the
    ``R_j`` on the unit circle.  When all pass, the report carries a copy of
    the isometry that may be evaluated for ``|w| < 1 + eps``.
    """
    zeta = _check_zeta(zeta)
    if n != 2 or not abs(zeta) < 1 / 3:
        raise HypothesisViolated("extension check needs n = 2 and |zeta| < 1/3")
    if not eps > 0:
        raise ValueError("eps must be positive")
    iso = family_map(zeta, n)

    bd = branch_data(iso.R)
    finite = [b for b, _ in bd.branch if not is_infinity(b)]
    branch_distance = min(abs(abs(b) - 1) for b in finite)

    angles = 2 * np.pi * np.arange(samples) / samples
    circle = np.exp(1j * angles)
    failure = None
    residual = 0.0
    for w in (1 + eps) * circle:
        try:
            f = _continue(iso, complex(w))
            residual = max(residual, abs(iso.R(f) - w))
        except ContinuationFailure as exc:
            residual = math.inf
            failure = f"continuation to |w| = {1 + eps}: {exc}"
            break

    max_f1 = 0.0
    pole_gap = math.inf
    comp_poles = [complex(p) for c in iso.components if not c.is_zero for p in c.poles()]
    for w in circle:
        try:
            f = _continue(iso, complex(w))
        except ContinuationFailure as exc:
            max_f1 = math.inf
            failure = failure or f"continuation to the unit circle: {exc}"
            break
        max_f1 = max(max_f1, abs(f))
        for p in comp_poles:
            pole_gap = min(pole_gap, abs(f - p))

    checks = {
        "branch_values_off_circle": bool(branch_distance >= branch_margin),
        "continuation_beyond_circle": bool(residual < 1e-9),
        "image_of_closed_disk_inside": bool(max_f1 < 1),
        "component_poles_avoided": bool(pole_gap >= 1e-6),
    }
    report = ExtensionReport(
        zeta,
        float(eps),
        float(branch_margin),
        float(branch_distance),
        float(residual),
        float(max_f1),
        float(pole_gap),
        checks,
        failure,
    )
    if report.passed:
        report.iso = iso.with_extension(1 + eps)
    return report


def second_component_residual(zeta, samples) -> float:
    """``max |f2_2(w) - √(1-|ζ|²) f1(w)/(f1(w) - ζ)|`` for ``n = 2``."""
    zeta = _check_zeta(zeta)
    iso = family_map(zeta, 2)
    s = math.sqrt(1 - abs(zeta) ** 2)
    worst = 0.0
    for w in np.ravel(samples):
        f = evaluate(iso, complex(w))
        worst = max(worst, abs(f[2] - s * f[0] / (f[0] - zeta)))
    return worst


def _sweep_row(args):
    zeta, n, grid = args
    prof = closed_form_ramification(zeta, n)
    rep = verify(family_map(zeta, n), grid)
    return (
        zeta.real,
        zeta.imag,
        n,
        prof.regime,
        prof.a_plus.real,
        prof.a_plus.imag,
        prof.a_minus.real,
        prof.a_minus.imag,
        max(rep.max_functional, rep.max_defining),
    )


def sweep(zetas, n: int, grid=None, jobs: int = 1):
    """One row per ``ζ`` (see :data:`SWEEP_COLUMNS`), in input order."""
    if grid is None:
        grid = polar_grid(8, 4, 0.9)
    tasks = [(complex(z), int(n), grid) for z in zetas]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_row, tasks))
    return [_sweep_row(t) for t in tasks]


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
    return buf.getvalue()
