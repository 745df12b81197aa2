"""Solving the defining system of an isometry ``Δ → Δ × 𝔹ⁿ`` from its frame.

For a frame ``U`` the isometry ``f = (f1; f2_1, ..., f2_n)`` satisfies

    U (f1, f2_1, ..., f2_n)ᵀ = (w, f1 f2_1, ..., f1 f2_n)ᵀ.

Eliminating the ``f2`` block gives ``R(f1(w)) = w`` for a rational map ``R``
and ``f2_j = R_j ∘ f1``.  ``f1`` is the branch of ``R⁻¹`` through the origin,
evaluated here by numerical continuation along rays.
"""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._jsonutil import decode_array, encode_array
from .errors import ContinuationFailure, CrossCheckMismatch, DegenerateFrame, OutsideDomain
from .rational import (
    Poly,
    RationalMap,
    coefficient_distance,
    rational_from_json,
    rational_to_json,
    root_multiplicities,
)
from .unitary import UnitaryFrame, check_unitary, frame_from_json, frame_to_json

__all__ = [
    "DiskIsometry",
    "ResidueReport",
    "ContinuationContext",
    "rational_from_unitary",
    "schur_complement_rational",
    "component_rationals",
    "degenerate_solve",
    "solve_germ",
    "evaluate",
    "verify",
    "polar_grid",
    "isometry_to_json",
    "isometry_from_json",
]

DEGENERACY_TOL = 1e-12
CROSS_CHECK_TOL = 1e-10
CRITICAL_GUARD = 1e-6
FINAL_RESIDUAL = 1e-11

_INITIAL_STEP = 0.05
_MIN_STEP = 1e-6
_MAX_NEWTON = 25


def _frame(U) -> UnitaryFrame:
    return U if isinstance(U, UnitaryFrame) else check_unitary(U)


def _sampled_poly(fn, degree: int) -> Poly:
    """Recover a polynomial of known degree bound from values at roots of unity."""
    m = degree + 1
    nodes = np.exp(2j * np.pi * np.arange(m) / m)
    vals = np.array([fn(z) for z in nodes], dtype=complex)
    c = np.fft.fft(vals) / m
    scale = max(1.0, float(np.max(np.abs(c))))
    c[np.abs(c) <= 1e-15 * scale] = 0.0
    return Poly(c)


def _is_degenerate(frame: UnitaryFrame) -> bool:
    low = frame.lower
    scale = max(1.0, float(np.linalg.norm(low, 2))) ** low.shape[0]
    return abs(np.linalg.det(low)) <= DEGENERACY_TOL * scale


def _raw_rational(frame: UnitaryFrame) -> RationalMap:
    u = frame.entries
    n = frame.n
    shift = np.diag([0.0] + [1.0] * n)
    top = _sampled_poly(lambda z: np.linalg.det(u - z * shift), n)
    bottom = _sampled_poly(lambda z: np.linalg.det(frame.lower - z * np.eye(n)), n)
    return RationalMap(Poly([0, 1]) * top, bottom)


def schur_complement_rational(U) -> RationalMap:
    """``R`` via ``z u11 det(U'' - v u / u11 - z I) / det(U'' - z I)``.

    ``v`` is the first column below ``u11`` and ``u`` the first row beyond
    it.  Built from characteristic polynomials, independently of the
    sampled determinants used by :func:`rational_from_unitary`.
    """
    frame = _frame(U)
    if _is_degenerate(frame):
        raise DegenerateFrame("det U'' vanishes")
    u = frame.entries
    n = frame.n
    u11 = u[0, 0]
    schur_c = frame.lower - np.outer(u[1:, 0], u[0, 1:]) / u11
    sign = (-1) ** n
    # np.poly gives det(zI - M) in descending order
    top = sign * u11 * np.poly(schur_c)[::-1]
    bottom = sign * np.poly(frame.lower)[::-1]
    return RationalMap(Poly([0, 1]) * Poly(top), Poly(bottom))


def rational_from_unitary(U) -> RationalMap:
    """The rational map ``R`` with ``R(f1(w)) = w``.

    ``R(z) = z det(U - z diag(0, I)) / det(U'' - z I)``, checked against
    :func:`schur_complement_rational` and returned with common factors cancelled.
    """
    frame = _frame(U)
    if _is_degenerate(frame):
        raise DegenerateFrame("det U'' vanishes; first component is identically 0")
    raw = _raw_rational(frame)
    other = schur_complement_rational(frame)
    big = max(1.0, float(np.max(np.abs(raw.normalized().num.coeffs))))
    gap = coefficient_distance(raw, other) / big
    if gap >= CROSS_CHECK_TOL:
        raise CrossCheckMismatch(f"determinant forms of R disagree by {gap:.3e}")
    return raw.reduced()


def component_rationals(U) -> tuple:
    """``R_1, ..., R_n`` with ``f2_j = R_j ∘ f1``, from Cramer's rule on
    ``(U'' - z I) g = -z v``."""
    frame = _frame(U)
    if _is_degenerate(frame):
        raise DegenerateFrame("det U'' vanishes; components are linear in w")
    n = frame.n
    low = frame.lower
    v = frame.entries[1:, 0]
    eye = np.eye(n)
    bottom = _sampled_poly(lambda z: np.linalg.det(low - z * eye), n)

    def cramer(j):
        def fn(z):
            m = low - z * eye
            m[:, j] = -z * v
            return np.linalg.det(m)

        return fn

    out = []
    for j in range(n):
        top = _sampled_poly(cramer(j), n)
        if top.is_zero or np.max(np.abs(top.coeffs)) <= 1e-13:
            out.append(RationalMap(Poly(), Poly([1])))
        else:
            out.append(RationalMap(top, bottom).reduced())
    return tuple(out)


class ContinuationContext:
    """Cache of solved points ``(t, f1)`` along rays ``t e^{iφ}``.

    Evaluations on a ray restart from the furthest cached point not beyond
    the target.  A context is owned by one isometry; :meth:`clone` gives an
    independent copy for use in another thread.
    """

    def __init__(self, rays=None):
        self._rays = {} if rays is None else rays
        self._lock = threading.Lock()

    def clone(self) -> "ContinuationContext":
        with self._lock:
            return ContinuationContext({k: list(v) for k, v in self._rays.items()})

    def start(self, key, t):
        with self._lock:
            pts = self._rays.get(key)
            if not pts:
                return 0.0, 0j
            best = (0.0, 0j)
            for s, f in pts:
                if s <= t and s > best[0]:
                    best = (s, f)
            return best

    def record(self, key, t, f):
        with self._lock:
            self._rays.setdefault(key, []).append((t, f))

    def __len__(self):
        return sum(len(v) for v in self._rays.values())


@dataclass(frozen=True, eq=False)
class DiskIsometry:
    """A solved isometry germ.

    ``components`` holds the ``R_j``; when ``degenerate`` is true ``R`` is
    ``None``, ``f1 ≡ 0`` and ``f2 = linear * w``.
    """

    frame: UnitaryFrame
    R: Optional[RationalMap]
    components: tuple
    degenerate: bool = False
    linear: Optional[np.ndarray] = None
    extension_radius: float = 1.0
    continuation: ContinuationContext = field(
        default_factory=ContinuationContext, compare=False, repr=False
    )
    _critical: list = field(default_factory=list, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.frame.n

    def critical_points(self):
        """Finite critical points of ``R`` (computed once)."""
        if self.R is None:
            return []
        if not self._critical:
            w = self.R.critical_numerator()
            pts = [] if w.is_zero or w.degree < 1 else [z for z, _ in root_multiplicities(w)]
            self._critical.append(pts)
        return self._critical[0]

    def with_extension(self, radius: float) -> "DiskIsometry":
        return replace(
            self,
            extension_radius=float(radius),
            continuation=self.continuation.clone(),
            _critical=list(self._critical),
        )

    def clone(self) -> "DiskIsometry":
        return self.with_extension(self.extension_radius)

    def __call__(self, w):
        return evaluate(self, w)


@dataclass
class ResidueReport:
    samples: list
    max_functional: float
    max_defining: float

    def to_json(self):
        return {
            "max_functional": self.max_functional,
            "max_defining": self.max_defining,
            "max_residual": max(self.max_functional, self.max_defining),
            "count": len(self.samples),
        }


def degenerate_solve(U) -> DiskIsometry:
    """The linear isometry ``f = (0; U⁻¹(w, 0, ..., 0)ᵀ)`` of a frame with
    ``det U'' = 0``."""
    frame = _frame(U)
    lin = np.conj(frame.entries[0, 1:]).copy()
    lin.setflags(write=False)
    return DiskIsometry(frame, None, (), degenerate=True, linear=lin)


def solve_germ(U) -> DiskIsometry:
    frame = _frame(U)
    if _is_degenerate(frame):
        return degenerate_solve(frame)
    return DiskIsometry(frame, rational_from_unitary(frame), component_rationals(frame))


def _newton(R, f, target, maxiter=_MAX_NEWTON):
    tol = 1e-13 * (1 + abs(target))
    prev = math.inf
    for _ in range(maxiter):
        val, der = R.value_and_derivative(f)
        res = abs(val - target)
        if res < tol:
            return f, res
        if der == 0 or not math.isfinite(res):
            return None, math.inf
        if res >= prev and res < FINAL_RESIDUAL:
            return f, res  # stagnated at rounding level
        prev = res
        f = f - (val - target) / der
    val = R(f)
    res = abs(val - target)
    return (f, res) if res < FINAL_RESIDUAL * (1 + abs(target)) else (None, math.inf)


def _ray_key(w):
    return round(cmath.phase(w), 13)


def _continue(iso: DiskIsometry, w: complex) -> complex:
    R = iso.R
    r = abs(w)
    key = _ray_key(w)
    direction = w / r
    crit = iso.critical_points()
    t, f = iso.continuation.start(key, r)
    h = _INITIAL_STEP
    while t < r:
        step = min(h, r - t)
        t_new = r if step == r - t else t + step
        target = t_new * direction if t_new != r else w
        _, der = R.value_and_derivative(f)
        if der == 0:
            raise ContinuationFailure(f"derivative of R vanishes at f1 = {f}")
        guess = f + (target - t * direction) / der
        g, _ = _newton(R, guess, target)
        if g is None or abs(g - guess) > 0.5 * abs(guess - f) + 1e-12:
            h = step / 2
            if h < _MIN_STEP:
                raise ContinuationFailure(
                    f"step size fell below {_MIN_STEP} at |w| = {t:.6g}"
                )
            continue
        for c in crit:
            if abs(g - c) < CRITICAL_GUARD:
                raise ContinuationFailure(f"path meets critical point {c}")
        t, f = t_new, g
        iso.continuation.record(key, t, f)
        h = min(_INITIAL_STEP, 2 * h)
    return f


def evaluate(iso: DiskIsometry, w, radius_cap: float = 1.0) -> np.ndarray:
    """``(f1(w), f2_1(w), ..., f2_n(w))`` by radial continuation from 0.

    ``radius_cap`` above 1 is allowed only up to ``iso.extension_radius``,
    which is raised by a successful boundary extension check.
    """
    w = complex(w)
    if radius_cap > iso.extension_radius + 1e-15:
        raise OutsideDomain(
            f"radius cap {radius_cap} exceeds verified extension radius "
            f"{iso.extension_radius}"
        )
    if not abs(w) < radius_cap:
        raise OutsideDomain(f"|w| = {abs(w)} is not below the radius cap {radius_cap}")
    n = iso.n
    if iso.degenerate:
        return np.concatenate([[0j], iso.linear * w])
    if w == 0:
        return np.zeros(n + 1, dtype=complex)
    f = _continue(iso, w)
    if not abs(iso.R(f) - w) < FINAL_RESIDUAL:
        raise ContinuationFailure(f"final residual too large at w = {w}")
    return np.array([f] + [Rj(f) for Rj in iso.components], dtype=complex)


def polar_grid(rays: int = 20, radii: int = 10, rmax: float = 0.95) -> np.ndarray:
    """``rays × radii`` points ``r e^{iφ}`` with ``r`` evenly spaced in
    ``(0, rmax]``."""
    rs = rmax * np.arange(1, radii + 1) / radii
    phis = 2 * np.pi * (np.arange(rays) + 0.5) / rays
    return (rs[None, :] * np.exp(1j * phis)[:, None]).ravel()


def verify(iso: DiskIsometry, grid, radius_cap: float = 1.0) -> ResidueReport:
    """Functional-equation and defining-system residuals over ``grid``."""
    u = iso.frame.entries
    samples = []
    mf = md = 0.0
    for w in np.ravel(grid):
        w = complex(w)
        f = evaluate(iso, w, radius_cap)
        f1, f2 = f[0], f[1:]
        lhs = (1 - abs(f1) ** 2) * (1 - float(np.sum(np.abs(f2) ** 2)))
        rf = abs(lhs - (1 - abs(w) ** 2))
        rhs = np.concatenate([[w], f1 * f2])
        rd = float(np.max(np.abs(u @ f - rhs)))
        samples.append((w, rf, rd))
        mf, md = max(mf, rf), max(md, rd)
    return ResidueReport(samples, mf, md)


def isometry_to_json(iso: DiskIsometry) -> dict:
    out = {
        "frame": frame_to_json(iso.frame),
        "R": None if iso.R is None else rational_to_json(iso.R),
        "components": [rational_to_json(c) for c in iso.components],
        "degenerate": iso.degenerate,
    }
    if iso.degenerate:
        out["linear"] = encode_array(iso.linear)
    if iso.extension_radius != 1.0:
        out["extension_radius"] = iso.extension_radius
    return out


def isometry_from_json(obj) -> DiskIsometry:
    frame = frame_from_json(obj["frame"])
    if obj.get("degenerate"):
        iso = degenerate_solve(frame)
        if "linear" in obj:
            lin = decode_array(obj["linear"])
            lin.setflags(write=False)
            iso = replace(iso, linear=lin)
        return iso
    R = rational_from_json(obj["R"])
    comps = tuple(rational_from_json(c) for c in obj["components"])
    return DiskIsometry(frame, R, comps, extension_radius=float(obj.get("extension_radius", 1.0)))

