"""Ramification and branch data, congruence invariants, reduction verdicts
and parameter peeling for the rational map ``R`` of an isometry.

Two isometries are congruent when ``R = φ ∘ R̃ ∘ ψ`` for disk automorphisms
``φ, ψ``.  Everything recorded by :func:`invariants` is preserved by such a
change, so differing invariants prove incongruence.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._jsonutil import encode_complex
from .errors import NotBlaschkeForm, NothingToPeel
from .rational import (
    INFINITY,
    Poly,
    RationalMap,
    coefficient_distance,
    eval_rational,
    is_infinity,
    root_multiplicities,
    roots,
    to_blaschke,
)

__all__ = [
    "BranchData",
    "CongruenceInvariant",
    "ProvablyIncongruent",
    "Inconclusive",
    "ReductionVerdict",
    "branch_data",
    "invariants",
    "incongruence_certificate",
    "reduction_classify",
    "peel_parameter",
    "location_of",
]

ON_CIRCLE_TOL = 1e-9
BRANCH_DEDUP = 1e-8
MODULI_TOL = 1e-8

INSIDE, ON, OUTSIDE = 0, 1, 2


def location_of(z, tol=ON_CIRCLE_TOL) -> int:
    """0 inside the unit circle, 1 on it, 2 outside (∞ counts as outside)."""
    if is_infinity(z):
        return OUTSIDE
    r = abs(z)
    if abs(r - 1) <= tol:
        return ON
    return INSIDE if r < 1 else OUTSIDE


def _same_point(a, b, tol):
    if is_infinity(a) or is_infinity(b):
        return is_infinity(a) and is_infinity(b)
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class BranchData:
    ramification: tuple  # ((point, order), ...)
    branch: tuple  # ((value, total_branching), ...)
    location_counts: tuple  # (inside, on circle, outside)
    fibers: tuple = field(default=(), compare=False, repr=False)

    @property
    def total_order(self) -> int:
        return sum(k for _, k in self.ramification)

    def distinct_points(self) -> int:
        return len(self.ramification)

    def to_json(self) -> dict:
        return {
            "ramification": [
                {"point": encode_complex(p), "order": k} for p, k in self.ramification
            ],
            "branch": [
                {"value": encode_complex(b), "total_branching": k} for b, k in self.branch
            ],
            "location_counts": list(self.location_counts),
        }


def branch_data(R: RationalMap) -> BranchData:
    """Critical points of ``R`` with ramification orders, and their images.

    Finite critical points are the roots of ``p'q - pq'`` counted with
    multiplicity; ∞ carries the remaining order ``2d - 2 - deg(p'q - pq')``.
    """
    R = R.reduced()
    d = R.degree
    if d < 1:
        raise ValueError("constant maps have no ramification data")
    w = R.critical_numerator()
    ram = list(root_multiplicities(w)) if w.degree >= 1 else []
    at_inf = 2 * d - 2 - w.degree
    if at_inf > 0:
        ram.append((INFINITY, at_inf))
    total = sum(k for _, k in ram)
    if total != 2 * d - 2:
        raise ArithmeticError(f"ramification total {total} differs from {2 * d - 2}")

    poles = [z for z, _ in root_multiplicities(R.den)] if R.den.degree >= 1 else []
    zeros = [z for z, _ in root_multiplicities(R.num)]
    values = []
    fibers = []
    for p, k in ram:
        if any(_same_point(p, z, BRANCH_DEDUP) for z in poles):
            b = INFINITY
        elif any(_same_point(p, z, BRANCH_DEDUP) for z in zeros):
            b = 0j
        else:
            b = eval_rational(R, p)
        for i, (v, kk) in enumerate(values):
            if _same_point(v, b, BRANCH_DEDUP):
                values[i] = (v, kk + k)
                fibers[i].append((p, k))
                break
        else:
            values.append((b, k))
            fibers.append([(p, k)])
    counts = [0, 0, 0]
    for p, _ in ram:
        counts[location_of(p)] += 1
    return BranchData(
        tuple(ram),
        tuple(values),
        tuple(counts),
        tuple(tuple(f) for f in fibers),
    )


def _fiber_signature(R: RationalMap, b, ramified):
    """Local degrees and locations of every preimage of ``b``.

    Preimages are the roots of ``p - b q``; the ``k + 1`` roots nearest a
    ramified point of order ``k`` are attributed to it and the rest are
    simple preimages.
    """
    pts = [complex(z) for z in roots(R.num - R.den * complex(b))]
    sig = []
    for p, k in ramified:
        for _ in range(k + 1):
            if pts:
                pts.pop(min(range(len(pts)), key=lambda i: abs(pts[i] - p)))
        sig.append((k + 1, location_of(p)))
    sig += [(1, location_of(z)) for z in pts]
    return tuple(sorted(sig))


@dataclass(frozen=True)
class CongruenceInvariant:
    """Data preserved when ``R`` is replaced by ``φ ∘ R ∘ ψ``.

    ``inside_signatures`` lists, for each branch value inside the disk, the
    local degrees and locations (inside, on, outside the circle) of all its
    preimages.  ``pinned`` is set
    when every disk automorphism relating two maps with matching pins must
    fix the origin on both sides; then the moduli of branch values and of
    ramification points are invariants too.
    """

    degree: int
    ram_order_multiset: tuple
    location_counts: tuple
    inside_signatures: tuple = ()
    pinned: bool = False
    pin_signature: tuple = ()
    branch_moduli: Optional[tuple] = None
    ramification_moduli: Optional[tuple] = None

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "ram_order_multiset": list(self.ram_order_multiset),
            "location_counts": list(self.location_counts),
            "inside_signatures": [[list(t) for t in s] for s in self.inside_signatures],
            "pinned": self.pinned,
            "branch_moduli": None if self.branch_moduli is None else list(self.branch_moduli),
            "ramification_moduli": None
            if self.ramification_moduli is None
            else list(self.ramification_moduli),
        }


def invariants(R: RationalMap) -> CongruenceInvariant:
    R = R.reduced()
    d = R.degree
    if d <= 1:
        return CongruenceInvariant(max(d, 0), (), (0, 0, 0))
    bd = branch_data(R)
    orders = tuple(sorted(k for _, k in bd.ramification))
    inside = []
    pin = None
    for (b, _), fib in zip(bd.branch, bd.fibers):
        if location_of(b) == INSIDE:
            sig = _fiber_signature(R, b, fib)
            inside.append(sig)
            if abs(b) <= BRANCH_DEDUP:
                pin = sig
    inside_sorted = tuple(sorted(inside))
    # the zero set of R inside the disk must be {0} so that ψ(0) = 0 follows
    zeros_inside = [z for z, _ in root_multiplicities(R.num) if location_of(z) == INSIDE]
    only_origin = len(zeros_inside) == 1 and abs(zeros_inside[0]) <= BRANCH_DEDUP
    pinned = pin is not None and inside.count(pin) == 1 and only_origin
    bm = rm = None
    if pinned:
        bm = tuple(sorted(abs(b) for b, _ in bd.branch if not is_infinity(b) and abs(b) > BRANCH_DEDUP))
        rm = tuple(sorted((k, abs(p)) for p, k in bd.ramification if not is_infinity(p)))
    return CongruenceInvariant(
        d, orders, bd.location_counts, inside_sorted, pinned, pin or (), bm, rm
    )


@dataclass(frozen=True)
class ProvablyIncongruent:
    reason: str


@dataclass(frozen=True)
class Inconclusive:
    reason: str = "all recorded invariants agree"


def _moduli_differ(x, y):
    if len(x) != len(y):
        return True
    for a, b in zip(x, y):
        if isinstance(a, tuple):
            if a[0] != b[0]:
                return True
            a, b = a[1], b[1]
        if abs(a - b) > MODULI_TOL * max(1.0, abs(a), abs(b)):
            return True
    return False


def incongruence_certificate(a: CongruenceInvariant, b: CongruenceInvariant):
    """Certify incongruence from invariants, or return :class:`Inconclusive`.

    Symmetric in its arguments; never asserts congruence.
    """
    if a.degree != b.degree:
        return ProvablyIncongruent(f"degree {a.degree} vs {b.degree}")
    if a.ram_order_multiset != b.ram_order_multiset:
        return ProvablyIncongruent("ramification orders differ")
    if a.location_counts != b.location_counts:
        return ProvablyIncongruent(
            f"location counts {a.location_counts} vs {b.location_counts}"
        )
    if a.inside_signatures != b.inside_signatures:
        return ProvablyIncongruent("fibers over interior branch values differ")
    if a.pinned and b.pinned and a.pin_signature == b.pin_signature:
        if _moduli_differ(a.ramification_moduli, b.ramification_moduli):
            return ProvablyIncongruent("moduli of ramification points differ")
        if _moduli_differ(a.branch_moduli, b.branch_moduli):
            return ProvablyIncongruent("moduli of branch values differ")
    return Inconclusive()


@dataclass(frozen=True)
class ReductionVerdict:
    kind: str  # GeodesicDiskFactor | SquareRootClass | Reducible | Full
    degree: int
    m: Optional[int] = None
    unimodular_slots: tuple = ()
    vanishing_components: tuple = ()

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "m": self.m,
            "unimodular_slots": list(self.unimodular_slots),
            "vanishing_components": list(self.vanishing_components),
        }


def reduction_classify(R: RationalMap, n: int, frame=None) -> ReductionVerdict:
    """Degree-based verdict for an isometry into ``Δ × 𝔹ⁿ``.

    With a normalized ``frame``, diagonal slots ``j`` with ``|u_jj| = 1`` are
    reported together with the components ``f2_{j-1}`` they force to vanish.
    """
    d = R.reduced().degree
    slots = ()
    if frame is not None and frame.lower_block_upper_triangular:
        diag = frame.diagonal
        slots = tuple(j + 2 for j, x in enumerate(diag) if abs(abs(x) - 1) <= 1e-10)
    vanish = tuple(j - 1 for j in slots)
    if d <= 1:
        return ReductionVerdict("GeodesicDiskFactor", d, None, slots, vanish)
    if d == 2:
        return ReductionVerdict("SquareRootClass", d, 1, slots, vanish)
    if d <= n:
        return ReductionVerdict("Reducible", d, d - 1, slots, vanish)
    return ReductionVerdict("Full", d, n, slots, vanish)


def _peel_order(p):
    return (-round(abs(p), 12), round(cmath.phase(p), 12))


def peel_parameter(R: RationalMap):
    """Split off one factor: ``R = R̃ · (c̄z - 1)/(z - c)``.

    The pole ``c`` of largest modulus is peeled (ties: smallest argument).
    Returns ``(R̃, c)``.
    """
    form = to_blaschke(R)
    if form.degree <= 1:
        raise NothingToPeel("a degree-1 map has no parameter to peel")
    c = min(form.poles, key=_peel_order)
    if c == 0:
        raise NotBlaschkeForm("pole at the origin")
    r = R.reduced()
    num, _ = r.num.deflate(1 / c.conjugate())
    num = Poly(num.coeffs / c.conjugate())
    den, _ = r.den.deflate(c)
    peeled = RationalMap(num, den)
    factor = RationalMap(Poly([-1, c.conjugate()]), Poly([-c, 1]))
    rebuilt = peeled * factor
    big = max(1.0, float(np.max(np.abs(r.normalized().num.coeffs))))
    gap = coefficient_distance(rebuilt, r) / big
    if gap > 1e-12:
        raise ArithmeticError(f"peeling reconstruction residual {gap:.3e}")
    return peeled, complex(c)
