"""Complex polynomials, rational self-maps of the Riemann sphere and their
unit-circle (Blaschke) structure.

Coefficients are stored in ascending order of degree throughout.  The point
at infinity is represented by :data:`INFINITY` and is a legitimate argument
and return value of :func:`eval_rational`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npp

from ._jsonutil import decode_array, encode_array
from .errors import NotBlaschkeForm, SampleAtSingularity, ZeroPolynomial

__all__ = [
    "INFINITY",
    "is_infinity",
    "Poly",
    "RationalMap",
    "BlaschkeForm",
    "eval_rational",
    "roots",
    "root_multiplicities",
    "circle_symmetry_residual",
    "to_blaschke",
    "coefficient_distance",
    "rational_to_json",
    "rational_from_json",
]

INFINITY = complex(math.inf, 0.0)

CLUSTER_RADIUS = 1e-7
CANCEL_TOL = 1e-10
# Relative residual (against the rounding scale sum |a_k||z|^k) accepted when
# validating a cluster of eigenvalue estimates as one multiple root.
_MULTIPLE_ROOT_TOL = 1e-12
_INITIAL_LINKAGE = 1e-2


def is_infinity(z) -> bool:
    return cmath.isinf(complex(z))


def _horner(c, z):
    acc = 0j
    for a in reversed(c):
        acc = acc * z + a
    return acc


def _horner2(c, z):
    p = 0j
    dp = 0j
    for a in reversed(c):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _abs_scale(c, z):
    r = abs(z)
    acc = 0.0
    for a in reversed(c):
        acc = acc * r + abs(a)
    return acc


class Poly:
    """Polynomial with complex coefficients in ascending order.

    Exact trailing zeros are stripped, so the zero polynomial has an empty
    coefficient vector and ``degree == -1``.
    """

    __slots__ = ("coeffs", "_c")

    def __init__(self, coeffs=()):
        c = np.array(coeffs, dtype=complex).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self.coeffs = c
        self._c = tuple(c.tolist())

    @classmethod
    def from_roots(cls, rts, lead=1.0):
        rts = list(rts)
        if not rts:
            return cls([lead])
        return cls(lead * npp.polyfromroots(np.asarray(rts, dtype=complex)))

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def lead(self) -> complex:
        if not self._c:
            return 0j
        return self._c[-1]

    def __call__(self, z):
        if np.ndim(z) == 0:
            return _horner(self._c, complex(z))
        if not self._c:
            return np.zeros(np.shape(z), dtype=complex)
        return npp.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def value_and_derivative(self, z):
        return _horner2(self._c, complex(z))

    def deriv(self, m=1) -> "Poly":
        if self.degree < m:
            return Poly()
        return Poly(npp.polyder(self.coeffs, m))

    def __add__(self, other):
        other = _as_poly(other)
        return Poly(npp.polyadd(self._padded(), other._padded()))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        return Poly(npp.polysub(self._padded(), other._padded()))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __neg__(self):
        return Poly(-self.coeffs)

    def __mul__(self, other):
        if np.ndim(other) == 0 and not isinstance(other, Poly):
            return Poly(self.coeffs * complex(other))
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Poly()
        return Poly(npp.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def _padded(self):
        return self.coeffs if self._c else np.zeros(1, dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def trimmed(self, rtol=1e-13) -> "Poly":
        """Drop trailing coefficients below ``rtol`` times the largest one."""
        if not self._c:
            return self
        c = self.coeffs
        cut = rtol * np.max(np.abs(c))
        k = len(c)
        while k > 0 and abs(c[k - 1]) <= cut:
            k -= 1
        return Poly(c[:k])

    def monic(self) -> "Poly":
        if not self._c:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return Poly(self.coeffs / self.lead)

    def deflate(self, r):
        """Synthetic division by ``(z - r)``; returns (quotient, remainder)."""
        c = self._c
        if len(c) < 2:
            raise ValueError("cannot deflate a constant polynomial")
        r = complex(r)
        if abs(r) > 1:
            # divide the reversed polynomial by (y - 1/r) instead; forward
            # synthetic division amplifies rounding by |r| per step
            rq, rem = Poly(c[::-1]).deflate(1 / r)
            qc = np.zeros(len(c) - 1, dtype=complex)
            qc[: len(rq.coeffs)] = rq.coeffs
            return Poly(qc[::-1] / -r), rem
        q = [0j] * (len(c) - 1)
        acc = c[-1]
        for k in range(len(c) - 2, -1, -1):
            q[k] = acc
            acc = c[k] + acc * r
        return Poly(q), acc

    def roots(self):
        return roots(self)

    def __repr__(self):
        return f"Poly({np.array2string(self.coeffs, precision=6)})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly(np.atleast_1d(np.asarray(x, dtype=complex)))


# ---------------------------------------------------------------------------
# root finding


def _linkage(points, radius):
    """Single-linkage groups under a relative distance threshold."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            a, b = points[i], points[j]
            if abs(a - b) <= radius * max(1.0, abs(a), abs(b)):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(points[i])
    return list(groups.values())


def _polish(c, z, maxiter=30):
    best, best_res = z, abs(_horner(c, z))
    for _ in range(maxiter):
        p, dp = _horner2(c, z)
        if p == 0 or dp == 0:
            break
        step = p / dp
        z = z - step
        res = abs(_horner(c, z))
        if res < best_res:
            best, best_res = z, res
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    return best


def _refine_multiple(c, group):
    """Try to certify ``group`` as a single root of multiplicity len(group).

    The centroid of the eigenvalue estimates of an m-fold root is far more
    accurate than the individual estimates; it seeds Newton on the
    (m-1)-th derivative, where the root is simple.
    """
    m = len(group)
    z = complex(np.mean(group))
    spread = max(abs(g - z) for g in group)
    q = tuple(npp.polyder(np.asarray(c), m - 1).tolist())
    z0 = z
    for _ in range(50):
        p, dp = _horner2(q, z)
        if p == 0 or dp == 0:
            break
        step = p / dp
        z = z - step
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    if abs(z - z0) > 2 * spread + 1e-12 * max(1.0, abs(z0)):
        return None
    d = tuple(c)
    for _ in range(m - 1):
        if abs(_horner(d, z)) > _MULTIPLE_ROOT_TOL * _abs_scale(d, z):
            return None
        d = tuple(npp.polyder(np.asarray(d)).tolist())
    return z


def _resolve(c, points, radius):
    out = []
    for group in _linkage(points, radius):
        if len(group) == 1:
            out.append((_polish(c, group[0]), 1))
            continue
        z = _refine_multiple(c, group)
        if z is not None:
            out.append((z, len(group)))
        elif radius > 1e-9:
            out.extend(_resolve(c, group, radius / 4))
        else:
            out.extend((_polish(c, g), 1) for g in group)
    return out


def _merge(found, radius):
    merged = []
    for z, m in sorted(found, key=lambda t: (-t[1], abs(t[0]))):
        for k, (w, mw) in enumerate(merged):
            if abs(z - w) <= radius * max(1.0, abs(z), abs(w)):
                merged[k] = (w, mw + m)
                break
        else:
            merged.append((z, m))
    return sorted(merged, key=lambda t: (round(abs(t[0]), 12), cmath.phase(t[0])))


def root_multiplicities(p: Poly):
    """Distinct roots of ``p`` with multiplicities, as ``[(root, mult), ...]``.

    Companion-matrix eigenvalues (LAPACK balances the matrix) give the
    estimates.  Estimates that cluster are tested as a multiple root and
    refined through the matching derivative; isolated ones get a Newton
    polish.  Refined roots closer than ``CLUSTER_RADIUS`` (relative) are
    reported as one root.
    """
    p = _as_poly(p)
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial has no well-defined roots")
    if p.degree == 0:
        return []
    c = p.coeffs
    k = int(np.flatnonzero(c)[0])
    found = [(0j, k)] if k else []
    c = c[k:]
    if len(c) > 1:
        est = [complex(x) for x in npp.polyroots(c)]
        found += _resolve(tuple(c.tolist()), est, _INITIAL_LINKAGE)
    return _merge(found, CLUSTER_RADIUS)


def roots(p: Poly) -> np.ndarray:
    """All complex roots of ``p`` repeated according to multiplicity."""
    return np.array(
        [z for z, m in root_multiplicities(p) for _ in range(m)], dtype=complex
    )


# ---------------------------------------------------------------------------
# rational maps


@dataclass(frozen=True, eq=False)
class RationalMap:
    """``num(z) / den(z)`` viewed as a map of the Riemann sphere."""

    num: Poly
    den: Poly

    def __post_init__(self):
        if not isinstance(self.num, Poly):
            object.__setattr__(self, "num", _as_poly(self.num))
        if not isinstance(self.den, Poly):
            object.__setattr__(self, "den", _as_poly(self.den))
        if self.den.is_zero:
            raise ZeroPolynomial("denominator of a rational map must be nonzero")

    @classmethod
    def identity(cls):
        return cls(Poly([0, 1]), Poly([1]))

    @classmethod
    def constant(cls, c):
        return cls(Poly([c]), Poly([1]))

    @property
    def degree(self) -> int:
        if self.num.is_zero:
            return 0
        return max(self.num.degree, self.den.degree)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __call__(self, z):
        if np.ndim(z) == 0:
            return eval_rational(self, z)
        return np.array([eval_rational(self, x) for x in np.ravel(z)]).reshape(
            np.shape(z)
        )

    def value_and_derivative(self, z):
        """``(R(z), R'(z))`` at a finite non-pole point."""
        p, dp = self.num.value_and_derivative(z)
        q, dq = self.den.value_and_derivative(z)
        return p / q, (dp * q - p * dq) / (q * q)

    def critical_numerator(self) -> Poly:
        """``p'q - pq'``, whose roots are the finite critical points.

        When ``deg p = deg q = d`` the ``z^(2d-1)`` coefficient cancels
        exactly and is set to zero; leading coefficients below ``1e-12`` of
        the largest are dropped too, since a critical point beyond ``1e12``
        is indistinguishable from one at infinity.
        """
        w = self.num.deriv() * self.den - self.num * self.den.deriv()
        d = self.num.degree
        if d >= 1 and d == self.den.degree and w.degree == 2 * d - 1:
            w = Poly(w.coeffs[:-1])
        return w.trimmed(1e-12)

    def normalized(self) -> "RationalMap":
        """Same map with a monic denominator."""
        lead = self.den.lead
        return RationalMap(Poly(self.num.coeffs / lead), Poly(self.den.coeffs / lead))

    def zeros(self) -> np.ndarray:
        if self.num.is_zero:
            return np.zeros(0, dtype=complex)
        return roots(self.num)

    def poles(self) -> np.ndarray:
        """Finite poles with multiplicity."""
        return roots(self.den)

    def reduced(self, tol=CANCEL_TOL) -> "RationalMap":
        """Cancel common roots of numerator and denominator.

        Roots closer than ``tol`` (relative) are treated as common and
        divided out of both polynomials; the map is unchanged otherwise.
        """
        if self.num.is_zero:
            return RationalMap(Poly(), Poly([1]))
        if self.num.degree < 1 or self.den.degree < 1:
            return self
        nz = [complex(z) for z in roots(self.num)]
        common = []
        for r in roots(self.den):
            for i, z in enumerate(nz):
                if abs(z - r) <= tol * max(1.0, abs(z), abs(r)):
                    common.append(0.5 * (z + r))
                    del nz[i]
                    break
        if not common:
            return self
        num, den = self.num, self.den
        for r in common:
            num, _ = num.deflate(r)
            den, _ = den.deflate(r)
        return RationalMap(num, den)

    def __add__(self, other):
        if not isinstance(other, RationalMap):
            other = RationalMap.constant(other)
        if self.den.degree == 0 and other.den.degree == 0:
            return RationalMap(
                self.num * (1 / self.den.lead) + other.num * (1 / other.den.lead), Poly([1])
            )
        return RationalMap(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, RationalMap):
            return RationalMap(self.num * other, self.den)
        return RationalMap(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __repr__(self):
        return f"RationalMap(num={self.num!r}, den={self.den!r})"


def eval_rational(m: RationalMap, z):
    """Evaluate ``m`` at ``z`` on the Riemann sphere.

    Poles give :data:`INFINITY`; at infinity the ratio of leading terms
    decides the value.
    """
    z = complex(z)
    num, den = m.num, m.den
    if num.is_zero:
        return 0j
    if is_infinity(z):
        dp, dq = num.degree, den.degree
        if dp > dq:
            return INFINITY
        if dp < dq:
            return 0j
        return num.lead / den.lead
    q = den(z)
    p = num(z)
    if q == 0:
        # 0/0 only for unreduced maps: differentiate until one side survives
        while p == 0 and q == 0 and not num.is_zero and not den.is_zero:
            num, den = num.deriv(), den.deriv()
            p, q = num(z), den(z)
        if q == 0:
            return INFINITY if p != 0 else complex(math.nan, math.nan)
    return p / q


def coefficient_distance(a: RationalMap, b: RationalMap) -> float:
    """Max coefficient discrepancy after making both denominators monic."""
    a, b = a.normalized(), b.normalized()

    def gap(x, y):
        n = max(len(x), len(y), 1)
        xx = np.zeros(n, dtype=complex)
        yy = np.zeros(n, dtype=complex)
        xx[: len(x)] = x
        yy[: len(y)] = y
        return float(np.max(np.abs(xx - yy)))

    return max(gap(a.num.coeffs, b.num.coeffs), gap(a.den.coeffs, b.den.coeffs))


def _special_points(m: RationalMap):
    pts = [0j]
    if not m.num.is_zero and m.num.degree > 0:
        pts += list(m.zeros())
    if m.den.degree > 0:
        pts += list(m.poles())
    return pts


def circle_symmetry_residual(m: RationalMap, samples) -> float:
    """``max |R(z) * conj(R(1/conj z)) - 1|`` over ``samples``.

    Vanishes identically for maps that send the unit circle to itself
    (finite Blaschke-type products).
    """
    special = _special_points(m)
    worst = 0.0
    for z in np.ravel(samples):
        z = complex(z)
        if z == 0 or is_infinity(z):
            raise SampleAtSingularity(f"sample {z} is 0 or infinity")
        zi = 1 / z.conjugate()
        for s in special:
            for x in (z, zi):
                if abs(x - s) <= 1e-9 * max(1.0, abs(s)):
                    raise SampleAtSingularity(f"sample {z} meets a zero or pole")
        a = eval_rational(m, z)
        b = eval_rational(m, zi)
        if is_infinity(a) or is_infinity(b) or a == 0 or b == 0:
            raise SampleAtSingularity(f"sample {z} meets a zero or pole")
        worst = max(worst, abs(a * b.conjugate() - 1))
    return worst


def _symmetry_samples(m: RationalMap, count=16):
    """``count`` points that, with their inversions, lie furthest from the
    zeros and poles of ``m``; evaluation is worst conditioned near those."""
    special = _special_points(m)
    cands = [
        r * cmath.exp(1j * (0.1234 + 2 * math.pi * k / 64))
        for r in (0.37, 0.61, 0.83, 1.7)
        for k in range(64)
    ]

    def clearance(z):
        zi = 1 / z.conjugate()
        return min(abs(x - s) / max(1.0, abs(s)) for s in special for x in (z, zi))

    return sorted(cands, key=clearance, reverse=True)[:count]


@dataclass(frozen=True)
class BlaschkeForm:
    """``alpha0 * z * prod_j (z - 1/conj(a_j)) / (z - a_j)``."""

    alpha0: complex
    poles: tuple
    fixed_zero_at_origin: bool = True

    @property
    def pairs(self):
        return tuple((a, 1 / a.conjugate()) for a in self.poles)

    @property
    def degree(self) -> int:
        return 1 + len(self.poles)

    def to_rational(self) -> RationalMap:
        zeros = [0j] + [1 / complex(a).conjugate() for a in self.poles]
        return RationalMap(
            Poly.from_roots(zeros, lead=self.alpha0), Poly.from_roots(self.poles)
        )


def to_blaschke(m: RationalMap, symmetry_tol=1e-8, reconstruction_tol=1e-10):
    """Write a circle-symmetric map fixing 0 as a finite Blaschke-type product.

    Raises :class:`NotBlaschkeForm` when the map does not have a simple zero
    at the origin, fails the circle symmetry, or cannot be rebuilt from the
    extracted poles.  The rebuild check is relative to the largest
    coefficient when that exceeds one.
    """
    r = m.reduced()
    c = r.num.coeffs
    if r.num.is_zero or r.num.degree < 1:
        raise NotBlaschkeForm("map does not vanish at the origin")
    scale = float(np.max(np.abs(c)))
    if abs(c[0]) > 1e-12 * scale:
        raise NotBlaschkeForm("map does not vanish at the origin")
    if abs(c[1]) <= 1e-12 * scale:
        raise NotBlaschkeForm("zero at the origin is not simple")
    res = circle_symmetry_residual(r, _symmetry_samples(r))
    if res > symmetry_tol:
        raise NotBlaschkeForm(f"circle symmetry residual {res:.3e}")
    poles = tuple(complex(a) for a in r.poles()) if r.den.degree > 0 else ()
    if any(abs(abs(a) - 1) <= 1e-10 for a in poles):
        raise NotBlaschkeForm("unimodular pole left after cancellation")
    form = BlaschkeForm(complex(r.num.lead / r.den.lead), poles)
    rebuilt = form.to_rational()
    target = r.normalized()
    big = max(1.0, float(np.max(np.abs(target.num.coeffs))))
    gap = coefficient_distance(rebuilt, target) / big
    if gap > reconstruction_tol:
        raise NotBlaschkeForm(f"reconstruction residual {gap:.3e}")
    return form


def rational_to_json(m: RationalMap) -> dict:
    return {"num": encode_array(m.num.coeffs), "den": encode_array(m.den.coeffs)}


def rational_from_json(obj) -> RationalMap:
    return RationalMap(Poly(decode_array(obj["num"])), Poly(decode_array(obj["den"])))
