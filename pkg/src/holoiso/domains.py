"""Classical bounded symmetric domains of types I-IV and the block
embeddings that turn an isometry into ``Δ × 𝔹ⁿ`` into one into a larger
domain.

Each domain carries a generic norm ``N`` whose ``-log`` is the Kähler
potential, so an isometry from the disk is recognised by
``N(F(w)) = 1 - |w|²``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._jsonutil import encode_array
from .errors import NotMember, ShapeMismatch
from .germ import DiskIsometry, evaluate

__all__ = [
    "DomainSpec",
    "DomainPoint",
    "membership",
    "generic_norm",
    "embed",
    "block_join",
    "composite_residual",
    "block_multiplicativity_residual",
    "random_member",
]

SYMMETRY_TOL = 1e-12
J1 = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class DomainSpec:
    """``kind`` is one of ``"I"``, ``"II"``, ``"III"``, ``"IV"``.

    Sizes: ``I(p, q)`` acts on ``p × q`` matrices, ``II(m)`` on antisymmetric
    and ``III(m)`` on symmetric ``m × m`` matrices, ``IV(n)`` on vectors of
    length ``n``.
    """

    kind: str
    sizes: tuple

    def __post_init__(self):
        k, s = self.kind, tuple(int(x) for x in self.sizes)
        object.__setattr__(self, "sizes", s)
        ok = {
            "I": len(s) == 2 and min(s) >= 1,
            "II": len(s) == 1 and s[0] >= 2,
            "III": len(s) == 1 and s[0] >= 1,
            "IV": len(s) == 1 and s[0] >= 3,
        }.get(k)
        if ok is None:
            raise ValueError(f"unknown domain kind {k!r}")
        if not ok:
            raise ValueError(f"invalid sizes {s} for type {k}")

    @classmethod
    def I(cls, p, q):  # noqa: E743 - domain names are roman numerals
        return cls("I", (p, q))

    @classmethod
    def II(cls, m):
        return cls("II", (m,))

    @classmethod
    def III(cls, m):
        return cls("III", (m,))

    @classmethod
    def IV(cls, n):
        return cls("IV", (n,))

    @classmethod
    def parse(cls, text: str) -> "DomainSpec":
        """``"I:2:3"``, ``"II:5"``, ``"III:4"`` or ``"IV:3"``."""
        kind, *sizes = text.strip().split(":")
        return cls(kind.upper(), tuple(int(x) for x in sizes))

    @property
    def shape(self) -> tuple:
        if self.kind == "I":
            return self.sizes
        if self.kind == "IV":
            return (self.sizes[0],)
        return (self.sizes[0], self.sizes[0])

    def __str__(self):
        return f"{self.kind}({', '.join(map(str, self.sizes))})"


@dataclass(frozen=True, eq=False)
class DomainPoint:
    spec: DomainSpec
    value: np.ndarray

    def __post_init__(self):
        v = np.array(self.value, dtype=complex)
        if v.shape != self.spec.shape:
            raise ShapeMismatch(f"{self.spec} expects shape {self.spec.shape}, got {v.shape}")
        if self.spec.kind == "II" and np.max(np.abs(v + v.T), initial=0) > SYMMETRY_TOL:
            raise ShapeMismatch("type II points must be antisymmetric")
        if self.spec.kind == "III" and np.max(np.abs(v - v.T), initial=0) > SYMMETRY_TOL:
            raise ShapeMismatch("type III points must be symmetric")
        v.setflags(write=False)
        object.__setattr__(self, "value", v)

    def to_json(self) -> dict:
        return {
            "kind": self.spec.kind,
            "sizes": list(self.spec.sizes),
            "value": encode_array(self.value),
        }


def _as_point(p, spec=None) -> DomainPoint:
    if isinstance(p, DomainPoint):
        return p
    if spec is None:
        raise ShapeMismatch("a raw array needs a domain spec")
    return DomainPoint(spec, p)


def membership(p: DomainPoint):
    """``(is_member, margin)``; the point is inside iff ``margin > 0``.

    Matrix types use ``1 - σ_max²``.  Type IV uses
    ``min(2 - Σ|z|², 1 + |½Σz²|² - Σ|z|²)``.
    """
    if p.spec.kind == "IV":
        z = p.value
        s = float(np.sum(np.abs(z) ** 2))
        h = abs(0.5 * np.sum(z * z)) ** 2
        margin = min(2 - s, 1 + h - s)
    else:
        sigma = np.linalg.norm(p.value, 2) if p.value.size else 0.0
        margin = 1 - sigma**2
    return bool(margin > 0), float(margin)


def generic_norm(p: DomainPoint):
    """``(N(p), s)`` with ``s = 1`` for every classical type.

    I and III: ``det(I - Z*Z)``; II: its positive square root;
    IV: ``1 - Σ|z|² + |½Σz²|²``.
    """
    ok, margin = membership(p)
    if not ok:
        raise NotMember(f"point is outside {p.spec} (margin {margin:.3e})")
    if p.spec.kind == "IV":
        z = p.value
        return float(1 - np.sum(np.abs(z) ** 2) + abs(0.5 * np.sum(z * z)) ** 2), 1
    z = p.value
    q = z.shape[1]
    d = np.linalg.det(np.eye(q) - z.conj().T @ z).real
    if p.spec.kind == "II":
        return math.sqrt(max(d, 0.0)), 1
    return float(d), 1


def block_join(w, Z: DomainPoint) -> DomainPoint:
    """``diag(w, Z)`` in ``III(m)`` for ``Z`` in ``III(m-1)``."""
    if Z.spec.kind != "III":
        raise ShapeMismatch("block_join expects a type III point")
    m = Z.spec.sizes[0] + 1
    out = np.zeros((m, m), dtype=complex)
    out[0, 0] = w
    out[1:, 1:] = Z.value
    return DomainPoint(DomainSpec.III(m), out)


def _iv_map(w: complex, n: int) -> np.ndarray:
    z = np.zeros(n, dtype=complex)
    z[0] = 1j * w / 4
    z[1] = math.sqrt(15) * w / 4
    z[2] = 1 - cmath.sqrt(1 - 7 * w * w / 8)
    return z


def embed(spec: DomainSpec, w, z=()) -> DomainPoint:
    """Place ``(w, z) ∈ Δ × 𝔹ᵏ`` into the domain ``spec``.

    * ``I(p, q)``: ``w`` at the corner, ``z`` (length ``q-1``) in row 2.
    * ``II(m)``, ``m >= 5``: ``diag(w J₁, [[0, z], [-zᵀ, 0]])`` with ``z`` of
      length ``m-3``.
    * ``III(m)``: ``diag(w, Z)`` with ``Z`` a symmetric ``(m-1) × (m-1)``
      matrix (see :func:`block_join`).
    * ``IV(n)``: ``z`` is ignored and ``w`` goes through
      ``(iw/4, √15 w/4, 1 - √(1 - 7w²/8), 0, ...)``.
    """
    w = complex(w)
    k = spec.kind
    if k == "IV":
        if abs(w) > 1:
            raise ShapeMismatch("type IV embedding is defined on the closed disk")
        return DomainPoint(spec, _iv_map(w, spec.sizes[0]))
    if k == "III":
        Z = _as_point(z, DomainSpec.III(spec.sizes[0] - 1)) if spec.sizes[0] > 1 else None
        if Z is None:
            return DomainPoint(spec, np.array([[w]]))
        if Z.spec.sizes[0] != spec.sizes[0] - 1:
            raise ShapeMismatch("block size does not match")
        return block_join(w, Z)
    z = np.asarray(z, dtype=complex).ravel()
    if k == "I":
        p, q = spec.sizes
        if p < 2 and q > 1:
            raise ShapeMismatch("type I embedding needs at least two rows")
        if z.size != q - 1:
            raise ShapeMismatch(f"I({p}, {q}) needs a vector of length {q - 1}")
        out = np.zeros((p, q), dtype=complex)
        out[0, 0] = w
        if q > 1:
            out[1, 1:] = z
        return DomainPoint(spec, out)
    m = spec.sizes[0]
    if m < 5:
        raise ShapeMismatch("type II embedding needs m >= 5")
    if z.size != m - 3:
        raise ShapeMismatch(f"II({m}) needs a vector of length {m - 3}")
    out = np.zeros((m, m), dtype=complex)
    out[:2, :2] = w * J1
    out[2, 3:] = z
    out[3:, 2] = -z
    return DomainPoint(spec, out)


def random_member(spec: DomainSpec, rng, max_norm: float = 0.95) -> DomainPoint:
    """A random point of a matrix domain with spectral norm below ``max_norm``."""
    shape = spec.shape
    a = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if spec.kind == "III":
        a = a + a.T
    elif spec.kind == "II":
        a = a - a.T
    elif spec.kind == "IV":
        a *= rng.uniform(0, max_norm) / max(np.linalg.norm(a), 1e-300)
        return DomainPoint(spec, a)
    sigma = np.linalg.norm(a, 2)
    a *= rng.uniform(0, max_norm) / max(sigma, 1e-300)
    return DomainPoint(spec, a)


def block_multiplicativity_residual(spec: DomainSpec, ws, count: int = 50, seed: int = 0) -> float:
    """``max |N(diag(w, Z)) - (1 - |w|²) N(Z)|`` over random ``Z`` in
    ``III(m-1)`` paired with the given ``w``."""
    if spec.kind != "III" or spec.sizes[0] < 2:
        raise ShapeMismatch("multiplicativity check needs III(m) with m >= 2")
    rng = np.random.default_rng(seed)
    small = DomainSpec.III(spec.sizes[0] - 1)
    ws = list(np.ravel(ws))
    worst = 0.0
    for k in range(count):
        Z = random_member(small, rng)
        w = complex(ws[k % len(ws)])
        big = generic_norm(block_join(w, Z))[0]
        worst = max(worst, abs(big - (1 - abs(w) ** 2) * generic_norm(Z)[0]))
    return worst


def composite_residual(spec: DomainSpec, source, grid) -> dict:
    """``max |N(F(w)) - (1 - |w|²)|`` for the composite ``F`` into ``spec``.

    ``source`` is a :class:`~holoiso.germ.DiskIsometry` (types I and II) or
    ``None`` for type IV.  Type III reports block multiplicativity with the
    grid values as the corner entries.
    """
    grid = np.ravel(np.asarray(grid, dtype=complex))
    if spec.kind == "III":
        res = block_multiplicativity_residual(spec, grid, count=max(len(grid), 1))
        return {"kind": "III", "max_residual": res, "count": max(len(grid), 1)}
    worst = 0.0
    for w in grid:
        w = complex(w)
        if spec.kind == "IV":
            pt = embed(spec, w)
        else:
            if not isinstance(source, DiskIsometry):
                raise ShapeMismatch(f"type {spec.kind} composites need an isometry source")
            need = spec.sizes[1] - 1 if spec.kind == "I" else spec.sizes[0] - 3
            if source.n != need:
                raise ShapeMismatch(f"{spec} needs a source into Δ × 𝔹^{need}")
            f = evaluate(source, w)
            pt = embed(spec, f[0], f[1:])
        worst = max(worst, abs(generic_norm(pt)[0] - (1 - abs(w) ** 2)))
    return {"kind": spec.kind, "max_residual": worst, "count": len(grid)}
