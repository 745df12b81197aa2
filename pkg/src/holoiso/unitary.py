"""Unitary frames parametrizing isometries of the disk into ``Δ × 𝔹ⁿ``.

A frame is an ``(n+1) × (n+1)`` unitary ``U``.  Its lower-right ``n × n``
block ``U''`` drives everything downstream, so the builders here produce
frames whose lower block is already upper triangular.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import ztrexc

from ._jsonutil import decode_array, decode_complex, encode_array, encode_complex
from .errors import InvalidZeta, NotUnitary, ShapeMismatch

__all__ = [
    "UnitaryFrame",
    "check_unitary",
    "unitarity_residual",
    "schur_normalize",
    "build_hessenberg_unitary",
    "build_family_unitary",
    "base_frame_matrix",
    "frame_to_json",
    "frame_from_json",
]

UNITARY_TOL = 1e-10
TRIANGULAR_TOL = 1e-14
DIAGONAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class UnitaryFrame:
    entries: np.ndarray
    lower_block_upper_triangular: bool
    constant_diagonal: Optional[complex] = None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.dim - 1

    @property
    def lower(self) -> np.ndarray:
        """The block ``U''`` (rows and columns 2..n+1)."""
        return self.entries[1:, 1:]

    @property
    def u11(self) -> complex:
        return complex(self.entries[0, 0])

    @property
    def diagonal(self) -> np.ndarray:
        """``u_jj`` for ``2 <= j <= n+1``."""
        return np.diag(self.entries)[1:].copy()

    @property
    def flags(self) -> dict:
        return {
            "lower_block_upper_triangular": self.lower_block_upper_triangular,
            "constant_diagonal": self.constant_diagonal,
        }


def unitarity_residual(m) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))))


def check_unitary(m) -> UnitaryFrame:
    """Validate ``m`` as a unitary frame and detect its structure flags.

    Raises :class:`NotUnitary` when ``max|M M* - I| >= 1e-10``.
    """
    m = np.array(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeMismatch(f"expected a square matrix, got shape {m.shape}")
    res = unitarity_residual(m)
    if not res < UNITARY_TOL:
        raise NotUnitary(res)
    m.setflags(write=False)
    low = m[1:, 1:]
    triangular = bool(np.all(np.abs(np.tril(low, -1)) <= TRIANGULAR_TOL))
    zeta = None
    d = np.diag(low)
    if d.size and np.all(np.abs(d - d[0]) <= DIAGONAL_TOL) and 0 < abs(d[0]) < 1:
        zeta = complex(d[0])
    return UnitaryFrame(m, triangular, zeta)


def _sort_key(x):
    return (round(cmath.phase(x), 12), round(abs(x), 12))


def schur_normalize(frame: UnitaryFrame):
    """Conjugate by ``diag(1, B)`` so the lower block becomes upper triangular.

    Returns ``(frame', B)`` with ``frame' = diag(1,B) U diag(1,B)*``.  The
    diagonal of the new lower block (its eigenvalues) is ordered by ascending
    argument, then ascending modulus.  A frame that is already normalized is
    returned unchanged together with the identity.
    """
    if not isinstance(frame, UnitaryFrame):
        frame = check_unitary(frame)
    n = frame.n
    if frame.lower_block_upper_triangular:
        return frame, np.eye(n, dtype=complex)
    t, z = scipy.linalg.schur(frame.lower, output="complex")
    t = np.array(t, dtype=complex, order="F")
    z = np.array(z, dtype=complex, order="F")
    # selection sort of the diagonal, one swap-chain per position
    for k in range(n):
        d = np.diag(t)[k:]
        j = k + min(range(len(d)), key=lambda i: _sort_key(d[i]))
        if j != k:
            t, z, info = ztrexc(t, z, j + 1, k + 1)
            if info != 0:  # pragma: no cover - LAPACK reordering failure
                raise RuntimeError(f"ztrexc failed with info={info}")
    b = z.conj().T
    big = np.eye(n + 1, dtype=complex)
    big[1:, 1:] = b
    out = big @ frame.entries @ big.conj().T
    out[1:, 1:][np.tril_indices(n, -1)] = 0.0
    return check_unitary(out), b


def base_frame_matrix() -> np.ndarray:
    """The explicit 3×3 frame with ``|u22| = |u33| = 1/√2``."""
    r = 1 / math.sqrt(2)
    return np.array(
        [[-0.5, r, 0.5], [0.5, r, -0.5], [r, 0.0, r]], dtype=complex
    )


def _extend(v, c1, c2, phase=1.0):
    """One induction step ``U(m) -> U(m+1)``.

    The first row of ``v`` is spread over columns 1, 3, 4, ... (vector ``a``),
    a fresh basis direction ``e`` fills column 2, and the new first two rows
    are the orthonormal pair ``c̄1 e - c̄2 a`` and ``c1 a + c2 e`` of
    ``span{a, e}``.  The remaining rows of ``v`` are kept with a zero in the
    new column.  The new ``u22`` equals ``c2``.
    """
    m = v.shape[0]
    a = np.insert(v[0], 1, 0.0)
    e = np.zeros(m + 1, dtype=complex)
    e[1] = 1.0
    u2 = c1 * a + c2 * e
    u1 = phase * (np.conj(c1) * e - np.conj(c2) * a)
    rest = np.insert(v[1:], 1, 0.0, axis=1)
    return np.vstack([u1, u2, rest])


def build_hessenberg_unitary(n: int, seed: int = 0, unimodular_slots=()) -> UnitaryFrame:
    """A frame with upper-triangular lower block built by induction on ``n``.

    ``seed = 0`` is the canonical choice (every ``|u_jj| = 1/√2``; ``n = 2``
    reproduces :func:`base_frame_matrix`).  Other seeds randomize the moduli of
    the diagonal in ``[0.15, 0.95]`` together with every free phase.

    ``unimodular_slots`` lists 1-based indices ``j`` in ``2..n+1`` whose
    ``u_jj`` is forced onto the unit circle; row and column ``j`` then vanish
    off the diagonal.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    slots = {int(j) for j in unimodular_slots}
    if not slots <= set(range(2, n + 2)):
        raise ValueError(f"unimodular slots must lie in 2..{n + 1}")
    rng = np.random.default_rng(seed) if seed else None

    def draw_pair():
        if rng is None:
            return 1 / math.sqrt(2), 1 / math.sqrt(2), 1.0
        r2 = rng.uniform(0.15, 0.95)
        p1, p2, th = rng.uniform(0, 2 * math.pi, 3)
        return (
            math.sqrt(1 - r2 * r2) * cmath.exp(1j * p1),
            r2 * cmath.exp(1j * p2),
            cmath.exp(1j * th),
        )

    # base V0 = [[s̄, -c̄], [c, s]] in U(2); its v22 = s ends up in slot n+1
    c, s, ph = draw_pair()
    if n + 1 in slots:
        c, s = 0.0, s / abs(s)
    v = np.array([[np.conj(s) * ph, -np.conj(c) * ph], [c, s]], dtype=complex)
    for k in range(1, n):
        c1, c2, ph = draw_pair()
        if n + 1 - k in slots:
            c1, c2 = 0.0, c2 / abs(c2)
        v = _extend(v, c1, c2, ph)
    return check_unitary(v)


def build_family_unitary(zeta, n: int) -> UnitaryFrame:
    """Frame with constant lower diagonal ``ζ`` inducing ``z((ζ̄z-1)/(z-ζ))ⁿ``.

    Row 1 is multiplied by a unimodular constant so that ``u11 = ζ̄ⁿ``; this
    amounts to precomposing the isometry with a disk rotation.
    """
    zeta = complex(zeta)
    if not 0 < abs(zeta) < 1 or not math.isfinite(abs(zeta)):
        raise InvalidZeta(f"zeta must satisfy 0 < |zeta| < 1, got {zeta}")
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    s = math.sqrt(1 - abs(zeta) ** 2)
    v = np.array([[-zeta.conjugate(), s], [s, zeta]], dtype=complex)
    for _ in range(n - 1):
        v = _extend(v, s, zeta)
    target = zeta.conjugate() ** n
    v[0] *= target / v[0, 0]
    return check_unitary(v)


def frame_to_json(frame: UnitaryFrame) -> dict:
    zeta = frame.constant_diagonal
    return {
        "dim": frame.dim,
        "entries": encode_array(frame.entries),
        "flags": {
            "lower_block_upper_triangular": frame.lower_block_upper_triangular,
            "constant_diagonal": None if zeta is None else encode_complex(zeta),
        },
    }


def frame_from_json(obj) -> UnitaryFrame:
    m = decode_array(obj["entries"])
    if m.ndim != 2 or m.shape[0] != int(obj.get("dim", m.shape[0])):
        raise ShapeMismatch("frame entries do not match the declared dimension")
    frame = check_unitary(m)
    flags = obj.get("flags") or {}
    if flags.get("constant_diagonal") is not None:
        decode_complex(flags["constant_diagonal"])
    return frame
