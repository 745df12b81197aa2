import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import unitary_group

from holoiso.errors import InvalidZeta, NotUnitary, ShapeMismatch
from holoiso.unitary import (
    build_family_unitary,
    build_hessenberg_unitary,
    check_unitary,
    frame_from_json,
    frame_to_json,
    schur_normalize,
    unitarity_residual,
)


def test_identity_flags():
    f = check_unitary(np.eye(3))
    assert f.lower_block_upper_triangular
    assert f.constant_diagonal is None  # diagonal 1 is not in the disk


def test_base_three_by_three_frame(base_matrix):
    f = check_unitary(base_matrix)
    assert f.lower_block_upper_triangular
    assert np.allclose(np.abs(f.diagonal), 1 / math.sqrt(2))
    assert f.constant_diagonal == pytest.approx(1 / math.sqrt(2))


def test_not_unitary():
    with pytest.raises(NotUnitary) as exc:
        check_unitary([[1, 0], [1, 1]])
    assert exc.value.residual > 0.5


def test_not_square():
    with pytest.raises(ShapeMismatch):
        check_unitary(np.ones((2, 3)))


def test_canonical_builder_reproduces_base(base_matrix):
    f = build_hessenberg_unitary(2, seed=0)
    assert np.max(np.abs(f.entries - base_matrix)) < 1e-15


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("seed", [0, 1, 7, 123])
def test_hessenberg_structure(n, seed):
    f = build_hessenberg_unitary(n, seed)
    assert unitarity_residual(f.entries) < 1e-13
    assert f.lower_block_upper_triangular
    assert np.all((np.abs(f.diagonal) > 0.1) & (np.abs(f.diagonal) < 1))
    # structural zeros: U'' strictly lower part vanishes exactly
    assert np.all(np.tril(f.lower, -1) == 0)


def test_four_by_four_structural_zeros():
    f = build_hessenberg_unitary(3, seed=5)
    low = f.lower
    assert low[1, 0] == 0 and low[2, 0] == 0 and low[2, 1] == 0


@pytest.mark.parametrize("n,slot", [(2, 2), (3, 2), (4, 3), (5, 6)])
def test_unimodular_slot(n, slot):
    f = build_hessenberg_unitary(n, seed=3, unimodular_slots=(slot,))
    j = slot - 1
    assert abs(abs(f.entries[j, j]) - 1) < 1e-14
    off_row = np.delete(f.entries[j], j)
    off_col = np.delete(f.entries[:, j], j)
    assert np.max(np.abs(off_row)) < 1e-14 and np.max(np.abs(off_col)) < 1e-14


def test_bad_slot():
    with pytest.raises(ValueError):
        build_hessenberg_unitary(3, unimodular_slots=(1,))


def test_family_base_matrix():
    z = 0.5
    s = math.sqrt(1 - z * z)
    expected = np.array(
        [[z * z, s, -z * s], [-s * z, z, 1 - z * z], [s, 0, z]], dtype=complex
    )
    f = build_family_unitary(z, 2)
    assert np.max(np.abs(f.entries - expected)) < 1e-15


@given(st.floats(0.02, 0.98), st.floats(0, 2 * math.pi), st.integers(2, 6))
def test_family_frame(r, t, n):
    zeta = r * cmath.exp(1j * t)
    f = build_family_unitary(zeta, n)
    assert f.constant_diagonal == pytest.approx(zeta, abs=1e-12)
    assert f.lower_block_upper_triangular
    assert abs(f.u11 - zeta.conjugate() ** n) < 1e-14
    assert unitarity_residual(f.entries) < 1e-13


@pytest.mark.parametrize("zeta", [0, 1.5, 1, 2j])
def test_family_invalid_zeta(zeta):
    with pytest.raises(InvalidZeta):
        build_family_unitary(zeta, 2)


def test_schur_on_normalized_frame_is_identity():
    f = build_hessenberg_unitary(4, seed=2)
    g, b = schur_normalize(f)
    assert g is f and np.array_equal(b, np.eye(4))


def test_schur_block_diagonal_eigenvalues():
    v = np.array([[0.6, 0.8], [-0.8, 0.6]], dtype=complex)
    u = np.zeros((3, 3), dtype=complex)
    u[0, 0] = cmath.exp(0.3j)
    u[1:, 1:] = v
    g, b = schur_normalize(check_unitary(u))
    eig = np.linalg.eigvals(v)
    assert np.allclose(sorted(g.diagonal, key=cmath.phase), sorted(eig, key=cmath.phase), atol=1e-12)


@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_schur_random_unitaries(n, seed):
    u = unitary_group.rvs(n + 1, random_state=seed)
    g, b = schur_normalize(check_unitary(u))
    assert g.lower_block_upper_triangular
    assert unitarity_residual(b) < 1e-12
    big = np.eye(n + 1, dtype=complex)
    big[1:, 1:] = b
    assert np.max(np.abs(big @ u @ big.conj().T - g.entries)) < 1e-10
    # diagonal equals the spectrum of U'' ordered by argument then modulus
    eig = np.linalg.eigvals(u[1:, 1:])
    left = list(g.diagonal)
    for x in eig:
        i = min(range(len(left)), key=lambda k: abs(left[k] - x))
        assert abs(left.pop(i) - x) < 1e-9
    args = [cmath.phase(x) for x in g.diagonal]
    assert all(a <= b + 1e-9 for a, b in zip(args, args[1:]))


def test_json_round_trip():
    f = build_family_unitary(0.3 + 0.1j, 3)
    g = frame_from_json(frame_to_json(f))
    assert np.array_equal(f.entries, g.entries)
    assert g.constant_diagonal == f.constant_diagonal
