import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import unitary_group

from holoiso.errors import DegenerateFrame, OutsideDomain
from holoiso.family import closed_form_R
from holoiso.germ import (
    component_rationals,
    degenerate_solve,
    evaluate,
    isometry_from_json,
    isometry_to_json,
    polar_grid,
    rational_from_unitary,
    schur_complement_rational,
    solve_germ,
    verify,
)
from holoiso.rational import Poly, RationalMap, coefficient_distance, eval_rational
from holoiso.unitary import build_family_unitary, build_hessenberg_unitary, check_unitary, schur_normalize

PERM = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)


def _cauchy_derivative(iso, r=0.1, m=64):
    # spectrally accurate f1'(0) from a contour average
    t = np.exp(2j * np.pi * np.arange(m) / m)
    vals = np.array([evaluate(iso, r * x)[0] for x in t])
    return complex(np.mean(vals / t) / r)


class TestRational:
    def test_identity_frame(self):
        R = rational_from_unitary(np.eye(3))
        assert coefficient_distance(R, RationalMap.identity()) < 1e-15

    def test_base_frame(self, base_matrix):
        s = math.sqrt(2)
        expected = RationalMap(
            Poly.from_roots([0, s, s], lead=-0.5), Poly.from_roots([1 / s, 1 / s])
        )
        assert coefficient_distance(rational_from_unitary(base_matrix), expected) < 1e-14

    def test_family(self):
        R = rational_from_unitary(build_family_unitary(0.5, 2))
        assert coefficient_distance(R, closed_form_R(0.5, 2)) < 1e-14

    @pytest.mark.parametrize("seed", [1, 2, 3])
    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_two_routes_agree(self, n, seed):
        f = build_hessenberg_unitary(n, seed)
        a = rational_from_unitary(f)
        b = schur_complement_rational(f)
        big = max(1.0, float(np.max(np.abs(b.normalized().num.coeffs))))
        assert coefficient_distance(a, b) / big < 1e-10

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateFrame):
            rational_from_unitary(PERM)
        with pytest.raises(DegenerateFrame):
            component_rationals(PERM)

    def test_identity_components_vanish(self):
        assert all(c.is_zero for c in component_rationals(np.eye(3)))


class TestSolve:
    def test_identity(self):
        iso = solve_germ(np.eye(3))
        assert np.allclose(evaluate(iso, 0.5j), [0.5j, 0, 0], atol=1e-15)

    def test_origin(self):
        iso = solve_germ(build_hessenberg_unitary(3, 4))
        assert np.array_equal(evaluate(iso, 0), np.zeros(4))

    def test_degenerate_permutation(self):
        iso = solve_germ(PERM)
        assert iso.degenerate and iso.R is None
        assert np.allclose(evaluate(iso, 0.3 - 0.2j), [0, 0.3 - 0.2j, 0])
        rep = verify(iso, polar_grid(10, 10))
        assert rep.max_functional < 1e-14 and rep.max_defining < 1e-14
        assert degenerate_solve(PERM).degenerate

    def test_family_derivative_at_origin(self):
        iso = solve_germ(build_family_unitary(0.2, 2))
        assert abs(_cauchy_derivative(iso) - 0.04) < 1e-10

    def test_base_frame_derivative(self, base_matrix):
        iso = solve_germ(base_matrix)
        assert abs(abs(_cauchy_derivative(iso)) - 0.5) < 1e-10

    def test_family_n3_residuals(self):
        rep = verify(solve_germ(build_family_unitary(0.5, 3)), polar_grid())
        assert rep.max_functional < 1e-9 and rep.max_defining < 1e-9
        assert rep.to_json()["count"] == 200

    def test_components_compose(self):
        iso = solve_germ(build_hessenberg_unitary(3, 9))
        for w in (0.3, -0.2 + 0.6j):
            f = evaluate(iso, w)
            assert abs(eval_rational(iso.R, f[0]) - w) < 1e-12
            for j, Rj in enumerate(iso.components):
                assert abs(eval_rational(Rj, f[0]) - f[j + 1]) < 1e-15

    def test_outside_domain(self):
        iso = solve_germ(build_family_unitary(0.2, 2))
        with pytest.raises(OutsideDomain):
            evaluate(iso, 1.0)
        with pytest.raises(OutsideDomain):
            evaluate(iso, 0.5, radius_cap=1.1)

    def test_cache_does_not_change_values(self):
        iso = solve_germ(build_hessenberg_unitary(4, 11))
        a = evaluate(iso, 0.9 * np.exp(0.4j))
        b = evaluate(iso.clone(), 0.9 * np.exp(0.4j))
        c = evaluate(solve_germ(iso.frame), 0.9 * np.exp(0.4j))
        assert np.max(np.abs(a - c)) < 1e-13 and np.max(np.abs(a - b)) < 1e-13

    def test_json_round_trip(self):
        iso = solve_germ(build_hessenberg_unitary(3, 2))
        back = isometry_from_json(isometry_to_json(iso))
        w = 0.4 + 0.3j
        assert np.max(np.abs(evaluate(iso, w) - evaluate(back, w))) < 1e-14
        deg = isometry_from_json(isometry_to_json(solve_germ(PERM)))
        assert deg.degenerate


@given(st.integers(2, 5), st.integers(0, 2**31 - 1))
def test_random_unitary_frames(n, seed):
    # frames that are not built triangular go through the Schur form first
    u = unitary_group.rvs(n + 1, random_state=seed)
    frame, _ = schur_normalize(check_unitary(u))
    iso = solve_germ(frame)
    grid = polar_grid(6, 4, 0.9)
    rep = verify(iso, grid)
    assert rep.max_functional < 1e-9 and rep.max_defining < 1e-9


@given(st.integers(1, 10**6), st.integers(2, 6))
def test_hessenberg_frames_satisfy_identity(seed, n):
    iso = solve_germ(build_hessenberg_unitary(n, seed))
    assert iso.R.degree == n + 1
    rep = verify(iso, polar_grid(5, 4, 0.95))
    assert rep.max_functional < 1e-9 and rep.max_defining < 1e-9
