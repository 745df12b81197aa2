import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from holoiso.errors import NotBlaschkeForm, SampleAtSingularity, ZeroPolynomial
from holoiso.family import closed_form_R
from holoiso.rational import (
    INFINITY,
    BlaschkeForm,
    Poly,
    RationalMap,
    circle_symmetry_residual,
    coefficient_distance,
    eval_rational,
    is_infinity,
    rational_from_json,
    rational_to_json,
    root_multiplicities,
    roots,
    to_blaschke,
)


def _mp_roots(p: Poly):
    # descending coefficients for mpmath
    c = [mpmath.mpc(x.real, x.imag) for x in p.coeffs[::-1]]
    with mpmath.workdps(40):
        return sorted((complex(r) for r in mpmath.polyroots(c, maxsteps=200, extraprec=200)), key=abs)


def _matched(a, b):
    a, b = list(a), list(b)
    worst = 0.0
    for x in a:
        i = min(range(len(b)), key=lambda k: abs(b[k] - x))
        worst = max(worst, abs(b.pop(i) - x))
    return worst


circle = 0.7 * np.exp(2j * np.pi * np.arange(32) / 32 + 0.1j)


class TestPoly:
    def test_trailing_zeros_are_stripped(self):
        p = Poly([1, 2, 0, 0])
        assert p.degree == 1
        assert Poly([0, 0]).is_zero and Poly([]).degree == -1

    def test_arithmetic(self):
        p, q = Poly([1, 1]), Poly([-1, 1])
        assert np.allclose((p * q).coeffs, [-1, 0, 1])
        assert np.allclose((p - q).coeffs, [2])
        assert np.allclose((p + q).coeffs, [0, 2])

    def test_evaluation_and_derivative(self):
        p = Poly([1, -3, 0, 2])  # 2z^3 - 3z + 1
        v, d = p.value_and_derivative(1.5)
        assert v == pytest.approx(2 * 1.5**3 - 3 * 1.5 + 1)
        assert d == pytest.approx(6 * 1.5**2 - 3)
        assert np.allclose(p.deriv().coeffs, [-3, 0, 6])

    @pytest.mark.parametrize("r", [0.3 + 0.1j, 4.0 - 2.0j])
    def test_deflate_exact_root(self, r):
        p = Poly.from_roots([r, 0.5, -2j])
        q, rem = p.deflate(r)
        assert abs(rem) < 1e-12
        assert _matched(roots(q), [0.5, -2j]) < 1e-12


class TestRoots:
    def test_unit_examples(self):
        assert _matched(roots(Poly([-1, 0, 1])), [1, -1]) < 1e-14

    def test_double_root_with_multiplicity(self):
        p = Poly.from_roots([0.2, 0.2, 5])
        rm = root_multiplicities(p)
        assert [m for _, m in rm] == [2, 1]
        assert abs(rm[0][0] - 0.2) < 1e-12 and abs(rm[1][0] - 5) < 1e-12

    def test_critical_numerator_of_family(self):
        # oracle: high precision roots of p'q - pq'
        w = closed_form_R(0.2, 2).critical_numerator()
        got = roots(w)
        assert _matched(got, _mp_roots(w)) < 1e-10
        assert _matched(got, [0.2, 5, -0.2404083, -4.1595917]) < 1e-6

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomial):
            roots(Poly([0]))

    def test_constant_has_no_roots(self):
        assert roots(Poly([3])).size == 0

    def test_roots_at_origin(self):
        rm = root_multiplicities(Poly([0, 0, 1, 1]))
        assert rm[0] == (0j, 2)

    @given(
        st.lists(
            st.tuples(st.floats(0.05, 3.0), st.floats(0, 2 * math.pi)),
            min_size=1,
            max_size=7,
        )
    )
    def test_round_trip_against_mpmath(self, polar):
        rts = [r * cmath.exp(1j * t) for r, t in polar]
        for i, a in enumerate(rts):
            for b in rts[:i]:
                assume(abs(a - b) > 0.05)
        p = Poly.from_roots(rts)
        got = roots(p)
        assert len(got) == len(rts)
        scale = max(1.0, max(abs(z) for z in rts))
        assert _matched(got, rts) < 1e-8 * scale
        assert _matched(got, _mp_roots(p)) < 1e-8 * scale

    @given(st.floats(0.1, 2.0), st.floats(0, 2 * math.pi), st.integers(2, 4))
    def test_multiple_root_is_recovered(self, r, t, m):
        a = r * cmath.exp(1j * t)
        p = Poly.from_roots([a] * m + [-a - 1])
        rm = root_multiplicities(p)
        mults = sorted(k for _, k in rm)
        assert mults == [1, m]
        z = next(z for z, k in rm if k == m)
        assert abs(z - a) < 1e-9 * max(1, r)


class TestRationalMap:
    def test_identity_evaluation(self):
        assert eval_rational(RationalMap.identity(), 0.3 + 0.4j) == 0.3 + 0.4j

    def test_pole_returns_infinity(self):
        assert is_infinity(eval_rational(closed_form_R(0.5, 2), 0.5))

    def test_value_on_circle(self):
        assert eval_rational(closed_form_R(0.5, 2), 1) == pytest.approx(1)

    def test_infinity_argument(self):
        R = closed_form_R(0.5, 2)
        assert is_infinity(eval_rational(R, INFINITY))
        assert eval_rational(RationalMap(R.num, R.den * Poly([0, 1])), INFINITY) == pytest.approx(0.25)
        assert is_infinity(eval_rational(RationalMap(Poly([0, 0, 1]), Poly([1])), INFINITY))
        assert eval_rational(RationalMap(Poly([1]), Poly([0, 1])), INFINITY) == 0

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroPolynomial):
            RationalMap(Poly([1]), Poly([]))

    def test_zero_numerator_is_zero_map(self):
        z = RationalMap(Poly(), Poly([1, 1]))
        assert z.is_zero and z.degree == 0 and eval_rational(z, -1) == 0

    def test_removable_singularity(self):
        m = RationalMap(Poly.from_roots([0.5, 2]), Poly.from_roots([0.5]))
        assert eval_rational(m, 0.5) == pytest.approx(-1.5)

    def test_reduced_cancels_common_factor(self):
        m = RationalMap(Poly.from_roots([0.5, 2, 0]), Poly.from_roots([0.5, 3]))
        r = m.reduced()
        assert r.degree == 2
        for z in (0.1j, -0.7, 1.3 + 0.2j):
            assert abs(eval_rational(r, z) - eval_rational(m, z)) < 1e-12

    def test_degree(self):
        assert closed_form_R(0.3, 4).degree == 5
        assert RationalMap.identity().degree == 1

    def test_json_round_trip(self):
        R = closed_form_R(0.3 - 0.2j, 3)
        back = rational_from_json(rational_to_json(R))
        assert coefficient_distance(R, back) == 0

    def test_arithmetic_matches_pointwise(self):
        a, b = closed_form_R(0.4, 2), RationalMap(Poly([1, 2j]), Poly([3, 1]))
        for z in (0.1 + 0.2j, -0.6, 2j):
            assert abs(eval_rational(a * b, z) - eval_rational(a, z) * eval_rational(b, z)) < 1e-12
            assert abs(eval_rational(a + b, z) - eval_rational(a, z) - eval_rational(b, z)) < 1e-12

    def test_coefficient_distance_ignores_scaling(self):
        R = closed_form_R(0.3, 2)
        assert coefficient_distance(R, RationalMap(R.num * 3j, R.den * 3j)) < 1e-15


class TestCircleSymmetry:
    def test_identity(self):
        assert circle_symmetry_residual(RationalMap.identity(), circle) < 1e-15

    def test_monomial(self):
        assert circle_symmetry_residual(RationalMap(Poly([0, 0, 1]), Poly([1])), circle) < 1e-15

    def test_family(self, rng):
        z = rng.uniform(0.1, 0.9, 50) * np.exp(2j * np.pi * rng.uniform(size=50))
        z = z[np.abs(z - 0.5) > 1e-3]
        assert circle_symmetry_residual(closed_form_R(0.5, 2), z) < 1e-10

    def test_non_blaschke_fails(self):
        m = RationalMap(Poly([0, 1, 1]), Poly([2]))
        assert circle_symmetry_residual(m, circle) > 1e-2

    def test_sample_at_pole(self):
        with pytest.raises(SampleAtSingularity):
            circle_symmetry_residual(closed_form_R(0.5, 2), [0.5])
        with pytest.raises(SampleAtSingularity):
            circle_symmetry_residual(closed_form_R(0.5, 2), [0])


class TestBlaschke:
    def test_identity(self):
        f = to_blaschke(RationalMap.identity())
        assert f.alpha0 == 1 and f.poles == ()

    def test_family(self):
        f = to_blaschke(closed_form_R(0.5, 2))
        assert abs(abs(f.alpha0) - 0.25) < 1e-12
        assert _matched(f.poles, [0.5, 0.5]) < 1e-9
        assert f.degree == 3
        for a, z in f.pairs:
            assert abs(z - 1 / a.conjugate()) < 1e-15

    def test_non_blaschke(self):
        with pytest.raises(NotBlaschkeForm):
            to_blaschke(RationalMap(Poly([0, 1, 1]), Poly([2])))
        with pytest.raises(NotBlaschkeForm):
            to_blaschke(RationalMap(Poly([1, 1]), Poly([1])))

    @given(
        st.floats(0, 2 * math.pi),
        st.lists(st.tuples(st.floats(0.05, 0.9), st.floats(0, 2 * math.pi)), max_size=4),
    )
    def test_round_trip_and_invariants(self, phase, polar):
        poles = [r * cmath.exp(1j * t) for r, t in polar]
        for i, a in enumerate(poles):
            for b in poles[:i]:
                assume(abs(a - b) > 0.05)
        alpha0 = cmath.exp(1j * phase) * math.prod(abs(a) for a in poles)
        m = BlaschkeForm(alpha0, tuple(poles)).to_rational()
        assert circle_symmetry_residual(m, circle * 1.1) < 1e-9
        f = to_blaschke(m)
        assert abs(f.alpha0 - alpha0) < 1e-10
        assert _matched(f.poles, poles) < 1e-8
        # R'(0) = alpha0 / prod |a|^2
        _, d0 = m.value_and_derivative(0)
        expected = alpha0 / math.prod(abs(a) ** 2 for a in poles)
        assert abs(d0 - expected) < 1e-9 * max(1, abs(expected))
