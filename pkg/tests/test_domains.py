import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import unitary_group

from holoiso.domains import (
    DomainPoint,
    DomainSpec,
    block_join,
    block_multiplicativity_residual,
    composite_residual,
    embed,
    generic_norm,
    membership,
    random_member,
)
from holoiso.errors import NotMember, ShapeMismatch
from holoiso.family import family_map
from holoiso.germ import polar_grid


class TestSpec:
    def test_parse(self):
        assert DomainSpec.parse("I:2:3") == DomainSpec.I(2, 3)
        assert DomainSpec.parse("iv:3").shape == (3,)
        assert str(DomainSpec.II(5)) == "II(5)"

    @pytest.mark.parametrize("kind,sizes", [("V", (2,)), ("I", (2,)), ("IV", (2,)), ("II", (1,))])
    def test_invalid(self, kind, sizes):
        with pytest.raises(ValueError):
            DomainSpec(kind, sizes)

    def test_shape_checks(self):
        with pytest.raises(ShapeMismatch):
            DomainPoint(DomainSpec.I(2, 2), np.zeros((3, 2)))
        with pytest.raises(ShapeMismatch):
            DomainPoint(DomainSpec.II(3), np.ones((3, 3)))
        with pytest.raises(ShapeMismatch):
            DomainPoint(DomainSpec.III(2), np.array([[0, 1], [0, 0]]))


class TestMembership:
    @pytest.mark.parametrize("spec", [DomainSpec.I(2, 3), DomainSpec.II(4), DomainSpec.III(3)])
    def test_origin(self, spec):
        ok, margin = membership(DomainPoint(spec, np.zeros(spec.shape)))
        assert ok and margin == 1
        assert generic_norm(DomainPoint(spec, np.zeros(spec.shape)))[0] == pytest.approx(1)

    def test_origin_type_iv(self):
        ok, margin = membership(DomainPoint(DomainSpec.IV(3), np.zeros(3)))
        assert ok and margin == 1

    def test_outside(self):
        ok, margin = membership(DomainPoint(DomainSpec.I(2, 2), np.diag([1.1, 0])))
        assert not ok and margin < 0
        with pytest.raises(NotMember):
            generic_norm(DomainPoint(DomainSpec.I(2, 2), np.diag([1.1, 0])))

    def test_type_iv_example(self):
        ok, margin = membership(DomainPoint(DomainSpec.IV(3), [0.9, 0, 0]))
        assert ok
        assert margin == pytest.approx(1 + (0.5 * 0.81) ** 2 - 0.81)

    def test_type_iv_generic_norm_is_positive_inside(self, rng):
        for _ in range(50):
            p = random_member(DomainSpec.IV(4), rng)
            if membership(p)[0]:
                assert generic_norm(p)[0] > 0


class TestGenericNorm:
    @given(st.complex_numbers(max_magnitude=0.99), st.lists(st.complex_numbers(max_magnitude=0.5), min_size=2, max_size=2))
    def test_type_i_block(self, w, z):
        z = np.array(z)
        if np.sum(np.abs(z) ** 2) >= 1:
            return
        pt = embed(DomainSpec.I(2, 3), w, z)
        expected = (1 - abs(w) ** 2) * (1 - np.sum(np.abs(z) ** 2))
        assert generic_norm(pt)[0] == pytest.approx(expected, abs=1e-13)

    @given(st.complex_numbers(max_magnitude=0.99), st.lists(st.complex_numbers(max_magnitude=0.5), min_size=2, max_size=2))
    def test_type_ii_block(self, w, z):
        z = np.array(z)
        if np.sum(np.abs(z) ** 2) >= 1:
            return
        pt = embed(DomainSpec.II(5), w, z)
        expected = (1 - abs(w) ** 2) * (1 - np.sum(np.abs(z) ** 2))
        assert generic_norm(pt)[0] == pytest.approx(expected, abs=1e-13)

    def test_type_i_unitary_invariance(self, rng):
        # N(A Z B) = N(Z) for unitary A, B
        p = random_member(DomainSpec.I(3, 2), rng)
        a = unitary_group.rvs(3, random_state=1)
        b = unitary_group.rvs(2, random_state=2)
        q = DomainPoint(DomainSpec.I(3, 2), a @ p.value @ b)
        assert generic_norm(q)[0] == pytest.approx(generic_norm(p)[0], abs=1e-13)

    def test_embed_zero(self):
        pt = embed(DomainSpec.I(2, 3), 0, [0, 0])
        assert np.array_equal(pt.value, np.zeros((2, 3)))

    def test_embed_wrong_length(self):
        with pytest.raises(ShapeMismatch):
            embed(DomainSpec.I(2, 3), 0.1, [0, 0, 0])
        with pytest.raises(ShapeMismatch):
            embed(DomainSpec.II(4), 0.1, [0])


class TestComposites:
    def test_type_i(self):
        rep = composite_residual(DomainSpec.I(2, 3), family_map(0.3, 2), polar_grid(10, 5))
        assert rep["max_residual"] < 1e-9

    def test_type_ii(self):
        rep = composite_residual(DomainSpec.II(5), family_map(0.6j, 2), polar_grid(10, 5))
        assert rep["max_residual"] < 1e-9

    def test_type_iv(self):
        rep = composite_residual(DomainSpec.IV(3), None, polar_grid())
        assert rep["max_residual"] < 1e-12

    def test_origin(self):
        assert composite_residual(DomainSpec.I(2, 3), family_map(0.3, 2), [0])["max_residual"] == 0

    def test_type_iii(self):
        rep = composite_residual(DomainSpec.III(4), None, polar_grid(10, 5))
        assert rep["kind"] == "III" and rep["max_residual"] < 1e-10

    def test_source_mismatch(self):
        with pytest.raises(ShapeMismatch):
            composite_residual(DomainSpec.I(2, 4), family_map(0.3, 2), [0.1])
        with pytest.raises(ShapeMismatch):
            composite_residual(DomainSpec.I(2, 3), None, [0.1])


@given(st.complex_numbers(max_magnitude=0.99), st.integers(2, 5), st.integers(0, 1000))
def test_block_multiplicativity(w, m, seed):
    rng = np.random.default_rng(seed)
    Z = random_member(DomainSpec.III(m - 1), rng)
    big = generic_norm(block_join(w, Z))[0]
    assert big == pytest.approx((1 - abs(w) ** 2) * generic_norm(Z)[0], abs=1e-12)


def test_block_residual_helper():
    ws = 0.9 * np.exp(1j * np.arange(50))
    assert block_multiplicativity_residual(DomainSpec.III(3), ws, count=50) < 1e-10


def test_random_members_are_members(rng):
    for spec in (DomainSpec.I(2, 3), DomainSpec.II(4), DomainSpec.III(3)):
        for _ in range(20):
            assert membership(random_member(spec, rng))[0]
