from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CONFIGS
from fuchs.harmonic import ConfigFunction
from fuchs.padic import FieldParams, PrincipalUnit
from fuchs.quantize import Symbol, quantize_direct, wigner
from fuchs.repn import GroupElement, ThetaParam, random_group_element
from fuchs.star import (
    ThreePointKernel,
    covariance_check,
    star_sup_bound,
    star_via_kernel,
    star_via_operators,
    traciality_check,
    two_point_kernel,
)

P31 = FieldParams(3, 1)
TH = ThetaParam(3, Fraction(1))
seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("cfg", CONFIGS)
def test_kernel_route_matches_operator_route(cfg):
    p, n, m, N = cfg
    P, th = FieldParams(p, n), ThetaParam(p, Fraction(1))
    rng = np.random.default_rng(11)
    f1, f2 = Symbol.random(P, th, m, N, rng), Symbol.random(P, th, m, N, rng)
    assert star_via_kernel(f1, f2).max_diff(star_via_operators(f1, f2)) < 1e-10


def test_star_requantizes_to_product(rng):
    f1, f2 = Symbol.random(P31, TH, 3, 2, rng), Symbol.random(P31, TH, 2, 3, rng)
    A = quantize_direct(star_via_operators(f1, f2))
    B = quantize_direct(f1.refine(3, 3)) @ quantize_direct(f2.refine(3, 3))
    assert A.max_diff(B) < 1e-10


@given(seeds)
def test_associative(seed):
    rng = np.random.default_rng(seed)
    f1, f2, f3 = (Symbol.random(P31, TH, 2, 2, rng) for _ in range(3))
    left = star_via_operators(star_via_operators(f1, f2), f3)
    right = star_via_operators(f1, star_via_operators(f2, f3))
    assert left.max_diff(right) < 1e-10


@given(seeds)
def test_tracial(seed):
    rng = np.random.default_rng(seed)
    f1, f2 = Symbol.random(P31, TH, 3, 2, rng), Symbol.random(P31, TH, 3, 2, rng)
    lhs, rhs = traciality_check(f1, f2)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_trace_of_square_is_l2_norm(rng):
    f = Symbol.random(P31, TH, 3, 2, rng)
    lhs, _ = traciality_check(f, f.conj())
    assert lhs.real == pytest.approx(f.norm2(), rel=1e-10)
    assert abs(lhs.imag) < 1e-10


def test_unit_is_neutral(rng):
    f = Symbol.random(P31, TH, 3, 3, rng)
    one = Symbol.constant(P31, TH, 3, 3)
    assert star_via_operators(one, f).max_diff(f) < 1e-10
    assert star_via_operators(f, one).max_diff(f) < 1e-10


@given(seeds)
def test_covariance_under_group(seed):
    rng = np.random.default_rng(seed)
    f1, f2 = Symbol.random(P31, TH, 3, 2, rng), Symbol.random(P31, TH, 3, 2, rng)
    dilation = GroupElement.of(P31, 4, 0)
    translation = GroupElement.of(P31, 1, Fraction(2, 9))
    for g in (dilation, translation, random_group_element(P31, rng, t_scale=2)):
        assert covariance_check(f1, f2, g) < 1e-10


def test_wigner_composition(rng):
    # |b><a| |d><c| = <a, d> |b><c|
    a, b, c, d = (ConfigFunction.random(P31, 3, rng) for _ in range(4))
    left = star_via_operators(wigner(a, b, TH), wigner(c, d, TH))
    assert left.max_diff(wigner(c, b, TH) * a.inner(d)) < 1e-10


@given(seeds)
def test_three_point_kernel_modulus_and_reduction(seed):
    rng = np.random.default_rng(seed)
    K = ThreePointKernel(P31, TH)
    g1, g2, g3 = (random_group_element(P31, rng, t_scale=3) for _ in range(3))
    assert abs(K(g1, g2, g3)) == pytest.approx(9.0)
    assert K.two_point(g1, g2) == pytest.approx(two_point_kernel(P31, TH, g1, g2))
    # cyclic symmetry of the phase
    assert K(g1, g2, g3) == pytest.approx(K(g2, g3, g1))


def test_three_point_kernel_diagonal_invariance(rng):
    K = ThreePointKernel(P31, TH)
    g1, g2, g3 = (random_group_element(P31, rng, t_scale=3) for _ in range(3))
    w = PrincipalUnit.of(Fraction(7), P31, 8)
    shift = lambda g: GroupElement(g.u * w, g.t)  # noqa: E731
    assert K(shift(g1), shift(g2), shift(g3)) == pytest.approx(K(g1, g2, g3))
    assert K(g1, g1, g3) == pytest.approx(9.0)


def test_sup_bound(rng):
    f1, f2 = Symbol.random(P31, TH, 2, 2, rng), Symbol.random(P31, TH, 2, 2, rng)
    assert star_via_operators(f1, f2).sup_norm() <= star_sup_bound(f1, f2) * (1 + 1e-12)


def test_theta_mismatch_rejected(rng):
    f1 = Symbol.random(P31, TH, 2, 2, rng)
    f2 = Symbol.random(P31, ThetaParam(3, Fraction(2)), 2, 2, rng)
    with pytest.raises(ValueError):
        star_via_operators(f1, f2)
