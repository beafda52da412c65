import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import CONFIGS
from fuchs.calculus import (
    ClosureError,
    b_seminorms,
    coefficient_decay_check,
    coefficient_integral_check,
    coherent_wigner,
    compose_bounded_check,
    cv_certify,
    cv_constant,
    i_apply,
    ideal_bound,
    j_apply,
    j_matrix,
    js_wigner_l1,
    ks_kernel,
    wigner_support_cutoff,
    mu0_l1_norm,
    omega_convolution,
    omega_pair_integral,
    omega_weight,
    product_bound,
    prop_wigner_l1_bound,
    reconstruct_symbol,
    wigner_weight_check,
)
from fuchs.harmonic import ConfigFunction
from fuchs.padic import INF, FieldParams
from fuchs.quantize import OperatorKernel, Symbol, quantize_direct, wigner
from fuchs.repn import GroupElement, ThetaParam, pi_apply, random_group_element

P31 = FieldParams(3, 1)
TH = ThetaParam(3, Fraction(1))
seeds = st.integers(0, 2**32 - 1)


# ---- kappa_s and mu_0 norms ------------------------------------------------

def test_kappa_frozen_values():
    k = ks_kernel(-2, P31)
    assert k(1) == pytest.approx(8 / 3, abs=1e-14)
    assert k(2) == pytest.approx(32 / 9, abs=1e-14)
    assert k(0) == 0.0
    assert k(INF) == pytest.approx(4.0)


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (3, 2)])
@pytest.mark.parametrize("s", [-1.5, -2.0, -3.0])
def test_kappa_matches_shell_sum(p, n, s):
    k = ks_kernel(s, FieldParams(p, n))
    for v in range(n, n + 3):
        assert k(v) == pytest.approx(oracles.kappa(s, p, n, v), abs=1e-10)


def test_kappa_symmetric_in_inverse():
    k = ks_kernel(-2.5, P31)
    PL = 3**5
    for u in range(1, PL, 3):
        assert k.at_unit(u, 5) == pytest.approx(k.at_unit(pow(u, -1, PL), 5))


def test_kappa_rejects_divergent_exponent():
    with pytest.raises(ValueError):
        ks_kernel(-1, P31)


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (3, 2), (7, 1)])
def test_mu0_l1_norm(p, n):
    P = FieldParams(p, n)
    for s in (-1.5, -2, -4):
        assert mu0_l1_norm(s, P) == pytest.approx(oracles.mu0_l1(s, p, n), rel=1e-10)
    assert mu0_l1_norm(-60, P) == pytest.approx(p**n, rel=1e-12)
    vals = [mu0_l1_norm(s, P) for s in (-4, -3, -2, -1.5, -1.1)]
    assert vals == sorted(vals)
    with pytest.raises(ValueError):
        mu0_l1_norm(-1, P)


def test_mu0_l1_frozen():
    assert mu0_l1_norm(-2, P31) == pytest.approx(4.0)


# ---- J^s ----------------------------------------------------------------

def test_j_zero_is_identity():
    assert np.array_equal(j_matrix(0, P31, 3, 2).matrix, np.eye(9 * 3))


@pytest.mark.parametrize("cfg", CONFIGS)
def test_semigroup_and_routes(cfg):
    p, n, m, N = cfg
    P = FieldParams(p, n)
    m = max(m, N + n)
    J = lambda s, route="auto": j_matrix(s, P, m, N, route=route).matrix  # noqa: E731
    assert np.allclose(J(-2) @ J(-3), J(-5), atol=1e-10)
    assert np.allclose(J(2) @ J(-2), np.eye(len(J(2))), atol=1e-9)
    assert np.allclose(J(1) @ J(1), J(2), atol=1e-9)
    assert np.allclose(J(-3, "direct"), J(-3, "spectral"), atol=1e-9)


def test_j_negative_is_positive_definite():
    A = j_matrix(-2, P31, 3, 2).matrix
    assert np.allclose(A, A.T.conj(), atol=1e-12)
    assert np.linalg.eigvalsh(A).min() > 0


def test_j_closure_enforced():
    with pytest.raises(ClosureError):
        j_matrix(-2, P31, 2, 2, strict=True)
    F = Symbol.random(P31, TH, 2, 2, np.random.default_rng(0))
    with pytest.raises(ClosureError):
        j_apply(-2, F, strict=True)
    assert j_apply(-2, F).m == 3


def test_j_commutes_with_weight_multiplication(rng):
    F = Symbol.random(P31, TH, 3, 2, rng)
    assert j_apply(-2, i_apply(F)).max_diff(i_apply(j_apply(-2, F))) < 1e-10


def test_constant_is_eigenvector():
    one = Symbol.constant(P31, TH, 3, 2)
    out = j_apply(-2, one)
    assert np.allclose(out.values, out.values[0, 0], atol=1e-12)


@given(seeds)
@settings(max_examples=15)
def test_product_and_ideal_bounds(seed):
    rng = np.random.default_rng(seed)
    F1, F2 = Symbol.random(P31, TH, 3, 2, rng), Symbol.random(P31, TH, 3, 2, rng)
    lhs, rhs = product_bound(F1, F2, 0)
    assert lhs <= rhs * (1 + 1e-9)
    lhs, rhs = ideal_bound(F1, F2, 0, 1)
    assert lhs <= rhs * (1 + 1e-9)


def test_b_seminorms_finite(rng):
    rep = b_seminorms(Symbol.random(P31, TH, 3, 2, rng), 3)
    assert rep.finite() and len(rep.entries) == 4


# ---- coherent Wigner functions ------------------------------------------

def test_coherent_wigner_matches_wigner(rng):
    one = ConfigFunction.indicator(P31, 3)
    for _ in range(4):
        g = random_group_element(P31, rng, t_scale=3)
        W = coherent_wigner(g, TH)
        ref = wigner(one, pi_apply(g, one, TH), TH)
        m = max(W.m, ref.m)
        assert W.refine(m, m).max_diff(ref.refine(m, m)) < 1e-10


@pytest.mark.parametrize("s", [0.0, -2.0, 1.0])
def test_coherent_wigner_matches_oracle(s):
    rng = np.random.default_rng(5)
    for _ in range(3):
        g = random_group_element(P31, rng, t_scale=2)
        W = coherent_wigner(g, TH, s)
        L = max(W.m, W.N)
        u1 = g.u.residue(L)
        K = g.t_scale()
        t1 = Fraction(g.t_numerator(K), 3**K)
        for a in (0, 1, 2):
            for c in (0, 1, 2):
                u2 = 1 + 3 * a
                ref = oracles.coherent_wigner(u1, t1, u2, Fraction(c, 3**W.N), 3, 1, 1, L, s)
                assert W.values[a, c] == pytest.approx(ref, abs=1e-10)


def test_coherent_wigner_closed_form_is_j_of_wigner(rng):
    for _ in range(3):
        g = random_group_element(P31, rng, t_scale=2)
        W0 = coherent_wigner(g, TH)
        direct = j_apply(-2, W0)
        closed = coherent_wigner(g, TH, -2, N_eval=direct.N)
        assert closed.refine(direct.m, direct.N).max_diff(direct) < 1e-10


def test_coherent_wigner_support(rng):
    for _ in range(5):
        g = random_group_element(P31, rng, t_scale=4)
        R = wigner_support_cutoff(g)
        W = coherent_wigner(g, TH, N_eval=R + 2)
        outside = np.arange(W.shape[1]) % 3 ** 2 != 0  # |t2| > p^R
        assert np.abs(W.values[:, outside]).max() < 1e-12


def test_wigner_l1_bound():
    assert prop_wigner_l1_bound(-3, P31) == pytest.approx(7 / 27)
    rep = js_wigner_l1(-3, P31, TH, 4)
    assert rep.passed
    reps = [js_wigner_l1(s, P31, TH, 4).upper for s in (-5, -4, -3)]
    assert reps == sorted(reps)
    with pytest.raises(ValueError):
        js_wigner_l1(-2, P31, TH, 4)


def test_wigner_weight_corrected_constant(rng):
    for g in [GroupElement.identity(P31)] + [random_group_element(P31, rng, t_scale=k) for k in range(4)]:
        lhs, rhs = wigner_weight_check(g, TH, -3, corrected=True)
        assert lhs <= rhs * (1 + 1e-9)


def test_wigner_weight_identity_exact():
    lhs, printed = wigner_weight_check(GroupElement.identity(P31), TH, -3)
    assert lhs == pytest.approx(3.0**-2)
    # the q^-3n constant is too small by exactly a factor q^n / 2 here
    assert lhs / printed == pytest.approx(3 / 2)


# ---- omega weights and coefficient bounds -------------------------------

def test_omega_examples():
    assert omega_weight(-2, Fraction(0), P31) == 2
    assert omega_weight(-2, Fraction(1, 9), P31) == Fraction(1, 3) ** 2
    assert omega_weight(-2, Fraction(1, 3), P31) == 2


def test_omega_convolution_against_brute_force():
    p, n, a, b = 3, 1, -2.0, -2.0
    R = 8  # truncation radius p^R; the remainder is far below the tolerance
    ts = [Fraction(c, p**R) for c in range(p ** (R - n))]
    w = lambda c, t: float(oracles.mu0(t, p, n)) ** c + (1 if oracles.abs_p(t, p) <= p**n else 0)  # noqa: E731
    for th in (Fraction(0), Fraction(1, 9), Fraction(2, 27)):
        # sum over t classes mod p^-n Z_p (volume p^n) times Vol(U_n) = p^-n
        brute = sum(w(a, t) * w(b, th - t) for t in ts)
        v = oracles.val_p(th, p)
        assert omega_convolution(a, b, FieldParams(p, n), v) == pytest.approx(brute, rel=1e-3)


def test_omega_pair_integral():
    assert omega_pair_integral(-2, -1, P31) == pytest.approx((9 + mu0_l1_norm(-3, P31)) / 3)
    assert math.isinf(omega_pair_integral(-2, 1, P31))


def test_cv_constant_and_rank_one():
    assert cv_constant(-3, P31) == pytest.approx(7.0)
    rng = np.random.default_rng(3)
    f1, f2 = ConfigFunction.random(P31, 2, rng), ConfigFunction.random(P31, 2, rng)
    f1, f2 = ConfigFunction(P31, 2, f1.values / f1.norm()), ConfigFunction(P31, 2, f2.values / f2.norm())
    rep = cv_certify(wigner(f1, f2, TH))
    assert rep.opnorm == pytest.approx(1.0)
    assert rep.passed


@pytest.mark.parametrize("cfg", CONFIGS)
def test_cv_bound_random(cfg):
    p, n, m, N = cfg
    P, th = FieldParams(p, n), ThetaParam(p, Fraction(1))
    rng = np.random.default_rng(9)
    for _ in range(3):
        assert cv_certify(Symbol.random(P, th, m, N, rng)).passed


def test_coefficient_integral_bound(rng):
    for F in (Symbol.constant(P31, TH, 3, 2), Symbol.random(P31, TH, 3, 2, rng)):
        lhs, rhs = coefficient_integral_check(F)
        assert lhs <= rhs * (1 + 1e-9)


def test_coefficient_decay_corrected(rng):
    for F in (Symbol.constant(P31, TH, 3, 2), Symbol.random(P31, TH, 3, 2, rng)):
        ratio, one = coefficient_decay_check(F, corrected=True)
        assert ratio <= one * (1 + 1e-9)


def test_coefficient_decay_printed_constant_fails_for_one():
    ratio, _ = coefficient_decay_check(Symbol.constant(P31, TH, 3, 2))
    assert ratio == pytest.approx(3 / 2)


# ---- reconstruction and composition -------------------------------------

# the coherent grid has p^(2M - n) points, so keep M small
@pytest.mark.parametrize("cfg", [(3, 1, 3, 2), (5, 1, 2, 2), (3, 1, 2, 3)])
def test_reconstruct_random(cfg):
    p, n, m, N = cfg
    P, th = FieldParams(p, n), ThetaParam(p, Fraction(1))
    F = Symbol.random(P, th, m, N, np.random.default_rng(4))
    G, rep = reconstruct_symbol(quantize_direct(F), report=True)
    assert G.max_diff(F.refine(G.m, G.N)) < 1e-9
    assert rep.support_ok and math.isfinite(rep.decay_constant)


def test_reconstruct_identity_and_rank_one(rng):
    G = reconstruct_symbol(OperatorKernel.identity(P31, 3), TH)
    assert np.allclose(G.values, 1, atol=1e-9)
    f1, f2 = ConfigFunction.random(P31, 3, rng), ConfigFunction.random(P31, 3, rng)
    G = reconstruct_symbol(OperatorKernel.rank_one(f2, f1), TH)
    assert G.max_diff(wigner(f1, f2, TH)) < 1e-9


def test_reconstruct_requires_theta():
    with pytest.raises(ValueError):
        reconstruct_symbol(OperatorKernel.identity(P31, 2))


def test_composition_constant_pair():
    one = Symbol.constant(P31, TH, 3, 2)
    rep = compose_bounded_check(one, one)
    assert rep.passed and rep.closure_passed
    assert rep.max_ratio_printed > 1  # the q^-3n prefactor is too small already here
    assert rep.peetre_vacuous  # s1 - s2 = 0


def test_composition_random_pair(rng):
    F1, F2 = Symbol.random(P31, TH, 3, 2, rng), Symbol.random(P31, TH, 3, 2, rng)
    rep = compose_bounded_check(F1, F2, -4, -2)
    assert rep.closure_passed
    assert rep.max_ratio_convolution <= 1 + 1e-9
    assert not rep.peetre_vacuous and rep.max_ratio_peetre <= 1 + 1e-9
