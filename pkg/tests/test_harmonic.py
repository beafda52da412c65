from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from fuchs.harmonic import (
    ConfigFunction,
    DualGrid,
    GammaGrid,
    LocalFunction,
    UnitCosetGrid,
    fourier_gamma,
    fourier_k,
    gamma_sum,
    inverse_fourier_gamma,
    inverse_fourier_k,
    periodize,
    roots_of_unity,
    substitution_check,
    unit_tables,
)
from fuchs.padic import FieldParams

P31 = FieldParams(3, 1)
seeds = st.integers(0, 2**32 - 1)


def _cvec(rng, k):
    return rng.normal(size=k) + 1j * rng.normal(size=k)


def test_grid_sizes_and_volumes():
    g = UnitCosetGrid(P31, 3)
    assert g.size == 9 and g.cell_volume == pytest.approx(1 / 27)
    assert GammaGrid(P31, 3).size == 9
    assert DualGrid(P31, 3).weight == pytest.approx(1 / 9)
    assert GammaGrid(P31, 2).index_of(Fraction(1, 27)) is None
    assert GammaGrid(P31, 2).index_of(Fraction(2, 9)) == 2


def test_unit_tables_against_plain_arithmetic():
    T = unit_tables(3, 1, 4)
    for i, u in enumerate(T.reps):
        assert T.reps[T.inv[i]] * u % 81 == 1
        r = T.reps[T.sqrt[i]]
        assert r == oracles.sqrt_search(u, 3, 1, 4)
        for j, v in enumerate(T.reps[:5]):
            assert T.reps[T.mul[i, j]] == u * v % 81


def test_roots_of_unity_exact_points():
    r = roots_of_unity(4)
    assert r[0] == 1 and r[1] == 1j and r[2] == -1


def test_fourier_of_indicators():
    one_O = LocalFunction(3, 0, 0, [1.0])
    F = fourier_k(one_O)
    assert (F.a, F.b) == (0, 0) and F.values[0] == pytest.approx(1)
    # 1_{3 Z_p} on the grid Z_p / 9 Z_p
    f = LocalFunction(3, 0, 2, [1 if j % 3 == 0 else 0 for j in range(9)])
    F = fourier_k(f)
    # the result lives on (1/9) Z_p / Z_p; expected (1/3) 1_{(1/3) Z_p}
    expect = [1 / 3 if i % 3 == 0 else 0 for i in range(9)]
    assert np.allclose(F.values, expect, atol=1e-14)


def test_fourier_gamma_of_delta_is_one():
    vals = np.zeros(9)
    vals[0] = 1
    assert np.allclose(fourier_gamma(vals, P31, 3), 1)


def test_fourier_k_matches_plain_dft():
    rng = np.random.default_rng(0)
    v = _cvec(rng, 27)
    f = LocalFunction(3, -1, 2, v)
    F = fourier_k(f)
    ref = np.array(oracles.dft(list(v), +1)) * 3.0**-2
    assert np.allclose(F.values, ref, atol=1e-12)


@given(seeds)
def test_plancherel_on_q_p(seed):
    rng = np.random.default_rng(seed)
    f = LocalFunction(3, 0, 2, _cvec(rng, 9))
    assert fourier_k(f).norm() == pytest.approx(f.norm(), rel=1e-12)
    assert np.allclose(inverse_fourier_k(fourier_k(f)).values, f.values, atol=1e-12)


@given(seeds)
def test_plancherel_on_gamma(seed):
    rng = np.random.default_rng(seed)
    N = 3
    f = _cvec(rng, 9)
    G = fourier_gamma(f, P31, N)
    w = DualGrid(P31, N).weight
    assert np.sum(np.abs(f) ** 2) == pytest.approx(w * np.sum(np.abs(G) ** 2), rel=1e-12)
    assert np.allclose(inverse_fourier_gamma(G, P31, N), f, atol=1e-12)


@given(seeds)
def test_gamma_sum_and_periodization(seed):
    rng = np.random.default_rng(seed)
    f = _cvec(rng, 9)
    per = periodize(f, P31, 3)
    assert gamma_sum(f) == pytest.approx(3.0**-1 * per.integral(), abs=1e-12)
    # the transform on Q_p of the periodization is q^n times the Gamma transform
    assert np.allclose(fourier_k(per).values, 3 * fourier_gamma(f, P31, 3), atol=1e-12)


def test_substitution_constant_and_indicator():
    f = ConfigFunction.indicator(P31, 3)
    h = LocalFunction(3, 1, 3, np.ones(9))
    rep = substitution_check(f, h)
    assert rep.square_lhs == pytest.approx(1 / 3) and rep.square_rhs == pytest.approx(1 / 3)
    assert rep.phi_lhs == pytest.approx(1 / 3) and rep.phi_rhs == pytest.approx(1 / 3)


@given(seeds)
def test_substitution_random(seed):
    rng = np.random.default_rng(seed)
    f = ConfigFunction.random(P31, 3, rng)
    h = LocalFunction(3, 1, 3, _cvec(rng, 9))
    rep = substitution_check(f, h)
    assert rep.square_lhs == pytest.approx(rep.square_rhs, abs=1e-12)
    assert rep.phi_lhs == pytest.approx(rep.phi_rhs, abs=1e-12)


@given(seeds, st.integers(1, 3))
def test_refine_preserves_inner_products(seed, k):
    rng = np.random.default_rng(seed)
    f, g = ConfigFunction.random(P31, 2, rng), ConfigFunction.random(P31, 2, rng)
    assert f.refine(2 + k).inner(g.refine(2 + k)) == pytest.approx(f.inner(g), abs=1e-12)
    assert f.refine(2 + k).integral() == pytest.approx(f.integral(), abs=1e-12)
