"""Finite coset grids, Haar normalizations and Fourier transforms.

Conventions used throughout the package:

* ``U_n / U_m`` is indexed by ``a`` in ``range(p**(m-n))`` with representative
  ``u = 1 + p**n * a``.  Index order is the integer order of ``a``.
* ``p^-N Z_p / p^-n Z_p`` (a truncation of ``Gamma_n = Q_p / p^-n Z_p``) is
  indexed by ``c`` in ``range(p**(N-n))`` with representative ``t = c / p**N``.
* Characters are evaluated from exact integer angles ``c / p**K`` through a
  cached table of roots of unity, so no transcendental error accumulates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .padic import (
    FieldParams,
    PrincipalUnit,
    PAdicScalar,
    phi_inverse_mod,
    phi_mod,
    sqrt_principal_mod,
)


@lru_cache(maxsize=64)
def roots_of_unity(P: int) -> np.ndarray:
    """exp(2 pi i k / P) for k in range(P)."""
    k = np.arange(P)
    out = np.exp(2j * np.pi * k / P)
    # exact values where they are known
    out[0] = 1.0
    if P % 2 == 0:
        out[P // 2] = -1.0
    if P % 4 == 0:
        out[P // 4] = 1j
        out[3 * P // 4] = -1j
    return out


def character(angle_num, K: int, p: int) -> np.ndarray | complex:
    """Psi(x) for x = angle_num / p**K, i.e. exp(2 pi i angle_num / p**K)."""
    P = p**K
    return roots_of_unity(P)[np.asarray(angle_num) % P]


class UnitTables:
    """Multiplication, inversion, square root and phi on U_n / U_L.

    Obtain instances through ``unit_tables`` so they are shared.
    """

    def __init__(self, p: int, n: int, L: int):
        if L < n:
            raise ValueError("scale must be at least n")
        self.p, self.n, self.L = p, n, L
        self.mod = p**L
        self.size = p ** (L - n)
        self.reps = [1 + p**n * a for a in range(self.size)]
        self.u = np.array(self.reps, dtype=np.int64)

    def index(self, u):
        """Index of the coset u U_L, for ints or arrays of ints."""
        return ((np.asarray(u) - 1) % self.mod) // self.p**self.n

    def index_int(self, u: int) -> int:
        return ((u - 1) % self.mod) // self.p**self.n

    @cached_property
    def inv(self) -> np.ndarray:
        return np.array([self.index_int(pow(u, -1, self.mod)) for u in self.reps])

    @cached_property
    def sqrt(self) -> np.ndarray:
        return np.array([
            self.index_int(sqrt_principal_mod(u, self.p, self.n, self.L)) for u in self.reps])

    @cached_property
    def phi(self) -> np.ndarray:
        """phi(u) mod p**L, an int divisible by p**n."""
        return np.array([phi_mod(u, self.p, self.L) for u in self.reps], dtype=np.int64)

    @cached_property
    def phi_inv(self) -> np.ndarray:
        """Index of phi^{-1}(p**n * d) for d in range(size)."""
        pn = self.p**self.n
        return np.array([
            self.index_int(phi_inverse_mod(pn * d, self.p, self.n, self.L))
            for d in range(self.size)])

    @cached_property
    def mul(self) -> np.ndarray:
        """mul[i, j] = index of u_i u_j."""
        prod = np.outer(self.u, self.u) % self.mod
        return self.index(prod)

    def coarsen(self, idx, m: int):
        """Map indices at this scale to indices at a coarser scale m."""
        return np.asarray(idx) % self.p ** (m - self.n)

    def valuation_minus_one(self) -> np.ndarray:
        """val(u - 1) per cell, capped at L (L means the identity cell)."""
        out = np.full(self.size, self.L)
        for a, u in enumerate(self.reps):
            x = u - 1
            if x:
                v = 0
                while x % self.p == 0:
                    x //= self.p
                    v += 1
                out[a] = min(v, self.L)
        return out


@lru_cache(maxsize=128)
def unit_tables(p: int, n: int, L: int) -> UnitTables:
    return UnitTables(p, n, L)


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class UnitCosetGrid:
    """U_n / U_m with Haar cell volume p^-m."""

    params: FieldParams
    m: int

    def __post_init__(self):
        if self.m < self.params.n:
            raise ValueError(f"u-scale m={self.m} must be >= n={self.params.n}")

    @property
    def size(self) -> int:
        return self.params.p ** (self.m - self.params.n)

    @property
    def cell_volume(self) -> float:
        return float(self.params.p) ** (-self.m)

    @property
    def tables(self) -> UnitTables:
        return unit_tables(self.params.p, self.params.n, self.m)

    def representatives(self) -> list[PrincipalUnit]:
        p, n = self.params.p, self.params.n
        return [PrincipalUnit(PAdicScalar(p, 0, u, self.m), n) for u in self.tables.reps]

    def index_of(self, u) -> int:
        if isinstance(u, PrincipalUnit):
            u = u.residue(self.m)
        elif not isinstance(u, (int, np.integer)):
            u = PAdicScalar.coerce(u, self.params.p).residue(self.m)
        return int(self.tables.index_int(int(u)))


@dataclass(frozen=True)
class GammaGrid:
    """Classes [t] of p^-N Z_p / p^-n Z_p, with counting measure."""

    params: FieldParams
    N: int

    def __post_init__(self):
        if self.N < self.params.n:
            raise ValueError(f"t-cutoff N={self.N} must be >= n={self.params.n}")

    @property
    def size(self) -> int:
        return self.params.p ** (self.N - self.params.n)

    def representative(self, c: int) -> Fraction:
        return Fraction(c, self.params.p**self.N)

    def representatives(self) -> list[Fraction]:
        return [self.representative(c) for c in range(self.size)]

    def index_of(self, t) -> int | None:
        """Index of [t], or None when t lies outside p^-N Z_p."""
        t = PAdicScalar.coerce(t, self.params.p)
        if not t.is_zero and t.v < -self.N:
            return None
        return t.scaled_residue(self.N, self.N - self.params.n) if not t.is_zero else 0

    def dilation(self, u: int) -> np.ndarray:
        """Permutation c -> index of [u t_c] for a unit u given as an int."""
        P = self.size
        return (np.arange(P) * (u % P)) % P


@dataclass(frozen=True)
class DualGrid:
    """p^n Z_p / p^N Z_p, dual to GammaGrid, with total mass one."""

    params: FieldParams
    N: int

    @property
    def size(self) -> int:
        return self.params.p ** (self.N - self.params.n)

    @property
    def weight(self) -> float:
        return float(self.params.p) ** (self.params.n - self.N)

    def representative(self, d: int) -> int:
        return self.params.p**self.params.n * d


@dataclass
class ConfigFunction:
    """A function on U_n constant on U_m cosets."""

    params: FieldParams
    m: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        size = self.params.p ** (self.m - self.params.n)
        if self.values.shape != (size,):
            raise ValueError(f"expected {size} values at scale {self.m}, got {self.values.shape}")

    @property
    def grid(self) -> UnitCosetGrid:
        return UnitCosetGrid(self.params, self.m)

    @classmethod
    def indicator(cls, params: FieldParams, m: int | None = None) -> "ConfigFunction":
        """1_{U_n} at scale m (default n)."""
        m = params.n if m is None else m
        return cls(params, m, np.ones(params.p ** (m - params.n)))

    @classmethod
    def basis(cls, params: FieldParams, m: int, i: int) -> "ConfigFunction":
        v = np.zeros(params.p ** (m - params.n))
        v[i] = 1.0
        return cls(params, m, v)

    @classmethod
    def random(cls, params: FieldParams, m: int, rng: np.random.Generator) -> "ConfigFunction":
        size = params.p ** (m - params.n)
        return cls(params, m, rng.normal(size=size) + 1j * rng.normal(size=size))

    @property
    def cell_volume(self) -> float:
        return float(self.params.p) ** (-self.m)

    def refine(self, m: int) -> "ConfigFunction":
        if m < self.m:
            raise ValueError("cannot refine to a coarser scale")
        idx = np.arange(self.params.p ** (m - self.params.n)) % len(self.values)
        return ConfigFunction(self.params, m, self.values[idx])

    def inner(self, other: "ConfigFunction") -> complex:
        """<self, other>, conjugate-linear in self."""
        a, b = common_scale(self, other)
        return complex(np.vdot(a.values, b.values) * a.cell_volume)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell_volume))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def conj(self) -> "ConfigFunction":
        return ConfigFunction(self.params, self.m, self.values.conj())

    def integral(self) -> complex:
        return complex(np.sum(self.values) * self.cell_volume)

    def allclose(self, other: "ConfigFunction", tol: float) -> bool:
        a, b = common_scale(self, other)
        return bool(np.max(np.abs(a.values - b.values), initial=0.0) <= tol)

    def to_json(self) -> dict:
        return {"prime": self.params.p, "n": self.params.n, "m": self.m,
                "values": [[float(z.real), float(z.imag)] for z in self.values]}


def common_scale(*fs: ConfigFunction) -> list[ConfigFunction]:
    m = max(f.m for f in fs)
    return [f.refine(m) for f in fs]


# ---------------------------------------------------------------------------
# Fourier transforms


@dataclass
class LocalFunction:
    """A function on Q_p supported in p^a Z_p and invariant under p^b Z_p.

    ``values[j]`` is the value on the coset ``p**a * j + p^b Z_p``.
    """

    p: int
    a: int
    b: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError(f"inconsistent grid: support p^{self.a} coarser than invariance p^{self.b}")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.p ** (self.b - self.a),):
            raise ValueError("value count does not match the grid")

    @property
    def cell_volume(self) -> float:
        return float(self.p) ** (-self.b)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell_volume))

    def integral(self) -> complex:
        return complex(np.sum(self.values) * self.cell_volume)

    def point(self, j: int) -> Fraction:
        return Fraction(self.p) ** self.a * j

    def reflect(self) -> "LocalFunction":
        """t -> -t."""
        P = len(self.values)
        return LocalFunction(self.p, self.a, self.b, self.values[(-np.arange(P)) % P])


def _dft_matrix(P: int, sign: int) -> np.ndarray:
    i = np.arange(P)
    return roots_of_unity(P)[(sign * np.outer(i, i)) % P]


def fourier_k(f: LocalFunction) -> LocalFunction:
    """(F f)(s) = int f(t) Psi(s t) dt; the result lives on p^-b Z_p / p^-a Z_p."""
    P = len(f.values)
    # s = p^-b i, t = p^a j: Psi(s t) = exp(2 pi i ij / P)
    out = _dft_matrix(P, +1) @ f.values * f.cell_volume
    return LocalFunction(f.p, -f.b, -f.a, out)


def inverse_fourier_k(g: LocalFunction) -> LocalFunction:
    P = len(g.values)
    out = _dft_matrix(P, -1) @ g.values * g.cell_volume
    return LocalFunction(g.p, -g.b, -g.a, out)


def fourier_gamma(values, params: FieldParams, N: int) -> np.ndarray:
    """F_Gamma f(z) = sum_[t] f([t]) Psi(z t) for z = p^n d on the dual grid.

    Works along the last axis, so it applies to a whole symbol at once.
    """
    P = params.p ** (N - params.n)
    values = np.asarray(values, dtype=complex)
    if values.shape[-1] != P:
        raise ValueError("last axis must be the GammaGrid")
    # z t = p^n d c / p^N = cd / p^(N-n)
    return values @ _dft_matrix(P, +1).T


def inverse_fourier_gamma(values, params: FieldParams, N: int) -> np.ndarray:
    P = params.p ** (N - params.n)
    values = np.asarray(values, dtype=complex)
    return (values @ _dft_matrix(P, -1).T) / P


def periodize(values, params: FieldParams, N: int) -> LocalFunction:
    """The function on Q_p constant on p^-n Z_p cosets with the given class values."""
    return LocalFunction(params.p, -N, -params.n, np.asarray(values, dtype=complex))


def gamma_sum(values) -> complex:
    """Counting-measure integral over the truncated Gamma_n."""
    return complex(np.sum(values))


# ---------------------------------------------------------------------------
# change of variables on U_n


@dataclass(frozen=True)
class SubstitutionReport:
    square_lhs: complex
    square_rhs: complex
    phi_lhs: complex
    phi_rhs: complex


def substitution_check(f: ConfigFunction, h: LocalFunction) -> SubstitutionReport:
    """Both sides of the two unit-group substitution identities.

    int_{U_n} f(u^2) du = int_{U_n} f(u) du, and
    int_{U_n} h(u - 1/u) du = int_{p^n Z_p} h(x) dx,
    where h lives on p^n Z_p / p^m Z_p.
    """
    params = f.params
    p, n = params.p, params.n
    T = unit_tables(p, n, f.m)
    sq = T.index(np.array([u * u for u in T.reps]) % T.mod)
    square_lhs = complex(np.sum(f.values[sq]) * f.cell_volume)
    square_rhs = f.integral()

    if h.a != n:
        raise ValueError("h must be supported on p^n Z_p")
    mh = h.b
    Th = unit_tables(p, n, mh)
    # phi(u) = p^n d, and h's cell index is d (h.point(j) = p^n j)
    d = (Th.phi // p**n) % p ** (mh - n)
    phi_lhs = complex(np.sum(h.values[d]) * float(p) ** (-mh))
    phi_rhs = h.integral()
    return SubstitutionReport(square_lhs, square_rhs, phi_lhs, phi_rhs)
