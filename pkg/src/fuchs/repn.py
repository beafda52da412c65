"""The representation pi_theta of G_n = U_n x| Q_p on L^2(U_n).

    (pi(u, t) f)(u0) = Psi(theta u0^{-1} u t) f(u^{-1} u0)

Group law: (u, t)(u', t') = (u u', t / u' + t').  Integrals over G_n use
Haar(U_n) x Haar(Q_p); every integral here reduces to a finite sum because the
integrands are locally constant with compact support at a computable scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .harmonic import (
    ConfigFunction,
    LocalFunction,
    common_scale,
    fourier_k,
    inverse_fourier_k,
    roots_of_unity,
    unit_tables,
)
from .padic import (
    DEFAULT_PRECISION,
    FieldParams,
    PAdicScalar,
    PrincipalUnit,
    from_digits,
    rational_mod,
    valuation_rational,
)


@dataclass(frozen=True)
class ThetaParam:
    """A unit theta of Z_p, held exactly as a p-integral rational."""

    p: int
    value: Fraction = Fraction(1)

    def __post_init__(self):
        v = Fraction(self.value)
        if v == 0 or valuation_rational(v, self.p) != 0:
            raise ValueError(f"theta={v} must be a p-adic unit (valuation 0)")
        object.__setattr__(self, "value", v)

    @classmethod
    def from_digits(cls, digits, p: int) -> "ThetaParam":
        """Little-endian digits; the leading digit must be nonzero mod p."""
        digits = list(digits)
        if not digits or digits[0] % p == 0:
            raise ValueError("theta digits must start with a nonzero digit (valuation 0)")
        return cls(p, Fraction(from_digits(digits, p)))

    def mod(self, L: int) -> int:
        return rational_mod(self.value, self.p, L)

    def digits(self, L: int = 8) -> list[int]:
        x = self.mod(L)
        out = []
        for _ in range(L):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def __neg__(self) -> "ThetaParam":
        return ThetaParam(self.p, -self.value)

    @property
    def scalar(self) -> PAdicScalar:
        return PAdicScalar.from_rational(self.value, self.p)

    def to_json(self) -> dict:
        # an integer theta is recorded by its full digit list; otherwise 16 digits
        v = self.value
        if v.denominator == 1 and v > 0:
            x, ds = int(v), []
            while x:
                x, d = divmod(x, self.p)
                ds.append(d)
            return {"val": 0, "digits": ds}
        return {"val": 0, "digits": self.digits(16)}


@dataclass(frozen=True)
class GroupElement:
    """(u, t) in G_n."""

    u: PrincipalUnit
    t: PAdicScalar

    @classmethod
    def of(cls, params: FieldParams, u=1, t=0, prec: int = DEFAULT_PRECISION) -> "GroupElement":
        return cls(PrincipalUnit.of(u, params, prec), PAdicScalar.coerce(t, params.p, prec))

    @classmethod
    def identity(cls, params: FieldParams) -> "GroupElement":
        return cls.of(params)

    @property
    def p(self) -> int:
        return self.u.p

    @property
    def n(self) -> int:
        return self.u.n

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.u * other.u, self.t * other.u.inverse().scalar + other.t)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.u.inverse(), -(self.u.scalar * self.t))

    def t_scale(self) -> int:
        """Smallest K >= 0 with t in p^-K Z_p."""
        return 0 if self.t.is_zero else max(0, -int(self.t.v))

    def t_numerator(self, K: int) -> int:
        """c with t = c / p^K mod Z_p."""
        return self.t.scaled_residue(K, K)


def random_group_element(params: FieldParams, rng: np.random.Generator,
                         t_scale: int = 3, prec: int = 24) -> GroupElement:
    """u uniform mod p^prec in U_n, t = c / p^t_scale with c random."""
    p, n = params.p, params.n
    u = 1 + p**n * int(rng.integers(0, p ** (prec - n)))
    c = int(rng.integers(0, p ** (t_scale + 2)))
    t = Fraction(c, p**t_scale)
    return GroupElement.of(params, u, t, prec)


# ---------------------------------------------------------------------------


def pi_output_scale(g: GroupElement, m: int) -> int:
    """Scale at which pi(g) f is locally constant when f is at scale m.

    The phase Psi(theta u0^{-1} u t) is constant on u0 U_k exactly when
    |t| p^-k <= 1, so k >= -val(t) suffices.
    """
    return max(m, g.t_scale())


def pi_apply(g: GroupElement, f: ConfigFunction, theta: ThetaParam) -> ConfigFunction:
    params = f.params
    p, n = params.p, params.n
    L = pi_output_scale(g, f.m)
    T = unit_tables(p, n, L)
    K = g.t_scale()
    u = g.u.residue(L)
    uinv_idx = T.index_int(pow(u, -1, T.mod))
    # value at u0 is f(u^{-1} u0)
    src = T.mul[uinv_idx] % p ** (f.m - n)
    out = f.values[src]
    if K > 0:
        c = g.t_numerator(K)
        PK = p**K
        u0inv = np.array([pow(int(x), -1, PK) for x in T.u])
        angle = (theta.mod(K) * u % PK * c % PK) * u0inv % PK
        out = out * roots_of_unity(PK)[angle]
    return ConfigFunction(params, L, out)


def matrix_coefficient(f1: ConfigFunction, f2: ConfigFunction, g: GroupElement,
                       theta: ThetaParam) -> complex:
    """<f1, pi(g) f2>, conjugate-linear in f1."""
    return f1.inner(pi_apply(g, f2, theta))


def coherent_family(psi: ConfigFunction, theta: ThetaParam, L: int, T: int | None = None) -> np.ndarray:
    """Vectors pi(u_a, c / p^T) psi at scale L for all grid points.

    Returns an array of shape (p^(L-n), p^(L-n), p^T) indexed by (u0, a, c):
    u ranges over U_n / U_L and t over p^-T Z_p / Z_p.  Requires L >= T, L >= psi.m.
    """
    params = psi.params
    p, n = params.p, params.n
    T = L if T is None else T
    if L < T or L < psi.m:
        raise ValueError("scale too coarse for the requested family")
    tab = unit_tables(p, n, L)
    S = tab.size
    # psi(u_a^{-1} u0): rows u0, cols a
    src = tab.mul[np.ix_(np.arange(S), tab.inv)] % p ** (psi.m - n)
    base = psi.values[src]
    PT = p**T
    w = (tab.u[tab.mul[np.ix_(tab.inv, np.arange(S))]] % PT)  # u0^{-1} u_a mod p^T
    c = np.arange(PT)
    angle = (theta.mod(T) * w[:, :, None] % PT) * c[None, None, :] % PT
    return base[:, :, None] * roots_of_unity(PT)[angle]


def coefficient_grid(f1: ConfigFunction, f2: ConfigFunction, theta: ThetaParam,
                     T: int) -> tuple[np.ndarray, int]:
    """<f1, pi(u, t) f2> for u in U_n/U_L, t in p^-T Z_p / Z_p, L = max(m, T)."""
    f1, f2 = common_scale(f1, f2)
    L = max(f1.m, T)
    a = f1.refine(L).values
    fam = coherent_family(f2.refine(L), theta, L, T)
    return np.einsum("i,iac->ac", a.conj(), fam) * float(f1.params.p) ** (-L), L


def _check_truncation(m: int, T: int):
    if T < m:
        raise ValueError(
            f"t-truncation T={T} is below the support bound m={m}: "
            "matrix coefficients of scale-m vectors live on p^-m Z_p")


def orthogonality_integral(f1: ConfigFunction, f2: ConfigFunction, theta: ThetaParam,
                           T: int) -> float:
    """int_{G_n} |<f1, pi(g) f2>|^2 dg as an exact finite sum."""
    m = max(f1.m, f2.m)
    _check_truncation(m, T)
    coef, L = coefficient_grid(f1, f2, theta, T)
    # u-cells have volume p^-L, t-cells (cosets of Z_p) volume 1
    return float(np.sum(np.abs(coef) ** 2) * float(f1.params.p) ** (-L))


def coherent_resolve(f1: ConfigFunction, f2: ConfigFunction, mother: ConfigFunction,
                     theta: ThetaParam, T: int) -> complex:
    """(1/|mother|^2) int <f1, pi(g) mother> <pi(g) mother, f2> dg."""
    nm = mother.norm()
    if nm == 0:
        raise ValueError("mother vector must be nonzero")
    m = max(f1.m, f2.m, mother.m)
    _check_truncation(m, T)
    c1, L = coefficient_grid(f1.refine(m), mother.refine(m), theta, T)
    c2, _ = coefficient_grid(f2.refine(m), mother.refine(m), theta, T)
    return complex(np.sum(c1 * c2.conj()) * float(f1.params.p) ** (-L) / nm**2)


# ---------------------------------------------------------------------------
# projector onto the theta-isotypic part of L^2(G_n)


@dataclass
class GnFunction:
    """f(u, t) on G_n: constant on U_m cosets in u, on the grid p^a Z_p / p^b Z_p in t."""

    params: FieldParams
    m: int
    a: int
    b: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        shape = (self.params.p ** (self.m - self.params.n), self.params.p ** (self.b - self.a))
        if self.values.shape != shape:
            raise ValueError(f"expected shape {shape}, got {self.values.shape}")

    def inner(self, other: "GnFunction") -> complex:
        vol = float(self.params.p) ** (-self.m - self.b)
        return complex(np.vdot(self.values, other.values) * vol)


def _apply_t(f: GnFunction, transform) -> tuple[np.ndarray, int, int]:
    rows = [transform(LocalFunction(f.params.p, f.a, f.b, row)) for row in f.values]
    return np.array([r.values for r in rows]), rows[0].a, rows[0].b


def projector_p_theta(f: GnFunction, theta: ThetaParam) -> GnFunction:
    """Id (x) F^{-1} 1_{theta U_n} F applied in the t variable."""
    p, n = f.params.p, f.params.n
    if f.b < 0 or -f.a < n:
        raise ValueError(
            f"t-grid p^{f.a}Z_p/p^{f.b}Z_p is too coarse to resolve theta*U_n: "
            "need b >= 0 and a <= -n")
    hat, da, db = _apply_t(f, fourier_k)
    # dual points s = p^-b i; s in theta + p^n Z_p  <=>  i = theta p^b mod p^(n+b)
    i = np.arange(hat.shape[1])
    mod = p ** (n + f.b)
    mask = (i % mod) == (f.params.p**f.b * rational_mod(theta.value, p, n + f.b)) % mod
    hat = hat * mask[None, :]
    back = np.array([inverse_fourier_k(LocalFunction(p, da, db, row)).values for row in hat])
    return GnFunction(f.params, f.m, f.a, f.b, back)
