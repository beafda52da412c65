"""Symbol calculus: mu_0 weights, the J^s operators and operator-norm bounds.

J^s is right convolution along the unit subgroup {(u, [0])} by the real kernel
kappa_s = F(Psi-bar mu_0^s), which depends on u only through v = val(u - 1):

    (J^s F)(u0, [t0]) = int_{U_n} kappa_s(u) F(u0 u, [t0 / u]) du.

On symbols of resolution (m, N) with m >= N + n this is a finite matrix.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .harmonic import ConfigFunction, roots_of_unity, unit_tables
from .padic import INF, FieldParams, mu0
from .quantize import OperatorKernel, Symbol, quantize_direct, symbol_of_operator
from .repn import GroupElement, ThetaParam, coherent_family


class ClosureError(ValueError):
    """A symbol resolution is not invariant under J^s."""


# ---------------------------------------------------------------------------
# mu_0 and its L^1 norms


def mu0_l1_norm(sigma: float, params: FieldParams) -> float:
    """int_{Q_p} mu_0(t)^sigma dt for sigma < -1."""
    if sigma >= -1:
        raise ValueError(f"mu_0^sigma is integrable only for sigma < -1, got {sigma}")
    q, n = params.p, params.n
    r = float(q) ** (sigma + 1)
    return float(q) ** n * (1 + (1 - 1 / q) * r / (1 - r))


def mu0_power_of_val(v: float, s: float, params: FieldParams) -> float:
    """mu_0(t)^s where val(t) = v."""
    if v == INF:
        return 1.0
    return float(params.p) ** (s * max(0, -params.n - int(v)))


def ball_integral(s: float, params: FieldParams, k: int, v: float) -> float:
    """int_{p^-k Z_p} mu_0^s(t) Psi(x t) dt where val(x) = v >= n, k >= n.

    Shell by shell: the ball p^-n Z_p contributes p^n, and |t| = p^j contributes
    mu_0^s * (p^j [v >= j] - p^(j-1) [v >= j-1]).
    """
    p, n = params.p, params.n
    total = float(p) ** n
    for j in range(n + 1, k + 1):
        w = float(p) ** ((j - n) * s)
        total += w * ((float(p) ** j if v >= j else 0.0) - (float(p) ** (j - 1) if v >= j - 1 else 0.0))
    return total


@dataclass(frozen=True)
class KsKernel:
    """kappa_s(u) = int mu_0^s(t) Psi((u - 1) t) dt as a function of v = val(u - 1)."""

    s: float
    params: FieldParams

    def __post_init__(self):
        if self.s >= -1:
            raise ValueError(f"the kernel integral converges only for s < -1, got {self.s}")

    def __call__(self, v: float) -> float:
        """kappa at valuation v (v = inf is u = 1)."""
        if v == INF:
            return mu0_l1_norm(self.s, self.params)
        v = int(v)
        if v < self.params.n:
            return 0.0  # outside U_n
        # the shells beyond |t| = p^(v+1) integrate a nontrivial character to zero
        return ball_integral(self.s, self.params, v + 1, v)

    def at_unit(self, u: int, L: int) -> float:
        """kappa(u) for u given mod p^L (u = 1 mod p^L is treated as u = 1)."""
        x = (u - 1) % self.params.p**L
        if x == 0:
            return self(INF)
        v = 0
        while x % self.params.p == 0:
            x //= self.params.p
            v += 1
        return self(v)

    def tail_cell_integral(self, m: int) -> float:
        """int_{U_m} kappa = sum_{v >= m} kappa(v) Vol(val(u-1) = v), summed in closed form."""
        p, n, s = self.params.p, self.params.n, self.s
        r = float(p) ** (s + 1)
        beta = 1 - 1 / p
        C = beta * float(p) ** n * r / (1 - r)
        # kappa(v) = p^n + C (1 - r^(v-n)) - p^(n-1) r^(v+1-n)
        g = (r / p) ** m / (1 - r / p)  # sum_{v >= m} (r/p)^v
        return ((float(p) ** n + C) * float(p) ** (-m)
                - beta * C * r ** (-n) * g
                - beta * float(p) ** (n - 1) * r ** (1 - n) * g)

    def cell_weights(self, m: int) -> np.ndarray:
        """int over each U_m coset of kappa, in UnitCosetGrid order."""
        tab = unit_tables(self.params.p, self.params.n, m)
        vals = tab.valuation_minus_one()
        vol = float(self.params.p) ** (-m)
        out = np.array([self(int(v)) * vol if v < m else 0.0 for v in vals])
        out[0] = self.tail_cell_integral(m)
        return out


def ks_kernel(s: float, params: FieldParams) -> KsKernel:
    return KsKernel(s, params)


# ---------------------------------------------------------------------------
# J^s matrices


def closure_resolution(m: int, N: int, n: int) -> tuple[int, int]:
    """Smallest refinement of (m, N) on which J^s acts: m >= N + n."""
    return max(m, N + n), N


@dataclass
class JOperator:
    """J^s on the symbol space at resolution (m, N); rows/cols are (u, [t]) flattened."""

    s: float
    params: FieldParams
    m: int
    N: int
    matrix: np.ndarray = field(repr=False)

    def apply(self, F: Symbol) -> Symbol:
        if F.m > self.m or F.N > self.N:
            raise ClosureError("symbol is finer than the J-operator's resolution")
        F = F.refine(self.m, self.N)
        return F.like(((self.matrix @ F.values.reshape(-1))).reshape(F.shape))

    def __matmul__(self, other: "JOperator") -> "JOperator":
        if (self.m, self.N) != (other.m, other.N):
            raise ValueError("resolution mismatch")
        return JOperator(self.s + other.s, self.params, self.m, self.N, self.matrix @ other.matrix)


def _check_closure(m: int, N: int, n: int):
    if m < N + n:
        raise ClosureError(
            f"resolution (m={m}, N={N}) is not J-invariant: need m >= N + n = {N + n}")


def convolution_matrix(weights: np.ndarray, params: FieldParams, m: int, N: int) -> np.ndarray:
    """Matrix of F -> sum_k w_k F(u u_k, [t / u_k]) on the (m, N) grid."""
    p, n = params.p, params.n
    tab = unit_tables(p, n, m)
    S, P = tab.size, p ** (N - n)
    c = np.arange(P)
    rows_i = np.repeat(np.arange(S), P)
    rows_c = np.tile(c, S)
    out = np.zeros((S * P, S * P))
    for k in range(S):
        if weights[k] == 0:
            continue
        uk_inv = int(tab.u[tab.inv[k]]) % P if P > 1 else 0
        cols = tab.mul[rows_i, k] * P + (rows_c * uk_inv) % P
        out[np.arange(S * P), cols] += weights[k]
    return out


def j_matrix_direct(s: float, params: FieldParams, m: int, N: int) -> JOperator:
    """J^s for s < -1 assembled from exact cell integrals of kappa_s."""
    _check_closure(m, N, params.n)
    w = KsKernel(s, params).cell_weights(m)
    return JOperator(s, params, m, N, convolution_matrix(w, params, m, N))


@lru_cache(maxsize=32)
def _j2_spectrum(p: int, n: int, m: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    J2 = j_matrix_direct(-2, FieldParams(p, n), m, N).matrix
    if not np.allclose(J2, J2.T, atol=1e-13):
        raise ArithmeticError("J^-2 is not symmetric; the kernel assembly is wrong")
    lam, V = np.linalg.eigh(J2)
    if lam.min() <= 0:
        raise ArithmeticError(f"J^-2 has non-positive eigenvalue {lam.min()}")
    return lam, V


def j_matrix(s: float, params: FieldParams, m: int, N: int, *, strict: bool = False,
             route: str = "auto") -> JOperator:
    """J^s at resolution (m, N), refining m when the closure condition fails.

    route "auto" assembles directly for s < -1 and uses the spectral power
    (J^-2)^(-s/2) otherwise; "spectral" forces the spectral route.
    """
    if m < N + params.n:
        if strict:
            _check_closure(m, N, params.n)
        m, N = closure_resolution(m, N, params.n)
    mat = _j_matrix_cached(float(s), params.p, params.n, m, N, route)
    return JOperator(s, params, m, N, mat)


@lru_cache(maxsize=128)
def _j_matrix_cached(s: float, p: int, n: int, m: int, N: int, route: str) -> np.ndarray:
    params = FieldParams(p, n)
    if s == 0:
        mat = np.eye(p ** (m - n) * p ** (N - n))
    elif route == "auto" and s < -1:
        mat = j_matrix_direct(s, params, m, N).matrix
    else:
        lam, V = _j2_spectrum(p, n, m, N)
        mat = (V * lam ** (-s / 2)) @ V.T
    mat.setflags(write=False)
    return mat


def j_apply(s: float, F: Symbol, strict: bool = False) -> Symbol:
    m, N = F.m, F.N
    if m < N + F.params.n and strict:
        _check_closure(m, N, F.params.n)
    m, N = closure_resolution(m, N, F.params.n)
    return j_matrix(s, F.params, m, N).apply(F)


def character_symbol(x_num: int, params: FieldParams, theta: ThetaParam, m: int, N: int) -> Symbol:
    """Psi-hat_x(u, [t]) = Psi(x u) restricted to the (m, N) grid, x = x_num / p^m."""
    p, n = params.p, params.n
    tab = unit_tables(p, n, m)
    P = p**m
    col = roots_of_unity(P)[(x_num * tab.u) % P]
    return Symbol(params, theta, m, N, np.repeat(col[:, None], p ** (N - n), axis=1))


def mu0_of_class(params: FieldParams, N: int) -> np.ndarray:
    """mu_0([t]) for t = c / p^N, c in range(p^(N-n))."""
    p, n = params.p, params.n
    out = np.ones(p ** (N - n))
    for c in range(1, len(out)):
        out[c] = float(mu0(Fraction(c, p**N), params))
    return out


def i_apply(F: Symbol, j: int = 1) -> Symbol:
    """I^j F: multiplication by mu_0([t])^j."""
    return F.like(F.values * mu0_of_class(F.params, F.N)[None, :] ** j)


# ---------------------------------------------------------------------------
# seminorms


@dataclass
class SeminormReport:
    entries: list[tuple[object, float]]

    def value(self, key) -> float:
        return dict(self.entries)[key]

    def finite(self) -> bool:
        return all(math.isfinite(v) and v >= 0 for _, v in self.entries)


def b_seminorms(F: Symbol, j_max: int) -> SeminormReport:
    """||J^j F||_inf for j = 0..j_max."""
    return SeminormReport([(j, j_apply(j, F).sup_norm()) for j in range(j_max + 1)])


def s_seminorms(f: Symbol, k_max: int, j_max: int) -> SeminormReport:
    """||J^k I^j f||_inf for k = 0..k_max, j = 0..j_max."""
    out = []
    for j in range(j_max + 1):
        g = i_apply(f, j)
        for k in range(k_max + 1):
            out.append(((k, j), j_apply(k, g).sup_norm()))
    return SeminormReport(out)


def product_bound(F1: Symbol, F2: Symbol, j: float) -> tuple[float, float]:
    """(||J^j(F1 F2)||, q^-2n ||mu_0^-2||_1^2 ||J^(j+2) F1|| ||J^(j+2) F2||)."""
    params = F1.params
    c = float(params.p) ** (-2 * params.n) * mu0_l1_norm(-2, params) ** 2
    lhs = j_apply(j, F1 * F2).sup_norm()
    return lhs, c * j_apply(j + 2, F1).sup_norm() * j_apply(j + 2, F2).sup_norm()


def ideal_bound(f: Symbol, F: Symbol, k: float, j: int) -> tuple[float, float]:
    """(||J^k I^j (f F)||, q^-2n ||mu_0^-2||_1^2 ||J^(k+2) I^j f|| ||J^(k+2) F||)."""
    params = f.params
    c = float(params.p) ** (-2 * params.n) * mu0_l1_norm(-2, params) ** 2
    lhs = j_apply(k, i_apply(f * F, j)).sup_norm()
    return lhs, c * j_apply(k + 2, i_apply(f, j)).sup_norm() * j_apply(k + 2, F).sup_norm()


# ---------------------------------------------------------------------------
# coherent Wigner functions


def valuation_array(x, p: int, cap: int) -> np.ndarray:
    x = np.asarray(x) % p**cap
    out = np.full(x.shape, cap, dtype=int)
    nz = x != 0
    y = x[nz]
    v = np.zeros(y.shape, dtype=int)
    for _ in range(cap):
        div = y % p == 0
        if not div.any():
            break
        v += div
        y = np.where(div, y // p, y)
    out[nz] = v
    return out


def _mu0_pow_from_num(num: np.ndarray, K: int, s: float, params: FieldParams) -> np.ndarray:
    """mu_0(x)^s for x = num / p^K (only x mod p^-n Z_p matters)."""
    p, n = params.p, params.n
    v = valuation_array(num, p, K) - K  # val(x), or >= 0 for x in Z_p
    return float(p) ** (s * np.maximum(0, -n - v))


def coherent_scale(g: GroupElement) -> int:
    return max(g.n, g.t_scale())


def coherent_wigner(g: GroupElement, theta: ThetaParam, s: float = 0.0,
                    N_eval: int | None = None) -> Symbol:
    """J^s W_g with W_g = W(1_{U_n}, pi(g) 1_{U_n}), from the closed integral

        J^s W_g(u2, [t2]) = int_{U_n} mu_0^s(X) Psi(theta X) du0,
        X = u0 u1 t1 / u2 - phi(u0) t2.

    Resolution (m1, N_eval) with m1 = max(n, -val t1); N_eval defaults to m1.
    """
    p, n = g.p, g.n
    params = FieldParams(p, n)
    m1 = coherent_scale(g)
    Ne = m1 if N_eval is None else N_eval
    L = max(m1, Ne)  # u0 cells; also the denominator of every angle
    tab = unit_tables(p, n, L)
    PL = p**L
    K = g.t_scale()
    c1 = g.t_numerator(K) * p ** (L - K) % PL if K else 0  # t1 = c1 / p^L mod Z_p
    u1 = g.u.residue(L)
    out_tab = unit_tables(p, n, m1)
    u2inv = np.array([pow(int(x), -1, PL) for x in out_tab.u])
    c2 = np.arange(p ** (Ne - n)) * p ** (L - Ne)            # t2 = c2 / p^L
    first = (tab.u[:, None] * (u1 * c1 % PL) % PL) * u2inv[None, :] % PL   # (u0, u2)
    second = tab.phi[:, None] * c2[None, :] % PL                            # (u0, c2)
    X = (first[:, :, None] - second[:, None, :]) % PL                       # (u0, u2, c2)
    vals = roots_of_unity(PL)[theta.mod(L) * X % PL]
    if s != 0:
        vals = vals * _mu0_pow_from_num(X, L, s, params)
    W = vals.sum(axis=0) * float(p) ** (-L)
    return Symbol(params, theta, m1, Ne, W)


def wigner_support_cutoff(g: GroupElement) -> int:
    """t2-support radius of W_g: [t2] in p^min(-n, val t1) Z_p, i.e. cutoff max(n, -val t1)."""
    return coherent_scale(g)


def prop_wigner_l1_bound(s: float, params: FieldParams) -> float:
    """q^-2n (1 + q^-n ||mu_0^(s+1)||_1)."""
    q, n = params.p, params.n
    return float(q) ** (-2 * n) * (1 + float(q) ** (-n) * mu0_l1_norm(s + 1, params))


def _wigner_l1_tail(s: float, T: int, params: FieldParams) -> float:
    """Upper bound for the part of the g1-integral with |t1| > p^T (T > n).

    There |X| = |t1|, so |J^s W| = mu_0^s(t1)|W| <= p^((j-n)s) q^-n on the
    p^(j-n) classes [t2] with |t2| <= |t1| = p^j, and zero elsewhere.
    """
    p, n = params.p, params.n
    r = float(p) ** (s + 2)
    # q^-2n * sum_{j>T} p^((j-n)s) p^(j-n) p^-n p^j (1 - 1/p)
    return (float(p) ** (-2 * n) * (1 - 1 / p) * float(p) ** (-n * s - 2 * n)
            * r ** (T + 1) / (1 - r))


@dataclass
class WignerL1Report:
    s: float
    T: int
    partial: float
    tail_bound: float
    bound: float

    @property
    def upper(self) -> float:
        return self.partial + self.tail_bound

    @property
    def passed(self) -> bool:
        return self.upper <= self.bound * (1 + 1e-12)


def js_wigner_l1(s: float, params: FieldParams, theta: ThetaParam, T: int) -> WignerL1Report:
    """int_{G_n} int_{X_n} |J^s W_g1([g2])| d[g2] dg1 over |t1| <= p^T, plus a tail bound.

    The integrand depends on (u1, t1, u2) only through u1 t1 / u2, so the
    u1 and u2 integrals each contribute a factor Vol(U_n) = q^-n.
    """
    if s >= -2:
        raise ValueError("needs s < -2")
    p, n = params.p, params.n
    if T <= n:
        raise ValueError(f"truncation T={T} must exceed n={n} to cover the flat region")
    L = T
    tab = unit_tables(p, n, L)
    PL = p**L
    roots = roots_of_unity(PL)
    th = theta.mod(L)
    c2 = np.arange(p ** (L - n))  # t2 = c2 / p^L, covers the support |t2| <= max(p^n, |t1|)
    second = tab.phi[:, None] * c2[None, :] % PL   # phi(u0) t2 numerators, (u0, c2)
    total = 0.0
    for c1 in range(PL):  # t1 = c1 / p^L, cells of volume 1
        X = (tab.u[:, None] * c1 - second) % PL
        vals = roots[th * X % PL] * _mu0_pow_from_num(X, L, s, params)
        total += float(np.abs(vals.sum(axis=0)).sum()) * float(p) ** (-L)
    partial = float(p) ** (-2 * n) * total
    return WignerL1Report(s, T, partial, _wigner_l1_tail(s, T, params),
                          prop_wigner_l1_bound(s, params))


# ---------------------------------------------------------------------------
# omega weights


def omega_weight(s: float, g, params: FieldParams):
    """omega_s(g) = mu_0(t)^s + 1_{p^-n Z_p}(t); exact Fraction for integer s."""
    t = g.t if isinstance(g, GroupElement) else g
    m = mu0(t, params)
    ind = 1 if m == 1 else 0
    if float(s).is_integer():
        return m ** int(s) + ind
    return float(m) ** s + ind


@dataclass(frozen=True)
class OmegaWeight:
    s: float
    params: FieldParams

    def __call__(self, g):
        return omega_weight(self.s, g, self.params)


def omega_of_val(v: np.ndarray, s: float, params: FieldParams) -> np.ndarray:
    """omega_s for t with valuation v (numpy, v may be large for t in Z_p)."""
    n = params.n
    e = np.maximum(0, -n - v)
    return float(params.p) ** (s * e) + (e == 0)


def omega_convolution(a: float, b: float, params: FieldParams, vh: float) -> float:
    """int_{G_n} omega_a(g) omega_b(g^-1 h) dg where val(t_h) = vh.

    Equals q^-n times the convolution of the radial functions omega_a, omega_b
    on Q_p, summed shell by shell with geometric tails.  Needs a + b < -1.
    """
    p, n = params.p, params.n
    if a + b >= -1:
        return math.inf
    P = float(p)

    def f(c, j):  # omega_c on the shell |t| = p^j, j > n
        return P ** (c * (j - n))

    def tail(j0):  # sum_{j >= j0} f_a f_b p^j (1 - 1/p)
        r = P ** (a + b + 1)
        return (1 - 1 / P) * P ** (-n * (a + b)) * r**j0 / (1 - r)

    J = n if vh == INF or -vh <= n else int(-vh)
    if J == n:
        total = 4 * P**n + tail(n + 1)
    else:
        total = 2 * f(b, J) * P**n
        total += sum(f(a, j) * f(b, J) * P**j * (1 - 1 / P) for j in range(n + 1, J))
        inner = 2 * P**n + sum(f(b, i) * P**i * (1 - 1 / P) for i in range(n + 1, J))
        inner += f(b, J) * P**J * (1 - 2 / P)
        total += f(a, J) * inner
        total += tail(J + 1)
    return P ** (-n) * total


def omega_pair_integral(a: float, b: float, params: FieldParams) -> float:
    """int_{G_n} omega_a(g) omega_b(g^-1) dg; infinite unless a + b < -1."""
    p, n = params.p, params.n
    if a + b >= -1:
        return math.inf
    return float(p) ** (-n) * (3 * float(p) ** n + mu0_l1_norm(a + b, params))


# ---------------------------------------------------------------------------
# coherent-state matrix coefficients


def coherent_states(params: FieldParams, theta: ThetaParam, M: int) -> np.ndarray:
    """Columns pi(g) 1_{U_n} at scale M for g on the grid (U_n/U_M) x (p^-M Z_p / Z_p)."""
    one = ConfigFunction.indicator(params, M)
    fam = coherent_family(one, theta, M, M)
    return fam.reshape(fam.shape[0], -1)


def coefficient_matrix(A: OperatorKernel, theta: ThetaParam) -> np.ndarray:
    """c[g1, g2] = <pi(g1) 1, A pi(g2) 1> on the exact support grid of A."""
    Phi = coherent_states(A.params, theta, A.M)
    return Phi.conj().T @ A.op @ Phi * A.weight


def grid_group_t_vals(params: FieldParams, M: int) -> tuple[np.ndarray, np.ndarray]:
    """(unit reps mod p^M, t numerators mod p^M) for the flattened coherent grid."""
    tab = unit_tables(params.p, params.n, M)
    PM = params.p**M
    u = np.repeat(tab.u, PM)
    c = np.tile(np.arange(PM), tab.size)
    return u, c


@lru_cache(maxsize=8)
def relative_t_valuation(params: FieldParams, M: int) -> np.ndarray:
    """val of the t-part of g1^-1 g2, i.e. of t2 - u1 t1 / u2, on the grid (capped).  Read-only."""
    u, c = grid_group_t_vals(params, M)
    PM = params.p**M
    uinv = np.array([pow(int(x), -1, PM) for x in u])
    num = (c[None, :] - (u[:, None] * uinv[None, :] % PM) * c[:, None]) % PM
    out = valuation_array(num, params.p, M) - M
    out.flags.writeable = False
    return out


# ---------------------------------------------------------------------------
# operator norm certification


@dataclass
class CVReport:
    opnorm: float
    bound: float
    seminorm: float
    s: float

    @property
    def passed(self) -> bool:
        return self.opnorm <= self.bound * (1 + 1e-9)


def cv_constant(s: float, params: FieldParams) -> float:
    """q^n + ||mu_0^(s+1)||_1."""
    return float(params.p) ** params.n + mu0_l1_norm(s + 1, params)


def cv_certify(F: Symbol, s: float = -3.0) -> CVReport:
    if s >= -2:
        raise ValueError("the bound needs s < -2")
    opn = quantize_direct(F).opnorm()
    semi = j_apply(-s, F).sup_norm()
    return CVReport(opn, cv_constant(s, F.params) * semi, semi, s)


def coefficient_integral_check(F: Symbol, s: float = -3.0) -> tuple[float, float]:
    """(sup_g1 int |<pi(g1)1, Omega(F) pi(g2)1>| dg2, q^-n(1 + q^-n||mu_0^(s+1)||_1)||J^-s F||)."""
    params = F.params
    A = quantize_direct(F)
    C = coefficient_matrix(A, F.theta)
    lhs = float(np.max(np.abs(C).sum(axis=1)) * A.weight)
    q, n = params.p, params.n
    rhs = (float(q) ** (-n) * (1 + float(q) ** (-n) * mu0_l1_norm(s + 1, params))
           * j_apply(-s, F).sup_norm())
    return lhs, rhs


def coefficient_decay_check(F: Symbol, s: float = -3.0, corrected: bool = False) -> tuple[float, float]:
    """Largest ratio |c(g1,g2)| / (q^-kn ||J^-s F|| omega_{s+1}(g1^-1 g2)) over the grid, and 1.

    k = 2 is the constant as usually stated; it fails already for F = 1, where
    c(e, e) = ||1_{U_n}||^2 = q^-n.  corrected=True uses k = 1, which is what
    the pairing identity gives when combined with the corrected Wigner bound.
    """
    params = F.params
    A = quantize_direct(F)
    C = coefficient_matrix(A, F.theta)
    w = omega_of_val(relative_t_valuation(params, A.M), s + 1, params)
    k = 1 if corrected else 2
    scale = float(params.p) ** (-k * params.n) * j_apply(-s, F).sup_norm()
    if scale == 0:
        return float(np.max(np.abs(C), initial=0.0)), 0.0
    return float(np.max(np.abs(C) / (scale * w))), 1.0


def wigner_weight_check(g: GroupElement, theta: ThetaParam, s: float,
                        corrected: bool = False) -> tuple[float, float]:
    """(int_{X_n} |J^s W_g|, q^-kn omega_{s+1}(g)).

    k = 3 is the constant as usually stated.  At g = e the left side is
    exactly q^-2n (W_e is q^-n on the class [0] and vanishes elsewhere), so
    k = 3 fails whenever q^n > 2; corrected=True uses k = 2.
    """
    params = FieldParams(g.p, g.n)
    W = coherent_wigner(g, theta, s)
    lhs = float(np.abs(W.values).sum() * W.cell_volume)
    k = 2 if corrected else 3
    rhs = float(params.p) ** (-k * params.n) * float(omega_weight(s + 1, g, params))
    return lhs, rhs


# ---------------------------------------------------------------------------
# reconstruction of a symbol from its operator


@dataclass
class ReconstructionReport:
    decay_constant: float
    support_ok: bool
    s_probe: float


def _beyond_support_ok(A: OperatorKernel, theta: ThetaParam) -> bool:
    """Coefficients must vanish once |t2| exceeds p^M (checked one shell out)."""
    B = A.refine(A.M + 1)
    C = coefficient_matrix(B, theta)
    u, c = grid_group_t_vals(A.params, A.M + 1)
    outside = c % A.params.p != 0  # t = c / p^(M+1) with |t| = p^(M+1)
    return bool(np.max(np.abs(C[:, outside]), initial=0.0) < 1e-10 * max(1.0, np.abs(C).max()))


def reconstruct_symbol(A: OperatorKernel, theta: ThetaParam | None = None,
                       s_probe: float = -3.0, report: bool = False):
    """F_A([g]) = q^2n int int c(g1, g2) conj(W_{g1^-1 g2}([g1^-1 g])) dg1 dg2.

    The coefficients c(g1, g2) = <pi(g1)1, A pi(g2)1> vanish unless both t-parts
    lie in p^-M Z_p, and the integrand is constant on the grid cells, so the
    double integral is a finite sum.  Output resolution (M, M).
    """
    theta = theta or A.theta
    if theta is None:
        raise ValueError("theta is required")
    params, M = A.params, A.M
    p, n = params.p, params.n
    C = coefficient_matrix(A, theta)

    w = omega_of_val(relative_t_valuation(params, M), s_probe, params)
    decay = float(np.max(np.abs(C) / w))
    support_ok = _beyond_support_ok(A, theta)
    if not math.isfinite(decay) or not support_ok:
        warnings.warn("matrix-coefficient decay hypothesis failed; result may be unreliable")

    tab = unit_tables(p, n, M)
    PM = p**M
    roots = roots_of_unity(PM)
    th = theta.mod(M)
    ug, cg = grid_group_t_vals(params, M)       # g1 and g2 range over this grid
    u0 = tab.u
    phi0 = tab.phi % PM
    out = np.empty((tab.size, p ** (M - n)), dtype=complex)
    for a in range(tab.size):
        uinv = pow(int(tab.u[a]), -1, PM)
        # X = u0/u (u2 t2 - u1 t1) - phi(u0)(t - u1 t1 / u), all over p^M
        alpha = (u0[:, None] * uinv % PM) * (ug * cg % PM)[None, :] % PM           # (u0, g2)
        beta = (-(u0[:, None] * uinv % PM) * (ug * cg % PM)[None, :]
                + phi0[:, None] * (ug * uinv % PM * cg % PM)[None, :]) % PM        # (u0, g1)
        Ea = roots[th * alpha % PM]
        Eb = roots[th * beta % PM]
        for c in range(p ** (M - n)):
            eg = roots[(-th * phi0 * c) % PM]  # output t = c / p^M
            Wm = (Eb * eg[:, None]).T @ Ea * float(p) ** (-M)                        # (g1, g2)
            out[a, c] = np.sum(C * Wm.conj())
    out *= float(p) ** (2 * n) * float(p) ** (-2 * M)
    F = Symbol(params, theta, M, M, out)
    if report:
        return F, ReconstructionReport(decay, support_ok, s_probe)
    return F


# ---------------------------------------------------------------------------
# composition closure


@dataclass
class CompositionReport:
    max_ratio_convolution: float
    max_ratio_printed: float
    max_ratio_peetre: float
    peetre_constant: float
    star_diff: float
    seminorms_finite: bool
    product_symbol: Symbol = field(repr=False)

    @property
    def peetre_vacuous(self) -> bool:
        return not math.isfinite(self.peetre_constant)

    @property
    def closure_passed(self) -> bool:
        """The product has a symbol, it is the star product, and its seminorms are finite."""
        return self.star_diff <= 1e-9 and self.seminorms_finite

    @property
    def passed(self) -> bool:
        return (self.closure_passed and self.max_ratio_convolution <= 1 + 1e-9
                and self.max_ratio_peetre <= 1 + 1e-9)


def compose_bounded_check(F1: Symbol, F2: Symbol, s1: float = -3.0, s2: float = -3.0,
                          j_max: int = 3) -> CompositionReport:
    """Coefficient bounds for Omega(F1) Omega(F2) and the existence of its symbol.

    Inserting the coherent-state resolution of the identity between the two
    factors and bounding each coefficient by q^-n ||J^-s F|| omega_{s+1} gives,
    with h = g1^-1 g2,

        |c12(g1, g2)| <= q^-n ||J^-s1 F1|| ||J^-s2 F2|| int omega_{s1+1}(g) omega_{s2+1}(g^-1 h) dg,

    and, after the Peetre inequality, the factored form
        2 q^-n ||J^-s1 F1|| ||J^-s2 F2|| int omega_{s1+1}(g) omega_{-s2-1}(g^-1) dg * omega_{s2+1}(h),
    whose constant is infinite unless s1 - s2 < -1.  max_ratio_printed reports
    the convolution bound with the prefactor q^-3n instead.
    """
    from .star import star_via_operators

    if s1 >= -1 or s2 >= -1:
        raise ValueError("needs s1, s2 < -1")
    params = F1.params
    q, n = params.p, params.n
    A = quantize_direct(F1) @ quantize_direct(F2)
    C = np.abs(coefficient_matrix(A, F1.theta))
    norms = j_apply(-s1, F1).sup_norm() * j_apply(-s2, F2).sup_norm()
    base = float(q) ** (-n) * norms
    vh = relative_t_valuation(params, A.M)
    conv_table = {int(v): omega_convolution(s1 + 1, s2 + 1, params, int(v)) for v in np.unique(vh)}
    conv = np.vectorize(lambda v: conv_table[int(v)])(vh)

    def ratio(bound):
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(C > 0, C / bound, 0.0)
        return float(r.max(initial=0.0))

    pc = 2 * base * omega_pair_integral(s1 + 1, -s2 - 1, params)
    w = omega_of_val(vh, s2 + 1, params)
    r_peetre = ratio(pc * w) if math.isfinite(pc) else 0.0
    F3 = symbol_of_operator(A, F1.theta)
    diff = F3.max_diff(star_via_operators(F1, F2))
    finite = b_seminorms(F3, j_max).finite()
    return CompositionReport(ratio(base * conv), ratio(float(q) ** (-3 * n) * norms * conv),
                             r_peetre, pc, diff, finite, F3)
