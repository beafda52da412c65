"""Covariant quantization of symbols on X_n = U_n x| Gamma_n.

A symbol at resolution (m, N) is constant on U_m cosets in u and supported in
p^-N Z_p / p^-n Z_p in [t].  Its quantization is an integral operator whose
kernel is constant on U_M x U_M cells with M = max(m, N); that kernel is an
``OperatorKernel``.  Two independent routes compute it: a sum of point
operators (``quantize_direct``) and the Fourier/change-of-variables formula
(``kernel_formula``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .harmonic import (
    ConfigFunction,
    common_scale,
    fourier_gamma,
    inverse_fourier_gamma,
    roots_of_unity,
    unit_tables,
)
from .padic import FieldParams, PAdicScalar
from .repn import GroupElement, ThetaParam, pi_output_scale


@dataclass
class Symbol:
    """A locally constant, finitely supported function on X_n."""

    params: FieldParams
    theta: ThetaParam
    m: int
    N: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.params.n
        if self.m < n or self.N < n:
            raise ValueError(f"resolution (m={self.m}, N={self.N}) must satisfy m, N >= n={n}")
        if self.theta.p != self.params.p:
            raise ValueError("theta lives over a different prime")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.shape:
            raise ValueError(f"expected shape {self.shape}, got {self.values.shape}")

    # construction ----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        p, n = self.params.p, self.params.n
        return (p ** (self.m - n), p ** (self.N - n))

    @classmethod
    def zeros(cls, params, theta, m, N) -> "Symbol":
        p, n = params.p, params.n
        return cls(params, theta, m, N, np.zeros((p ** (m - n), p ** (N - n))))

    @classmethod
    def constant(cls, params, theta, m, N, value: complex = 1.0) -> "Symbol":
        """value * 1_{U_n} (x) 1_{p^-N Z_p}."""
        p, n = params.p, params.n
        return cls(params, theta, m, N, np.full((p ** (m - n), p ** (N - n)), value, dtype=complex))

    @classmethod
    def random(cls, params, theta, m, N, rng: np.random.Generator) -> "Symbol":
        p, n = params.p, params.n
        shape = (p ** (m - n), p ** (N - n))
        return cls(params, theta, m, N, rng.normal(size=shape) + 1j * rng.normal(size=shape))

    def like(self, values, m: int | None = None, N: int | None = None) -> "Symbol":
        return Symbol(self.params, self.theta, self.m if m is None else m,
                      self.N if N is None else N, values)

    # resolution ------------------------------------------------------------
    def refine(self, m: int | None = None, N: int | None = None) -> "Symbol":
        """Same function on a finer grid: values replicate in u, zero-pad in [t]."""
        p, n = self.params.p, self.params.n
        m = self.m if m is None else m
        N = self.N if N is None else N
        if m < self.m or N < self.N:
            raise ValueError("refinement cannot coarsen")
        if (m, N) == (self.m, self.N):
            return self
        rows = np.arange(p ** (m - n)) % self.shape[0]
        out = np.zeros((p ** (m - n), p ** (N - n)), dtype=complex)
        # t = c / p^N lies in p^-N0 Z_p iff p^(N-N0) | c
        out[:, :: p ** (N - self.N)] = self.values[rows]
        return Symbol(self.params, self.theta, m, N, out)

    def _common(self, other: "Symbol") -> tuple["Symbol", "Symbol"]:
        if other.theta != self.theta:
            raise ValueError("theta mismatch between symbols")
        m, N = max(self.m, other.m), max(self.N, other.N)
        return self.refine(m, N), other.refine(m, N)

    # algebra ---------------------------------------------------------------
    def __add__(self, other: "Symbol") -> "Symbol":
        a, b = self._common(other)
        return a.like(a.values + b.values)

    def __sub__(self, other: "Symbol") -> "Symbol":
        a, b = self._common(other)
        return a.like(a.values - b.values)

    def __mul__(self, other) -> "Symbol":
        """Pointwise product, or scaling by a number."""
        if isinstance(other, Symbol):
            a, b = self._common(other)
            return a.like(a.values * b.values)
        return self.like(self.values * other)

    __rmul__ = __mul__

    def conj(self) -> "Symbol":
        return self.like(self.values.conj())

    # norms -----------------------------------------------------------------
    @property
    def cell_volume(self) -> float:
        return float(self.params.p) ** (-self.m)

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.cell_volume)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values), initial=0.0))

    def integral(self) -> complex:
        return complex(np.sum(self.values) * self.cell_volume)

    def support_volume(self) -> float:
        return float(np.count_nonzero(self.values) * self.cell_volume)

    def max_diff(self, other: "Symbol") -> float:
        a, b = self._common(other)
        return float(np.max(np.abs(a.values - b.values), initial=0.0))

    def t_points(self) -> np.ndarray:
        return np.arange(self.shape[1])


@dataclass
class OperatorKernel:
    """Schwartz kernel K(u0, u) of an operator on L^2(U_n), constant on U_M cells.

    (A f)(u0) = int K(u0, u) f(u) du, so the matrix acting on value vectors is
    K * p^-M.
    """

    params: FieldParams
    M: int
    matrix: np.ndarray = field(repr=False)
    theta: ThetaParam | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        S = self.params.p ** (self.M - self.params.n)
        if self.matrix.shape != (S, S):
            raise ValueError(f"kernel at scale {self.M} must be {S}x{S}")

    @classmethod
    def identity(cls, params: FieldParams, M: int, theta=None) -> "OperatorKernel":
        """The orthogonal projection onto scale-M functions (identity on them)."""
        S = params.p ** (M - params.n)
        return cls(params, M, np.eye(S) * float(params.p) ** M, theta)

    @classmethod
    def rank_one(cls, f2: ConfigFunction, f1: ConfigFunction, theta=None) -> "OperatorKernel":
        """|f2><f1|: f -> <f1, f> f2."""
        f1, f2 = common_scale(f1, f2)
        return cls(f1.params, f1.m, np.outer(f2.values, f1.values.conj()), theta)

    @property
    def weight(self) -> float:
        return float(self.params.p) ** (-self.M)

    @property
    def op(self) -> np.ndarray:
        return self.matrix * self.weight

    def refine(self, M: int) -> "OperatorKernel":
        if M < self.M:
            raise ValueError("refinement cannot coarsen")
        idx = np.arange(self.params.p ** (M - self.params.n)) % self.matrix.shape[0]
        return OperatorKernel(self.params, M, self.matrix[np.ix_(idx, idx)], self.theta)

    def _common(self, other: "OperatorKernel"):
        M = max(self.M, other.M)
        return self.refine(M), other.refine(M)

    def compose(self, other: "OperatorKernel") -> "OperatorKernel":
        a, b = self._common(other)
        return OperatorKernel(a.params, a.M, a.matrix @ b.matrix * a.weight, a.theta or b.theta)

    __matmul__ = compose

    def adjoint(self) -> "OperatorKernel":
        return OperatorKernel(self.params, self.M, self.matrix.conj().T, self.theta)

    def hs_norm2(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2) * self.weight**2)

    def opnorm(self) -> float:
        return float(np.linalg.norm(self.op, 2))

    def apply(self, f: ConfigFunction) -> ConfigFunction:
        A = self if f.m <= self.M else self.refine(f.m)
        f = f.refine(A.M)
        return ConfigFunction(self.params, A.M, A.op @ f.values)

    def max_diff(self, other: "OperatorKernel") -> float:
        a, b = self._common(other)
        return float(np.max(np.abs(a.matrix - b.matrix), initial=0.0))


# ---------------------------------------------------------------------------
# point operators


def gamma_class(t: PAdicScalar, n: int) -> tuple[int, int]:
    """(K, c) with [t] = [c / p^K], K = max(n, -val t)."""
    if t.is_zero or t.v >= -n:
        return n, 0
    K = -int(t.v)
    return K, t.scaled_residue(K, K - n)


def omega_point(g: GroupElement, f: ConfigFunction, theta: ThetaParam) -> ConfigFunction:
    """(Omega([g]) f)(u0) = Psi(theta phi(u u0^-1) t) f(u^2 u0^-1).

    Depends on t only through its class [t] in Gamma_n.
    """
    params = f.params
    p, n = params.p, params.n
    K, c = gamma_class(g.t, n)
    L = max(f.m, K)
    tab = unit_tables(p, n, L)
    a = tab.index_int(g.u.residue(L))
    src = tab.mul[tab.mul[a, a], tab.inv] % p ** (f.m - n)
    out = f.values[src]
    if c:
        PK = p**K
        ph = tab.phi[tab.mul[a, tab.inv]] % PK
        out = out * roots_of_unity(PK)[theta.mod(K) * ph % PK * c % PK]
    return ConfigFunction(params, L, out)


def _phases(params: FieldParams, theta: ThetaParam, L: int, N: int) -> np.ndarray:
    """phase[a, i0, c] = Psi(theta phi(u_a / u_i0) c / p^N) on the scale-L grid."""
    p, n = params.p, params.n
    tab = unit_tables(p, n, L)
    PN = p**N
    ph = tab.phi[tab.mul[:, tab.inv]] % PN  # phi(u_a u_i0^-1)
    c = np.arange(p ** (N - n))
    return roots_of_unity(PN)[(theta.mod(N) * ph % PN)[:, :, None] * c[None, None, :] % PN]


def quantize_direct(f: Symbol) -> OperatorKernel:
    """|theta| q^n int f([g]) Omega([g]) d[g] as a finite sum of point operators.

    Each Omega(u, [t]) with |t| <= p^N preserves scale-M functions and depends
    on u only modulo U_M, so integrating over U_M cells is exact.
    """
    params, theta = f.params, f.theta
    p, n = params.p, params.n
    M = max(f.m, f.N)
    tab = unit_tables(p, n, M)
    S = tab.size
    fa = f.values[np.arange(S) % f.shape[0]]  # f(u_a, c) refined in u
    coef = np.einsum("ac,aic->ai", fa, _phases(params, theta, M, f.N))
    target = tab.mul[np.diag(tab.mul)[:, None], tab.inv[None, :]]  # u_a^2 / u_i0
    K = np.zeros((S, S), dtype=complex)
    rows = np.broadcast_to(np.arange(S)[None, :], (S, S))
    # kernel = q^n sum_a p^-M coef * (operator matrix * p^M)
    np.add.at(K, (rows, target), float(p) ** n * coef)
    return OperatorKernel(params, M, K, theta)


quantize = quantize_direct


def kernel_formula(f: Symbol) -> OperatorKernel:
    """K(u0, u) = q^n (Id (x) F_Gamma f)(sqrt(u u0), theta phi(sqrt(u / u0)))."""
    params, theta = f.params, f.theta
    p, n = params.p, params.n
    M = max(f.m, f.N)
    tab = unit_tables(p, n, M)
    G = fourier_gamma(f.values, params, f.N)  # columns: z = p^n d mod p^N
    s = tab.sqrt
    A = tab.mul[s[None, :], s[:, None]] % p ** (f.m - n)       # sqrt(u) sqrt(u0)
    B = tab.mul[s[None, :], tab.inv[s][:, None]]                # sqrt(u) / sqrt(u0)
    z = theta.mod(f.N) * (tab.phi[B] % p**f.N) % p**f.N
    d = z // p**n
    return OperatorKernel(params, M, float(p) ** n * G[A, d], theta)


def symbol_of_operator(A: OperatorKernel, theta: ThetaParam | None = None) -> Symbol:
    """Inverse of the quantization map at resolution (M, M).

    Undoes the change of variables (u0, u) = (a / b, a b) with
    b = phi^-1(z / theta), then inverts F_Gamma.
    """
    theta = theta or A.theta
    if theta is None:
        raise ValueError("theta is required")
    params, M = A.params, A.M
    p, n = params.p, params.n
    tab = unit_tables(p, n, M)
    S = tab.size
    d = np.arange(S)
    b = tab.phi_inv[(pow(theta.mod(M - n), -1, p ** (M - n)) * d) % p ** (M - n)]
    a = np.arange(S)
    u0 = tab.mul[a[:, None], tab.inv[b][None, :]]
    u = tab.mul[a[:, None], b[None, :]]
    G = A.matrix[u0, u] / float(p) ** n
    return Symbol(params, theta, M, M, inverse_fourier_gamma(G, params, M))


def symbol_via_trace(A: OperatorKernel, theta: ThetaParam | None = None) -> Symbol:
    """F([g]) = Tr(A Omega([g])) evaluated from kernels, at resolution (M, M)."""
    theta = theta or A.theta
    params, M = A.params, A.M
    p, n = params.p, params.n
    tab = unit_tables(p, n, M)
    S = tab.size
    rows = tab.mul[np.diag(tab.mul)[:, None], tab.inv[None, :]]  # u^2 / u2, indexed [a, u2]
    Ak = A.matrix[rows, np.arange(S)[None, :]]
    out = np.einsum("aj,ajc->ac", Ak, _phases(params, theta, M, M)) * A.weight
    return Symbol(params, theta, M, M, out)


def wigner(f1: ConfigFunction, f2: ConfigFunction, theta: ThetaParam) -> Symbol:
    """W(u, [t]) = <f1, Omega(u, [t]) f2>, at resolution (m, m)."""
    f1, f2 = common_scale(f1, f2)
    params, m = f1.params, f1.m
    p, n = params.p, params.n
    tab = unit_tables(p, n, m)
    target = tab.mul[np.diag(tab.mul)[:, None], tab.inv[None, :]]  # u_a^2 / u0, [a, u0]
    vals = f1.values.conj()[None, :] * f2.values[target]
    W = np.einsum("ai,aic->ac", vals, _phases(params, theta, m, m)) * float(p) ** (-m)
    return Symbol(params, theta, m, m, W)


def hs_isometry_check(f: Symbol) -> tuple[float, float]:
    """(||Omega(f)||_HS^2, q^n ||f||^2)."""
    return quantize_direct(f).hs_norm2(), float(f.params.p) ** f.params.n * f.norm2()


# ---------------------------------------------------------------------------
# the G_n action on symbols and operators


def translate(f: Symbol, g: GroupElement) -> Symbol:
    """f^g([g']) = f([g]^-1 [g']), refined as far as the translation requires.

    [g]^-1 [g'] = (u'/u, [t' - u t / u']).
    """
    params = f.params
    p, n = params.p, params.n
    K, _ = gamma_class(g.t, n)
    N2 = max(f.N, K)
    m2 = max(f.m, K - n, N2 - n)
    tab = unit_tables(p, n, m2)
    P2 = p ** (N2 - n)
    u = g.u.residue(m2)
    T = g.t.scaled_residue(N2, N2 - n) if K > n else 0
    uinv_idx = tab.index_int(pow(u, -1, tab.mod))
    src_u = tab.mul[uinv_idx] % f.shape[0]
    mod = p ** (N2 - n)
    w = tab.u[tab.inv] % mod * (u % mod) % mod  # u / u'
    num = (np.arange(P2)[None, :] - (w * T % mod)[:, None]) % mod
    step = p ** (N2 - f.N)
    inside = num % step == 0
    out = np.where(inside, f.values[src_u[:, None], (num // step) % f.shape[1]], 0)
    return Symbol(params, f.theta, m2, N2, out)


def pi_matrix(g: GroupElement, theta: ThetaParam, params: FieldParams, L: int) -> np.ndarray:
    """Matrix of pi(g) on value vectors at scale L (L must absorb the phase scale)."""
    if pi_output_scale(g, L) != L:
        raise ValueError("scale too coarse for this group element")
    p, n = params.p, params.n
    tab = unit_tables(p, n, L)
    S = tab.size
    u = g.u.residue(L)
    src = tab.mul[tab.index_int(pow(u, -1, tab.mod))]
    P = np.zeros((S, S), dtype=complex)
    K = g.t_scale()
    phase = np.ones(S, dtype=complex)
    if K:
        PK = p**K
        c = g.t_numerator(K)
        u0inv = tab.u[tab.inv] % PK
        phase = roots_of_unity(PK)[(theta.mod(K) * (u % PK) % PK * c % PK) * u0inv % PK]
    P[np.arange(S), src] = phase
    return P


def conjugate_kernel(A: OperatorKernel, g: GroupElement, theta: ThetaParam) -> OperatorKernel:
    """pi(g) A pi(g)^*."""
    L = pi_output_scale(g, A.M)
    A = A.refine(L)
    P = pi_matrix(g, theta, A.params, L)
    return OperatorKernel(A.params, L, P @ A.matrix @ P.conj().T, A.theta)
