"""The star product f1 * f2 = Omega^-1(Omega(f1) Omega(f2)).

Computed canonically through operator kernels, and independently by summing
the three-point kernel

    K3((u1,t1),(u2,t2),(u3,t3)) = q^2n Psi(theta[phi(u1/u2) t3 + phi(u2/u3) t1 + phi(u3/u1) t2])

over the supports of the two factors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .harmonic import roots_of_unity, unit_tables
from .padic import CharacterAngle, FieldParams, fractional_part, phi
from .quantize import Symbol, quantize_direct, symbol_of_operator, translate
from .repn import GroupElement, ThetaParam


def _reconcile(f1: Symbol, f2: Symbol) -> tuple[Symbol, Symbol]:
    if f1.theta != f2.theta:
        raise ValueError(f"theta mismatch: {f1.theta.value} vs {f2.theta.value}")
    if f1.params != f2.params:
        raise ValueError("symbols live over different fields")
    m, N = max(f1.m, f2.m), max(f1.N, f2.N)
    return f1.refine(m, N), f2.refine(m, N)


def star_via_operators(f1: Symbol, f2: Symbol) -> Symbol:
    """Canonical star product, output at resolution (max(m,N), max(m,N))."""
    f1, f2 = _reconcile(f1, f2)
    return symbol_of_operator(quantize_direct(f1) @ quantize_direct(f2), f1.theta)


star = star_via_operators


def star_via_kernel(f1: Symbol, f2: Symbol) -> Symbol:
    """Star product as the double integral of the three-point kernel.

    With M = max(m, N) every phase is constant on U_M cells in each unit
    variable, so summing over U_M cells (weight p^-M each) is exact.
    """
    f1, f2 = _reconcile(f1, f2)
    params, theta = f1.params, f1.theta
    p, n = params.p, params.n
    N = f1.N
    M = max(f1.m, N)
    tab = unit_tables(p, n, M)
    S = tab.size
    PM = p**M
    th = theta.mod(M)
    rows = np.arange(S) % f1.shape[0]
    a1 = f1.values[rows]  # (u1, c1)
    a2 = f2.values[rows]  # (u2, c2)
    c1 = np.arange(f1.shape[1]) * p ** (M - N)  # t1 = c1 p^(M-N) / p^M
    c2 = c1
    c = np.arange(p ** (M - n))                  # output t = c / p^M
    phi_ratio = tab.phi[tab.mul[:, tab.inv]] % PM  # phi(u_i / u_j)
    roots = roots_of_unity(PM)
    out = np.empty((S, len(c)), dtype=complex)
    for u in range(S):
        # angle = phi(u/u1) t2 + phi(u1/u2) t + phi(u2/u) t1   (times theta, mod 1)
        A = phi_ratio[u, :][:, None, None] * c2[None, None, :]       # (u1, 1, c2)
        B = phi_ratio[:, :][:, :, None] * c[None, None, :]           # (u1, u2, c)
        C = phi_ratio[:, u][:, None] * c1[None, :]                    # (u2, c1)
        e_a = roots[th * A % PM]                                      # (u1, 1, c2)
        e_b = roots[th * B % PM]                                      # (u1, u2, c)
        e_c = roots[th * C % PM]                                      # (u2, c1)
        g1 = np.einsum("ik,jk->ij", a1, e_c)                          # sum over c1: (u1, u2)
        g2 = np.einsum("jl,il->ij", a2, e_a[:, 0, :])                 # sum over c2: (u1, u2)
        out[u] = np.einsum("ij,ij,ijc->c", g1, g2, e_b)
    out *= float(p) ** (2 * n) * float(p) ** (-2 * M)
    return Symbol(params, theta, M, M, out)


@dataclass(frozen=True)
class ThreePointKernel:
    """Exact evaluator of K3 on triples of phase-space points."""

    params: FieldParams
    theta: ThetaParam

    def angle(self, g1: GroupElement, g2: GroupElement, g3: GroupElement) -> CharacterAngle:
        th = self.theta.scalar
        x = (phi(g1.u * g2.u.inverse()) * g3.t
             + phi(g2.u * g3.u.inverse()) * g1.t
             + phi(g3.u * g1.u.inverse()) * g2.t)
        return fractional_part(th * x)

    def __call__(self, g1, g2, g3) -> complex:
        q2n = float(self.params.p) ** (2 * self.params.n)
        return q2n * complex(self.angle(g1, g2, g3))

    def two_point(self, g1: GroupElement, g2: GroupElement) -> complex:
        return self(GroupElement.identity(self.params), g1, g2)


def two_point_kernel(params: FieldParams, theta: ThetaParam, g1: GroupElement, g2: GroupElement) -> complex:
    """q^2n Psi(theta(phi(u2) t1 - phi(u1) t2))."""
    x = phi(g2.u) * g1.t - phi(g1.u) * g2.t
    return float(params.p) ** (2 * params.n) * complex(fractional_part(theta.scalar * x))


def traciality_check(f1: Symbol, f2: Symbol) -> tuple[complex, complex]:
    """(int f1 * f2, int f1 f2)."""
    a, b = _reconcile(f1, f2)
    return star_via_operators(a, b).integral(), (a * b).integral()


def covariance_check(f1: Symbol, f2: Symbol, g: GroupElement) -> float:
    """max |lambda_g(f1 * f2) - lambda_g f1 * lambda_g f2|."""
    lhs = translate(star_via_operators(f1, f2), g)
    rhs = star_via_operators(translate(f1, g), translate(f2, g))
    return lhs.max_diff(rhs)


def star_sup_bound(f1: Symbol, f2: Symbol) -> float:
    """q^2n Vol(supp f1) Vol(supp f2) |f1|_inf |f2|_inf."""
    q2n = float(f1.params.p) ** (2 * f1.params.n)
    return q2n * f1.support_volume() * f2.support_volume() * f1.sup_norm() * f2.sup_norm()
