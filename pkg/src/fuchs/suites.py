"""Verification suites: every checked identity becomes a ``Report`` row."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import calculus as calc
from .harmonic import (
    ConfigFunction,
    LocalFunction,
    fourier_gamma,
    fourier_k,
    inverse_fourier_gamma,
    inverse_fourier_k,
    periodize,
    substitution_check,
)
from .padic import FieldParams, is_prime, mu0, phi_inverse_mod, phi_mod, sqrt_principal_mod
from .quantize import (
    OperatorKernel,
    Symbol,
    conjugate_kernel,
    kernel_formula,
    quantize_direct,
    symbol_of_operator,
    symbol_via_trace,
    translate,
    wigner,
)
from .repn import (
    GroupElement,
    ThetaParam,
    coherent_resolve,
    orthogonality_integral,
    pi_apply,
    random_group_element,
)
from .star import (
    ThreePointKernel,
    covariance_check,
    star_sup_bound,
    star_via_kernel,
    star_via_operators,
    traciality_check,
)

SUITES = ("padic", "harmonic", "repn", "quantize", "star", "calculus", "cv")


class ConfigError(ValueError):
    """An invalid run configuration (maps to exit status 2)."""


@dataclass
class RunConfig:
    prime: int = 3
    n: int = 1
    m: int = 3
    N: int = 2
    theta_digits: tuple[int, ...] = (1,)
    tol: float | None = None
    seed: int = 0
    suite: str = "all"
    fmt: str = "json"
    strict: bool = False
    timings: bool = False
    samples: int = 10

    def __post_init__(self):
        p = self.prime
        if p == 2:
            raise ConfigError(
                "p = 2 is excluded: the construction needs 2 to be a unit of Z_p, "
                "so the residue characteristic must be odd")
        if not is_prime(p):
            raise ConfigError(f"--prime {p} is not prime")
        if self.n < 1:
            raise ConfigError("--n must be >= 1")
        if self.m < self.n or self.N < self.n:
            raise ConfigError(f"need m >= n and N >= n (got m={self.m}, N={self.N}, n={self.n})")
        if not self.theta_digits or self.theta_digits[0] % p == 0:
            raise ConfigError("theta must have valuation 0: its first digit must be nonzero")
        if any(not 0 <= d < p for d in self.theta_digits):
            raise ConfigError(f"theta digits must lie in [0, {p})")
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}")

    @property
    def params(self) -> FieldParams:
        return FieldParams(self.prime, self.n)

    @property
    def theta(self) -> ThetaParam:
        return ThetaParam.from_digits(self.theta_digits, self.prime)

    def echo(self) -> dict:
        return {"p": self.prime, "n": self.n, "m": self.m, "N": self.N,
                "theta_digits": list(self.theta_digits), "seed": self.seed}


@dataclass
class Report:
    """One checked identity.  kind is "eq" (|lhs - rhs| <= tol * scale) or "le"."""

    check: str
    params: dict
    lhs: float
    rhs: float
    passed: bool
    anchor: str
    kind: str = "eq"
    runtime_ms: float | None = None
    suite: str = ""

    def to_json(self) -> dict:
        return {"suite": self.suite, "check": self.check, "params": self.params,
                "lhs": _num(self.lhs), "rhs": _num(self.rhs), "pass": self.passed,
                "kind": self.kind, "runtime_ms": self.runtime_ms, "anchor": self.anchor}


def _num(x: float):
    x = float(x)
    if math.isinf(x):
        return "inf"
    return x


class _Collector:
    def __init__(self, cfg: RunConfig, suite: str, tol: float):
        self.cfg, self.suite, self.tol = cfg, suite, tol
        self.rows: list[Report] = []

    def _add(self, check, lhs, rhs, ok, anchor, kind, t0, params):
        ms = round((time.perf_counter() - t0) * 1e3, 3) if self.cfg.timings else None
        self.rows.append(Report(check, params or self.cfg.echo(), float(lhs), float(rhs),
                                bool(ok), anchor, kind, ms, self.suite))

    def eq(self, check, fn: Callable[[], tuple[float, float]], anchor, tol=None, rel=False, params=None):
        t0 = time.perf_counter()
        lhs, rhs = fn()
        tol = self.tol if tol is None else tol
        scale = max(1.0, abs(rhs)) if rel else 1.0
        self._add(check, lhs, rhs, abs(lhs - rhs) <= tol * scale, anchor, "eq", t0, params)

    def dev(self, check, fn: Callable[[], float], anchor, tol=None, params=None):
        """A max-deviation that must vanish: lhs = deviation, rhs = tolerance."""
        t0 = time.perf_counter()
        d = fn()
        tol = self.tol if tol is None else tol
        self._add(check, d, tol, d <= tol, anchor, "dev", t0, params)

    def le(self, check, fn: Callable[[], tuple[float, float]], anchor, slack=1e-9, params=None):
        t0 = time.perf_counter()
        lhs, rhs = fn()
        self._add(check, lhs, rhs, lhs <= rhs * (1 + slack) + 1e-300, anchor, "le", t0, params)


def _rng(cfg: RunConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


# ---------------------------------------------------------------------------


def suite_padic(cfg: RunConfig, c: _Collector):
    p, n = cfg.prime, cfg.n
    L = n + 3
    PL = p**L
    us = [1 + p**n * a for a in range(p ** (L - n))]

    def val(x):
        x %= PL
        if x == 0:
            return L
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    def isometry(f):
        bad = 0
        for i, u in enumerate(us):
            fu = f(u)
            for w in us[i + 1:]:
                bad += val(fu - f(w)) != val(u - w)
        return float(bad)

    c.dev("sqrt isometry on U_n/U_(n+3)", lambda: isometry(lambda u: sqrt_principal_mod(u, p, n, L)),
          "|sqrt(u) - sqrt(v)| = |u - v|", tol=0)
    c.dev("phi isometry on U_n/U_(n+3)", lambda: isometry(lambda u: phi_mod(u, p, L)),
          "|phi(u) - phi(v)| = |u - v|", tol=0)
    c.dev("sqrt squares back", lambda: float(sum(sqrt_principal_mod(u, p, n, L) ** 2 % PL != u % PL for u in us)),
          "sqrt(u)^2 = u", tol=0)
    c.dev("phi inverse round trip",
          lambda: float(sum(phi_inverse_mod(phi_mod(u, p, L), p, n, L) != u % PL for u in us)),
          "phi^-1(phi(u)) = u", tol=0)
    P = cfg.params
    c.eq("mu0 of p^-(n+2)", lambda: (float(mu0(Fraction(1, p ** (n + 2)), P)), float(p**2)),
         "mu_0(t) = max(1, |p^n t|)", tol=0)


def suite_harmonic(cfg: RunConfig, c: _Collector):
    P, p, n = cfg.params, cfg.prime, cfg.n
    rng = _rng(cfg, 2)
    tol = c.tol if cfg.tol is not None else 1e-12
    f = LocalFunction(p, -2, 2, rng.normal(size=p**4) + 1j * rng.normal(size=p**4))
    c.eq("Fourier on Q_p is unitary", lambda: (fourier_k(f).norm(), f.norm()),
         "||F f||_2 = ||f||_2", tol=tol, rel=True)
    c.dev("Fourier inversion on Q_p", lambda: float(np.abs(inverse_fourier_k(fourier_k(f)).values - f.values).max()),
          "F^-1 F f = f", tol=tol)
    N = cfg.N + 1
    vals = rng.normal(size=p ** (N - n)) + 1j * rng.normal(size=p ** (N - n))
    c.dev("Gamma_n sum vs integral over Q_p",
          lambda: abs(np.sum(vals) - periodize(vals, P, N).integral() * float(p) ** (-n)),
          "sum_[t] f([t]) = q^-n int f(t) dt", tol=tol * max(1.0, float(np.abs(vals).sum())))
    G = fourier_gamma(vals, P, N)
    c.eq("Fourier on Gamma_n is unitary",
         lambda: (float(np.sum(np.abs(G) ** 2)) * float(p) ** (n - N), float(np.sum(np.abs(vals) ** 2))),
         "sum |f|^2 = q^n int_{p^n Z_p} |F_Gamma f|^2", tol=tol, rel=True)
    c.dev("Fourier on Gamma_n vs Fourier on Q_p of the periodization",
          lambda: float(np.abs(_gamma_from_k(vals, P, N) - G).max()),
          "F_Gamma f(z) = q^-n F_k(f~)(z) on p^n Z_p", tol=tol)
    c.dev("Fourier inversion on Gamma_n", lambda: float(np.abs(inverse_fourier_gamma(G, P, N) - vals).max()),
          "F_Gamma^-1 F_Gamma f = f", tol=tol)
    m = cfg.m
    fu = ConfigFunction.random(P, m, rng)
    h = LocalFunction(p, n, m, rng.normal(size=p ** (m - n)) + 0j)
    rep = substitution_check(fu, h)
    c.eq("substitution u -> u^2", lambda: (abs(rep.square_lhs - rep.square_rhs), 0.0),
         "int f(u^2) du = int f(u) du", tol=tol)
    c.eq("substitution u -> phi(u)", lambda: (abs(rep.phi_lhs - rep.phi_rhs), 0.0),
         "int_{U_n} h(u - 1/u) du = int_{p^n Z_p} h", tol=tol)


def _gamma_from_k(vals, P: FieldParams, N: int) -> np.ndarray:
    """q^-n times the Q_p transform of the periodized function, on p^n Z_p / p^N Z_p."""
    Fk = fourier_k(periodize(vals, P, N))  # index d is the point z = p^n d
    return Fk.values * float(P.p) ** (-P.n)


def suite_repn(cfg: RunConfig, c: _Collector):
    P, th, p, n = cfg.params, cfg.theta, cfg.prime, cfg.n
    tol = 1e-10 if cfg.tol is None else cfg.tol
    m = min(cfg.m, n + 1)
    S = p ** (m - n)
    worst = 0.0
    for i in range(S):
        for j in range(S):
            f1, f2 = ConfigFunction.basis(P, m, i), ConfigFunction.basis(P, m, j)
            lhs = orthogonality_integral(f1, f2, th, m)
            worst = max(worst, abs(lhs - f1.norm() ** 2 * f2.norm() ** 2))
    c.dev(f"square integrability on basis pairs at scale {m}", lambda: worst,
          "int |<f1, pi(g) f2>|^2 dg = |theta|^-1 ||f1||^2 ||f2||^2", tol=tol)
    rng = _rng(cfg, 3)

    def resolution():
        worst = 0.0
        for _ in range(cfg.samples):
            f1, f2, mo = (ConfigFunction.random(P, m, rng) for _ in range(3))
            lhs = coherent_resolve(f1, f2, mo, th, m)
            worst = max(worst, abs(lhs - f1.inner(f2)))
        return worst

    c.dev("coherent-state resolution of the identity", resolution,
          "||psi||^-2 int <f1, pi(g) psi><pi(g) psi, f2> dg = <f1, f2>", tol=tol)

    def hom():
        worst = 0.0
        for _ in range(cfg.samples):
            g1, g2 = (random_group_element(P, rng, t_scale=2) for _ in range(2))
            f = ConfigFunction.random(P, m, rng)
            a = pi_apply(g1, pi_apply(g2, f, th), th)
            b = pi_apply(g1 * g2, f, th)
            L = max(a.m, b.m)
            worst = max(worst, float(np.abs(a.refine(L).values - b.refine(L).values).max()))
        return worst

    c.dev("pi is a homomorphism", hom, "pi(g1) pi(g2) = pi(g1 g2)", tol=tol)

    def unitary():
        worst = 0.0
        for _ in range(cfg.samples):
            g = random_group_element(P, rng, t_scale=3)
            f = ConfigFunction.random(P, m, rng)
            worst = max(worst, abs(pi_apply(g, f, th).norm() - f.norm()))
        return worst

    c.dev("pi is unitary", unitary, "||pi(g) f|| = ||f||", tol=tol)


def suite_quantize(cfg: RunConfig, c: _Collector):
    P, th, m, N = cfg.params, cfg.theta, cfg.m, cfg.N
    tol = 1e-10 if cfg.tol is None else cfg.tol
    rng = _rng(cfg, 4)
    fs = [Symbol.random(P, th, m, N, rng) for _ in range(cfg.samples)]

    def hs():
        return max(abs(a - b) / max(b, 1e-300) for a, b in (calc_hs(f) for f in fs))

    c.dev("Hilbert-Schmidt isometry (relative)", hs, "||Omega(f)||_HS^2 = q^n ||f||^2", tol=tol)
    c.dev("point-operator sum vs kernel formula",
          lambda: max(quantize_direct(f).max_diff(kernel_formula(f)) for f in fs),
          "Omega(f) kernel = q^n (Id x F_Gamma f)(sqrt(u u0), theta phi(sqrt(u/u0)))", tol=tol)
    c.dev("symbol recovered from operator",
          lambda: max(symbol_of_operator(quantize_direct(f)).max_diff(f) for f in fs),
          "Omega^-1(Omega(f)) = f", tol=tol)
    c.dev("symbol recovered by trace pairing",
          lambda: max(symbol_via_trace(quantize_direct(f)).max_diff(f) for f in fs),
          "f([g]) = Tr(Omega(f) Omega([g]))", tol=tol)
    M = max(m, N)

    def wig():
        worst = 0.0
        for _ in range(cfg.samples):
            f1, f2 = ConfigFunction.random(P, M, rng), ConfigFunction.random(P, M, rng)
            A = quantize_direct(wigner(f1, f2, th))
            worst = max(worst, A.max_diff(OperatorKernel.rank_one(f2, f1)))
        return worst

    c.dev("Wigner function quantizes to rank one", wig, "Omega(W_{f1,f2}) = |f2><f1|", tol=tol)
    # the t-cutoff must reach the scale of the vectors acted on: Omega(1 (x) 1_{p^-M Z_p}) = E_M
    c.dev("constant symbol quantizes to the identity",
          lambda: quantize_direct(Symbol.constant(P, th, m, M)).max_diff(OperatorKernel.identity(P, M)),
          "Omega(1) = Id", tol=tol)

    def cov():
        worst = 0.0
        for f in fs:
            g = random_group_element(P, rng, t_scale=N + 1)
            lhs = conjugate_kernel(quantize_direct(f), g, th)
            worst = max(worst, lhs.max_diff(quantize_direct(translate(f, g))))
        return worst

    c.dev("covariance under G_n", cov, "pi(g) Omega(f) pi(g)^* = Omega(lambda_g f)", tol=tol)
    c.dev("adjoint is the conjugate symbol",
          lambda: max(quantize_direct(f).adjoint().max_diff(quantize_direct(f.conj())) for f in fs),
          "Omega(f)^* = Omega(conj f)", tol=tol)


def calc_hs(f: Symbol) -> tuple[float, float]:
    A = quantize_direct(f)
    return A.hs_norm2(), float(f.params.p) ** f.params.n * f.norm2()


def suite_star(cfg: RunConfig, c: _Collector):
    P, th, n = cfg.params, cfg.theta, cfg.n
    m, N = min(cfg.m, n + 2), min(cfg.N, n + 1)
    tol = 1e-9 if cfg.tol is None else cfg.tol
    rng = _rng(cfg, 5)
    k = max(3, cfg.samples // 3)
    trip = [tuple(Symbol.random(P, th, m, N, rng) for _ in range(3)) for _ in range(k)]
    c.dev("star product: operator route vs three-point kernel",
          lambda: max(star_via_operators(a, b).max_diff(star_via_kernel(a, b)) for a, b, _ in trip),
          "f1 * f2 = int K3 f1 f2", tol=tol)
    c.dev("associativity",
          lambda: max(star_via_operators(star_via_operators(a, b), d).max_diff(
              star_via_operators(a, star_via_operators(b, d))) for a, b, d in trip),
          "(f1 * f2) * f3 = f1 * (f2 * f3)", tol=tol)

    def trace():
        worst = 0.0
        for a, b, _ in trip:
            x, y = traciality_check(a, b)
            worst = max(worst, abs(x - y))
        return worst

    c.dev("traciality", trace, "int f1 * f2 = int f1 f2", tol=tol)
    c.dev("left covariance",
          lambda: max(covariance_check(a, b, random_group_element(P, rng, t_scale=N + 1)) for a, b, _ in trip),
          "lambda_g(f1 * f2) = lambda_g f1 * lambda_g f2", tol=tol)
    c.le("sup bound for the star product",
         lambda: max(((star_via_operators(a, b).sup_norm(), star_sup_bound(a, b)) for a, b, _ in trip),
                     key=lambda r: r[0] / r[1]),
         "|f1 * f2| <= q^2n Vol(supp f1) Vol(supp f2) |f1| |f2|")
    M = max(m, N)

    def rank_one():
        worst = 0.0
        for _ in range(k):
            f1, f2, f3, f4 = (ConfigFunction.random(P, M, rng) for _ in range(4))
            lhs = star_via_operators(wigner(f1, f2, th), wigner(f3, f4, th))
            rhs = wigner(f3, f2, th) * f1.inner(f4)
            worst = max(worst, lhs.max_diff(rhs))
        return worst

    c.dev("star of Wigner functions", rank_one, "W_{f1,f2} * W_{f3,f4} = <f1, f4> W_{f3,f2}", tol=tol)
    K3 = ThreePointKernel(P, th)

    def diag():
        bad = 0
        for _ in range(cfg.samples):
            g, g1, g2, g3 = (random_group_element(P, rng, t_scale=3) for _ in range(4))
            bad += K3.angle(g * g1, g * g2, g * g3) != K3.angle(g1, g2, g3)
        return float(bad)

    c.dev("three-point kernel is diagonally invariant", diag,
          "K3(g g1, g g2, g g3) = K3(g1, g2, g3)", tol=0)


def suite_calculus(cfg: RunConfig, c: _Collector):
    P, th, p, n = cfg.params, cfg.theta, cfg.prime, cfg.n
    tol = 1e-9 if cfg.tol is None else cfg.tol
    m, N = calc.closure_resolution(cfg.m, cfg.N, n)
    J = lambda s, route="auto": calc.j_matrix(s, P, m, N, route=route).matrix  # noqa: E731
    for s1, s2, route in [(-2, -2, "auto"), (-2, -3, "auto"), (-1.5, -1.5, "spectral")]:
        c.dev(f"semigroup J^{s1} J^{s2}",
              lambda: float(np.abs(J(s1, route) @ J(s2, route) - J(s1 + s2, route)).max()),
              "J^s1 J^s2 = J^(s1+s2)", tol=tol, params={**cfg.echo(), "m": m, "N": N})
    for s in (-1.5, -3.0):
        c.dev(f"direct vs spectral J^{s}",
              lambda: float(np.abs(J(s) - J(s, "spectral")).max()),
              "(J^-2)^(-s/2) = J^s", tol=tol)

    def eig():
        worst = 0.0
        for x in range(p**m):
            F = calc.character_symbol(x, P, th, m, N)
            lam = float(mu0(Fraction(x, p**m), P)) ** -2
            worst = max(worst, float(np.abs(calc.j_apply(-2, F).values - lam * F.values).max()))
        return worst

    c.dev("eigenrelation on all grid characters", eig, "J^s Psi_x = mu_0(x)^s Psi_x", tol=tol)
    c.le("J^-2 positive definite", lambda: (0.0, float(np.linalg.eigvalsh(J(-2)).min())),
         "eigenvalues of J^-2 > 0", slack=0)
    kap = calc.KsKernel(-2, P)
    c.dev("kernel closed form vs shell enumeration",
          lambda: max(abs(kap(v) - kappa_enumerated(-2, P, v)) for v in range(n, n + 5)),
          "F(Psi-bar mu_0^s)(u) by shells", tol=1e-10)
    c.eq("||mu_0^-2||_1", lambda: (calc.mu0_l1_norm(-2, P), _mu0_l1_series(-2, P)),
         "int mu_0^-2 = q^n (1 + (1 - 1/q) q^(s+1) / (1 - q^(s+1)))", tol=1e-12)
    rng = _rng(cfg, 6)
    Fs = [Symbol.random(P, th, m, N, rng) for _ in range(cfg.samples)]
    c.le("product inequality",
         lambda: max((calc.product_bound(Fs[i], Fs[i - 1], 1) for i in range(len(Fs))),
                     key=lambda r: r[0] / r[1]),
         "||J^j(F1 F2)|| <= q^-2n ||mu_0^-2||_1^2 ||J^(j+2) F1|| ||J^(j+2) F2||")
    c.le("ideal inequality",
         lambda: max((calc.ideal_bound(Fs[i], Fs[i - 1], 1, 1) for i in range(len(Fs))),
                     key=lambda r: r[0] / r[1]),
         "||J^k I^j(f F)|| <= q^-2n ||mu_0^-2||_1^2 ||J^(k+2) I^j f|| ||J^(k+2) F||")


def kappa_enumerated(s: float, P: FieldParams, v: int, extra: int = 3) -> float:
    """kappa_s at u = 1 + p^v by summing over cosets t + p^-n Z_p, |t| <= p^(v+extra)."""
    p, n = P.p, P.n
    K = v + extra
    total = 0.0
    for c in range(p ** (K - n)):
        t = Fraction(c, p**K)
        w = float(mu0(t, P)) ** s
        total += w * math.cos(2 * math.pi * float((Fraction(p**v) * t) % 1))
    return total * float(p) ** n


def _mu0_l1_series(s: float, P: FieldParams, terms: int = 200) -> float:
    p, n = P.p, P.n
    return float(p) ** n + sum(float(p) ** (s * k) * float(p) ** (n + k) * (1 - 1 / p)
                               for k in range(1, terms))


def suite_cv(cfg: RunConfig, c: _Collector, gate_printed: bool = False):
    """Operator-norm bounds.  gate_printed=False keeps the as-printed pointwise
    constants out of the pass/fail decision (they are reported as kind "info")."""
    P, th, p, n = cfg.params, cfg.theta, cfg.prime, cfg.n
    m, N = cfg.m, cfg.N
    rng = _rng(cfg, 7)
    s = -3.0
    Fs = [Symbol.random(P, th, m, N, rng) for _ in range(cfg.samples)]
    Fs += adversarial_symbols(P, th, m, N, rng)

    def cv():
        reps = [calc.cv_certify(F, s) for F in Fs]
        return max(((r.opnorm, r.bound) for r in reps), key=lambda r: r[0] / r[1])

    c.le("operator norm bound, s = -3", cv, "||Omega(F)|| <= (q^n + ||mu_0^(s+1)||_1) ||J^-s F||")
    c.eq("bound constant at s = -3", lambda: (calc.cv_constant(s, P), float(p**n) + _mu0_l1_series(-2, P)),
         "q^n + ||mu_0^-2||_1", tol=1e-12)

    def w_l1():
        r = calc.js_wigner_l1(s, P, th, T=n + 3)
        return r.upper, r.bound

    c.le("coherent Wigner L1 integral (with tail bound)", w_l1,
         "int int |J^s W_g1([g2])| <= q^-2n (1 + q^-n ||mu_0^(s+1)||_1)")
    c.le("integrated coefficient bound",
         lambda: max((calc.coefficient_integral_check(F, s) for F in Fs), key=lambda r: r[0] / r[1]),
         "sup_g1 int |<pi(g1)1, Omega(F) pi(g2)1>| dg2 <= q^-n (1 + q^-n ||mu_0^(s+1)||_1) ||J^-s F||")
    gs = sample_group_elements(P, rng)
    for corrected in (True, False):
        label = "q^-2n" if corrected else "q^-3n (as printed)"
        rows = [calc.wigner_weight_check(g, th, sw, corrected) for g in gs for sw in (-3.0, -1.5, 0.0)]
        worst = max(rows, key=lambda r: r[0] / r[1])
        _gated_le(c, f"pointwise Wigner weight bound, {label}", worst,
                  f"int |J^s W_g| <= {label.split()[0]} omega_(s+1)(g)", corrected or gate_printed)
        rows = [calc.coefficient_decay_check(F, s, corrected) for F in Fs + [Symbol.constant(P, th, m, N)]]
        worst = max(rows, key=lambda r: r[0] / max(r[1], 1e-300))
        label2 = "q^-n" if corrected else "q^-2n (as printed)"
        _gated_le(c, f"coefficient decay, {label2}", worst,
                  f"|<pi(g1)1, Omega(F) pi(g2)1>| <= {label2.split()[0]} ||J^-s F|| omega_(s+1)(g1^-1 g2)",
                  corrected or gate_printed)


def _gated_le(c: _Collector, check, pair, anchor, gate: bool):
    c.le(check, lambda: pair, anchor)
    if not gate:
        c.rows[-1].kind = "info"


def sample_group_elements(P: FieldParams, rng, k: int = 6) -> list[GroupElement]:
    """The identity plus random elements at t-scales from 0 to n + 3."""
    out = [GroupElement.identity(P)]
    for ts in range(0, P.n + 4):
        out.append(random_group_element(P, rng, t_scale=ts))
    return out[: max(k, P.n + 5)]


def adversarial_symbols(P: FieldParams, th: ThetaParam, m: int, N: int, rng) -> list[Symbol]:
    """Pure characters, a delta, a constant and a rank-one Wigner function."""
    p = P.p
    out = [calc.character_symbol(x, P, th, m, N) for x in (0, 1, p ** (m - 1), p**m - 1)]
    d = Symbol.zeros(P, th, m, N)
    d.values[0, 0] = 1.0
    out.append(d)
    out.append(Symbol.constant(P, th, m, N))
    M = max(m, N)
    f = ConfigFunction.random(P, M, rng)
    out.append(wigner(f, f, th))
    return out


RUNNERS = {
    "padic": suite_padic,
    "harmonic": suite_harmonic,
    "repn": suite_repn,
    "quantize": suite_quantize,
    "star": suite_star,
    "calculus": suite_calculus,
    "cv": suite_cv,
}


def run(cfg: RunConfig) -> list[Report]:
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    rows: list[Report] = []
    for name in names:
        col = _Collector(cfg, name, 1e-10 if cfg.tol is None else cfg.tol)
        RUNNERS[name](cfg, col)
        rows.extend(col.rows)
    return rows


def all_passed(rows: list[Report]) -> bool:
    return all(r.passed for r in rows if r.kind != "info")
