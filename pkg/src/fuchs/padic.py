"""Fixed-point arithmetic in Q_p for odd primes.

A nonzero element is stored as ``p**v * mantissa`` where the mantissa is a
unit known modulo ``p**L``.  Zero is the canonical value with ``v = inf``.
Besides the field operations the module provides the two isometries of the
principal unit group ``U_n = 1 + p^n Z_p`` used everywhere else:
the square map and ``u -> u - 1/u``, together with their inverses.

Integer-level helpers (``*_mod``) work on plain ints modulo ``p**L`` and are
what the grid code uses in its inner loops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

INF = math.inf
DEFAULT_PRECISION = 40

Rational = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """Raised when a result would need more p-adic digits than are known."""


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    d = 3
    while d * d <= k:
        if k % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldParams:
    """The base field Q_p together with the level n of U_n."""

    p: int
    n: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p={self.p!r} is not a prime")
        if self.p == 2:
            raise ValueError(
                "p=2 is excluded: the construction needs 2 to be a unit of Z_p, "
                "so the residue characteristic must be odd")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"level n must be an integer >= 1, got {self.n!r}")

    @property
    def q(self) -> int:
        return self.p


def valuation_int(x: int, p: int) -> float:
    if x == 0:
        return INF
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def valuation_rational(x: Rational, p: int) -> float:
    x = Fraction(x)
    if x == 0:
        return INF
    return valuation_int(x.numerator, p) - valuation_int(x.denominator, p)


# ---------------------------------------------------------------------------
# integer helpers, everything modulo p**L


def inv_mod(x: int, p: int, L: int) -> int:
    return pow(x, -1, p**L)


def rational_mod(x: Rational, p: int, L: int) -> int:
    """Residue of a p-integral rational modulo p**L."""
    x = Fraction(x)
    mod = p**L
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not p-integral")
    return x.numerator * pow(x.denominator, -1, mod) % mod


def sqrt_principal_mod(u: int, p: int, n: int, L: int) -> int:
    """Square root of u in U_n modulo p**L by Newton iteration from 1."""
    mod = p**L
    u %= mod
    if (u - 1) % p**n:
        raise ValueError("argument is not a principal unit of level n")
    x = 1
    # each step doubles the number of correct digits; n + log2(L) steps is plenty
    for _ in range(L.bit_length() + 2):
        nxt = (x - (x * x - u) * pow(2 * x, -1, mod)) % mod
        if nxt == x:
            break
        x = nxt
    if (x * x - u) % mod:
        raise PrecisionError("square root did not converge")
    return x


def phi_mod(u: int, p: int, L: int) -> int:
    mod = p**L
    return (u - pow(u, -1, mod)) % mod


def phi_inverse_mod(z: int, p: int, n: int, L: int) -> int:
    """The unique u = 1 mod p^n with u - 1/u = z, for z in p^n Z_p, mod p**L.

    Solves u^2 - z u - 1 = 0: u = z/2 + sqrt(1 + z^2/4), the root chosen in U_n.
    """
    mod = p**L
    z %= mod
    if z % p**n:
        raise ValueError("argument must lie in p^n Z_p")
    half = pow(2, -1, mod)
    w = (1 + z * z * half * half) % mod
    return (z * half + sqrt_principal_mod(w, p, n, L)) % mod


@lru_cache(maxsize=None)
def _digits_cache(x: int, p: int, L: int) -> tuple[int, ...]:
    out = []
    for _ in range(L):
        x, d = divmod(x, p)
        out.append(d)
    return tuple(out)


def digits_of(x: int, p: int, L: int) -> list[int]:
    """Little-endian base-p digits of x mod p**L."""
    return list(_digits_cache(x % p**L, p, L))


def from_digits(digits, p: int) -> int:
    return sum(int(d) * p**i for i, d in enumerate(digits))


# ---------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class PAdicScalar:
    """An element p**v * mantissa of Q_p, mantissa a unit known mod p**prec."""

    p: int
    v: float  # int, or INF for zero
    mantissa: int = 0
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.v == INF:
            object.__setattr__(self, "mantissa", 0)
            return
        if self.prec < 1:
            raise PrecisionError("a nonzero scalar needs at least one digit")
        m = self.mantissa % self.p**self.prec
        if m % self.p == 0:
            raise ValueError("mantissa must be a unit")
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "v", int(self.v))

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, p: int) -> "PAdicScalar":
        return cls(p, INF)

    @classmethod
    def from_rational(cls, x: Rational, p: int, prec: int = DEFAULT_PRECISION) -> "PAdicScalar":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        v = int(valuation_rational(x, p))
        unit = x / Fraction(p) ** v
        return cls(p, v, rational_mod(unit, p, prec), prec)

    @classmethod
    def from_digits(cls, digits, p: int, v: int = 0) -> "PAdicScalar":
        """Little-endian digits d_0, d_1, ... of the mantissa times p**v."""
        digits = list(digits)
        while digits and digits[0] == 0:
            digits.pop(0)
            v += 1
        if not digits:
            return cls.zero(p)
        return cls(p, v, from_digits(digits, p), len(digits))

    @classmethod
    def coerce(cls, x, p: int, prec: int = DEFAULT_PRECISION) -> "PAdicScalar":
        if isinstance(x, PAdicScalar):
            if x.p != p:
                raise ValueError("prime mismatch")
            return x
        if isinstance(x, PrincipalUnit):
            return x.scalar
        return cls.from_rational(x, p, prec)

    # basic properties ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.v == INF

    @property
    def valuation(self) -> float:
        return self.v

    @property
    def abs(self) -> Fraction:
        """|x|_p = p**(-v), exact."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.p) ** (-self.v)

    @property
    def absolute_precision(self) -> float:
        return INF if self.is_zero else self.v + self.prec

    def digits(self) -> list[int]:
        """Little-endian digits of the mantissa (the value is p**v times this)."""
        if self.is_zero:
            return []
        return digits_of(self.mantissa, self.p, self.prec)

    def to_fraction(self) -> Fraction:
        """The canonical rational representative p**v * mantissa."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.mantissa) * Fraction(self.p) ** self.v

    def residue(self, L: int) -> int:
        """This element modulo p**L as an int; requires it to be integral."""
        return self.scaled_residue(0, L)

    def scaled_residue(self, k: int, L: int) -> int:
        """The int c in [0, p**L) with x * p**k = c mod p**L."""
        if self.is_zero:
            return 0
        e = self.v + k
        if e < 0:
            raise ValueError(f"x * p^{k} is not integral")
        if e >= L:
            return 0
        if self.v + self.prec + k < L:
            raise PrecisionError(f"need {L - e} digits, have {self.prec}")
        return (self.mantissa * self.p**e) % self.p**L

    # arithmetic ------------------------------------------------------------
    def _other(self, y) -> "PAdicScalar":
        return PAdicScalar.coerce(y, self.p, self.prec if not self.is_zero else DEFAULT_PRECISION)

    def __neg__(self) -> "PAdicScalar":
        if self.is_zero:
            return self
        return PAdicScalar(self.p, self.v, -self.mantissa, self.prec)

    def __add__(self, y) -> "PAdicScalar":
        y = self._other(y)
        if self.is_zero:
            return y
        if y.is_zero:
            return self
        a, b = (self, y) if self.v <= y.v else (y, self)
        absprec = min(a.v + a.prec, b.v + b.prec)
        width = absprec - a.v
        mod = self.p**width
        s = (a.mantissa + b.mantissa * self.p ** (b.v - a.v)) % mod
        if s == 0:
            # the sum vanishes to every known digit; zero is the canonical value
            return PAdicScalar.zero(self.p)
        e = int(valuation_int(s, self.p))
        return PAdicScalar(self.p, a.v + e, s // self.p**e, width - e)

    __radd__ = __add__

    def __sub__(self, y) -> "PAdicScalar":
        return self + (-self._other(y))

    def __rsub__(self, y) -> "PAdicScalar":
        return self._other(y) - self

    def __mul__(self, y) -> "PAdicScalar":
        y = self._other(y)
        if self.is_zero or y.is_zero:
            return PAdicScalar.zero(self.p)
        L = min(self.prec, y.prec)
        return PAdicScalar(self.p, self.v + y.v, self.mantissa * y.mantissa, L)

    __rmul__ = __mul__

    def invert(self) -> "PAdicScalar":
        if self.is_zero:
            raise ZeroDivisionError("inversion of zero in Q_p")
        return PAdicScalar(self.p, -self.v, inv_mod(self.mantissa, self.p, self.prec), self.prec)

    def __truediv__(self, y) -> "PAdicScalar":
        return self * self._other(y).invert()

    def __rtruediv__(self, y) -> "PAdicScalar":
        return self._other(y) * self.invert()

    def equals(self, y, digits: int | None = None) -> bool:
        """Equality modulo the jointly known absolute precision."""
        d = self - self._other(y)
        if d.is_zero:
            return True
        if digits is not None:
            return d.v >= digits
        return False

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PAdicScalar(0, p={self.p})"
        return f"PAdicScalar(p={self.p}, v={self.v}, mantissa={self.mantissa}, prec={self.prec})"


def arith(x: PAdicScalar, y: PAdicScalar | None, op: str) -> PAdicScalar:
    """Dispatch form of the field operations: op in {add, mul, neg, invert}."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "invert":
        return x.invert()
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class PrincipalUnit:
    """An element of U_n = 1 + p^n Z_p."""

    scalar: PAdicScalar
    n: int

    def __post_init__(self):
        s = self.scalar
        if s.is_zero or s.v != 0:
            raise ValueError("principal units have valuation 0")
        k = min(self.n, s.prec)
        if (s.mantissa - 1) % s.p**k:
            raise ValueError(f"{s.mantissa} is not 1 mod p^{self.n}")
        if s.prec < self.n:
            raise PrecisionError("not enough digits to certify membership in U_n")

    @classmethod
    def of(cls, x, params: FieldParams, prec: int = DEFAULT_PRECISION) -> "PrincipalUnit":
        return cls(PAdicScalar.coerce(x, params.p, prec), params.n)

    @property
    def p(self) -> int:
        return self.scalar.p

    @property
    def prec(self) -> int:
        return self.scalar.prec

    def residue(self, L: int) -> int:
        return self.scalar.residue(L)

    def __mul__(self, other: "PrincipalUnit") -> "PrincipalUnit":
        return PrincipalUnit(self.scalar * other.scalar, min(self.n, other.n))

    def inverse(self) -> "PrincipalUnit":
        return PrincipalUnit(self.scalar.invert(), self.n)

    def __pow__(self, k: int) -> "PrincipalUnit":
        out = PrincipalUnit(PAdicScalar.from_rational(1, self.p, self.prec), self.n)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def to_fraction(self) -> Fraction:
        return self.scalar.to_fraction()


def _unit_from_int(x: int, p: int, n: int, L: int) -> PrincipalUnit:
    return PrincipalUnit(PAdicScalar(p, 0, x, L), n)


def sqrt_unit(u: PrincipalUnit) -> PrincipalUnit:
    """The square root of u lying in U_n."""
    if u.prec < u.n + 1:
        raise PrecisionError("need precision >= n+1 to separate the root")
    p, L = u.p, u.prec
    return _unit_from_int(sqrt_principal_mod(u.scalar.mantissa, p, u.n, L), p, u.n, L)


def phi(u: PrincipalUnit) -> PAdicScalar:
    """u - 1/u, an isometry of U_n onto p^n Z_p."""
    return u.scalar - u.scalar.invert()


def phi_inverse(z, params: FieldParams, prec: int | None = None) -> PrincipalUnit:
    p, n = params.p, params.n
    z = PAdicScalar.coerce(z, p, prec or DEFAULT_PRECISION)
    if z.v < n:
        raise ValueError(f"phi_inverse needs valuation >= {n}, got {z.v}")
    L = prec or (z.absolute_precision if not z.is_zero else DEFAULT_PRECISION)
    L = int(L)
    zr = z.residue(L)
    return _unit_from_int(phi_inverse_mod(zr, p, n, L), p, n, L)


@dataclass(frozen=True, order=True)
class CharacterAngle:
    """An exact angle a in [0, 1); the character value is exp(2 pi i a)."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value) % 1)

    def __add__(self, other: "CharacterAngle") -> "CharacterAngle":
        return CharacterAngle(self.value + other.value)

    def __neg__(self) -> "CharacterAngle":
        return CharacterAngle(-self.value)

    def __complex__(self) -> complex:
        return complex(math.cos(2 * math.pi * self.value), math.sin(2 * math.pi * self.value))

    def evaluate(self) -> complex:
        return complex(self)


def fractional_part(t, p: int | None = None) -> CharacterAngle:
    """{t}_p as an exact rational; the additive character is exp(2 pi i {t}_p).

    ``t`` is a PAdicScalar, or a rational together with the prime ``p``.
    """
    if not isinstance(t, PAdicScalar):
        if p is None:
            raise TypeError("a rational argument needs the prime p")
        t = PAdicScalar.from_rational(t, p)
    if t.is_zero or t.v >= 0:
        return CharacterAngle(Fraction(0))
    k = -t.v
    if t.prec < k:
        raise PrecisionError("fractional part needs digits through index -1")
    return CharacterAngle(Fraction(t.mantissa % t.p**k, t.p**k))


def mu0(t, params: FieldParams) -> Fraction:
    """max(1, |p^n t|_p), exact."""
    if not isinstance(t, PAdicScalar):
        t = PAdicScalar.from_rational(t, params.p)
    if t.is_zero:
        return Fraction(1)
    return mu0_of_val(t.v, params)


def mu0_of_val(v: float, params: FieldParams) -> Fraction:
    if v == INF:
        return Fraction(1)
    return Fraction(params.p) ** max(0, -params.n - int(v))
