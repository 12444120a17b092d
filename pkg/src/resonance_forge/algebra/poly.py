"""Dense univariate polynomials over Q: gcd, resultant, shifts.

Coefficients are stored ascending; the zero polynomial has an empty
coefficient tuple and degree -1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):  # ascending degree
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def one() -> "Poly":
        return Poly([1])

    @staticmethod
    def const(c) -> "Poly":
        return Poly([Fraction(c)])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @staticmethod
    def monomial(n: int, c=1) -> "Poly":
        return Poly([0] * n + [Fraction(c)])

    @staticmethod
    def from_roots(roots: Sequence) -> "Poly":
        out = Poly.one()
        for r in roots:
            out = out * Poly([-Fraction(r), 1])
        return out

    # -- basic queries --------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return self.coeffs[-1]

    def __getitem__(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- ring operations -------------------------------------------------

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] - other[i] for i in range(n)])

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) - self

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out, base = Poly.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d, lc = other.degree, other.lc
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            c = rem[-1] / lc
            k = len(rem) - 1 - d
            q[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] -= c * b
        return Poly(q), Poly(rem)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c / other for c in self.coeffs])
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    # -- structure -------------------------------------------------------

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.lc

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive."""
        if self.is_zero():
            return Fraction(1)
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.content()

    def eval(self, x) -> Fraction:
        x = Fraction(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __call__(self, x):
        return self.eval(x)

    def shift(self, j) -> "Poly":
        """Compose with x -> x + j."""
        j = Fraction(j)
        if self.is_zero() or j == 0:
            return self
        out = Poly.zero()
        for c in reversed(self.coeffs):
            out = out * Poly([j, 1]) + Poly.const(c)
        return out

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly.zero()
        for c in reversed(self.coeffs):
            out = out * inner + Poly.const(c)
        return out

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "Poly(" + " + ".join(terms) + ")"


# -- integer kernel ------------------------------------------------------------
#
# Gcd-heavy callers (remainder sequences over Q[m], nullspace elimination)
# go through plain integer coefficient lists: contents are irrelevant to the
# gcd, and integer arithmetic avoids per-operation Fraction normalization.


def int_coeffs(p: Poly) -> list[int]:
    """Integer coefficient list of a scalar multiple of p (denominators
    cleared, content NOT stripped)."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p.coeffs]


def int_list_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def int_list_mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def int_list_content(a: list[int]) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            return 1
    return g


def int_list_primitive(a: list[int]) -> list[int]:
    g = int_list_content(a)
    if g > 1:
        a = [x // g for x in a]
    return a


def int_list_divexact(a: list[int], g: list[int]) -> list[int]:
    """Exact division of integer coefficient lists; g must be primitive and
    divide a in Q[x], so the quotient is integral (Gauss)."""
    if not g:
        raise ZeroDivisionError("exact division by zero")
    if not a:
        return []
    out = [0] * (len(a) - len(g) + 1)
    r = list(a)
    lg = g[-1]
    for pos in reversed(range(len(out))):
        c = r[pos + len(g) - 1]
        q, rem = divmod(c, lg)
        if rem:
            raise ValueError("inexact integer polynomial division")
        if q:
            out[pos] = q
            for i, y in enumerate(g):
                r[pos + i] -= q * y
    if any(r):
        raise ValueError("inexact integer polynomial division")
    return out


# Mersenne primes for the modular coprimality screen.
_GCD_PRIMES = ((1 << 61) - 1, (1 << 31) - 1)


def _modp_coprime(a: list[int], b: list[int]) -> bool:
    """Sound coprimality certificate: if gcd(a, b) mod p is constant for a
    prime p not killing either leading coefficient, then gcd over Q is 1."""
    for p in _GCD_PRIMES:
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        aa = [x % p for x in a]
        bb = [x % p for x in b]
        while bb:
            # remainder of aa by bb over F_p
            inv = pow(bb[-1], p - 2, p)
            r = list(aa)
            db = len(bb) - 1
            for pos in reversed(range(len(r) - db)):
                c = r[pos + db] * inv % p
                if c:
                    for i, y in enumerate(bb):
                        r[pos + i] = (r[pos + i] - c * y) % p
            del r[db:]
            while r and r[-1] == 0:
                r.pop()
            aa, bb = bb, r
        return len(aa) == 1
    return False


def _int_eval(a: list[int], x: int) -> int:
    out = 0
    for c in reversed(a):
        out = out * x + c
    return out


def _balanced_digits(n: int, base: int) -> list[int]:
    digits = []
    while n:
        d = n % base
        if d > base // 2:
            d -= base
        digits.append(d)
        n = (n - d) // base
    return digits


def _int_divides(a: list[int], g: list[int]) -> bool:
    try:
        int_list_divexact(a, g)
        return True
    except ValueError:
        return False


def _heugcd(a: list[int], b: list[int]) -> list[int] | None:
    """Heuristic gcd: evaluate at a large point, reconstruct a candidate
    from balanced digits, verify by exact division (the verification makes
    the answer unconditional)."""
    bound = max(max(abs(x) for x in a), max(abs(x) for x in b))
    x0 = 2 * bound + 29
    for _ in range(4):
        ga, gb = _int_eval(a, x0), _int_eval(b, x0)
        if ga and gb:
            g = int_list_primitive(_balanced_digits(math.gcd(ga, gb), x0))
            if g and _int_divides(a, g) and _int_divides(b, g):
                return g
        x0 = 2 * x0 + 29
    return None


def _int_gcd_primitive(a: list[int], b: list[int]) -> list[int]:
    """Gcd of two integer coefficient lists: modular coprimality screen,
    then heuristic evaluate-and-verify gcd, with the primitive PRS as the
    unconditional fallback.  The result is primitive with a positive
    leading coefficient."""
    a = int_list_primitive(int_list_trim(list(a)))
    b = int_list_primitive(int_list_trim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    if not b:
        if a and a[-1] < 0:
            a = [-x for x in a]
        return a
    if len(b) > 1 and _modp_coprime(a, b):
        return [1]
    g = _heugcd(a, b)
    if g is not None:
        if g[-1] < 0:
            g = [-x for x in g]
        return g
    while b:
        # one full pseudo-division a -> prem(a, b), then strip content
        r = list(a)
        lb = b[-1]
        db = len(b) - 1
        while len(r) - 1 >= db:
            c = r[-1]
            if c == 0:
                r.pop()
                continue
            r = [x * lb for x in r]
            pos = len(r) - 1 - db
            for i, y in enumerate(b):
                r[pos + i] -= c * y
            r.pop()
            int_list_trim(r)
        a, b = b, int_list_primitive(int_list_trim(r))
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q via a fraction-controlled (primitive, integer
    kernel) remainder sequence."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    g = _int_gcd_primitive(int_coeffs(a), int_coeffs(b))
    return Poly(g).monic()


def resultant(a: Poly, b: Poly) -> Fraction:
    """Resultant via fraction-free elimination on the Sylvester matrix.

    Sign convention: res(a, b) = lc(b)^deg(a) * prod a(beta) over the roots
    beta of b, which is the determinant of the Sylvester matrix with the
    coefficient rows of a on top.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant needs nonzero polynomials")
    n, m = a.degree, b.degree
    if n == 0:
        return a.lc ** m
    if m == 0:
        return b.lc ** n
    size = n + m
    rows: list[list[Fraction]] = []
    ac = list(reversed(a.coeffs))
    bc = list(reversed(b.coeffs))
    for i in range(m):
        rows.append([Fraction(0)] * i + ac + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + bc + [Fraction(0)] * (size - m - 1 - i))
    # Bareiss with exact Fractions (already a field; plain elimination is fine)
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            f = rows[r][col] * inv
            if f == 0:
                continue
            for c in range(col, size):
                rows[r][c] -= f * rows[col][c]
    return det
