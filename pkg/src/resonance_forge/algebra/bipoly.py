"""Bivariate polynomials over Q in the pair (m, k) and rational functions.

BiPoly stores a dense coefficient matrix indexed by (degree in m, degree in
k).  The telescoping machinery treats k as the distinguished variable and m
as the parameter, so gcds and reductions happen in k over Q[m] with contents
handled in Q[m].
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import (
    Poly,
    int_coeffs,
    int_list_content,
    int_list_divexact,
    int_list_mul,
    int_list_trim,
    poly_gcd,
    _int_gcd_primitive,
)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = math.gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(num, den)


class BiPoly:
    """Polynomial in (m, k); coeffs[i][j] multiplies m^i * k^j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Iterable] = ()):
        rows = [[Fraction(c) for c in row] for row in coeffs]
        width = max((len(r) for r in rows), default=0)
        for r in rows:
            r.extend([Fraction(0)] * (width - len(r)))
        # trim zero rows/columns from the high end
        while rows and all(c == 0 for c in rows[-1]):
            rows.pop()
        while rows and all(r[-1] == 0 for r in rows):
            for r in rows:
                r.pop()
        self.coeffs = tuple(tuple(r) for r in rows)

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly()

    @staticmethod
    def one() -> "BiPoly":
        return BiPoly([[1]])

    @staticmethod
    def const(c) -> "BiPoly":
        return BiPoly([[Fraction(c)]])

    @staticmethod
    def m() -> "BiPoly":
        return BiPoly([[0], [1]])

    @staticmethod
    def k() -> "BiPoly":
        return BiPoly([[0, 1]])

    @staticmethod
    def affine(cm, ck, c0) -> "BiPoly":
        """cm*m + ck*k + c0."""
        return BiPoly([[Fraction(c0), Fraction(ck)], [Fraction(cm), 0]])

    @staticmethod
    def from_poly_m(p: Poly) -> "BiPoly":
        return BiPoly([[c] for c in p.coeffs])

    @staticmethod
    def from_poly_k(p: Poly) -> "BiPoly":
        return BiPoly([list(p.coeffs)])

    @staticmethod
    def from_k_coeffs(kc: Sequence[Poly]) -> "BiPoly":
        """Build from coefficients in k, each a Poly in m."""
        nm = max((p.degree for p in kc if not p.is_zero()), default=-1)
        rows = [[Fraction(0)] * len(kc) for _ in range(nm + 1)]
        for j, p in enumerate(kc):
            for i, c in enumerate(p.coeffs):
                rows[i][j] = c
        return BiPoly(rows)

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg_m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg_k(self) -> int:
        if not self.coeffs:
            return -1
        return len(self.coeffs[0]) - 1

    def k_coeffs(self) -> list[Poly]:
        """Coefficients of powers of k, each a Poly in m."""
        if self.is_zero():
            return []
        return [Poly([row[j] for row in self.coeffs]) for j in range(self.deg_k + 1)]

    def lc_k(self) -> Poly:
        """Leading coefficient in k as a Poly in m."""
        kc = self.k_coeffs()
        return kc[-1] if kc else Poly.zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        nm = max(len(self.coeffs), len(other.coeffs))
        nk = max(self.deg_k, other.deg_k) + 1
        rows = [[Fraction(0)] * nk for _ in range(nm)]
        for src in (self, other):
            for i, row in enumerate(src.coeffs):
                for j, c in enumerate(row):
                    rows[i][j] += c
        return BiPoly(rows)

    __radd__ = __add__

    def __sub__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "BiPoly":
        return BiPoly.const(other) - self

    def __neg__(self) -> "BiPoly":
        return BiPoly([[-c for c in row] for row in self.coeffs])

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return BiPoly([[c * other for c in row] for row in self.coeffs])
        if isinstance(other, Poly):  # treated as a Poly in m
            other = BiPoly.from_poly_m(other)
        if self.is_zero() or other.is_zero():
            return BiPoly.zero()
        nm = self.deg_m + other.deg_m + 1
        nk = self.deg_k + other.deg_k + 1
        rows = [[Fraction(0)] * nk for _ in range(nm)]
        for i1, r1 in enumerate(self.coeffs):
            for j1, c1 in enumerate(r1):
                if c1 == 0:
                    continue
                for i2, r2 in enumerate(other.coeffs):
                    for j2, c2 in enumerate(r2):
                        if c2 == 0:
                            continue
                        rows[i1 + i2][j1 + j2] += c1 * c2
        return BiPoly(rows)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        out, base = BiPoly.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- substitution -------------------------------------------------------

    def eval(self, m, k) -> Fraction:
        m, k = Fraction(m), Fraction(k)
        out = Fraction(0)
        for row in reversed(self.coeffs):
            acc = Fraction(0)
            for c in reversed(row):
                acc = acc * k + c
            out = out * m + acc
        return out

    def eval_m(self, m0) -> Poly:
        """Specialize m, returning a Poly in k."""
        m0 = Fraction(m0)
        out = Poly.zero()
        for row in reversed(self.coeffs):
            out = out * Poly.const(m0) + Poly(row)
        return out

    def eval_k(self, k0) -> Poly:
        """Specialize k, returning a Poly in m."""
        k0 = Fraction(k0)
        return Poly([
            sum((c * k0**j for j, c in enumerate(row)), Fraction(0))
            for row in self.coeffs
        ])

    def shift_k(self, j) -> "BiPoly":
        """Substitute k -> k + j."""
        if self.is_zero() or j == 0:
            return self
        return BiPoly([Poly(row).shift(j).coeffs for row in self.coeffs])

    def shift_m(self, j) -> "BiPoly":
        """Substitute m -> m + j."""
        if self.is_zero() or j == 0:
            return self
        return BiPoly.from_k_coeffs([p.shift(j) for p in self.k_coeffs()])

    def subst_k_poly_m(self, sub: Poly) -> Poly:
        """Substitute k -> sub(m), returning a Poly in m."""
        out = Poly.zero()
        for p in reversed(self.k_coeffs()):
            out = out * sub + p
        return out

    # -- content and division ------------------------------------------------

    def content(self) -> Fraction:
        c = Fraction(0)
        for row in self.coeffs:
            for x in row:
                c = _frac_gcd(c, x)
        return c if c else Fraction(1)

    def content_m(self) -> Poly:
        """Gcd in Q[m] of the k-coefficients (monic)."""
        kc = [p for p in self.k_coeffs() if not p.is_zero()]
        if not kc:
            raise ValueError("content of zero polynomial")
        g = kc[0]
        for p in kc[1:]:
            g = poly_gcd(g, p)
            if g.degree == 0:
                break
        return g.monic()

    def div_poly_m(self, d: Poly) -> "BiPoly":
        """Exact division by a Poly in m."""
        return BiPoly.from_k_coeffs([p / d for p in self.k_coeffs()])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Poly):
            return self.div_poly_m(other)
        return _divexact_k(self, other)

    def __repr__(self) -> str:
        if self.is_zero():
            return "BiPoly(0)"
        terms = []
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c == 0:
                    continue
                t = str(c)
                if i:
                    t += f"*m^{i}" if i > 1 else "*m"
                if j:
                    t += f"*k^{j}" if j > 1 else "*k"
                terms.append(t)
        return "BiPoly(" + " + ".join(terms) + ")"


def _rows_of(p: BiPoly) -> tuple[list[list[int]], Fraction]:
    """Integer-kernel k-coefficient rows plus the rational content factored
    out, so p = content * rows."""
    kc = p.k_coeffs()
    den = 1
    num = 0
    for q in kc:
        for c in q.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
    rows = []
    for q in kc:
        row = [int(c * den) for c in q.coeffs]
        rows.append(int_list_trim(row))
        num = math.gcd(num, int_list_content(row))
    if num == 0:
        return rows, Fraction(0)
    if num > 1:
        rows = [[x // num for x in r] for r in rows]
    return rows, Fraction(num, den)


def _divexact_k(a: BiPoly, b: BiPoly) -> BiPoly:
    """Exact division in Q[m, k] via top-down synthetic division in k: each
    quotient k-coefficient is an exact Q[m] division when the divisor
    divides, and Gauss's lemma keeps the integer kernel integral."""
    if b.is_zero():
        raise ZeroDivisionError("bivariate division by zero")
    if a.is_zero():
        return BiPoly.zero()
    ar, ca = _rows_of(a)
    br, cb = _rows_of(b)
    da, db = len(ar) - 1, len(br) - 1
    if da < db:
        raise ValueError("inexact bivariate division")
    lb = br[-1]
    quo: list[list[int]] = [[] for _ in range(da - db + 1)]
    rem = [list(r) for r in ar]
    for pos in reversed(range(da - db + 1)):
        top = rem[pos + db]
        if not top:
            continue
        try:
            q = int_list_divexact(top, lb) if lb != [1] else list(top)
        except ValueError as exc:
            raise ValueError("inexact bivariate division") from exc
        quo[pos] = q
        for i, y in enumerate(br):
            prod = int_list_mul(q, y)
            row = rem[pos + i]
            if len(row) < len(prod):
                row = row + [0] * (len(prod) - len(row))
            for t, val in enumerate(prod):
                row[t] -= val
            rem[pos + i] = int_list_trim(row)
    if any(rem[i] for i in range(len(rem))):
        raise ValueError("inexact bivariate division")
    scale = ca / cb
    return BiPoly.from_k_coeffs([Poly(r) * scale for r in quo])


_GCD_SAMPLES = (101, 137, 211)


def _coprime_in_k_by_sampling(a: BiPoly, b: BiPoly) -> bool:
    """Certify gcd degree 0 in k over Q(m) from one good specialization:
    wherever both leading k-coefficients survive, the specialized gcd degree
    bounds the true one from above."""
    la, lb = a.lc_k(), b.lc_k()
    for m0 in _GCD_SAMPLES:
        if la.eval(m0) == 0 or lb.eval(m0) == 0:
            continue
        g = poly_gcd(a.eval_m(m0), b.eval_m(m0))
        return g.degree == 0
    return False


def bipoly_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """Full gcd in Q[m, k] via contents in Q[m] plus a primitive remainder
    sequence in the distinguished variable k."""
    if a.is_zero():
        return _normalize_gcd(b)
    if b.is_zero():
        return _normalize_gcd(a)
    ca, cb = a.content_m(), b.content_m()
    cg = poly_gcd(ca, cb)
    A, B = a.div_poly_m(ca), b.div_poly_m(cb)
    if A.deg_k < B.deg_k:
        A, B = B, A
    if B.deg_k == 0 or _coprime_in_k_by_sampling(A, B):
        return _normalize_gcd(BiPoly.from_poly_m(cg))
    g = _gcd_k_prs_int(A, B)
    if g.deg_k == 0:
        g = BiPoly.from_poly_m(cg)
    else:
        g = g * BiPoly.from_poly_m(cg)
    return _normalize_gcd(g)


def _strip_rows_content(rows: list[list[int]]) -> list[list[int]]:
    """Divide k-coefficient rows (integer Polys in m) by their common
    polynomial gcd and integer content."""
    live = [r for r in rows if r]
    if not live:
        return rows
    g = live[0]
    for r in live[1:]:
        if len(g) == 1:
            break
        g = _int_gcd_primitive(g, r)
    if len(g) > 1:
        rows = [int_list_divexact(r, g) if r else r for r in rows]
        live = [r for r in rows if r]
    c = 0
    for r in live:
        c = math.gcd(c, int_list_content(r))
        if c == 1:
            break
    if c > 1:
        rows = [[x // c for x in r] for r in rows]
    return rows


def _prem_k_int(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Pseudo-remainder in k of integer-kernel k-coefficient rows."""
    db = len(b) - 1
    lb = b[-1]
    r = [list(x) for x in a]
    while r:
        while r and not r[-1]:
            r.pop()
        if len(r) - 1 < db:
            break
        c = r[-1]
        pos = len(r) - 1 - db
        r = [int_list_mul(x, lb) for x in r]
        for i, y in enumerate(b):
            prod = int_list_mul(c, y)
            row = r[pos + i]
            if len(row) < len(prod):
                row = row + [0] * (len(prod) - len(row))
            for t, val in enumerate(prod):
                row[t] -= val
            r[pos + i] = int_list_trim(row)
        r.pop()
    return r


def _gcd_k_prs_int(A: BiPoly, B: BiPoly) -> BiPoly:
    """Primitive remainder sequence in k over Z[m] (contents stripped every
    step) for two k-primitive bivariate polynomials."""
    a = _strip_rows_content([int_coeffs(p) for p in A.k_coeffs()])
    b = _strip_rows_content([int_coeffs(p) for p in B.k_coeffs()])
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem_k_int(a, b)
        a, b = b, _strip_rows_content(r)
        while b and not b[-1]:
            b.pop()
    return BiPoly.from_k_coeffs([Poly(row) for row in a])


def _normalize_gcd(g: BiPoly) -> BiPoly:
    if g.is_zero():
        return g
    g = g / g.content()
    lead = g.lc_k()
    if lead.lc < 0:
        g = -g
    return g


def _cancel_pair(a: BiPoly, b: BiPoly) -> tuple[BiPoly, BiPoly]:
    """Divide out gcd(a, b) from both."""
    g = bipoly_gcd(a, b)
    if g.deg_k <= 0 and g.deg_m <= 0:
        return a, b
    return a / g, b / g


class RatFunc:
    """Reduced rational function num/den in (m, k).

    The pair is gcd-reduced in Q[m, k], scaled to a common integer-primitive
    form, and the denominator's leading coefficient in k has a positive
    leading rational.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = BiPoly.zero(), BiPoly.one()
            return
        if reduce:
            g = bipoly_gcd(num, den)
            if not (g.deg_k == 0 and g.deg_m == 0 and g == BiPoly.one()):
                num = num / g
                den = den / g
        scale = _frac_gcd(num.content(), den.content())
        lead = den.lc_k()
        if lead.lc < 0:
            scale = -scale
        self.num = num / scale
        self.den = den / scale

    # -- constructors -----------------------------------------------------

    @staticmethod
    def one() -> "RatFunc":
        return RatFunc(BiPoly.one(), BiPoly.one(), reduce=False)

    @staticmethod
    def zero() -> "RatFunc":
        return RatFunc(BiPoly.zero(), BiPoly.one(), reduce=False)

    @staticmethod
    def from_bipoly(p: BiPoly) -> "RatFunc":
        return RatFunc(p, BiPoly.one(), reduce=False)

    @staticmethod
    def const(c) -> "RatFunc":
        return RatFunc(BiPoly.const(c), BiPoly.one(), reduce=False)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- arithmetic -----------------------------------------------------------

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num * other, self.den)
        if isinstance(other, BiPoly):
            other = RatFunc.from_bipoly(other)
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        # both operands reduced: only cross pairs can share factors
        n1, d2 = _cancel_pair(self.num, other.den)
        n2, d1 = _cancel_pair(other.num, self.den)
        return RatFunc(n1 * n2, d1 * d2, reduce=False)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num, self.den * other)
        if isinstance(other, BiPoly):
            other = RatFunc.from_bipoly(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self * other.inverse()

    def __add__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        # with reduced operands the sum can only share factors with the
        # common part of the two denominators
        g = bipoly_gcd(self.den, other.den)
        trivial = g.deg_k <= 0 and g.deg_m <= 0
        e1 = self.den if trivial else self.den / g
        e2 = other.den if trivial else other.den / g
        num = self.num * e2 + other.num * e1
        if trivial:
            return RatFunc(num, self.den * e2, reduce=False)
        num, g_left = _cancel_pair(num, g)
        return RatFunc(num, g_left * e1 * e2, reduce=False)

    def __sub__(self, other) -> "RatFunc":
        return self + (-other)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def inverse(self) -> "RatFunc":
        return RatFunc(self.den, self.num)

    # -- substitution ------------------------------------------------------------

    def shift_k(self, j) -> "RatFunc":
        return RatFunc(self.num.shift_k(j), self.den.shift_k(j), reduce=False)

    def shift_m(self, j) -> "RatFunc":
        return RatFunc(self.num.shift_m(j), self.den.shift_m(j), reduce=False)

    def eval(self, m, k) -> Fraction:
        den = self.den.eval(m, k)
        if den == 0:
            raise ZeroDivisionError(f"denominator vanishes at (m={m}, k={k})")
        return self.num.eval(m, k) / den

    def eval_m(self, m0) -> tuple[Poly, Poly]:
        """Specialize m, returning (num, den) Polys in k (unreduced)."""
        return self.num.eval_m(m0), self.den.eval_m(m0)

    def to_json(self) -> dict:
        def mat(p: BiPoly) -> list[list[str]]:
            return [[str(c) for c in row] for row in p.coeffs]

        return {"num": mat(self.num), "den": mat(self.den)}

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r} / {self.den!r})"
