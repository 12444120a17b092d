"""Nullspace computation over the rational function field Q(m).

Matrices carry Poly entries (polynomials in m).  Elimination runs over the
fraction field with gcd reduction after every operation, with a fixed pivot
order so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from fractions import Fraction

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


class FracPoly:
    """Reduced quotient of two Polys in m; denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = Poly.one(), reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Poly.zero(), Poly.one()
            return
        if reduce and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num / g, den / g
        lc = den.lc
        self.num = num / lc
        self.den = den / lc

    @staticmethod
    def zero() -> "FracPoly":
        return FracPoly(Poly.zero(), Poly.one(), reduce=False)

    @staticmethod
    def one() -> "FracPoly":
        return FracPoly(Poly.one(), Poly.one(), reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "FracPoly") -> "FracPoly":
        return FracPoly(self.num * other.den + other.num * self.den,
                        self.den * other.den)

    def __sub__(self, other: "FracPoly") -> "FracPoly":
        return FracPoly(self.num * other.den - other.num * self.den,
                        self.den * other.den)

    def __mul__(self, other: "FracPoly") -> "FracPoly":
        return FracPoly(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "FracPoly") -> "FracPoly":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return FracPoly(self.num * other.den, self.den * other.num)

    def __neg__(self) -> "FracPoly":
        return FracPoly(-self.num, self.den, reduce=False)

    def __repr__(self) -> str:
        return f"FracPoly({self.num!r}/{self.den!r})"


def _clear_and_normalize(vec: list[FracPoly]) -> list[Poly]:
    """Clear denominators, strip the common polynomial factor and rational
    content, and fix the sign so the last nonzero entry has a positive
    leading coefficient."""
    den = Poly.one()
    for e in vec:
        if not e.is_zero():
            g = poly_gcd(den, e.den)
            den = den * (e.den / g)
    cleared = [e.num * (den / e.den) if not e.is_zero() else Poly.zero()
               for e in vec]
    g = Poly.zero()
    for p in cleared:
        if p.is_zero():
            continue
        g = p if g.is_zero() else poly_gcd(g, p)
        if g.degree == 0:
            break
    if not g.is_zero() and g.degree > 0:
        cleared = [p / g if not p.is_zero() else p for p in cleared]
    content = Fraction(0)
    for p in cleared:
        if not p.is_zero():
            content = _frac_gcd(content, p.content())
    if content not in (0, 1):
        cleared = [p / content for p in cleared]
    for p in reversed(cleared):
        if not p.is_zero():
            if p.lc < 0:
                cleared = [-q for q in cleared]
            break
    return cleared


def _primitive_row(row: list[Poly]) -> list[Poly]:
    """Scale an equation row to its primitive form (divide by the gcd of the
    entries and the rational content); scaling rows is sound over Q(m)."""
    g = Poly.zero()
    for p in row:
        if p.is_zero():
            continue
        g = p if g.is_zero() else poly_gcd(g, p)
        if g.degree == 0:
            break
    if g.is_zero():
        return row
    if g.degree > 0:
        row = [p / g if not p.is_zero() else p for p in row]
    content = Fraction(0)
    for p in row:
        if not p.is_zero():
            content = _frac_gcd(content, p.content())
    if content not in (0, 1):
        row = [p / content for p in row]
    return row


def _int_row_primitive(row: list[list[int]]) -> list[list[int]]:
    """Scale an integer-kernel row to primitive form: divide by the common
    polynomial gcd and integer content (row scalings are sound over Q(m))."""
    live = [e for e in row if e]
    if not live:
        return row
    g = live[0]
    for e in live[1:]:
        if len(g) == 1:
            break
        g = _int_gcd_primitive(g, e)
    if len(g) > 1:
        row = [int_list_divexact(e, g) if e else e for e in row]
        live = [e for e in row if e]
    c = 0
    for e in live:
        c = math.gcd(c, int_list_content(e))
        if c == 1:
            break
    if c > 1:
        row = [[x // c for x in e] for e in row]
    return row


def solve_nullspace(matrix: list[list[Poly]]) -> list[list[Poly]]:
    """Basis of the right nullspace of a matrix of Polys-in-m over Q(m).

    Forward elimination is fraction-free (integer-kernel cross-multiplication
    with per-row primitive normalization, deterministic pivot order);
    back-substitution runs over the fraction field on the reduced echelon
    rows.  Each basis vector comes back denominator-cleared (entries are
    Polys), content-free, with the last nonzero entry's leading coefficient
    positive.  An empty list means the nullspace is trivial.
    """
    if not matrix:
        return []
    nrows, ncols = len(matrix), len(matrix[0])
    rows = [_int_row_primitive([int_coeffs(p) for p in r]) for r in matrix]

    pivots: list[tuple[int, int]] = []  # (row, col)
    prow = 0
    for col in range(ncols):
        sel = next(
            (r for r in range(prow, nrows) if rows[r][col]),
            None,
        )
        if sel is None:
            continue
        rows[prow], rows[sel] = rows[sel], rows[prow]
        piv = rows[prow][col]
        for r in range(prow + 1, nrows):
            if not rows[r][col]:
                continue
            f = rows[r][col]
            new_row = []
            for a, b in zip(rows[r], rows[prow]):
                ap = int_list_mul(a, piv)
                bp = int_list_mul(b, f)
                n = max(len(ap), len(bp))
                ap += [0] * (n - len(ap))
                for t in range(len(bp)):
                    ap[t] -= bp[t]
                new_row.append(int_list_trim(ap))
            rows[r] = _int_row_primitive(new_row)
        pivots.append((prow, col))
        prow += 1
        if prow == nrows:
            break

    poly_rows = [[Poly(e) for e in r] for r in rows]
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis: list[list[Poly]] = []
    for fc in free_cols:
        vec = [FracPoly.zero()] * ncols
        vec[fc] = FracPoly.one()
        for r, c in reversed(pivots):
            acc = FracPoly.zero()
            for c2 in range(c + 1, ncols):
                if poly_rows[r][c2].is_zero() or vec[c2].is_zero():
                    continue
                acc = acc + FracPoly(poly_rows[r][c2]) * vec[c2]
            vec[c] = FracPoly.zero() - acc / FracPoly(poly_rows[r][c])
        basis.append(_clear_and_normalize(vec))
    return basis
