"""Quartic Fourier coefficients C_ijkm: exact, quadrature, closed diagonal
formulas, resonance classification and persisted tables.

The exact path expands the four Jacobi polynomials and integrates monomials
against the coefficient weight through a Beta-function identity; the
quadrature path goes through Gauss-Jacobi nodes.  The two paths are kept
fully independent so they can serve as oracles for each other.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .algebra import ExactScalar, Poly, gamma_exact
from .spectrum import (
    Model,
    ModelConfig,
    gauss_jacobi_rule,
    jacobi_poly,
    jacobi_values,
    norm_sq,
    omega,
)

MAX_EXACT_INDEX = 64
MAX_QUAD_INDEX = 512

TABLE_SCHEMA_VERSION = 1


class IndexTooLarge(ValueError):
    """Requested index beyond the supported range."""


class TableIncomplete(KeyError):
    """Coefficient table does not cover a requested key."""


def _require_half_integer(x: Fraction) -> int:
    two = 2 * Fraction(x)
    if two.denominator != 1:
        raise ValueError(f"{x} is not a half-integer")
    return two.numerator


@lru_cache(maxsize=None)
def moment(a: Fraction, b: Fraction, n: int) -> ExactScalar:
    """Exact moment int_{-1}^{1} (1-y)^a (1+y)^b y^n dy.

    Expands y^n = ((1+y) - 1)^n and applies
    int (1-y)^a (1+y)^(b+j) dy = 2^(a+b+j+1) G(a+1) G(b+j+1) / G(a+b+j+2).
    """
    a, b = Fraction(a), Fraction(b)
    if a <= -1 or b <= -1:
        raise ValueError("moment exponents must exceed -1")
    ta, tb = _require_half_integer(a), _require_half_integer(b)
    out = ExactScalar.zero()
    ga1 = gamma_exact(ta + 2)  # Gamma(a+1)
    for j in range(n + 1):
        binom = Fraction(math.comb(n, j) * (-1) ** (n - j))
        e = a + b + j + 1
        if e.denominator != 1:
            raise ValueError("weight exponents must sum to an integer")
        term = ga1 * gamma_exact(tb + 2 * j + 2) / gamma_exact(ta + tb + 2 * j + 4)
        out = out + term * (binom * Fraction(2) ** e.numerator)
    return out


@dataclass(frozen=True, order=True)
class CoeffKey:
    i: int
    j: int
    k: int
    m: int

    def canonical(self) -> "CoeffKey":
        i, j, k = sorted((self.i, self.j, self.k))
        return CoeffKey(i, j, k, self.m)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.i, self.j, self.k, self.m)


@dataclass(frozen=True)
class CoeffValue:
    exact: Optional[ExactScalar]
    approx: float


class ResonanceClass(enum.Enum):
    NON_RESONANT = "NonResonant"
    ONE_MINUS = "OneMinus"
    TWO_MINUS = "TwoMinus"
    NO_MINUS = "NoMinus"


def resonance_class(cfg: ModelConfig, key: CoeffKey) -> ResonanceClass:
    """Classify which sign patterns of omega_i +- omega_j +- omega_k +-
    omega_m vanish; a pattern with exactly one minus sign forces C = 0."""
    w = [omega(cfg, n) for n in key.as_tuple()]
    best: Optional[int] = None
    for mask in range(16):
        signs = [1 if mask & (1 << t) == 0 else -1 for t in range(4)]
        if sum(s * x for s, x in zip(signs, w)) != 0:
            continue
        minus = sum(1 for s in signs if s < 0)
        minus = min(minus, 4 - minus)
        if best is None or minus < best:
            best = minus
    if best is None:
        return ResonanceClass.NON_RESONANT
    if best == 0:
        return ResonanceClass.NO_MINUS
    if best == 1:
        return ResonanceClass.ONE_MINUS
    return ResonanceClass.TWO_MINUS


def _norm_product(cfg: ModelConfig, key: CoeffKey) -> ExactScalar:
    """Product of the four normalization constants as sqrt of the exact
    product of squares (the radicand carries any irrationality)."""
    prod_sq = ExactScalar.one()
    for n in key.as_tuple():
        prod_sq = prod_sq * norm_sq(cfg, n)
    return prod_sq.sqrt()


def coeff_exact(cfg: ModelConfig, key: CoeffKey) -> ExactScalar:
    """Exact quartic overlap coefficient C_ijkm."""
    if max(key.as_tuple()) > MAX_EXACT_INDEX:
        raise IndexTooLarge(f"exact path supports indices <= {MAX_EXACT_INDEX}")
    a, b = cfg.coeff_weight_exponents
    prod = Poly.one()
    for n in key.as_tuple():
        prod = prod * jacobi_poly(n, cfg.jacobi_a, cfg.jacobi_b)
    integral = ExactScalar.zero()
    for n, c in enumerate(prod.coeffs):
        if c != 0:
            integral = integral + moment(a, b, n) * c
    pref = Fraction(1, 4 ** cfg.coeff_prefactor_log4)
    return _norm_product(cfg, key) * integral * pref


def coeff_quad(cfg: ModelConfig, key: CoeffKey) -> float:
    """Quartic overlap coefficient by Gauss-Jacobi quadrature."""
    idx = key.as_tuple()
    if max(idx) > MAX_QUAD_INDEX:
        raise IndexTooLarge(f"quadrature path supports indices <= {MAX_QUAD_INDEX}")
    a, b = cfg.coeff_weight_exponents
    npoints = sum(idx) // 2 + 2
    rule = gauss_jacobi_rule(a, b, npoints)
    nodes = np.array(rule.nodes)
    weights = np.array(rule.weights)
    vals = jacobi_values(max(idx), cfg.jacobi_a, cfg.jacobi_b, nodes)
    integrand = weights.copy()
    for n in idx:
        integrand = integrand * vals[n]
    pref = 4.0 ** (-cfg.coeff_prefactor_log4)
    norm = _norm_product(cfg, key).to_float()
    return pref * norm * float(np.sum(integrand))


# -- closed diagonal formulas -------------------------------------------------


def _kg_diag_summand(cfg: ModelConfig, m: int, k: int) -> ExactScalar:
    """Summand of the finite-sum formula for the KG diagonal C_00mm."""
    d = cfg.delta
    c = gamma_exact(2 * d + 2) * gamma_exact(4 * d - 3)
    c = c / (gamma_exact(2 * d - 1) * ExactScalar(Fraction(1), 4))  # pi^2
    term = c * Fraction(5 - 4 * d - 4 * k)
    term = term * gamma_exact(2 * (k + d - 1))
    term = term * gamma_exact(2 * k + 4 * d - 5)
    term = term / gamma_exact(2 * k + 2 * d - 1)
    term = term / gamma_exact(2 * (k + 2 * d - 2))
    term = term / gamma_exact(2 * (k + 2 * d - 1))
    term = term * gamma_exact(2 * k - 1)
    term = term * gamma_exact(2 * k + 1)
    term = term / gamma_exact(2 * (k + 1))
    term = term * Fraction(d + 2 * m)
    term = term * gamma_exact(-2 * k + 4 * m + 3)
    term = term * gamma_exact(2 * (k + 2 * m + 2 * d - 1))
    term = term / gamma_exact(2 * (-k + 2 * m + 2))
    term = term / gamma_exact(2 * k + 4 * m + 4 * d - 1)
    return term


# Coefficient table of the degree-8 polynomial factor V_m(k) of the WM
# diagonal summand: _WM_V_TABLE[k_power][m_power] = {delta_power: coeff}.
_WM_V_TABLE: dict[int, dict[int, dict[int, int]]] = {
    0: {
        4: {4: 1, 3: -10, 2: 11, 1: 22},
        3: {4: -8, 2: 80, 1: 72},
        2: {4: -1, 3: 70, 2: 145, 1: 74},
        1: {4: 20, 3: 84, 2: 88, 1: 24},
        0: {4: 12, 3: 24, 2: 12},
    },
    1: {
        4: {3: -8, 2: 48, 1: -8, 0: -32},
        3: {4: -8, 3: 80, 2: 92, 1: -156, 0: -96},
        2: {4: 36, 3: 122, 2: -150, 1: -316, 0: -88},
        1: {4: 28, 3: -70, 2: -274, 1: -184, 0: -24},
        0: {4: -16, 3: -72, 2: -80, 1: -24},
    },
    2: {
        4: {2: 24, 1: -72, 0: -16},
        3: {3: 52, 2: -192, 1: -260, 0: 16},
        2: {4: 24, 3: -162, 2: -528, 1: -126, 0: 100},
        1: {4: -48, 3: -302, 2: -210, 1: 136, 0: 76},
        0: {4: -40, 3: -56, 2: 46, 1: 66, 0: 12},
    },
    3: {
        4: {1: -32, 0: 32},
        3: {2: -120, 1: 136, 0: 128},
        2: {3: -120, 2: 156, 1: 500, 0: 112},
        1: {4: -32, 3: 80, 2: 488, 1: 312, 0: -4},
        0: {4: 16, 3: 128, 2: 152, 1: 14, 0: -16},
    },
    4: {
        4: {0: 16},
        3: {1: 112, 0: -16},
        2: {2: 198, 1: 6, 0: -124},
        1: {3: 112, 2: 36, 1: -244, 0: -96},
        0: {4: 16, 3: 8, 2: -106, 1: -100, 0: -11},
    },
    5: {
        3: {0: -32},
        2: {1: -120, 0: -24},
        1: {2: -120, 1: -72, 0: 36},
        0: {3: -32, 2: -36, 1: 30, 0: 20},
    },
    6: {
        2: {0: 24},
        1: {1: 52, 0: 20},
        0: {2: 24, 1: 22, 0: -2},
    },
    7: {
        1: {0: -8},
        0: {1: -8, 0: -4},
    },
    8: {0: {0: 1}},
}


@lru_cache(maxsize=None)
def wm_v_bipoly(delta: int):
    """The degree-8 factor V_m(k) of the WM diagonal summand as a BiPoly."""
    from .algebra import BiPoly

    rows: dict[tuple[int, int], Fraction] = {}
    for kp, by_m in _WM_V_TABLE.items():
        for mp, by_d in by_m.items():
            val = Fraction(sum(c * delta ** dp for dp, c in by_d.items()))
            if val:
                rows[(mp, kp)] = val
    nm = max(mp for mp, _ in rows) + 1
    nk = max(kp for _, kp in rows) + 1
    mat = [[Fraction(0)] * nk for _ in range(nm)]
    for (mp, kp), val in rows.items():
        mat[mp][kp] = val
    return BiPoly(mat)


def _wm_v_poly(delta: int, m: int) -> Poly:
    """Degree-8 polynomial factor of the WM diagonal summand, in k."""
    return wm_v_bipoly(delta).eval_m(m)


def _wm_diag_summand(cfg: ModelConfig, m: int, k: int) -> ExactScalar:
    """Summand of the finite-sum formula for the WM diagonal C_00mm."""
    d = cfg.delta
    gd = gamma_exact(2 * d)
    term = gd * gd * Fraction(2 * (d + 1) * (d + 2))
    term = term / (gamma_exact(2 * (k + 1)) * gamma_exact(2 * (k + 3)))
    term = term * gamma_exact(2 * (m + 1))
    term = term * gamma_exact(2 * (m + 2))
    term = term / (gamma_exact(2 * (d - k)) * gamma_exact(2 * (d - k + 2)))
    term = term * Fraction(2 * d - 2 * k + 2 * m + 1)
    term = term * _wm_v_poly(d, m).eval(k)
    term = term / (gamma_exact(2 * (m - k + 1)) * gamma_exact(2 * (m - k + 2)))
    term = term * Fraction(d + 2 * m + 2)
    term = term / (gamma_exact(2 * (m + d + 1)) * gamma_exact(2 * (m + d + 2)))
    term = term * gamma_exact(2 * (m - k + 2 * d))
    term = term * gamma_exact(2 * (m - k + 2 * d + 1))
    term = term / gamma_exact(2 * (2 * (m + d + 1) - k))
    term = term * gamma_exact(2 * (2 * m - k + d))
    term = term * gamma_exact(2 * (2 * m - k + d + 2))
    term = term / gamma_exact(2 * (2 * (m + d + 2) - k))
    return term


def diag_closed(cfg: ModelConfig, m: int) -> ExactScalar:
    """C_00mm by the closed finite sum (independent of the expansion path)."""
    if m < 0:
        raise ValueError("mode index must be nonnegative")
    if cfg.model is Model.KG:
        out = ExactScalar.zero()
        for k in range(2 * m + 2):
            out = out + _kg_diag_summand(cfg, m, k)
        return out
    out = ExactScalar.zero()
    for k in range(min(cfg.delta - 1, m) + 1):
        out = out + _wm_diag_summand(cfg, m, k)
    return out


def c_infinity(delta: int) -> ExactScalar:
    """Exact large-m limit of the WM diagonal coefficient."""
    if delta < 1:
        raise ValueError("WM model needs delta >= 1")
    # 3 (delta+2) G(delta - 1/2) / (2 sqrt(pi) G(delta+1))
    out = gamma_exact(2 * delta - 1) * Fraction(3 * (delta + 2), 2)
    out = out / gamma_exact(2 * (delta + 1))
    out = out * ExactScalar(Fraction(1), -1)  # 1/sqrt(pi)
    return out


def c_infinity_recurrence(delta: int) -> ExactScalar:
    """Same limit by iterating the one-step recurrence from the base 9/2."""
    if delta < 1:
        raise ValueError("WM model needs delta >= 1")
    out = ExactScalar.from_rational(Fraction(9, 2))
    for j in range(1, delta):
        out = out * Fraction((j + 3) * (2 * j - 1), 2 * (j + 1) * (j + 2))
    return out


# -- coefficient tables --------------------------------------------------------


class ExactPolicy(enum.Enum):
    DIAGONAL_ONLY = "DiagonalOnly"
    ALL = "All"
    NONE = "None"


@dataclass
class CoeffTable:
    cfg: ModelConfig
    max_index: int
    policy: ExactPolicy
    entries: dict[tuple[int, int, int, int], CoeffValue]

    def lookup(self, key: CoeffKey) -> CoeffValue:
        ck = key.canonical()
        try:
            return self.entries[ck.as_tuple()]
        except KeyError as exc:
            raise TableIncomplete(f"table lacks key {ck.as_tuple()}") from exc

    def approx(self, key: CoeffKey) -> float:
        return self.lookup(key).approx

    def dense(self, trunc: int) -> np.ndarray:
        """Dense symmetric tensor C[i, j, k, m] for indices <= trunc."""
        if trunc > self.max_index:
            raise TableIncomplete(
                f"table max index {self.max_index} below requested {trunc}"
            )
        n = trunc + 1
        out = np.empty((n, n, n, n))
        for i in range(n):
            for j in range(i, n):
                for k in range(j, n):
                    for m in range(n):
                        v = self.entries[(i, j, k, m)].approx
                        out[i, j, k, m] = v
                        out[i, k, j, m] = v
                        out[j, i, k, m] = v
                        out[j, k, i, m] = v
                        out[k, i, j, m] = v
                        out[k, j, i, m] = v
        return out

    def to_json(self) -> dict:
        items = []
        for key in sorted(self.entries):
            v = self.entries[key]
            items.append({
                "key": list(key),
                "exact": v.exact.to_json() if v.exact is not None else None,
                "approx": v.approx,
            })
        return {
            "model": self.cfg.model.value,
            "delta": self.cfg.delta,
            "max_index": self.max_index,
            "policy": self.policy.value,
            "schema_version": TABLE_SCHEMA_VERSION,
            "entries": items,
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    @staticmethod
    def from_json(obj: dict) -> "CoeffTable":
        cfg = ModelConfig(Model(obj["model"]), obj["delta"])
        entries = {}
        for item in obj["entries"]:
            exact = (ExactScalar.from_json(item["exact"])
                     if item["exact"] is not None else None)
            entries[tuple(item["key"])] = CoeffValue(exact, float(item["approx"]))
        return CoeffTable(cfg, obj["max_index"], ExactPolicy(obj["policy"]),
                          entries)

    @staticmethod
    def load(path) -> "CoeffTable":
        with open(path) as fh:
            return CoeffTable.from_json(json.load(fh))

    def dump_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("i,j,k,m,approx\n")
            for key in sorted(self.entries):
                v = self.entries[key]
                fh.write(f"{key[0]},{key[1]},{key[2]},{key[3]},{v.approx!r}\n")


def _is_diagonal_key(key: tuple[int, int, int, int]) -> bool:
    i, j, k, m = key
    return i == 0 and j == 0 and k == m


def build_table(cfg: ModelConfig, max_index: int,
                exact_policy: ExactPolicy = ExactPolicy.DIAGONAL_ONLY,
                ) -> CoeffTable:
    """Populate the table for every canonical key with indices <= max_index.

    Keys are visited in lexicographic order, so the result is independent of
    any parallel scheduling a caller might add on top.
    """
    if exact_policy is ExactPolicy.ALL and max_index > MAX_EXACT_INDEX:
        raise IndexTooLarge("exact_policy=All supports max_index <= 64")
    entries: dict[tuple[int, int, int, int], CoeffValue] = {}
    for i in range(max_index + 1):
        for j in range(i, max_index + 1):
            for k in range(j, max_index + 1):
                for m in range(max_index + 1):
                    key = CoeffKey(i, j, k, m)
                    want_exact = exact_policy is ExactPolicy.ALL or (
                        exact_policy is ExactPolicy.DIAGONAL_ONLY
                        and _is_diagonal_key(key.as_tuple())
                    )
                    if want_exact:
                        exact = coeff_exact(cfg, key)
                        value = CoeffValue(exact, exact.to_float())
                    else:
                        value = CoeffValue(None, coeff_quad(cfg, key))
                    entries[key.as_tuple()] = value
    return CoeffTable(cfg, max_index, exact_policy, entries)
