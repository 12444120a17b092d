"""Model configuration, eigenvalues, Jacobi eigenbasis and Gauss quadrature.

Both wave models share the same skeleton: integer conformal mass delta fixes
a Jacobi parameter pair (a, b), integer frequencies omega_n with constant gap
2, exact normalization constants, and a weight pair for the quartic overlap
integrals.  Everything exact lives in the y = cos(2x) variable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .algebra import ExactScalar, Poly, gamma_exact


class Model(enum.Enum):
    KG = "kg"
    WM = "wm"


class ConvergenceError(RuntimeError):
    """Quadrature eigen-solve failed (node count too large for floats)."""


_MAX_QUAD_POINTS = 512


@dataclass(frozen=True)
class ModelConfig:
    """Spectral data for one model at a fixed integer conformal mass."""

    model: Model
    delta: int

    def __post_init__(self) -> None:
        if self.delta != int(self.delta):
            raise ValueError("conformal mass must be an integer")
        low = 2 if self.model is Model.KG else 1
        if self.delta < low:
            raise ValueError(
                f"{self.model.value} model needs delta >= {low}, got {self.delta}"
            )

    @property
    def jacobi_a(self) -> Fraction:
        return Fraction(1, 2) if self.model is Model.KG else Fraction(self.delta)

    @property
    def jacobi_b(self) -> Fraction:
        if self.model is Model.KG:
            return Fraction(self.delta) - Fraction(3, 2)
        return Fraction(1)

    @property
    def mass_offset(self) -> int:
        return self.delta if self.model is Model.KG else self.delta + 2

    @property
    def coeff_weight_exponents(self) -> tuple[Fraction, Fraction]:
        """(1-y), (1+y) exponents of the quartic overlap integral."""
        if self.model is Model.KG:
            return Fraction(1, 2), 2 * Fraction(self.delta) - Fraction(5, 2)
        return 2 * Fraction(self.delta) - 1, Fraction(3)

    @property
    def coeff_prefactor_log4(self) -> int:
        """The quartic integral carries 4**(-this)."""
        return self.delta if self.model is Model.KG else self.delta + 2

    def key(self) -> str:
        return f"{self.model.value}-d{self.delta}"


def omega(cfg: ModelConfig, n: int) -> int:
    """Frequency omega_n = 2n + mass offset (always a positive integer)."""
    if n < 0:
        raise ValueError("mode index must be nonnegative")
    return 2 * n + cfg.mass_offset


@lru_cache(maxsize=None)
def jacobi_poly(n: int, a: Fraction, b: Fraction) -> Poly:
    """Exact coefficients of the Jacobi polynomial P_n^{(a,b)} in y."""
    if a <= -1 or b <= -1:
        raise ValueError("Jacobi parameters must exceed -1")
    if n == 0:
        return Poly.one()
    if n == 1:
        return Poly([(a - b) / 2, (a + b + 2) / 2])
    p_prev = jacobi_poly(n - 2, a, b)
    p_last = jacobi_poly(n - 1, a, b)
    n_ = Fraction(n)
    c = 2 * n_ + a + b
    a1 = 2 * n_ * (n_ + a + b) * (c - 2)
    a2 = (c - 1) * (a * a - b * b)
    a3 = (c - 1) * c * (c - 2)
    a4 = 2 * (n_ + a - 1) * (n_ + b - 1) * c
    y = Poly.x()
    return (p_last * (y * a3 + Poly.const(a2)) - p_prev * a4) / a1


def norm_sq(cfg: ModelConfig, n: int) -> ExactScalar:
    """Square of the eigenfunction normalization constant N_n."""
    if n < 0:
        raise ValueError("mode index must be nonnegative")
    d = cfg.delta
    if cfg.model is Model.KG:
        # 2 G(n+1)/G(n+3/2) * (2n+d) G(n+d)/G(n+d-1/2)
        out = gamma_exact(2 * (n + 1)) * 2
        out = out / gamma_exact(2 * n + 3)
        out = out * (2 * n + d)
        out = out * gamma_exact(2 * (n + d))
        out = out / gamma_exact(2 * (n + d) - 1)
        return out
    return ExactScalar.from_rational(
        Fraction(2 * (d + n + 1) * (d + 2 * n + 2), n + 1)
    )


def e0(cfg: ModelConfig) -> ExactScalar:
    """Constant value of the first eigenfunction; e0**2 == norm_sq(cfg, 0)."""
    return norm_sq(cfg, 0).sqrt()


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple[float, ...]
    weights: tuple[float, ...]
    exact_degree: int

    def integrate(self, f) -> float:
        return float(sum(w * f(x) for x, w in zip(self.nodes, self.weights)))


def _jacobi_recurrence(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetric Jacobi matrix for the
    weight (1-y)^a (1+y)^b on (-1, 1)."""
    idx = np.arange(n, dtype=float)
    s = 2 * idx + a + b
    alpha = np.empty(n)
    alpha[0] = (b - a) / (a + b + 2)
    if n > 1:
        alpha[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2))
    beta = np.empty(max(n - 1, 0))
    if n > 1:
        j = idx[1:]
        sj = 2 * j + a + b
        beta = np.sqrt(
            4 * j * (j + a) * (j + b) * (j + a + b)
            / (sj * sj * (sj + 1) * (sj - 1))
        )
    return alpha, beta


def _log_moment0(a: float, b: float) -> float:
    """log of int_{-1}^{1} (1-y)^a (1+y)^b dy."""
    from math import lgamma, log

    return (a + b + 1) * log(2.0) + lgamma(a + 1) + lgamma(b + 1) - lgamma(a + b + 2)


@lru_cache(maxsize=None)
def gauss_jacobi_rule(a: Fraction, b: Fraction, npoints: int) -> QuadratureRule:
    """Gauss-Jacobi nodes and weights by the Golub-Welsch method: eigenvalues
    of the symmetric tridiagonal recurrence matrix give the nodes, squared
    first eigenvector components scaled by the zeroth moment give weights."""
    if npoints < 1:
        raise ValueError("need at least one quadrature point")
    if npoints > _MAX_QUAD_POINTS:
        raise ConvergenceError(f"node count {npoints} exceeds float-stable cap")
    af, bf = float(a), float(b)
    if af <= -1 or bf <= -1:
        raise ValueError("Jacobi parameters must exceed -1")
    alpha, beta = _jacobi_recurrence(af, bf, npoints)
    try:
        vals, vecs = eigh_tridiagonal(alpha, beta)
    except Exception as exc:  # pragma: no cover - scipy failure path
        raise ConvergenceError(str(exc)) from exc
    import math

    mu0 = math.exp(_log_moment0(af, bf))
    weights = mu0 * vecs[0, :] ** 2
    return QuadratureRule(tuple(map(float, vals)), tuple(map(float, weights)),
                          2 * npoints - 1)


def jacobi_values(n_max: int, a: Fraction, b: Fraction,
                  nodes: np.ndarray) -> np.ndarray:
    """Array P[n, i] = P_n^{(a,b)}(nodes[i]) by the float three-term
    recurrence (stable; avoids giant exact coefficients at high degree)."""
    af, bf = float(a), float(b)
    y = np.asarray(nodes, dtype=float)
    out = np.empty((n_max + 1, y.size))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = (af - bf) / 2 + (af + bf + 2) / 2 * y
    for n in range(2, n_max + 1):
        c = 2 * n + af + bf
        a1 = 2 * n * (n + af + bf) * (c - 2)
        a2 = (c - 1) * (af * af - bf * bf)
        a3 = (c - 1) * c * (c - 2)
        a4 = 2 * (n + af - 1) * (n + bf - 1) * c
        out[n] = ((a2 + a3 * y) * out[n - 1] - a4 * out[n - 2]) / a1
    return out


def eigenbasis_weight_exponents(cfg: ModelConfig) -> tuple[Fraction, Fraction]:
    """(1-y), (1+y) exponents of the measure in the y variable, i.e. the
    Jacobi weight against which the eigenbasis is orthonormal."""
    return cfg.jacobi_a, cfg.jacobi_b


def _measure_prefactor(cfg: ModelConfig) -> Fraction:
    # d(mu) in y-coordinates is 2^(-(a+b+2)) (1-y)^a (1+y)^b dy
    a, b = cfg.jacobi_a, cfg.jacobi_b
    e = a + b + 2
    assert e.denominator == 1
    return Fraction(1, 2 ** e.numerator)


def orthonormality_defect(cfg: ModelConfig, n: int, m: int) -> float:
    """|(e_n|e_m) - 1(n=m)| by Gauss-Jacobi quadrature."""
    if n < 0 or m < 0:
        raise ValueError("mode indices must be nonnegative")
    npoints = max((n + m) // 2 + 2, 2)
    rule = gauss_jacobi_rule(cfg.jacobi_a, cfg.jacobi_b, npoints)
    nodes = np.array(rule.nodes)
    weights = np.array(rule.weights)
    vals = jacobi_values(max(n, m), cfg.jacobi_a, cfg.jacobi_b, nodes)
    nn = norm_sq(cfg, n).to_float()
    nm = norm_sq(cfg, m).to_float()
    pref = float(_measure_prefactor(cfg))
    ip = pref * np.sqrt(nn * nm) * float(np.sum(weights * vals[n] * vals[m]))
    return abs(ip - (1.0 if n == m else 0.0))
