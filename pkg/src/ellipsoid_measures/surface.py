"""
Isoperimetric ratio, surface area and their bounds/asymptotics.

For the ellipsoid with inverse semi-axes q (q_i = 1/a_i),

    R(E) = area / volume = n * ||q||_R,
    ||q||_R = mean over S^(n-1) of sqrt(sum q_i^2 u_i^2).

``||.||_R`` is a norm in q. Two evaluation routes are provided:

moment_integral
    Gaussian reduction plus the Laplace representation of a square root,
        sqrt(Q) = (2 sqrt(pi))^-1 int_0^inf t^(-3/2) (1 - exp(-tQ)) dt,
    and E exp(-t q^2 X^2) = (1 + t q^2)^(-1/2) for X ~ N(0, 1/2), give
        ||q||_R = G_n / (2 sqrt(pi)) * int_0^inf t^(-3/2) (1 - prod_j (1 + t q_j^2)^(-1/2)) dt
    with G_n = Gamma(n/2) / Gamma((n+1)/2). With t = v^2 and v = s/(1-s)
    the integral becomes int_0^1 2 (1 - prod_j(...)) / s^2 ds, which is
    bounded at both ends (-> sum q_j^2 at s=0, -> 2 at s=1).
mc
    Monte Carlo of G_n * E sqrt(Q), Q = sum q_j^2 X_j^2, X_j ~ N(0, 1/2).
    Coordinates sharing the same q_j are drawn jointly: the sum of m squared
    N(0, 1/2) variables is exactly Gamma(m/2, 1), so repeated axes cost one
    draw instead of m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    DomainError,
    log_elementary_symmetric,
    log_unit_ball_volume,
    sphere_gamma_factor,
)
from .quadrature import QuadratureConfig, integrate_finite
from .sphere import Estimate, MonteCarloConfig, chunked_mean, sample_gaussian_vector

__all__ = [
    "RatioResult",
    "AsymptoticRatio",
    "ratio_norm",
    "surface_area",
    "ratio_bounds",
    "ratio_asymptotic",
    "lp_symmetric_identity",
    "l2_norm",
]

METHODS = ("moment_integral", "mc")


@dataclass(frozen=True)
class RatioResult:
    ratio: float
    norm_value: float
    method: str
    std_error: float = 0.0

    @property
    def n(self) -> int:
        return round(self.ratio / self.norm_value)


class AsymptoticRatio(NamedTuple):
    value: float
    lindeberg: float  # sum q^4 / (sum q^2)^2; the law needs this -> 0


def _as_inverse_axes(q: Sequence[float]) -> np.ndarray:
    q = np.asarray(q, dtype=float).ravel()
    if q.size == 0:
        raise DomainError("need at least one coordinate")
    if np.any(q < 0) or not np.all(np.isfinite(q)):
        raise DomainError("inverse semi-axes must be finite and nonnegative")
    if not np.any(q > 0):
        raise DomainError("q = 0 has no isoperimetric ratio (unbounded ellipsoid)")
    return q


def _as_semi_axes(a: Sequence[float]) -> np.ndarray:
    a = np.asarray(a, dtype=float).ravel()
    if a.size == 0 or np.any(a <= 0) or not np.all(np.isfinite(a)):
        raise DomainError(f"semi-axes must be finite and positive, got {a.tolist()}")
    return a


def l2_norm(x: np.ndarray) -> float:
    """Euclidean norm with max-scaling (no overflow/underflow in the squares)."""
    m = float(np.max(np.abs(x)))
    if m == 0:
        return 0.0
    return m * math.sqrt(float(np.sum((x / m) ** 2)))


def _moment_integral_unit(qhat: np.ndarray, quad: QuadratureConfig) -> float:
    """int_0^inf t^(-3/2)(1 - prod(1 + t q^2)^(-1/2)) dt for sum q^2 = 1."""
    q2 = np.sort(qhat[qhat > 0] ** 2)[::-1]

    def integrand(s: float) -> float:
        v = s / (1.0 - s)
        log_prod = -0.5 * float(np.sum(np.log1p(v * v * q2)))
        return -2.0 * math.expm1(log_prod) / (s * s)

    value, _ = integrate_finite(integrand, 0.0, 1.0, quad)
    return value


def _quadratic_form_sqrt_kernel(q2: np.ndarray):
    values, counts = np.unique(q2[q2 > 0], return_counts=True)
    single = values[counts == 1]
    grouped = values[counts > 1]
    shapes = counts[counts > 1] / 2.0

    def kernel(stream: np.random.Generator, size: int) -> np.ndarray:
        quad_form = np.zeros(size)
        if single.size:
            x = sample_gaussian_vector(single.size, stream, size)
            quad_form += (x * x) @ single
        if grouped.size:
            quad_form += stream.standard_gamma(shapes, size=(size, shapes.size)) @ grouped
        return np.sqrt(quad_form)

    return kernel


def ratio_norm(q: Sequence[float], method: str = "moment_integral",
               cfg: MonteCarloConfig | None = None,
               quad: QuadratureConfig | None = None) -> RatioResult:
    """||q||_R and R(E) = n ||q||_R for inverse semi-axes q.

    Examples
    --------
    >>> r = ratio_norm([1.0, 1.0, 1.0])
    >>> round(r.ratio, 12)
    3.0
    """
    q = _as_inverse_axes(q)
    n = q.size
    scale = l2_norm(q)
    qhat = q / scale
    if method == "moment_integral":
        integral = _moment_integral_unit(qhat, quad or QuadratureConfig())
        norm = scale * sphere_gamma_factor(n, 1.0) * integral / (2.0 * math.sqrt(math.pi))
        return RatioResult(n * norm, norm, method, 0.0)
    if method == "mc":
        mean, se, _ = chunked_mean(_quadratic_form_sqrt_kernel(qhat ** 2),
                                   cfg or MonteCarloConfig())
        factor = scale * sphere_gamma_factor(n, 1.0)
        return RatioResult(n * factor * mean, factor * mean, method, n * factor * se)
    raise DomainError(f"unknown method {method!r}; choose from {METHODS}")


def surface_area(a: Sequence[float], method: str = "moment_integral",
                 cfg: MonteCarloConfig | None = None,
                 quad: QuadratureConfig | None = None) -> Estimate:
    """(n-1)-dimensional surface area of the ellipsoid with semi-axes ``a``.

    area = R(E) * volume = R(E) * kappa_n * prod(a); the product is taken in
    log space.
    """
    a = _as_semi_axes(a)
    n = a.size
    res = ratio_norm(1.0 / a, method, cfg, quad)
    log_vol = log_unit_ball_volume(n) + float(np.sum(np.log(a)))
    vol = math.exp(log_vol)
    samples = (cfg or MonteCarloConfig()).samples if method == "mc" else 0
    return Estimate(math.exp(math.log(res.ratio) + log_vol), res.std_error * vol,
                    method, samples)


def ratio_bounds(n: int) -> tuple[float, float]:
    """Sharp constants (c_n, C_n) with c_n ||q||_2 <= ||q||_R <= C_n ||q||_2.

    c_n = Gamma(n/2) / (sqrt(pi) Gamma((n+1)/2)) is attained at q = e_1,
    C_n = 1/sqrt(n) at q = (1, ..., 1).
    """
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    return sphere_gamma_factor(n, 1.0) / math.sqrt(math.pi), 1.0 / math.sqrt(n)


def ratio_asymptotic(q: Sequence[float]) -> AsymptoticRatio:
    """Large-n approximation n * G_n * sqrt(sum q_i^2 / 2) of R(E).

    The relative error is about lindeberg / 4, so the approximation is only
    meaningful when ``lindeberg`` is small (many comparable axes).
    """
    q = _as_inverse_axes(q)
    n = q.size
    scale = l2_norm(q)
    qhat = q / scale
    value = n * sphere_gamma_factor(n, 1.0) * scale * math.sqrt(0.5)
    lindeberg = float(np.sum(qhat ** 4))  # sum qhat^2 = 1
    return AsymptoticRatio(value, lindeberg)


def lp_symmetric_identity(a: Sequence[float], p: float) -> tuple[float, float]:
    """Both sides of ||q||_p = prod(q) * e_(n-1)(a^p)^(1/p), q = 1/a."""
    a = _as_semi_axes(a)
    if p < 1:
        raise DomainError(f"need p >= 1, got {p}")
    q = 1.0 / a
    m = float(q.max())
    lhs = m * float(np.sum((q / m) ** p)) ** (1.0 / p)
    n = a.size
    if n == 1:
        # e_0 = 1
        return lhs, float(q[0])
    log_rhs = float(np.sum(np.log(q))) + log_elementary_symmetric(a ** p, n - 1) / p
    return lhs, math.exp(log_rhs)
