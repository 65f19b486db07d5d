"""
Integral mean curvatures M_k of ellipsoids.

M_k is taken to be the Kubota average

    M_k(K) = (n-k-1) omega_(n-1) / omega_(n-k-2) * mean_{G(n, n-k-1)} vol_(n-k-1)(P_x K),

normalized so that M_k(B^n(1)) = omega_(n-1) and M_0 is the surface area.
Closed forms for balls and flat balls, the two-sided amplitude estimate and
the ratio formulas are all checked against this average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import (
    DomainError,
    Ellipsoid,
    EvaluationReport,
    log_elementary_symmetric,
    log_unit_sphere_area,
)
from .projections import SubspaceBasis, projected_volume_batch
from .sphere import Estimate, MonteCarloConfig, chunked_mean

__all__ = [
    "CurvatureQuery",
    "BoundsResult",
    "mk_ball",
    "mk_flat_ball",
    "mk_ratio",
    "curvature_bounds",
    "kubota_mc",
    "haar_subspace_sample",
    "haar_frames",
    "RATIO_MODES",
]

RATIO_MODES = ("direct", "paper_closed_form", "normalized", "asymptotic")
KUBOTA_DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class CurvatureQuery:
    semi_axes: Ellipsoid
    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.semi_axes, Ellipsoid):
            object.__setattr__(self, "semi_axes", Ellipsoid(tuple(self.semi_axes), degenerate=True))
        n = self.semi_axes.dim
        if not 0 <= self.k <= n - 2:
            raise DomainError(f"mean-curvature order must satisfy 0 <= k <= n-2, got k={self.k}, n={n}")

    @property
    def n(self) -> int:
        return self.semi_axes.dim

    @property
    def proj_dim(self) -> int:
        return self.n - self.k - 1


@dataclass(frozen=True)
class BoundsResult:
    lower: float
    upper: float
    amplitude: float


def _check_nk(n: int, k: int, k_max: int) -> None:
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if not 0 <= k <= k_max:
        raise DomainError(f"need 0 <= k <= {k_max} for n={n}, got k={k}")


def _log_mk_ball(n: int, k: int) -> float:
    return log_unit_sphere_area(n - 1)


def _log_mk_flat_ball(n: int, k: int) -> float:
    m = n - k - 1
    return (log_unit_sphere_area(k) + log_unit_sphere_area(m - 1)
            - math.log(m) - math.log(math.comb(n - 1, k)))


def mk_ball(n: int, k: int, R: float = 1.0) -> float:
    """M_k(B^n(R)) = omega_(n-1) R^(n-1-k)."""
    _check_nk(n, k, n - 1)
    if R <= 0:
        raise DomainError(f"radius must be positive, got {R}")
    return math.exp(_log_mk_ball(n, k) + (n - 1 - k) * math.log(R))


def mk_flat_ball(n: int, k: int) -> float:
    """M_k of the unit (n-k-1)-ball sitting in R^n:
    omega_k omega_(n-k-2) / ((n-k-1) C(n-1, k)).
    """
    _check_nk(n, k, n - 2)
    return math.exp(_log_mk_flat_ball(n, k))


def _log_direct_closed_form(n: int, k: int) -> float:
    # sqrt(pi) Gamma((n+1)/2) / (Gamma(k/2 + 1) Gamma((n-k)/2))
    return (0.5 * math.log(math.pi) + math.lgamma((n + 1) / 2.0)
            - math.lgamma(k / 2.0 + 1.0) - math.lgamma((n - k) / 2.0))


def _printed_ratio_closed_form(n: int, k: int) -> float:
    return math.exp(math.log(2.0 * (k - 1)) + 1.5 * math.log(math.pi) + math.lgamma((n + 1) / 2.0)
                    - math.lgamma(k / 2.0) - math.lgamma((n - k) / 2.0))


def _printed_normalized_rhs(n: int, k: int) -> float:
    def half_ratio(x_hi: float, x_lo: float) -> float:
        return math.exp(0.5 * (math.lgamma(x_hi) - math.lgamma(x_lo)))
    return (math.pi ** 1.25 * (k - 1) / math.sqrt(k * (k + 1))
            * half_ratio((n + 1) / 2.0, n / 2.0 + 1.0)
            * half_ratio((k + 1) / 2.0, k / 2.0)
            * half_ratio((n - k + 1) / 2.0, (n - k) / 2.0))


def _normalized_closed_form(n: int, k: int) -> float:
    # (M_k ball / M_k flat ball) / sqrt(C(n, k+1)), reduced with the
    # duplication formula:
    # sqrt( (sqrt(pi)/2) (k+1) G((n+1)/2)/G(n/2+1) G((k+1)/2)/G(k/2+1) G((n-k+1)/2)/G((n-k)/2) )
    lg = math.lgamma
    log_sq = (0.5 * math.log(math.pi) - math.log(2.0) + math.log(k + 1)
              + lg((n + 1) / 2.0) - lg(n / 2.0 + 1.0)
              + lg((k + 1) / 2.0) - lg(k / 2.0 + 1.0)
              + lg((n - k + 1) / 2.0) - lg((n - k) / 2.0))
    return math.exp(0.5 * log_sq)


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def mk_ratio(n: int, k: int, mode: str = "direct") -> EvaluationReport:
    """Ratio M_k(B^n(R)) / M_k(flat (n-k-1)-ball of radius R) and relatives.

    Modes
    -----
    direct
        value from the omega-ratio definition; oracle is the duplication
        closed form sqrt(pi) Gamma((n+1)/2) / (Gamma(k/2+1) Gamma((n-k)/2)).
    paper_closed_form
        value 2(k-1) pi^(3/2) Gamma((n+1)/2) / (Gamma(k/2) Gamma((n-k)/2)),
        oracle the direct ratio (requires n-1 > k > 1).
    normalized
        value direct / sqrt(C(n, k+1)); oracle its closed form; the older
        right-hand side with pi^(5/4) (k-1)/sqrt(k(k+1)) is in ``details``.
    asymptotic
        value ((k+1)(n-k+1) / (2(n+2)))^(1/4), which is ((n+2)/8)^(1/4) at
        k = n/2; oracle the exact normalized ratio. ``details`` has C(k),
        D(n-k), B(n, k) with its pi^(5/4) prefactor, and the corrected
        large-n form (pi (k+1)(n-k+1) / (2(n+2)))^(1/4).
    """
    _check_nk(n, k, n - 2)
    log_direct = _log_mk_ball(n, k) - _log_mk_flat_ball(n, k)
    direct = _exp(log_direct)
    if mode == "direct":
        return EvaluationReport(direct, _exp(_log_direct_closed_form(n, k)), "direct")
    if mode == "paper_closed_form":
        if not n - 1 > k > 1:
            raise DomainError(f"closed form needs n-1 > k > 1, got n={n}, k={k}")
        return EvaluationReport(_printed_ratio_closed_form(n, k), direct, "paper_closed_form")
    normalized = math.exp(log_direct - 0.5 * math.log(math.comb(n, k + 1)))
    if mode == "normalized":
        details: dict[str, Any] = {}
        if k > 1:
            printed = _printed_normalized_rhs(n, k)
            details = {"printed_rhs": printed, "printed_deviation_factor": printed / normalized}
        return EvaluationReport(normalized, _normalized_closed_form(n, k), "normalized",
                                details=details)
    if mode == "asymptotic":
        pi54 = math.pi ** 1.25
        base = ((k + 1) * (n - k + 1) / (2.0 * (n + 2))) ** 0.25
        b_nk = pi54 * base
        details = {
            "C_k": (pi54 * (k - 1) / math.sqrt(k * (k + 1))
                    * math.exp(0.5 * (math.lgamma((k + 1) / 2.0) - math.lgamma(k / 2.0)))
                    if k >= 1 else math.nan),
            "D_m": pi54 * ((n - k + 1) / 2.0) ** 0.25,
            "B_nk": b_nk,
            "B_half_printed": ((n + 2) / 8.0) ** 0.25,
            "B_nk_corrected": (math.pi * (k + 1) * (n - k + 1) / (2.0 * (n + 2))) ** 0.25,
        }
        return EvaluationReport(base, normalized, "asymptotic", details=details)
    raise DomainError(f"unknown mode {mode!r}; choose from {RATIO_MODES}")


def curvature_bounds(query: CurvatureQuery) -> BoundsResult:
    """Two-sided estimate  M_k(flat ball) A <= M_k(E) <= M_k(B^n(1)) / sqrt(C(n, k+1)) A
    with amplitude A = sqrt(e_(n-k-1)(a_1^2, ..., a_n^2)).

    Equality holds on the right for balls and on the left for
    a = (1, ..., 1, 0, ..., 0) with n-k-1 ones.
    """
    n, k, m = query.n, query.k, query.proj_dim
    a2 = np.asarray(query.semi_axes.semi_axes) ** 2
    log_amp = 0.5 * log_elementary_symmetric(a2, m)
    amp = math.exp(log_amp)
    log_upper = _log_mk_ball(n, k) - 0.5 * math.log(math.comb(n, k + 1)) + log_amp
    return BoundsResult(math.exp(_log_mk_flat_ball(n, k) + log_amp), math.exp(log_upper), amp)


def haar_frames(n: int, m: int, stream: np.random.Generator, size: int) -> np.ndarray:
    """``size`` Haar-distributed orthonormal n x m frames, shape (size, n, m).

    Gaussian matrix, thin QR, then flip columns so diag(R) > 0; without the
    sign fix the distribution depends on the QR implementation.
    """
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    g = stream.standard_normal((size, n, m))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    return q * d[:, None, :]


def haar_subspace_sample(n: int, m: int, stream: np.random.Generator) -> SubspaceBasis:
    """One Haar-random m-dimensional subspace of R^n."""
    return SubspaceBasis(haar_frames(n, m, stream, 1)[0])


def kubota_mc(query: CurvatureQuery, cfg: MonteCarloConfig | None = None) -> Estimate:
    """Monte Carlo Kubota average over Haar-random (n-k-1)-subspaces."""
    cfg = cfg or MonteCarloConfig(samples=KUBOTA_DEFAULT_SAMPLES, chunk_size=16384)
    n, m = query.n, query.proj_dim
    a = np.asarray(query.semi_axes.semi_axes)
    const = math.exp(math.log(m) + log_unit_sphere_area(n - 1) - log_unit_sphere_area(m - 1))

    def kernel(stream: np.random.Generator, size: int) -> np.ndarray:
        return projected_volume_batch(a, haar_frames(n, m, stream, size))

    mean, se, count = chunked_mean(kernel, cfg)
    return Estimate(const * mean, const * se, "kubota_mc", count)
