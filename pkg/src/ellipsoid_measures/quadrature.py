"""Thin adaptive-quadrature wrapper (QUADPACK via scipy) with hard failure."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from .core import DomainError, QuadratureError

__all__ = ["QuadratureConfig", "integrate_finite"]


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


def integrate_finite(f: Callable[[float], float], lo: float, hi: float,
                     cfg: QuadratureConfig | None = None,
                     points: list[float] | None = None) -> tuple[float, float]:
    """Integrate a smooth f over [lo, hi]; return (value, abs_error_estimate).

    Raises QuadratureError when QUADPACK reports failure or its error
    estimate exceeds the configured tolerance by more than a factor 10.
    """
    cfg = cfg or QuadratureConfig()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info, *rest = integrate.quad(
            f, lo, hi, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
            limit=cfg.max_subdivisions, points=points, full_output=1)
    ier = 0 if not rest else 1
    budget = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if not math.isfinite(value) or (ier and err > 10 * budget):
        msg = rest[0] if rest else "non-finite result"
        raise QuadratureError(
            f"quadrature on [{lo}, {hi}] missed tolerance: value={value!r}, "
            f"error estimate={err:.3e}, budget={budget:.3e}, neval={info['neval']} ({msg})",
            value=value, abs_error=err, evaluations=info["neval"])
    return value, err
