"""
Mean values over the unit sphere S^(n-1).

If f is positively homogeneous of degree d on R^n and X_1..X_n are i.i.d.
normal with mean 0 and variance 1/2 (density exp(-x^2)/sqrt(pi)), then

    Gamma((n+d)/2) * mean_{S^(n-1)} f = Gamma(n/2) * E f(X_1, ..., X_n)

so sphere means reduce to Gaussian expectations. Both the Gaussian route and
the "direct" route (normalize each Gaussian vector onto the sphere) are
available; the Gaussian route is what makes closed forms possible.

Randomness is chunked: chunk ``i`` draws from a Philox (counter-based)
stream keyed by (master_seed, i). Per-chunk statistics are merged in chunk
order, so results are bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .core import DomainError, sphere_gamma_factor

__all__ = [
    "MonteCarloConfig",
    "Estimate",
    "substream",
    "sample_gaussian_vector",
    "chunked_mean",
    "sphere_mean_homogeneous",
    "gaussian_abs_moment",
    "lp_sphere_mean",
]

GAUSSIAN_SCALE = math.sqrt(0.5)
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class MonteCarloConfig:
    """Sample budget and seeding. ``workers`` never changes the result."""

    samples: int = 1_000_000
    master_seed: int = 0
    chunk_size: int = 65536
    workers: int = 1

    def __post_init__(self) -> None:
        if self.samples < 2:
            raise DomainError("Monte Carlo needs at least 2 samples")
        if self.chunk_size < 1 or self.workers < 1:
            raise DomainError("chunk_size and workers must be positive")


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    method: str
    samples_used: int

    def to_dict(self) -> dict:
        return asdict(self)


def substream(master_seed: int, chunk_index: int) -> np.random.Generator:
    """Independent reproducible stream for one chunk."""
    seq = np.random.SeedSequence([master_seed & _SEED_MASK, chunk_index])
    return np.random.Generator(np.random.Philox(seq))


def sample_gaussian_vector(n: int, stream: np.random.Generator,
                           size: int | None = None) -> np.ndarray:
    """Draw N(0, 1/2) coordinates: shape (n,) or (size, n)."""
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    shape = (n,) if size is None else (size, n)
    return stream.standard_normal(shape) * GAUSSIAN_SCALE


def _chunk_stats(kernel: Callable[[np.random.Generator, int], np.ndarray],
                 seed: int, index: int, size: int) -> tuple[int, float, float]:
    vals = np.asarray(kernel(substream(seed, index), size), dtype=float)
    if vals.shape != (size,):
        raise ValueError(f"kernel returned shape {vals.shape}, expected ({size},)")
    mean = float(vals.mean())
    m2 = float(np.sum((vals - mean) ** 2))
    return size, mean, m2


def chunked_mean(kernel: Callable[[np.random.Generator, int], np.ndarray],
                 cfg: MonteCarloConfig) -> tuple[float, float, int]:
    """Sample mean and its standard error of ``kernel`` draws.

    ``kernel(stream, size)`` must return ``size`` i.i.d. samples using only
    ``stream``. Returns (mean, std_error, samples).
    """
    sizes = [cfg.chunk_size] * (cfg.samples // cfg.chunk_size)
    if cfg.samples % cfg.chunk_size:
        sizes.append(cfg.samples % cfg.chunk_size)
    jobs = list(enumerate(sizes))
    if cfg.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            stats = list(pool.map(lambda j: _chunk_stats(kernel, cfg.master_seed, *j), jobs))
    else:
        stats = [_chunk_stats(kernel, cfg.master_seed, i, s) for i, s in jobs]

    # Chan et al. pairwise merge, always in chunk order
    count, mean, m2 = stats[0]
    for c, mu, s2 in stats[1:]:
        total = count + c
        delta = mu - mean
        mean += delta * c / total
        m2 += s2 + delta * delta * count * c / total
        count = total
    var = m2 / (count - 1)
    return mean, math.sqrt(var / count), count


def sphere_mean_homogeneous(f: Callable[[np.ndarray], np.ndarray], degree: float, n: int,
                            cfg: MonteCarloConfig | None = None,
                            mode: str = "gaussian") -> Estimate:
    """Monte Carlo mean of f over S^(n-1).

    Parameters
    ----------
    f : callable
        Vectorized: maps an (m, n) array of points to m values. Must be
        positively homogeneous of degree ``degree`` for ``mode="gaussian"``.
    degree : float
        Homogeneity degree d; requires n + d > 0.
    mode : {"gaussian", "direct"}
        "gaussian" averages f over N(0, 1/2) vectors and rescales by
        Gamma(n/2) / Gamma((n+d)/2); "direct" projects every sample onto the
        sphere first (works for any f).
    """
    cfg = cfg or MonteCarloConfig()
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    if n + degree <= 0:
        raise DomainError(f"sphere mean needs n + d > 0, got n={n}, d={degree}")
    if mode == "gaussian":
        factor = sphere_gamma_factor(n, degree)

        def kernel(stream, size):
            return f(sample_gaussian_vector(n, stream, size))
    elif mode == "direct":
        factor = 1.0

        def kernel(stream, size):
            x = sample_gaussian_vector(n, stream, size)
            return f(x / np.linalg.norm(x, axis=1, keepdims=True))
    else:
        raise DomainError(f"unknown mode {mode!r}")
    mean, se, count = chunked_mean(kernel, cfg)
    return Estimate(factor * mean, factor * se, f"mc_{mode}", count)


def gaussian_abs_moment(p: float) -> float:
    """E|X|^p for X ~ N(0, 1/2): Gamma((p+1)/2) / sqrt(pi)."""
    if p <= -1:
        raise DomainError(f"absolute moment needs p > -1, got {p}")
    return math.exp(math.lgamma((p + 1) / 2.0) - 0.5 * math.log(math.pi))


def lp_sphere_mean(n: int, p: float, cfg: MonteCarloConfig | None = None,
                   mode: str = "exact_mc") -> Estimate:
    """Mean of the l^p norm over S^(n-1).

    ``mode="asymptotic"`` gives the large-n law
    Gamma(n/2)/Gamma((n+1)/2) * (n * E|X|^p)^(1/p).
    """
    if n < 1 or p < 1:
        raise DomainError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    if mode == "asymptotic":
        value = sphere_gamma_factor(n, 1.0) * (n * gaussian_abs_moment(p)) ** (1.0 / p)
        return Estimate(value, 0.0, "asymptotic", 0)
    if mode != "exact_mc":
        raise DomainError(f"unknown mode {mode!r}")
    return sphere_mean_homogeneous(
        lambda x: np.linalg.norm(x, ord=p, axis=1), 1.0, n, cfg)
