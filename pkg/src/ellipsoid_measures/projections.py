"""
Volumes of orthogonal projections of ellipsoids.

Let E = {x : sum x_i^2 / a_i^2 <= 1}, W a k-dimensional subspace with
orthonormal frame Omega (n x k), P = Omega Omega^T, and W^perp with frame
Omega_perp and projector P_perp = I - P. For an increasing multi-index i,
write a_i = prod a_(i_l), P_i for the principal minor of P on i and
Omega_i for the k x k minor of Omega on rows i. Then

    form 1:  vol_k = kappa_k sqrt( sum_{|i|=k}   P_i a_i^2 )
    form 2:  vol_k = kappa_k sqrt( sum_{|i|=k}   Omega_i^2 a_i^2 )
    form 3:  vol_k = kappa_k prod(a) sqrt( sum_{|i|=n-k} P_perp_i / a_i^2 )
    form 4:  vol_k = kappa_k prod(a) sqrt( sum_{|i|=n-k} (Omega_perp_i)^2 / a_i^2 )
    singular: vol_k = kappa_k * product of the k nonzero singular values of P diag(a)

Form 2 follows from form 1 by Binet-Cauchy (P_i = Omega_i^2), forms 3/4
from the complementary-minor identity P_i = P_perp_(complement i).

Sums over C(n, k) multi-indices are exponential; ``sum P_i a_i^2`` equals
e_k of the eigenvalues of diag(a) P diag(a), which is the default path for
forms 1 and 3. Enumeration stays available (``by_enumeration=True``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import (
    DomainError,
    MultiIndex,
    elementary_symmetric,
    log_unit_ball_volume,
    multi_indices,
    unit_ball_volume,
)

__all__ = [
    "OrthonormalityError",
    "SubspaceBasis",
    "Projector",
    "projector_from_basis",
    "minor_det",
    "complement",
    "principal_minor_sum",
    "projected_volume",
    "projected_volume_batch",
    "sum_sq_minors",
    "FORMS",
]

ORTHO_TOL = 1e-12
REPAIR_TOL = 1e-6
RANK_RTOL = 1e-13
FORMS = ("1", "2", "3", "4", "singular", "auto")


class OrthonormalityError(DomainError):
    pass


def _gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the columns, run twice for stability."""
    q = np.array(vectors, dtype=float, copy=True)
    for _ in range(2):
        for j in range(q.shape[1]):
            for i in range(j):
                q[:, j] -= (q[:, i] @ q[:, j]) * q[:, i]
            q[:, j] /= np.linalg.norm(q[:, j])
    return q


def orthonormality_error(columns: np.ndarray) -> float:
    k = columns.shape[1]
    return float(np.max(np.abs(columns.T @ columns - np.eye(k)))) if k else 0.0


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal n x k column frame of a k-dimensional subspace."""

    columns: np.ndarray

    def __post_init__(self) -> None:
        cols = np.array(self.columns, dtype=float)
        if cols.ndim != 2 or cols.shape[1] > cols.shape[0]:
            raise DomainError(f"basis must be n x k with k <= n, got shape {cols.shape}")
        err = orthonormality_error(cols)
        if err > ORTHO_TOL:
            raise OrthonormalityError(f"columns are not orthonormal (max |G - I| = {err:.2e})")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[float]] | np.ndarray,
                     layout: str = "columns") -> "SubspaceBasis":
        """Build from external data, re-orthonormalizing small defects.

        ``layout="rows"`` means each entry of ``vectors`` is one basis
        vector (the CSV/JSON convention). Defects up to 1e-6 are repaired by
        Gram-Schmidt; larger ones are rejected.
        """
        arr = np.array(vectors, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None] if layout == "columns" else arr[None, :]
        if layout == "rows":
            arr = arr.T
        err = orthonormality_error(arr)
        if err > REPAIR_TOL:
            raise OrthonormalityError(
                f"basis is too far from orthonormal to repair (max |G - I| = {err:.2e})")
        if err > ORTHO_TOL:
            arr = _gram_schmidt(arr)
        return cls(arr)

    @classmethod
    def coordinate(cls, n: int, axes: Sequence[int]) -> "SubspaceBasis":
        """Span of standard basis vectors e_i, i 1-based."""
        cols = np.zeros((n, len(axes)))
        for j, i in enumerate(axes):
            cols[i - 1, j] = 1.0
        return cls(cols)

    @property
    def ambient_dim(self) -> int:
        return self.columns.shape[0]

    @property
    def sub_dim(self) -> int:
        return self.columns.shape[1]

    def orthogonal_complement(self) -> "SubspaceBasis":
        n, k = self.columns.shape
        if k == 0:
            return SubspaceBasis(np.eye(n))
        full, _ = np.linalg.qr(self.columns, mode="complete")
        return SubspaceBasis(full[:, k:])


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector: symmetric, idempotent, integer trace."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.matrix, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DomainError(f"projector must be square, got shape {p.shape}")
        if np.max(np.abs(p - p.T), initial=0.0) > ORTHO_TOL:
            raise DomainError("projector is not symmetric")
        if np.max(np.abs(p @ p - p), initial=0.0) > ORTHO_TOL:
            raise DomainError("projector is not idempotent")
        tr = float(np.trace(p))
        if abs(tr - round(tr)) > 1e-10:
            raise DomainError(f"projector trace {tr} is not an integer")
        p.setflags(write=False)
        object.__setattr__(self, "matrix", p)

    @property
    def rank(self) -> int:
        return round(float(np.trace(self.matrix)))

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]

    def complement(self) -> "Projector":
        return Projector(np.eye(self.ambient_dim) - self.matrix)

    def basis(self) -> SubspaceBasis:
        w, v = np.linalg.eigh(self.matrix)
        # re-orthonormalize: eigh vectors are only orthonormal to a few ulps
        q, _ = np.linalg.qr(v[:, w > 0.5])
        return SubspaceBasis(q)


Subspace = Union[SubspaceBasis, Projector]


def projector_from_basis(omega: SubspaceBasis) -> Projector:
    """P = Omega Omega^T."""
    cols = omega.columns
    p = cols @ cols.T
    return Projector(0.5 * (p + p.T))


def _as_multi_index(idx: MultiIndex | Sequence[int], dim: int) -> MultiIndex:
    if isinstance(idx, MultiIndex):
        if idx.ambient_dim != dim:
            raise DomainError(f"multi-index lives in dimension {idx.ambient_dim}, matrix side is {dim}")
        return idx
    return MultiIndex(tuple(idx), dim)


def minor_det(A: np.ndarray, rows: MultiIndex | Sequence[int],
              cols: MultiIndex | Sequence[int]) -> float:
    """Determinant of the submatrix of A on (1-based) ``rows`` x ``cols``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DomainError("minor_det needs a 2-d array")
    if len(rows) == 0 and len(cols) == 0:
        return 1.0  # empty minor
    r = _as_multi_index(rows, A.shape[0])
    c = _as_multi_index(cols, A.shape[1])
    if len(r) != len(c):
        raise DomainError(f"row and column index sets differ in size ({len(r)} vs {len(c)})")
    if len(r) == 0:
        return 1.0
    return float(np.linalg.det(A[np.ix_(r.offsets, c.offsets)]))


def complement(i: MultiIndex) -> MultiIndex:
    return i.complement()


def principal_minor_sum(M: np.ndarray, k: int, method: str = "eigen") -> float:
    """Sum of all k x k principal minors of a symmetric PSD matrix.

    "eigen" uses e_k of the eigenvalues (O(n^3)); "enumerate" sums C(n, k)
    determinants.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if not 0 <= k <= n:
        raise IndexError(f"k={k} out of range for n={n}")
    if method == "enumerate":
        return float(sum(minor_det(M, i, i) for i in multi_indices(n, k)))
    if method == "eigen":
        w = np.linalg.eigvalsh(0.5 * (M + M.T))
        return elementary_symmetric(np.clip(w, 0.0, None), k)
    raise DomainError(f"unknown method {method!r}")


def _resolve(subspace: Subspace) -> tuple[SubspaceBasis | None, Projector | None]:
    if isinstance(subspace, SubspaceBasis):
        return subspace, None
    if isinstance(subspace, Projector):
        return None, subspace
    raise DomainError(f"expected SubspaceBasis or Projector, got {type(subspace).__name__}")


def projected_volume(a: Sequence[float], subspace: Subspace, form: str = "auto",
                     by_enumeration: bool = False) -> float:
    """k-volume of the orthogonal projection of the ellipsoid onto ``subspace``.

    Parameters
    ----------
    a : sequence of float
        Semi-axes; zeros are allowed except for forms 3 and 4.
    subspace : SubspaceBasis or Projector
    form : {"1", "2", "3", "4", "singular", "auto"}
        "auto" picks form 1 for k <= n/2 and form 3 otherwise.
    by_enumeration : bool
        Sum forms 1/3 over all multi-indices instead of the eigenvalue path.
    """
    a = np.asarray(a, dtype=float).ravel()
    form = str(form)
    if form not in FORMS:
        raise DomainError(f"unknown form {form!r}; choose from {FORMS}")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise DomainError("semi-axes must be finite and nonnegative")
    basis, proj = _resolve(subspace)
    n = basis.ambient_dim if basis is not None else proj.ambient_dim
    if a.size != n:
        raise DomainError(f"{a.size} semi-axes for a subspace of R^{n}")
    k = basis.sub_dim if basis is not None else proj.rank
    if not 1 <= k <= n:
        raise DomainError(f"subspace dimension must be in [1, {n}], got {k}")
    if form == "auto":
        form = "1" if (2 * k <= n or np.any(a == 0)) else "3"
    if form in ("3", "4") and np.any(a == 0):
        raise DomainError(f"form {form} divides by the semi-axes; got a zero axis")

    kappa = unit_ball_volume(k)
    if form == "1":
        P = (proj or projector_from_basis(basis)).matrix
        weighted = a[:, None] * P * a[None, :]
        s = principal_minor_sum(weighted, k, "enumerate" if by_enumeration else "eigen")
        return kappa * math.sqrt(max(s, 0.0))
    if form == "2":
        omega = (basis or proj.basis()).columns
        s = sum(minor_det(omega, i, range(1, k + 1)) ** 2 * float(np.prod(a[i.offsets])) ** 2
                for i in multi_indices(n, k))
        return kappa * math.sqrt(s)
    if form == "3":
        P_perp = (proj or projector_from_basis(basis)).complement().matrix
        inv = 1.0 / a
        weighted = inv[:, None] * P_perp * inv[None, :]
        s = principal_minor_sum(weighted, n - k, "enumerate" if by_enumeration else "eigen")
        return math.exp(log_unit_ball_volume(k) + float(np.sum(np.log(a))) + 0.5 * math.log(s))
    if form == "4":
        perp = (basis or proj.basis()).orthogonal_complement().columns
        s = sum(minor_det(perp, i, range(1, n - k + 1)) ** 2 / float(np.prod(a[i.offsets])) ** 2
                for i in multi_indices(n, n - k))
        return math.exp(log_unit_ball_volume(k) + float(np.sum(np.log(a))) + 0.5 * math.log(s))
    # singular values of P diag(a)
    P = (proj or projector_from_basis(basis)).matrix
    sv = np.linalg.svd(P * a[None, :], compute_uv=False)
    if sv[0] == 0 or sv[k - 1] <= RANK_RTOL * sv[0]:
        return 0.0
    return kappa * float(np.prod(sv[:k]))


def projected_volume_batch(a: Sequence[float], frames: np.ndarray) -> np.ndarray:
    """Projection volumes for a stack of frames, shape (N, n, k).

    Uses vol_k = kappa_k sqrt(det(Omega^T diag(a^2) Omega)), i.e. the
    squared singular-value product (= form 2 after Binet-Cauchy).
    """
    a = np.asarray(a, dtype=float)
    k = frames.shape[-1]
    scaled = frames * a[None, :, None]
    gram = np.einsum("nik,nil->nkl", scaled, scaled)
    det = np.linalg.det(gram)
    return unit_ball_volume(k) * np.sqrt(np.clip(det, 0.0, None))


def sum_sq_minors(omega: SubspaceBasis) -> float:
    """Sum over k-row subsets of the squared k x k minors of Omega (= 1)."""
    if not isinstance(omega, SubspaceBasis):
        omega = SubspaceBasis(np.asarray(omega, dtype=float))
    n, k = omega.columns.shape
    cols = range(1, k + 1)
    return float(sum(minor_det(omega.columns, i, cols) ** 2 for i in multi_indices(n, k)))
