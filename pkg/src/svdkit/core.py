"""Dense singular value decomposition and low-rank truncation.

The decomposition is computed with a one-sided Jacobi iteration: columns of
the (taller orientation of the) input are rotated pairwise, cyclic by rows,
until every pair is numerically orthogonal.  The column norms are then the
singular values and the accumulated rotations give the right singular
vectors.  Real and complex inputs share the same code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, NonFiniteInput, RankOutOfRange, ShapeError

ORTHO_TOL = 1e-15
MAX_SWEEPS = 60
# squared column norm (after scaling to max |entry| = 1) treated as a zero column
NEGLIGIBLE = 1e-280

__all__ = [
    "SvdFactors",
    "LowRankApprox",
    "as_matrix",
    "svd",
    "reconstruct",
    "truncate",
    "numerical_rank",
    "spectral_norm",
    "frobenius_norm",
]


def as_matrix(A) -> np.ndarray:
    """Validate ``A`` as a finite 2-D array of float64 or complex128."""
    A = np.asarray(A)
    if A.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got an array with ndim={A.ndim}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ShapeError(f"matrix must have at least one row and column, got {A.shape}")
    if np.iscomplexobj(A):
        A = A.astype(np.complex128, copy=False)
    else:
        A = A.astype(np.float64, copy=False)
    if not np.all(np.isfinite(A)):
        raise NonFiniteInput("matrix contains NaN or Inf entries")
    return A


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Thin SVD ``A = U diag(sigma) V^H`` with ``p = min(m, n)`` columns."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (self.U.shape[0], self.V.shape[0])

    @property
    def p(self) -> int:
        return self.sigma.shape[0]

    def __iter__(self):
        return iter((self.U, self.sigma, self.V))


@dataclass(frozen=True, eq=False)
class LowRankApprox:
    k: int
    approx: np.ndarray
    discarded_sigma: np.ndarray

    @property
    def spectral_error(self) -> float:
        """Spectral-norm distance to the original matrix (the first discarded value)."""
        return float(self.discarded_sigma[0]) if self.discarded_sigma.size else 0.0

    @property
    def frobenius_error(self) -> float:
        return float(math.sqrt(np.sum(self.discarded_sigma**2)))


def _jacobi_sweeps(X: np.ndarray, Vt: np.ndarray) -> None:
    """Orthogonalise the rows of ``X`` in place, applying the same rotations to ``Vt``.

    Rows of ``X`` hold the columns of the matrix being decomposed, so each
    column is contiguous in memory.
    """
    n = X.shape[0]
    vdot = np.vdot
    is_complex = np.iscomplexobj(X)
    for _ in range(MAX_SWEEPS):
        rotated = False
        for i in range(n - 1):
            xi = X[i]
            for j in range(i + 1, n):
                xj = X[j]
                g = vdot(xi, xj)
                ag = abs(g)
                if ag == 0.0:
                    continue
                a = vdot(xi, xi).real
                b = vdot(xj, xj).real
                if a <= NEGLIGIBLE or b <= NEGLIGIBLE:
                    continue
                if ag <= ORTHO_TOL * math.sqrt(a) * math.sqrt(b):
                    continue
                zeta = (b - a) / (2.0 * ag)
                if abs(zeta) > 1e150:
                    t = 0.5 / zeta
                else:
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                if s == 0.0:
                    # rotation underflows to the identity (norms far apart or subnormal)
                    continue
                rotated = True
                # rotate the phase of column j so that x_i^H x_j is real and positive
                phase = g.conjugate() / ag if is_complex else math.copysign(1.0, g)
                bj = phase * xj
                X[i], X[j] = c * xi - s * bj, s * xi + c * bj
                vi, vj = Vt[i], Vt[j] * phase
                Vt[i], Vt[j] = c * vi - s * vj, s * vi + c * vj
                xi = X[i]
        if not rotated:
            return
    raise ConvergenceFailure(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps")


def _complete_basis(Q: np.ndarray, missing: np.ndarray) -> None:
    """Fill columns ``missing`` of ``Q`` with unit vectors orthogonal to the rest."""
    m = Q.shape[0]
    keep = np.ones(Q.shape[1], dtype=bool)
    keep[missing] = False
    basis = [Q[:, c] for c in np.flatnonzero(keep)]
    candidates = iter(range(m))
    for col in missing:
        for e in candidates:
            v = np.zeros(m, dtype=Q.dtype)
            v[e] = 1.0
            for _ in range(2):
                for q in basis:
                    v = v - np.vdot(q, v) * q
            nrm = np.linalg.norm(v)
            if nrm > 0.5:
                v = v / nrm
                break
        else:  # pragma: no cover - m orthonormal candidates always suffice
            raise ConvergenceFailure("could not complete an orthonormal basis")
        Q[:, col] = v
        basis.append(v)


def _fix_signs(U: np.ndarray, V: np.ndarray) -> None:
    """Make the largest-magnitude entry of every u_i real and positive."""
    for c in range(U.shape[1]):
        mags = np.abs(U[:, c])
        r = int(np.argmax(mags))  # first maximum, so ties go to the lowest row
        if mags[r] == 0.0:
            continue
        phase = np.conj(U[r, c]) / mags[r]
        U[:, c] *= phase
        V[:, c] *= phase
        if np.iscomplexobj(U):
            U[r, c] = U[r, c].real


def svd(A) -> SvdFactors:
    """Thin singular value decomposition of a dense real or complex matrix.

    The result is deterministic: rotations follow a fixed cyclic order,
    singular values are stably sorted in decreasing order, and each pair
    ``(u_i, v_i)`` is phased so that the largest entry of ``u_i`` is positive.

    >>> f = svd([[0.0, 2.0], [1.0, 0.0]])
    >>> f.sigma.tolist()
    [2.0, 1.0]
    """
    A = as_matrix(A)
    m, n = A.shape
    transposed = m < n
    B = A.conj().T if transposed else A
    rows, cols = B.shape

    # scaling keeps squared column norms away from overflow and underflow
    scale = float(np.abs(B).max())
    if scale == 0.0:
        scale = 1.0
    X = np.array(B.T, order="C", copy=True) / scale
    Vt = np.eye(cols, dtype=B.dtype)
    _jacobi_sweeps(X, Vt)

    sigma = np.linalg.norm(X, axis=1)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    X = X[order]
    V = np.ascontiguousarray(Vt[order].T)

    U = np.zeros((rows, cols), dtype=B.dtype)
    cutoff = sigma[0] * max(rows, cols) * np.finfo(float).eps if sigma[0] > 0 else 0.0
    good = sigma > cutoff
    U[:, good] = X[good].T / sigma[good]
    if not np.all(good):
        _complete_basis(U, np.flatnonzero(~good))
    sigma = sigma * scale

    if transposed:
        U, V = V, U
    U = np.array(U, copy=True)
    V = np.array(V, copy=True)
    _fix_signs(U, V)
    return SvdFactors(U, sigma, V)


def _check_factors(f: SvdFactors) -> None:
    U, sigma, V = f
    if U.ndim != 2 or V.ndim != 2 or sigma.ndim != 1:
        raise ShapeError("factors must be U (m x p), sigma (p,), V (n x p)")
    if U.shape[1] != sigma.shape[0] or V.shape[1] != sigma.shape[0]:
        raise ShapeError(
            f"inconsistent factor shapes U{U.shape}, sigma{sigma.shape}, V{V.shape}"
        )


def reconstruct(f: SvdFactors) -> np.ndarray:
    """Sum of rank-one terms ``sigma_i u_i v_i^H``."""
    _check_factors(f)
    U, sigma, V = f
    return (U * sigma) @ V.conj().T


def truncate(f: SvdFactors, k: int) -> LowRankApprox:
    """Keep the ``k`` leading terms of the expansion; ``k = 0`` gives the zero matrix."""
    _check_factors(f)
    p = f.p
    if not 0 <= k <= p:
        raise RankOutOfRange(f"k = {k} outside [0, {p}]")
    U, sigma, V = f
    approx = (U[:, :k] * sigma[:k]) @ V[:, :k].conj().T
    return LowRankApprox(k, approx, sigma[k:].copy())


def numerical_rank(f: SvdFactors, tol: float | str | None = "default") -> int:
    """Count singular values strictly above ``tol``.

    The default threshold is ``max(m, n) * eps * sigma_1``.
    """
    sigma = f.sigma
    if tol is None or tol == "default":
        if sigma.size == 0 or sigma[0] == 0:
            return 0
        tol = max(f.shape) * np.finfo(float).eps * sigma[0]
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return int(np.count_nonzero(sigma > tol))


def spectral_norm(A) -> float:
    return float(svd(A).sigma[0])


def frobenius_norm(A) -> float:
    return float(np.linalg.norm(as_matrix(A)))
