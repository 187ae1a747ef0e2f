"""Order-3 tensors: unfolding, CP via alternating least squares, and HOSVD.

Tensors are plain ``(n1, n2, n3)`` numpy arrays.  The mode-``d`` unfolding
puts index ``i_d`` on the rows; the remaining two indices form the columns
with the smaller-numbered mode varying fastest, e.g. for mode 1 the column
of ``(i, j, k)`` is ``j + n2 * k`` (0-based).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import _complete_basis, as_matrix, svd
from .errors import InvalidMode, NonFiniteInput, RankOutOfRange, ShapeError

EPS = 1e-300


def as_tensor(T) -> np.ndarray:
    T = np.asarray(T, dtype=np.float64)
    if T.ndim != 3 or min(T.shape) < 1:
        raise ShapeError(f"expected a nonempty order-3 array, got shape {T.shape}")
    if not np.all(np.isfinite(T)):
        raise NonFiniteInput("tensor contains NaN or Inf entries")
    return T


def _axis(mode: int) -> int:
    if mode not in (1, 2, 3):
        raise InvalidMode(f"mode must be 1, 2 or 3, got {mode!r}")
    return mode - 1


def unfold(T, mode: int) -> np.ndarray:
    ax = _axis(mode)
    T = as_tensor(T)
    return np.moveaxis(T, ax, 0).reshape(T.shape[ax], -1, order="F")


def fold(M, mode: int, dims) -> np.ndarray:
    ax = _axis(mode)
    M = as_matrix(M)
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3:
        raise ShapeError(f"dims must have three entries, got {dims}")
    rest = [d for i, d in enumerate(dims) if i != ax]
    if M.shape != (dims[ax], rest[0] * rest[1]):
        raise ShapeError(f"matrix of shape {M.shape} cannot be folded into {dims} along mode {mode}")
    return np.moveaxis(M.reshape([dims[ax], *rest], order="F"), 0, ax).astype(np.float64)


def outer3(x, y, z) -> np.ndarray:
    x, y, z = (np.asarray(v, dtype=np.float64).ravel() for v in (x, y, z))
    if min(x.size, y.size, z.size) == 0:
        raise ShapeError("outer3 needs nonempty vectors")
    return np.einsum("i,j,k->ijk", x, y, z)


def rank_bound(n1: int, n2: int, n3: int) -> int:
    """Upper bound on the rank of an n1 x n2 x n3 tensor.

    ``floor(3n/2)`` for n x n x 2 shapes (in any axis order), otherwise
    ``min(n1 n2, n1 n3, n2 n3)``.  The bound is loose; the true maximal rank
    is usually far lower and determining the rank of a given tensor is NP-hard.
    """
    dims = [int(n1), int(n2), int(n3)]
    if min(dims) < 1:
        raise ValueError("dimensions must be positive")
    if 2 in dims:
        dims.remove(2)
        if dims[0] == dims[1]:
            return 3 * dims[0] // 2
    return min(n1 * n2, n1 * n3, n2 * n3)


def fit(T, T_hat) -> float:
    """Relative Frobenius error ``||T - T_hat|| / ||T||``."""
    T, T_hat = as_tensor(T), as_tensor(T_hat)
    if T.shape != T_hat.shape:
        raise ShapeError(f"shape mismatch {T.shape} vs {T_hat.shape}")
    return float(np.linalg.norm(T - T_hat) / max(np.linalg.norm(T), EPS))


@dataclass(frozen=True, eq=False)
class CpModel:
    """``sum_i weights[i] * (U[:, i] o V[:, i] o W[:, i])`` with unit-norm columns."""

    weights: np.ndarray
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray
    converged: bool = True
    iterations: int = 0
    history: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)

    @property
    def rank(self) -> int:
        return self.weights.size

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.U.shape[0], self.V.shape[0], self.W.shape[0])


@dataclass(frozen=True, eq=False)
class TuckerModel:
    core: np.ndarray
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray
    mode_sigma: tuple = field(default=(), repr=False)

    @property
    def multirank(self) -> tuple[int, int, int]:
        return self.core.shape

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.U.shape[0], self.V.shape[0], self.W.shape[0])


def khatri_rao(B, C) -> np.ndarray:
    """Column-wise Kronecker product; row ``k * nB + j`` holds ``C[k] * B[j]``.

    The row order matches the column order of :func:`unfold`.
    """
    r = B.shape[1]
    return np.einsum("kr,jr->kjr", C, B).reshape(-1, r)


def _init_factor(T, mode: int, r: int, rng) -> np.ndarray:
    U = svd(unfold(T, mode)).U[:, :r]
    if U.shape[1] < r:
        extra = rng.standard_normal((U.shape[0], r - U.shape[1]))
        U = np.hstack([U, extra / np.linalg.norm(extra, axis=0)])
    return U


def _normalize(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(F, axis=0)
    safe = np.where(norms > 0, norms, 1.0)
    return F / safe, norms


def reconstruct_cp(model: CpModel) -> np.ndarray:
    w, U, V, W = model.weights, model.U, model.V, model.W
    if not (U.shape[1] == V.shape[1] == W.shape[1] == w.size):
        raise ShapeError("CP factor matrices and weights disagree on the rank")
    return np.einsum("r,ir,jr,kr->ijk", w, U, V, W)


def _canonical_cp(weights, U, V, W):
    """Nonnegative weights, signs pushed into W, components sorted by weight."""
    U, V, W = U.copy(), V.copy(), W.copy()
    weights = weights.copy()
    neg = weights < 0
    weights[neg] *= -1
    W[:, neg] *= -1
    for F in (U, V):
        for c in range(F.shape[1]):
            r = int(np.argmax(np.abs(F[:, c])))
            if F[r, c] < 0:
                F[:, c] *= -1
                W[:, c] *= -1
    keys = [(-weights[c], *np.concatenate([U[:, c], V[:, c], W[:, c]])) for c in range(weights.size)]
    order = sorted(range(weights.size), key=lambda c: keys[c])
    return weights[order], U[:, order], V[:, order], W[:, order]


def cp_als(T, r: int, max_iter: int = 500, tol: float = 1e-10, init: str = "hosvd", seed: int = 0) -> CpModel:
    """Rank-``r`` CP decomposition by alternating least squares.

    Factors start from the leading left singular vectors of each unfolding
    (``init="hosvd"``) or from a seeded Gaussian draw (``init="random"``).
    Iteration stops when the relative error changes by less than ``tol`` or
    after ``max_iter`` sweeps; a model is returned either way and
    ``converged`` tells which happened.  ``history`` holds the relative error
    after every sweep.
    """
    T = as_tensor(T)
    n1, n2, n3 = T.shape
    if not 1 <= r <= min(n1 * n2, n1 * n3, n2 * n3):
        raise RankOutOfRange(f"r = {r} outside [1, {min(n1 * n2, n1 * n3, n2 * n3)}]")
    rng = np.random.default_rng(seed)
    if init == "hosvd":
        factors = [_init_factor(T, mode, r, rng) for mode in (1, 2, 3)]
    elif init == "random":
        factors = [_normalize(rng.standard_normal((n, r)))[0] for n in T.shape]
    else:
        raise ValueError(f"unknown init {init!r}")

    norm_T = np.linalg.norm(T)
    if norm_T == 0:
        return CpModel(np.zeros(r), *factors, converged=True, iterations=0)

    unfolded = [unfold(T, mode) for mode in (1, 2, 3)]
    weights = np.ones(r)
    history = []
    converged = False
    prev = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        for d in range(3):
            others = [factors[i] for i in range(3) if i != d]
            gram = (others[0].T @ others[0]) * (others[1].T @ others[1])
            mttkrp = unfolded[d] @ khatri_rao(others[0], others[1])
            F = np.linalg.lstsq(gram, mttkrp.T, rcond=None)[0].T
            factors[d], weights = _normalize(F)
        approx = np.einsum("r,ir,jr,kr->ijk", weights, *factors)
        err = np.linalg.norm(T - approx) / norm_T
        history.append(err)
        if abs(prev - err) < tol:
            converged = True
            break
        prev = err

    weights, U, V, W = _canonical_cp(weights, *factors)
    return CpModel(weights, U, V, W, converged=converged, iterations=it, history=np.array(history))


def mode_product(T, M, mode: int) -> np.ndarray:
    """Multiply every mode-``mode`` fiber of ``T`` by the matrix ``M``."""
    ax = _axis(mode)
    out = np.tensordot(M, T, axes=(1, ax))
    return np.moveaxis(out, 0, ax)


def hosvd(T, multirank=None) -> TuckerModel:
    """Truncated higher-order SVD.

    Each factor holds the leading left singular vectors of the corresponding
    unfolding and the core is ``T`` multiplied by their transposes.  With the
    full multirank the reconstruction is exact.
    """
    T = as_tensor(T)
    if multirank is None:
        multirank = T.shape
    multirank = tuple(int(m) for m in multirank)
    if len(multirank) != 3 or any(not 1 <= m <= n for m, n in zip(multirank, T.shape)):
        raise ShapeError(f"multirank {multirank} incompatible with tensor shape {T.shape}")
    factors = []
    spectra = []
    for mode, m in zip((1, 2, 3), multirank):
        f = svd(unfold(T, mode))
        F = f.U[:, :m]
        if F.shape[1] < m:
            # mode size exceeds the product of the other two; any orthonormal completion works
            F = np.hstack([F, np.zeros((F.shape[0], m - F.shape[1]))])
            _complete_basis(F, np.arange(f.p, m))
        factors.append(F)
        spectra.append(f.sigma)
    core = T
    for mode, F in zip((1, 2, 3), factors):
        core = mode_product(core, F.T, mode)
    return TuckerModel(core, *factors, mode_sigma=tuple(spectra))


def reconstruct_tucker(model: TuckerModel) -> np.ndarray:
    core = np.asarray(model.core, dtype=float)
    if core.shape != (model.U.shape[1], model.V.shape[1], model.W.shape[1]):
        raise ShapeError(f"core shape {core.shape} does not match factor column counts")
    out = core
    for mode, F in zip((1, 2, 3), (model.U, model.V, model.W)):
        out = mode_product(out, F, mode)
    return out
