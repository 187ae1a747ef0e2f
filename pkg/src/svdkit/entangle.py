"""Schmidt decomposition and von Neumann entanglement entropy.

A bipartite pure state is represented by its m x n coefficient matrix ``C``
with ``tr(C C^H) = 1``.  The singular values ``s_k`` of ``C`` are the Schmidt
coefficients and the entropy is ``-sum s_k^2 ln s_k^2``.  The density matrix
itself is never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_matrix, svd
from .errors import NotNormalized

TRACE_TOL = 1e-10
# s_k^2 below this is treated as an exact zero (0 ln 0 = 0)
TINY_WEIGHT = 1e-300


@dataclass(frozen=True, eq=False)
class StateMatrix:
    C: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.C.shape


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return (self.left_basis.shape[0], self.right_basis.shape[0])


def trace_norm2(C) -> float:
    """``tr(C C^H)``, i.e. the squared Frobenius norm."""
    C = np.asarray(C)
    return float(np.vdot(C, C).real)


def validate_state(C, normalize: bool = False) -> StateMatrix:
    """Wrap ``C`` as a state, rejecting it unless ``|tr(C C^H) - 1| <= 1e-10``.

    With ``normalize=True`` the matrix is rescaled instead (a zero matrix is
    still rejected).
    """
    C = as_matrix(C).astype(np.complex128)
    tr = trace_norm2(C)
    if normalize and tr > 0:
        C = C / math.sqrt(tr)
        tr = trace_norm2(C)
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotNormalized(tr)
    return StateMatrix(C)


def schmidt(state: StateMatrix) -> SchmidtSpectrum:
    U, s, V = svd(state.C)
    return SchmidtSpectrum(s, U, V)


def entropy(spec: SchmidtSpectrum, base: float = math.e) -> float:
    """Von Neumann entanglement entropy (nats by default)."""
    w = np.asarray(spec.coefficients, dtype=float) ** 2
    w = w[w >= TINY_WEIGHT]
    h = float(-np.sum(w * np.log(w)))
    if h <= 0.0:  # also turns -0.0 into 0.0
        h = 0.0
    return h / math.log(base) if base != math.e else h


def is_entangled(spec: SchmidtSpectrum, tol: float = 1e-12) -> bool:
    """True when at least two Schmidt coefficients exceed ``tol``."""
    return int(np.count_nonzero(np.asarray(spec.coefficients) > tol)) >= 2


def max_entropy(m: int, n: int) -> float:
    if m < 1 or n < 1:
        raise ValueError(f"dimensions must be positive, got ({m}, {n})")
    return math.log(min(m, n))
