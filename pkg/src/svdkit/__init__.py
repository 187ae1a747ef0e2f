"""svdkit: the singular value decomposition and a few of its applications.

Submodules
----------
core      one-sided Jacobi SVD, truncation, numerical rank
rollcall  voting-matrix coordinates, predictability and outcome reconstruction
grains    grain populations, minimum-volume ellipsoids, crystal size distributions
entangle  Schmidt spectrum and von Neumann entropy of bipartite pure states
tensor3   unfolding, CP-ALS and HOSVD for order-3 tensors
"""

from . import core, entangle, grains, rollcall, tensor3
from .core import LowRankApprox, SvdFactors, numerical_rank, reconstruct, spectral_norm, svd, truncate
from .errors import SvdkitError

__version__ = "0.1.0"

__all__ = [
    "core",
    "entangle",
    "grains",
    "rollcall",
    "tensor3",
    "SvdFactors",
    "LowRankApprox",
    "SvdkitError",
    "svd",
    "reconstruct",
    "truncate",
    "numerical_rank",
    "spectral_norm",
]
