"""
Singular values and low-rank truncation
=======================================

Decompose a small matrix, look at the rank-one pieces it is built from and
check that dropping the trailing terms costs exactly the first discarded
singular value in the spectral norm.
"""

# %%
import numpy as np

from svdkit import numerical_rank, reconstruct, spectral_norm, svd, truncate

rng = np.random.default_rng(0)
A = rng.standard_normal((6, 4))
f = svd(A)
print("singular values:", np.round(f.sigma, 4))
print("reconstruction residual:", np.linalg.norm(A - reconstruct(f)))

# %%
# Each truncation keeps the k leading terms sigma_i u_i v_i^T.  The spectral
# distance to A equals sigma_{k+1}.
for k in range(f.p + 1):
    approx = truncate(f, k)
    actual = spectral_norm(A - approx.approx) if k < f.p else 0.0
    print(f"k={k}: |A - A_k|_2 = {actual:.6f}, predicted {approx.spectral_error:.6f}")

# %%
# A rank-2 matrix with a little noise: the numerical rank depends on the
# threshold we are willing to call zero.
B = rng.standard_normal((8, 2)) @ rng.standard_normal((2, 5))
fb = svd(B + 1e-9 * rng.standard_normal(B.shape))
print("default threshold rank:", numerical_rank(fb))
print("rank at tol 1e-6:", numerical_rank(fb, tol=1e-6))

# %%
# Complex input goes through the same code path.
Z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
print("complex singular values:", np.round(svd(Z).sigma, 4))
