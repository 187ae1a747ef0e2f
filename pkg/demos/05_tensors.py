"""
Order-3 tensors: CP and HOSVD
=============================

Recover a planted rank-2 CP model with alternating least squares and compare
with the higher-order SVD, whose truncation plays the role of low-rank
approximation for tensors.
"""

# %%
import numpy as np

from svdkit.tensor3 import cp_als, fit, hosvd, outer3, rank_bound, reconstruct_cp, reconstruct_tucker, unfold

rng = np.random.default_rng(2)
u, v, w = (np.linalg.qr(rng.standard_normal((n, 2)))[0] for n in (4, 5, 3))
T = 5 * outer3(u[:, 0], v[:, 0], w[:, 0]) + 3 * outer3(u[:, 1], v[:, 1], w[:, 1])

model = cp_als(T, 2)
print("CP weights:", np.round(model.weights, 8), "fit:", fit(T, reconstruct_cp(model)))

# %%
# Every unfolding of T has rank 2, so HOSVD with multirank (2, 2, 2) is exact.
print("unfolding ranks:", [int(np.linalg.matrix_rank(unfold(T, d))) for d in (1, 2, 3)])
tucker = hosvd(T, (2, 2, 2))
print("Tucker fit:", fit(T, reconstruct_tucker(tucker)))

# %%
# A random tensor has no such structure: the error only vanishes at full multirank.
X = rng.standard_normal((4, 5, 3))
for ranks in [(1, 1, 1), (2, 2, 2), (3, 3, 3), (4, 5, 3)]:
    print(ranks, f"relative error {fit(X, reconstruct_tucker(hosvd(X, ranks))):.3e}")

# %%
# Upper bounds on the tensor rank of generic n1 x n2 x n3 tensors.
print("rank bounds:", rank_bound(9, 9, 9), rank_bound(3, 3, 2))
