"""
Two-mode analysis of a roll-call record
=======================================

Build a synthetic chamber with two voting blocs, project legislators on the
two leading singular directions and reconstruct bill outcomes from the
rank-2 truncation of the voting matrix.
"""

# %%
import numpy as np

from svdkit.rollcall import Scheme, orient, planted_two_bloc, predictability, project, reconstruct_outcomes

planted = planted_two_bloc(n_legislators=100, n_bills=200, seed=0)
vm = planted.matrix
print("voting matrix:", vm.A.shape, "leading singular values:", np.round(vm.factors.sigma[:4], 2))

# %%
# The first coordinate separates the blocs.  ``orient`` puts party R on the
# positive side so the picture does not depend on an arbitrary sign.
p = orient(project(vm), vm, "R")
for party in ("R", "D"):
    mask = vm.parties == party
    print(f"{party}: mean partisan {p.partisan[mask].mean():+.2f}, mean bipartisan {p.bipartisan[mask].mean():+.2f}")
print("bloc recovered from the sign:", np.mean(np.sign(p.partisan) == planted.bloc))

# %%
# How well does rank 2 explain individual votes?
pred = predictability(vm)
print(f"predictability: min {np.nanmin(pred):.2f}, median {np.nanmedian(pred):.2f}")

# %%
for scheme in Scheme:
    rep = reconstruct_outcomes(vm, scheme)
    print(f"{scheme.value:>16}: {rep.correct_count}/{rep.total} outcomes")
