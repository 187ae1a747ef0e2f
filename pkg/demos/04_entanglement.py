"""
Schmidt decomposition and entanglement entropy
==============================================

The coefficient matrix of a bipartite pure state has singular values equal
to its Schmidt coefficients; their squares give the entanglement entropy.
"""

# %%
import math

import numpy as np

from svdkit.entangle import entropy, is_entangled, max_entropy, schmidt, validate_state

states = {
    "product |00>": np.diag([1.0, 0.0]),
    "Bell": np.eye(2) / math.sqrt(2),
    "partial": np.diag([math.sqrt(0.9), math.sqrt(0.1)]),
}
for name, C in states.items():
    spec = schmidt(validate_state(C))
    print(f"{name:>13}: s = {np.round(spec.coefficients, 4)}, S = {entropy(spec):.6f}, entangled {is_entangled(spec)}")
print("ln 2 =", math.log(2))

# %%
# Local unitaries do not change the entropy.
rng = np.random.default_rng(1)
C = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
C /= np.linalg.norm(C)
W, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
before = entropy(schmidt(validate_state(C)))
after = entropy(schmidt(validate_state(W @ C)))
print(f"random 3x4 state: {before:.12f} -> {after:.12f} (max {max_entropy(3, 4):.4f})")
