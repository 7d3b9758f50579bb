# %% [markdown]
# # The hierarchy E_2, ..., E_K
#
# `geometric_entanglement(psi, m)` returns one minus the squared overlap
# with the closest state that factorizes over some partition into m blocks.

# %%
import numpy as np

from qsle import (OptConfig, Partition, bell_state, geometric_entanglement, ghz_state,
                  haar_random_state, oracle_entanglement, w_state)

for name, psi in [("Bell", bell_state()), ("GHZ_3", ghz_state(3)), ("W_3", w_state(3))]:
    for m in range(2, psi.num_subsystems + 1):
        e, best = geometric_entanglement(psi, m)
        print(f"{name:6s} m={m}  E={e:.9f}  closest across {best.partition}")

# %% [markdown]
# W_3 gives E_2 = 1/3 and E_3 = 5/9.  The closest biseparable state cuts
# one qubit off; the closest fully product state is a tilted |000>.
#
# The two oracles certify these numbers independently: an exact SVD for
# bipartitions and a grid search over product states for m = 3.

# %%
w = w_state(3)
print(oracle_entanglement(w, 2), 1 / 3)
print(oracle_entanglement(w, 3), 5 / 9)

# %% [markdown]
# Finer partitions can only lose overlap, so E_m grows with m.

# %%
rng = np.random.default_rng(0)
cfg = OptConfig(restarts=10, seed=1)
gaps = []
for _ in range(50):
    psi = haar_random_state((2, 2, 2, 2), rng)
    es = [geometric_entanglement(psi, m, cfg)[0] for m in (2, 3, 4)]
    gaps.append(np.diff(es))
print("smallest increments E_3-E_2, E_4-E_3:", np.min(gaps, axis=0))

# %% [markdown]
# Non-contiguous blocks are handled directly.  Two Bell pairs on qubits
# (0, 2) and (1, 3) are biseparable, and the optimizer finds that cut.

# %%
from qsle import ProductState, assemble

pair = bell_state().amplitudes
two_pairs = assemble(ProductState.from_vectors(Partition(((0, 2), (1, 3))), [pair, pair], (2, 2, 2, 2)))
e, best = geometric_entanglement(two_pairs, 2)
print(f"E_2 = {e:.3g} across {best.partition}")
