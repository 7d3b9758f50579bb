# %% [markdown]
# # Saturating the Mandelstam-Tamm bound
#
# For a time-independent H the time to go from psi to phi is at least
# `arccos|<psi|phi>| / Delta H`.  `build_h_opt` returns the generator that
# rotates psi straight into phi inside their common plane.

# %%
import numpy as np

from qsle import (build_h_opt, evolve_dense, evolve_opt, first_passage_time,
                  haar_random_state, inner_product, qsl_bound, variance)
from qsle.qsl import scan_step

psi = haar_random_state((2, 2), 1)
phi = haar_random_state((2, 2), 2)
omega = 1.0
h = build_h_opt(psi, phi, omega)

print("Delta H       :", variance(h, psi))
print("spectrum      :", np.round(np.linalg.eigvalsh(h.dense().matrix), 12))
t_star = qsl_bound(psi, phi, variance(h, psi))
print("bound         :", t_star)
print("fidelity there:", abs(inner_product(phi, evolve_opt(h, t_star))) ** 2)

# %% [markdown]
# A generic Hamiltonian with the same spread is slower.  Pick a random H,
# let it carry psi somewhere, and compare the first-passage time with the
# bound.

# %%
rng = np.random.default_rng(4)
z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
H = (z + z.conj().T) / 2
dh = variance(H, psi)
target = evolve_dense(H, psi, 1.5 / dh)
t_fp = first_passage_time(H, psi, target, 1 - 1e-6, t_max=1.5 / dh + scan_step(dh))
print(f"first passage {t_fp * dh:.4f} / dH  vs  bound {qsl_bound(psi, target, dh) * dh:.4f} / dH")

# %% [markdown]
# Fidelity with phi along the optimal path is cos^2(omega t), reaching 1
# exactly at the bound.

# %%
ts = np.linspace(0, 2 * t_star, 9)
print(np.round([abs(inner_product(phi, evolve_opt(h, t))) ** 2 for t in ts], 6))
