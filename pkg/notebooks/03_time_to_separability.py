# %% [markdown]
# # How long until a state is separable?
#
# Combining the two previous notebooks: the fastest route to an
# m-separable state takes `tau_m = arcsin(sqrt(E_m)) / omega`, with energy
# gap `2 hbar omega`.

# %%
from qsle import (energy_gap, ghz_state, haar_random_state, state_with_entanglement,
                  tau_m, verify_separabilization)

omega = 1e9  # rad/s, so the gap is dE/hbar = 2e9 s^-1
for e in (0.8, 0.6):
    rep = tau_m(state_with_entanglement(e), 2, omega, si=True)
    print(f"E = {rep.E_m:.3f}:  tau = {rep.tau_seconds * 1e9:.3f} ns")
print("gap / hbar =", energy_gap(omega))

# %% [markdown]
# `verify_separabilization` actually runs the evolution: it builds the
# optimal Hamiltonian toward the closest separable state, evolves for
# tau_m, and measures E_m again.

# %%
for psi, label in [(ghz_state(3), "GHZ_3"), (haar_random_state((2, 2, 2), 7), "random")]:
    for m in (2, 3):
        rec = verify_separabilization(psi, m, 1.0)
        print(f"{label:7s} m={m}  omega*tau={rec.tau_internal:.6f}  "
              f"residual E_m={rec.residual_E_m:.1e}  fidelity deficit={rec.fidelity_deficit:.1e}")
