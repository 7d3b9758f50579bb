# %% [markdown]
# # Minimal time versus E for several frequencies
#
# The library only emits data; plotting is left to the reader.  The same
# table comes out of `qsle figure --omega 0.5 1 2`.

# %%
import numpy as np

from qsle import figure_data
from qsle.enttime import format_csv

rows = figure_data([0.5, 1.0, 2.0], np.linspace(0, 1, 101))
print(format_csv(rows[::25]))

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    for w in (0.5, 1.0, 2.0):
        sel = rows[rows[:, 1] == w]
        plt.plot(sel[:, 0], sel[:, 2], label=f"omega = {w}")
    plt.xlabel("E")
    plt.ylabel("tau")
    plt.legend()
    plt.savefig("figure_tau_vs_E.png", dpi=120)
