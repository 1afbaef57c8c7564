"""
Random generating vectors
=========================

A uniformly random k-tuple of subsets of {1..1000} generates the whole
Boolean lattice surprisingly often once k is a few times the minimum of
13. This script estimates the probability for several k and plots it.
"""

# %%
# Monte Carlo estimate
# --------------------

import numpy as np
import matplotlib.pyplot as plt

from boolgen import sample_generating_vectors

n = 1000
ks = [12, 20, 30, 40, 45, 50, 55, 60, 70, 80]
ratios = []
for k in ks:
    report = sample_generating_vectors(n, k, trials=300, seed=0)
    ratios.append(report.ratio)
    print(report.to_line())

# %%
# Below k = 13 no vector can generate, whatever the draw. The transition
# is fairly sharp: around k = 50 a bit more than half of the draws
# generate, and by k = 80 almost all of them do.

fig, ax = plt.subplots(figsize=(6, 3.5))
ax.plot(ks, ratios, "o-")
ax.axvline(13, color="grey", ls=":", label="minimum size")
ax.set_xlabel("k")
ax.set_ylabel("fraction generating")
ax.set_ylim(-0.02, 1.02)
ax.legend()
fig.tight_layout()
fig.savefig("random_generating_vectors.png", dpi=100)

# %%
# Binomial error bars
# -------------------
#
# With T trials the standard error of a ratio r is sqrt(r (1 - r) / T).

se = np.sqrt(np.array(ratios) * (1 - np.array(ratios)) / 300)
for k, r, s in zip(ks, ratios, se):
    print(f"k={k:2d}  {r:.3f} +- {s:.3f}")
