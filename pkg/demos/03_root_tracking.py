# %% [markdown]
# Roots of the scaled spectral density as r -> 1 for the binomial family.
# All 2n roots collapse on -1 like (1 - r)^(1/2n).

# %%
import numpy as np

from gafzeros import binomial_covariance, predicted_root, track_branches
from gafzeros.puiseux import branch_errors

n = 2
s = np.logspace(-1, -6, 11)
track = track_branches(binomial_covariance(n), 1 - s)
print("distance to -1 per branch:")
print(np.round(np.abs(track.branches + 1), 5))

# %%
# two-term fractional-power prediction vs the tracked roots
for j in range(2 * n):
    print(j, predicted_root(n, j, 1 - 1e-6))

for n in (2, 3, 4):
    err = branch_errors(n, 1 - np.logspace(-3, -6, 7))
    slope = np.polyfit(np.log(np.logspace(-3, -6, 7)), np.log(err), 1)[0]
    print(f"n={n}: error slope {slope:.3f}, lower bound {3 / (2 * n):.3f}")
