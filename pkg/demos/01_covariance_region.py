# %% [markdown]
# Which (a, b) give a valid 2-dependent covariance gamma = (1, a, b)?
# The spectral density 1 + 2a cos t + 2b cos 2t must stay non-negative.

# %%
import numpy as np

from gafzeros import classify_region, spectral_factorize, two_dependent, binomial_covariance

a = np.linspace(-1, 1, 81)
b = np.linspace(-0.6, 0.6, 49)
labels = np.array([[classify_region(x, y).value for x in a] for y in b])
for name in np.unique(labels):
    print(f"{name:18s} {np.sum(labels == name):5d} grid points")

# %%
# the two corners are the only points where the density has a 4-fold zero
for pt in [(2 / 3, 1 / 6), (-2 / 3, 1 / 6), (0.3, -0.2), (0.0, 0.0)]:
    print(pt, classify_region(*pt).value)

# %%
# every valid covariance is the autocovariance of a moving average filter
filt = spectral_factorize(two_dependent(0.4, 0.1))
print("taps", np.round(filt.taps.real, 6))
print("autocovariance", np.round(filt.autocovariance().real, 12))

# binomial filters are C(n, j) / sqrt(C(2n, n))
print("binomial(3) taps", spectral_factorize(binomial_covariance(3)).taps.real)
