"""Power-law fits and Richardson extrapolation for asymptotic constants."""

from __future__ import annotations

import numpy as np


def power_law_fit(x, y):
    """Least-squares fit ``y ~ C x^p`` on a log-log scale.

    Returns ``(p, C, residuals)`` where the residuals are in log space.
    """
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.abs(np.asarray(y, dtype=float)))
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    return float(coef[0]), float(np.exp(coef[1])), ly - A @ coef


def richardson(x, y, rates):
    """Extrapolate ``y(x) = C + sum_m c_m x^rates[m]`` to ``x -> 0``.

    With ``len(rates) + 1`` samples the system is solved exactly (classical
    Richardson elimination); with more samples it is solved in the
    least-squares sense.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < len(rates) + 1:
        raise ValueError(f"need at least {len(rates) + 1} samples for {len(rates)} rates")
    # scale columns to keep the system well conditioned
    cols = [np.ones_like(x)] + [(x / x.max()) ** p for p in rates]
    A = np.vstack(cols).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0])


def correction_rates(k: int):
    """Relative correction exponents for a spectral zero of order ``2k``.

    The leading term is ``s^-(2k-1)/(2k)``; corrections come from the
    ``O(s^(1/k))`` Puiseux terms that survive the odd-power cancellation and
    from the bounded part of the residue sum, ``s^((2k-1)/(2k))`` relative.
    """
    cands = sorted({1.0 / k, (2 * k - 1) / (2.0 * k), 2.0 / k})
    return cands[:2]
