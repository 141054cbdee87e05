"""Shared helpers for the test-suite: random valid covariances and oracles."""

import mpmath
import numpy as np

from gafzeros import Covariance


def random_taps(rng, n, complex_taps=True):
    t = rng.standard_normal(n + 1)
    if complex_taps:
        t = t + 1j * rng.standard_normal(n + 1)
    return t / np.sqrt(np.sum(np.abs(t) ** 2))


def covariance_from_taps(taps):
    """gamma(k) = sum_j t_j conj(t_{j+k}); PSD by construction."""
    taps = np.asarray(taps, dtype=complex)
    n = len(taps) - 1
    g = [1.0] + [complex(np.sum(taps[: n + 1 - k] * np.conj(taps[k:]))) for k in range(1, n + 1)]
    if all(abs(v.imag) == 0 for v in g[1:]):
        g = [1.0] + [v.real for v in g[1:]]
    return Covariance(tuple(g))


def mp_correction(gamma, r, dps=30):
    """Independent oracle for the correction term.

    The expected count equals (r/2) d/dr of the circle mean of log K(z, z);
    removing the i.i.d. part leaves (r/2) d/dr of the mean of log G_2.
    """
    with mpmath.workdps(dps):
        g = [mpmath.mpc(complex(v)) for v in gamma]

        def g2(rho, th):
            z = rho * mpmath.expj(th)
            G = sum(mpmath.conj(g[k]) * z**k for k in range(1, len(g)))
            return 1 + 2 * mpmath.re(G)

        def mean_log(rho):
            return mpmath.quad(lambda th: mpmath.log(g2(rho, th)), [0, mpmath.pi / 2, mpmath.pi,
                                                                    3 * mpmath.pi / 2, 2 * mpmath.pi]) / (2 * mpmath.pi)

        return float(r / 2 * mpmath.diff(mean_log, mpmath.mpf(r)))
