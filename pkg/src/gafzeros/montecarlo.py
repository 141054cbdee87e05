"""Monte Carlo zero counts for truncated random power series.

Coefficients are drawn through the moving-average representation
``xi_k = sum_j taps[j] zeta_{k-j}`` with i.i.d. standard complex Gaussians.
Each trial owns an independent Philox stream keyed by ``(seed, trial)``, so a
report is a pure function of the covariance and the configuration.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .covariance import Covariance, MAFilter, spectral_factorize
from .errors import DomainError, ValidationError, ZeroOnCircle
from .rootfind import poly_roots

log = logging.getLogger(__name__)

MIN_TRUNCATION = 50
MAX_RADIUS = 0.95
TAIL_TARGET = 1e-6
ON_CIRCLE = 1e-12
MAX_RESAMPLE = 16


def tail_bound(order: int, r: float, truncation: int) -> float:
    """Bound on ``E|sum_{k>N} xi_k z^k|^2`` on ``|z| = r``."""
    return r ** (2 * truncation + 2) * (order + 1) / (1.0 - r * r)


def default_truncation(order: int, r: float) -> int:
    """Smallest degree ``N >= 50`` whose tail bound is below ``1e-6``."""
    n = MIN_TRUNCATION
    while tail_bound(order, r, n) >= TAIL_TARGET:
        n += 1
    return n


@dataclass(frozen=True)
class McConfig:
    r: float
    trials: int
    seed: int
    truncation: int | None = None
    diagnostics: bool = False

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise DomainError(f"r must lie in (0, 1), got {self.r}")
        if self.r > MAX_RADIUS:
            raise DomainError(f"Monte Carlo is capped at r <= {MAX_RADIUS}")
        if self.trials < 1:
            raise ValidationError("trials must be at least 1")
        if self.truncation is not None and self.truncation < MIN_TRUNCATION:
            raise ValidationError(f"truncation must be at least {MIN_TRUNCATION}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class MonteCarloReport:
    mean: float
    stderr: float
    trials: int
    truncation: int
    seed: int
    tail_bound: float
    r: float
    degenerate: bool = False  # single trial: stderr is not an estimate
    resampled: int = 0
    winding_mismatches: int | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _rng(seed: int, stream) -> np.random.Generator:
    key = (stream,) if isinstance(stream, int) else tuple(stream)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def standard_complex_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    """Box-Muller in polar form; real and imaginary parts have variance 1/2."""
    u1 = rng.random(size)
    u2 = rng.random(size)
    return np.sqrt(-np.log1p(-u1)) * np.exp(2j * np.pi * u2)


def sample_coefficients(filt: MAFilter, count: int, seed: int, stream=0) -> np.ndarray:
    """``count`` consecutive coefficients of the MA process, deterministically."""
    if count < 1:
        raise ValidationError("count must be at least 1")
    taps = np.asarray(filt.taps, dtype=complex)
    zeta = standard_complex_normals(_rng(seed, stream), count + len(taps) - 1)
    return np.convolve(zeta, taps, mode="valid")


def winding_number(coeffs, r: float) -> int:
    """Argument-principle count of zeros of ``sum c_k z^k`` inside ``|z| < r``.

    ``f`` is sampled on the circle by FFT (aliasing folds coefficients modulo
    the node count, which is exact); nodes double until no phase step
    exceeds ``pi/2``.
    """
    c = np.asarray(coeffs, dtype=complex) * r ** np.arange(len(coeffs))
    m = max(256, 1 << int(math.ceil(math.log2(4 * len(c)))))
    while True:
        folded = np.zeros(m, dtype=complex)
        np.add.at(folded, np.arange(len(c)) % m, c)
        vals = np.fft.ifft(folded) * m
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(steps)) < np.pi / 2 or m >= 2**22:
            return int(round(steps.sum() / (2 * np.pi)))
        m *= 2


def count_zeros_in_disk(coeffs, r: float, diagnostics: dict | None = None) -> int:
    """Number of roots of ``sum coeffs[k] z^k`` with ``|z| < r``.

    Raises :class:`ZeroOnCircle` if a root is within ``1e-12`` of ``|z| = r``.
    With a ``diagnostics`` dict the root count is compared with the winding
    number and the result stored under ``"winding"``.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    c = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(c)[0]
    if len(nz) == 0 or nz[-1] == 0:
        count = 0
    else:
        mods = np.abs(poly_roots(c[: nz[-1] + 1]).roots)
        if np.any(np.abs(mods - r) < ON_CIRCLE):
            raise ZeroOnCircle(f"a zero lies on |z| = {r}")
        count = int(np.sum(mods < r))
    if diagnostics is not None:
        diagnostics["winding"] = winding_number(c, r)
    return count


def empirical_expected_zeros(cov: Covariance, config: McConfig) -> MonteCarloReport:
    """Mean and standard error of ``N_f(r)`` over independent trials."""
    filt = spectral_factorize(cov)
    order = cov.trimmed().order
    N = config.truncation or default_truncation(order, config.r)
    counts = np.empty(config.trials)
    resampled = 0
    mismatches = 0 if config.diagnostics else None
    for t in range(config.trials):
        for attempt in range(MAX_RESAMPLE):
            stream = (t,) if attempt == 0 else (t, attempt)
            xi = sample_coefficients(filt, N + 1, config.seed, stream)
            diag = {} if config.diagnostics else None
            try:
                counts[t] = count_zeros_in_disk(xi, config.r, diag)
                break
            except ZeroOnCircle:
                resampled += 1
                log.warning("zero on circle: seed=%d trial=%d attempt=%d", config.seed, t, attempt)
        else:
            raise ZeroOnCircle(f"trial {t} kept producing zeros on the circle")
        if diag is not None and diag["winding"] != counts[t]:
            mismatches += 1
            log.warning(
                "root count %d != winding %d (seed=%d trial=%d)",
                counts[t], diag["winding"], config.seed, t,
            )
    mean = float(np.sum(counts) / config.trials)
    if config.trials > 1:
        stderr = float(np.std(counts, ddof=1) / math.sqrt(config.trials))
    else:
        stderr = 0.0
    return MonteCarloReport(
        mean=mean,
        stderr=stderr,
        trials=config.trials,
        truncation=N,
        seed=config.seed,
        tail_bound=tail_bound(order, config.r, N),
        r=config.r,
        degenerate=config.trials == 1,
        resampled=resampled,
        winding_mismatches=mismatches,
    )
