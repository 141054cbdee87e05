"""Finitely dependent covariance models and their spectral polynomials.

A stationary, centred, unit-variance complex Gaussian sequence with
``E[xi_k conj(xi_l)] = gamma(l - k)`` and ``gamma(k) = 0`` for ``|k| > n`` is
described here by the tuple ``gamma(0), ..., gamma(n)``; negative lags are
implied through ``gamma(-k) = conj(gamma(k))``.

The scaled spectral density on the unit circle is the Laurent polynomial

    Theta(r, z) = 1 + sum_{k=1}^n [conj(gamma(k)) r^k z^k + gamma(k) r^k z^-k]

and its polynomial lift ``q(r, z) = z^n Theta(r, z)`` has degree ``2n``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, FactorizationError, NotPositiveDefinite, ValidationError

TOL_REGION = 1e-12
PSD_GRID = 4096
PSD_TOL = -1e-10


@dataclass(frozen=True)
class Covariance:
    """Covariance sequence ``gamma(0..n)`` of an n-dependent process.

    Only non-negative lags are stored. ``gamma[0]`` must equal 1.
    """

    gamma: tuple

    def __post_init__(self):
        g = tuple(complex(v) for v in self.gamma)
        if len(g) == 0:
            raise ValidationError("gamma must contain at least gamma(0)")
        if g[0] != 1:
            raise ValidationError(f"gamma(0) must be exactly 1, got {g[0]}")
        if any(abs(v) > 1 + 1e-15 for v in g[1:]):
            raise NotPositiveDefinite("|gamma(k)| <= 1 is violated")
        object.__setattr__(self, "gamma", g)

    @property
    def order(self) -> int:
        return len(self.gamma) - 1

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.gamma)

    def trimmed(self) -> "Covariance":
        """Drop trailing zero lags so that ``gamma(order) != 0``."""
        g = list(self.gamma)
        while len(g) > 1 and g[-1] == 0:
            g.pop()
        return Covariance(tuple(g))

    def lag(self, k: int) -> complex:
        """``gamma(k)`` for any integer lag, including negative ones."""
        if abs(k) > self.order:
            return 0j
        return self.gamma[k] if k >= 0 else self.gamma[-k].conjugate()

    def spectral_density(self, theta) -> np.ndarray:
        """``Theta(1, e^{i theta})``, real-valued."""
        return spectral_poly(self, 1.0).on_circle(theta)

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.order, "gamma": [[v.real, v.imag] for v in self.gamma]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Covariance":
        data = json.loads(text)
        gamma = [complex(re, im) for re, im in data["gamma"]]
        if len(gamma) != data["n"] + 1:
            raise ValidationError("'n' does not match the length of 'gamma'")
        return cls(tuple(gamma))


class RegionLabel(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY_ELLIPSE = "BoundaryEllipse"
    BOUNDARY_LINE = "BoundaryLine"
    CORNER_DEGENERATE = "CornerDegenerate"
    OUTSIDE = "Outside"


def _ellipse(a: float, b: float) -> float:
    return a * a / 8.0 + (b - 0.25) ** 2 - 1.0 / 16.0


def in_region(a: float, b: float, tol: float = TOL_REGION) -> bool:
    """Membership of ``(a, b)`` in the closed positive-definiteness region."""
    ell = _ellipse(a, b)
    in_p1 = ell <= tol
    in_p2 = ell >= -tol and abs(a) - 0.5 <= b + tol and b <= 1.0 / 6.0 + tol
    return bool(in_p1 or in_p2)


def classify_region(a: float, b: float, tol: float = TOL_REGION) -> RegionLabel:
    """Label ``(a, b)`` by the case split of the 2-dependent asymptotics.

    Equalities are tested to within ``tol``; callers should pass exact
    expressions (e.g. ``2 / 3``) for boundary points.
    """
    if not in_region(a, b, tol):
        return RegionLabel.OUTSIDE
    if abs(abs(a) - 2.0 / 3.0) <= tol and abs(b - 1.0 / 6.0) <= tol:
        return RegionLabel.CORNER_DEGENERATE
    if abs(_ellipse(a, b)) <= tol and b > 1.0 / 6.0:
        return RegionLabel.BOUNDARY_ELLIPSE
    if abs(b - (abs(a) - 0.5)) <= tol and -0.5 - tol <= b < 1.0 / 6.0:
        return RegionLabel.BOUNDARY_LINE
    return RegionLabel.INTERIOR


def two_dependent(a: float, b: float) -> Covariance:
    """The covariance ``gamma = (1, a, b)``; raises if ``(a, b)`` is not PD."""
    if classify_region(a, b) is RegionLabel.OUTSIDE:
        raise NotPositiveDefinite(f"(a, b) = ({a}, {b}) lies outside the PD region")
    return Covariance((1.0, a, b))


def binomial_covariance(n: int) -> Covariance:
    """Most degenerate n-dependent covariance, ``C(2n, n+k) / C(2n, n)``.

    Its spectral density vanishes to order ``2n`` at ``theta = pi``.
    """
    if n < 1:
        raise ValidationError("n must be a positive integer")
    mid = math.comb(2 * n, n)
    return Covariance(tuple(math.comb(2 * n, n + k) / mid for k in range(n + 1)))


def from_gamma(gamma: Sequence[complex]) -> Covariance:
    """Build a covariance from ``gamma(0..n)`` and verify positive semidefiniteness."""
    cov = Covariance(tuple(gamma))
    check_positive_definite(cov)
    return cov


def check_positive_definite(cov: Covariance, grid: int = PSD_GRID, tol: float = PSD_TOL) -> float:
    """Herglotz check: the spectral density must be non-negative on a uniform grid.

    Returns the grid minimum; raises :class:`NotPositiveDefinite` below ``tol``.
    """
    theta = 2 * np.pi * np.arange(grid) / grid
    low = float(cov.spectral_density(theta).min())
    if low < tol:
        raise NotPositiveDefinite(f"spectral density reaches {low:.3e} < {tol:.0e}")
    return low


@dataclass(frozen=True)
class SpectralPoly:
    """Laurent coefficients of ``Theta(r, .)``.

    ``coeffs[i]`` multiplies ``z**(i - n)``; read as ascending polynomial
    coefficients the same array is the lift ``q(r, z) = z^n Theta(r, z)``.
    """

    r: float
    coeffs: np.ndarray

    @property
    def order(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def lift(self) -> np.ndarray:
        return self.coeffs

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.coeffs) / z**self.order

    def on_circle(self, theta) -> np.ndarray:
        """``Theta(r, e^{i theta})``; real by Hermitian symmetry."""
        theta = np.asarray(theta, dtype=float)
        n = self.order
        out = np.full(theta.shape, self.coeffs[n].real)
        for k in range(1, n + 1):
            out += 2.0 * (self.coeffs[n + k] * np.exp(1j * k * theta)).real
        return out


def spectral_poly(cov: Covariance, r: float) -> SpectralPoly:
    if not 0.0 < r <= 1.0:
        raise DomainError(f"r must lie in (0, 1], got {r}")
    n = cov.order
    c = np.zeros(2 * n + 1, dtype=complex)
    c[n] = 1.0
    for k in range(1, n + 1):
        g = cov.gamma[k]
        c[n + k] = g.conjugate() * r**k
        c[n - k] = g * r**k
    return SpectralPoly(float(r), c)


@dataclass(frozen=True)
class MAFilter:
    """Moving-average taps with ``xi_k = sum_j taps[j] zeta_{k-j}``."""

    taps: np.ndarray

    def autocovariance(self) -> np.ndarray:
        """``sum_j taps[j] conj(taps[j+k])`` for ``k = 0..len(taps)-1``."""
        t = self.taps
        return np.array([np.sum(t[: len(t) - k] * np.conj(t[k:])) for k in range(len(t))])

    def round_trip_residual(self, cov: Covariance) -> float:
        acv = self.autocovariance()
        m = max(len(acv), cov.order + 1)
        target = np.array([cov.lag(k) for k in range(m)])
        got = np.zeros(m, dtype=complex)
        got[: len(acv)] = acv
        return float(np.max(np.abs(got - target)))


def spectral_factorize(cov: Covariance) -> MAFilter:
    """Fejer-Riesz factorisation of the spectral density into MA taps.

    One root is taken from every reciprocal-conjugate pair ``{w, 1/conj(w)}``
    of the lift of ``Theta(1, .)``, the one with ``|w| < 1``. Roots on the unit
    circle come in clusters of even multiplicity; each cluster contributes
    half its multiplicity at its refined centre.
    """
    from .rootfind import multiple_root_clusters, poly_roots

    check_positive_definite(cov)
    cov = cov.trimmed()
    n = cov.order
    if n == 0:
        return MAFilter(np.array([1.0 + 0j]))

    lift = spectral_poly(cov, 1.0).lift
    rs = poly_roots(lift)
    chosen = []
    for center, members, mult in multiple_root_clusters(lift, rs.roots):
        if mult == 1:
            if abs(center) < 1.0:
                chosen.append(center)
        elif abs(abs(center) - 1.0) < 1e-7:
            if mult % 2:
                raise FactorizationError(
                    f"odd multiplicity {mult} on the unit circle at {center:.6g}"
                )
            chosen.extend([center / abs(center)] * (mult // 2))
        elif abs(center) < 1.0:
            chosen.extend([center] * mult)
    if len(chosen) != n:
        raise FactorizationError(
            f"selected {len(chosen)} roots for an order-{n} covariance; "
            "unit-circle roots could not be paired"
        )
    # np.poly returns descending coefficients of prod(z - w)
    taps = np.poly(np.array(chosen))[::-1].astype(complex)
    if cov.is_real:
        taps = taps.real.astype(complex)
    taps /= np.sqrt(np.sum(np.abs(taps) ** 2))
    if taps[0] != 0:
        taps *= abs(taps[0]) / taps[0]
    return MAFilter(taps)

