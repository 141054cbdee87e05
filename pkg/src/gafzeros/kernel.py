"""Covariance kernel of the random power series and two closed-form models.

With ``G(z) = sum_{k>=1} conj(gamma(k)) z^k`` the kernel is

    K_f(z, w) = (1 + G(z) + conj(G(w))) / (1 - z conj(w)).

The Ornstein-Uhlenbeck and common-shock models are not finitely dependent;
they only serve as quadrature oracles with known correction terms.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .covariance import Covariance
from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class GPoly:
    """``G(z) = sum_{k=1}^n coeffs[k] z^k`` with ``coeffs[0] == 0``."""

    coeffs: np.ndarray

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def derivative(self, z):
        d = np.polynomial.polynomial.polyder(self.coeffs)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), d)

    def g2_diag(self, z):
        """``G_2(z, z) = 1 + 2 Re G(z)``."""
        return 1.0 + 2.0 * self(z).real

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if len(nz) else 0


def g_poly(cov: Covariance) -> GPoly:
    c = np.array([0j] + [g.conjugate() for g in cov.gamma[1:]], dtype=complex)
    return GPoly(c)


def kernel_value(cov: Covariance, z: complex, w: complex) -> complex:
    """``E[f(z) conj(f(w))]`` for ``|z|, |w| < 1``."""
    if abs(z) >= 1 or abs(w) >= 1:
        raise DomainError("the kernel is only defined on the open unit disk")
    G = g_poly(cov)
    g2 = 1.0 + complex(G(z)) + complex(G(w)).conjugate()
    return g2 / (1.0 - z * complex(w).conjugate())


class OracleKind(enum.Enum):
    ORNSTEIN_UHLENBECK = "OrnsteinUhlenbeck"
    COMMON_SHOCK = "CommonShock"


@dataclass(frozen=True)
class OracleModel:
    """Infinite-range covariance with a closed-form correction term.

    ``ORNSTEIN_UHLENBECK``: ``gamma(k) = rho^|k|``.
    ``COMMON_SHOCK``: ``xi_k = sqrt(rho) zeta + sqrt(1 - rho) eta_k``, i.e.
    ``gamma(k) = rho`` for every ``k != 0``.
    """

    kind: OracleKind
    rho: float

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValidationError(f"rho must lie strictly inside (0, 1), got {self.rho}")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind is OracleKind.ORNSTEIN_UHLENBECK:
            return self.rho * z / (1.0 - self.rho * z)
        return self.rho * z / (1.0 - z)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind is OracleKind.ORNSTEIN_UHLENBECK:
            return self.rho / (1.0 - self.rho * z) ** 2
        return self.rho / (1.0 - z) ** 2

    def g2_diag(self, z):
        return 1.0 + 2.0 * self(z).real


def ornstein_uhlenbeck(rho: float) -> OracleModel:
    return OracleModel(OracleKind.ORNSTEIN_UHLENBECK, rho)


def common_shock(rho: float) -> OracleModel:
    return OracleModel(OracleKind.COMMON_SHOCK, rho)


def oracle_correction(model: OracleModel, r: float) -> float:
    """Closed-form correction ``E N_f(r) - r^2/(1 - r^2)`` for an oracle model."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    rho = model.rho
    if model.kind is OracleKind.ORNSTEIN_UHLENBECK:
        x = rho * rho * r * r
        return -x / (1.0 - x)
    delta = (1.0 + (1.0 - 2.0 * rho) * r * r) / ((1.0 - rho) * r)
    # principal square root, cut on (-inf, 0]
    nu = (delta - cmath.sqrt(delta * delta - 4.0)) / 2.0
    val = -(rho / (1.0 - rho)) * (nu - r) / ((nu - 1.0 / nu) * (1.0 - nu * r))
    return float(val.real)
