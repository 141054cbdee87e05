"""Expected number of zeros in the disk of radius r.

``E N_f(r) = r^2/(1 - r^2) + J(r)`` where the correction ``J(r) <= 0`` is
computed three independent ways:

* residue sum over the roots of ``q(r, .)`` inside the unit disk,
* trapezoidal quadrature of ``G'(z) / G_2(z, z)`` around ``|z| = r``,
* area quadrature of ``-(1/pi) |G'(z)|^2 / G_2(z, z)^2`` over ``|z| < r``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .covariance import Covariance, spectral_poly
from .errors import DomainError, NearMultipleRoot, NoConvergence, NumericalError
from .kernel import GPoly, OracleModel, g_poly
from .rootfind import _lift_roots, min_separation, theta_roots

log = logging.getLogger(__name__)

TOL_QUAD = 1e-10
START_NODES = 256
MAX_NODES = 2**22
NEAR_MULTIPLE = 1e-7
IMAG_TOL = 1e-9


class Method(enum.Enum):
    RESIDUE = "residue"
    CONTOUR = "contour"
    AREA = "area"


@dataclass(frozen=True)
class ZeroCountResult:
    r: float
    baseline: float
    correction: float
    total: float
    method: Method
    diagnostics: dict = field(default_factory=dict)


def _check_r(r):
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")


def baseline(r: float) -> float:
    """Expected zero count ``r^2/(1 - r^2)`` for i.i.d. coefficients."""
    _check_r(r)
    return r * r / (1.0 - r * r)


def _residue_sum(cov: Covariance, r: float, roots=None):
    """``r * sum Res(z^n G'(rz) / q(r, z))`` over the roots inside the unit disk.

    ``r = 1`` is allowed when no root sits on the unit circle. Returns the
    complex value and the minimal separation among inside roots.
    """
    cov = cov.trimmed()
    n = cov.order
    if n == 0:
        return 0j, np.inf
    if roots is None:
        roots = _lift_roots(cov, r).roots
    lead = spectral_poly(cov, r).lift[-1]
    G = g_poly(cov)
    inside = np.nonzero(np.abs(roots) < 1.0)[0]
    sep = min_separation(roots[inside])
    total = 0j
    for k in inside:
        zk = roots[k]
        diff = zk - np.delete(roots, k)
        total += zk**n * complex(G.derivative(r * zk)) / (lead * np.prod(diff))
    return r * total, sep


def correction_residue(cov: Covariance, r: float, diagnostics: dict | None = None) -> float:
    """Correction term by the residue theorem.

    Falls back to contour quadrature (recorded in ``diagnostics``) when two
    inside roots are closer than ``1e-7``.
    """
    _check_r(r)
    if cov.trimmed().order == 0:
        return 0.0
    rs = theta_roots(cov, r)
    value, sep = _residue_sum(cov, r, rs.roots)
    diag = {} if diagnostics is None else diagnostics
    diag.update(root_residual=rs.residual, inside_separation=sep)
    if sep < NEAR_MULTIPLE:
        log.info("near-multiple inside roots (sep=%.2e); using contour quadrature", sep)
        diag["fallback"] = NearMultipleRoot.__name__
        return correction_contour_quad(cov, r, diagnostics=diag)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise NumericalError(f"residue sum has imaginary part {value.imag:.3e}")
    diag["imag"] = value.imag
    return float(value.real)


def _as_g(source):
    if isinstance(source, Covariance):
        return g_poly(source)
    if isinstance(source, (GPoly, OracleModel)):
        return source
    raise TypeError(f"cannot build G(z) from {type(source).__name__}")


def correction_contour_quad(source, r: float, tol: float = TOL_QUAD, diagnostics=None) -> float:
    """Trapezoidal rule for ``(1/2 pi) int G'(z) z / G_2(z, z) dtheta`` on ``|z| = r``.

    ``source`` is a :class:`Covariance`, a :class:`GPoly` or an
    :class:`OracleModel`. Nodes double from 256 until two successive
    estimates agree to ``tol``.
    """
    _check_r(r)
    G = _as_g(source)

    def f(theta):
        z = r * np.exp(1j * theta)
        return G.derivative(z) * z / G.g2_diag(z)

    m = START_NODES
    acc = f(2 * np.pi * np.arange(m) / m).sum()
    est = acc / m
    while True:
        if 2 * m > MAX_NODES:
            raise NoConvergence(f"contour quadrature exceeded {MAX_NODES} nodes at r={r}")
        acc += f(2 * np.pi * (np.arange(m) + 0.5) / m).sum()
        m *= 2
        new = acc / m
        if abs(new - est) < tol:
            break
        est = new
    if diagnostics is not None:
        diagnostics.update(nodes=m, imag=new.imag)
    if abs(new.imag) > IMAG_TOL * max(1.0, abs(new.real)):
        raise NumericalError(f"contour quadrature has imaginary part {new.imag:.3e}")
    return float(new.real)


def _inner_ring(G, rho, m):
    theta = 2 * np.pi * np.arange(m) / m
    z = rho[:, None] * np.exp(1j * theta)[None, :]
    vals = np.abs(G.derivative(z)) ** 2 / G.g2_diag(z) ** 2
    return vals.mean(axis=1) * 2 * np.pi


def correction_area_quad(cov: Covariance, r: float, tol: float = TOL_QUAD, diagnostics=None) -> float:
    """``-(1/pi) int_{|z|<r} |G'(z)|^2 / G_2(z, z)^2 dm(z)`` in polar form.

    The angular rule is a trapezoid sized on the outer ring; the radial rule
    is Gauss-Legendre on panels graded geometrically towards ``rho = r``,
    with the node count doubled until the result is stable to ``tol``.
    """
    _check_r(r)
    G = g_poly(cov)
    if G.degree == 0:
        return 0.0

    m = START_NODES
    ring = _inner_ring(G, np.array([r]), m)[0]
    while True:
        if 2 * m > MAX_NODES:
            raise NoConvergence("angular rule did not converge")
        nxt = _inner_ring(G, np.array([r]), 2 * m)[0]
        m *= 2
        if abs(nxt - ring) < tol * 1e-2 * max(1.0, abs(nxt)):
            break
        ring = nxt

    npanel = int(np.ceil(np.log2(1.0 / (1.0 - r)))) + 4
    edges = np.concatenate([r * (1.0 - 0.5 ** np.arange(npanel)), [r]])
    k = 8
    prev = None
    while True:
        x, w = np.polynomial.legendre.leggauss(k)
        lo, hi = edges[:-1, None], edges[1:, None]
        rho = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
        wts = (0.5 * (hi - lo) * w).ravel()
        val = -np.sum(wts * rho * _inner_ring(G, rho, m)) / np.pi
        if prev is not None and abs(val - prev) < tol:
            break
        if k >= 512:
            raise NoConvergence("radial rule did not converge")
        prev = val
        k *= 2
    if diagnostics is not None:
        diagnostics.update(angular_nodes=m, radial_nodes=k * npanel)
    return float(val)


_DISPATCH = {
    Method.RESIDUE: correction_residue,
    Method.CONTOUR: correction_contour_quad,
    Method.AREA: correction_area_quad,
}


def expected_zeros(cov: Covariance, r: float, method="residue") -> ZeroCountResult:
    method = Method(method)
    base = baseline(r)
    diag: dict = {}
    corr = _DISPATCH[method](cov, r, diagnostics=diag)
    return ZeroCountResult(r, base, corr, base + corr, method, diag)
