"""Newton-polygon / Puiseux data for the degenerate family and asymptotic constants.

For the binomial covariance of order ``n`` the lift ``q_n(r, z)`` has a
``2n``-fold root at ``z = -1`` when ``r = 1``. Shifting ``x = 1 - r``,
``y = z + 1`` gives

    Q_n(x, y) = sum_{l=0}^{2n} C(2n, l) (1 - x)^{|l-n|} (y - 1)^l,

whose Newton polygon is the single edge from ``(1, 0)`` to ``(0, 2n)``, so
every root branch starts as ``y = a_1 x^{1/2n} + a_2 x^{1/n} + ...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .covariance import (
    TOL_REGION,
    Covariance,
    RegionLabel,
    binomial_covariance,
    classify_region,
    spectral_poly,
    two_dependent,
)
from .errors import DomainError, OddMultiplicity, OutsideRegion
from .expected_zeros import _residue_sum, correction_residue
from .extrapolation import correction_rates, power_law_fit, richardson
from .rootfind import _lift_roots, multiple_root_clusters, theta_roots

CIRCLE_TOL = 1e-7
SNAP_TOL = 1e-8


def qn_coefficients(n: int) -> np.ndarray:
    """Integer coefficients ``Q[i, j]`` of ``x^i y^j`` in ``Q_n(x, y)``."""
    Q = np.zeros((n + 1, 2 * n + 1), dtype=object)
    Q[:] = 0
    for l in range(2 * n + 1):
        e = abs(l - n)
        cl = math.comb(2 * n, l)
        for i in range(e + 1):
            xi = math.comb(e, i) * (-1) ** i
            for j in range(l + 1):
                Q[i, j] += cl * xi * math.comb(l, j) * (-1) ** (l - j)
    return Q


@dataclass(frozen=True)
class PolygonEdge:
    start: tuple
    end: tuple
    exponent: Fraction  # leading Puiseux exponent of the edge, y ~ x^exponent


def newton_polygon(Q) -> list:
    """Edges of the Newton polygon of ``sum Q[i, j] x^i y^j``.

    Only edges with negative slope (those that produce branches through the
    origin) are returned, ordered by increasing y-exponent.
    """
    Q = np.asarray(Q, dtype=object)
    pts = {}
    for i in range(Q.shape[0]):
        for j in range(Q.shape[1]):
            if Q[i, j] != 0:
                pts[j] = min(pts.get(j, i), i)
    # lower convex hull in the (j, i) plane
    hull = []
    for j in sorted(pts):
        p = (j, pts[j])
        while len(hull) >= 2:
            (j1, i1), (j2, i2) = hull[-2], hull[-1]
            if (j2 - j1) * (p[1] - i1) - (i2 - i1) * (p[0] - j1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    edges = []
    for (j1, i1), (j2, i2) in zip(hull[:-1], hull[1:]):
        if i2 < i1:
            edges.append(PolygonEdge((i1, j1), (i2, j2), Fraction(i1 - i2, j2 - j1)))
    return edges


def leading_coefficients(n: int):
    """First two Puiseux coefficients ``(a_1, a_2)`` of every branch of ``Q_n``.

    ``a_1`` solves the edge equation ``Q[1,0] + Q[0,2n] a^{2n} = 0``; the
    next order balances the ``x y`` term against the edge derivative.
    """
    Q = qn_coefficients(n)
    q10, q02n, q11 = int(Q[1, 0]), int(Q[0, 2 * n]), int(Q[1, 1])
    target = complex(-q10 / q02n)
    mod = abs(target) ** (1.0 / (2 * n))
    a1 = mod * np.exp(1j * (np.angle(target) + 2 * np.pi * np.arange(2 * n)) / (2 * n))
    a2 = -q11 * a1 / (2 * n * q02n * a1 ** (2 * n - 1))
    return a1, a2


@dataclass(frozen=True)
class PuiseuxBranch:
    n: int
    j: int
    b: complex
    second: complex


def unit_phases(n: int) -> np.ndarray:
    """``e_k = exp((2k - n + 1) pi i / (2n))`` for ``k = 0..2n-1``."""
    k = np.arange(2 * n)
    return np.exp(1j * np.pi * (2 * k - n + 1) / (2 * n))


def puiseux_branches(n: int) -> list:
    if n < 1:
        raise ValueError("n must be positive")
    mod = (2 * math.comb(2 * (n - 1), n - 1)) ** (1.0 / (2 * n))
    return [
        PuiseuxBranch(n, j, complex(mod * e), complex(-0.5 * (mod * e) ** 2))
        for j, e in enumerate(unit_phases(n))
    ]


def predicted_root(n: int, j: int, r: float) -> complex:
    """Two-term Puiseux prediction of branch ``j`` of ``q_n(r, .) = 0``."""
    br = puiseux_branches(n)[j]
    t = (1.0 - r) ** (1.0 / (2 * n))
    return -1.0 + br.b * t + br.second * t * t


def dn_constant(n: int) -> float:
    """Second-order constant of the binomial family of order ``n``."""
    return math.comb(2 * (n - 1), n - 1) ** (1.0 / (2 * n)) / (2 * n * math.sin(math.pi / (2 * n)))


def interior_constant(a: float, b: float) -> float:
    """Closed form ``C(a, b)`` on the interior of the ellipse, ``a >= 0``."""
    if 4 * b - 8 * b * b - a * a <= 0:
        raise DomainError(f"(a, b) = ({a}, {b}) is not inside the ellipse")
    lam = math.sqrt(4 * b - 8 * b * b - a * a)
    mu = math.sqrt((1 + 2 * b) ** 2 - 4 * a * a)
    return (mu - (2 * b - 1)) / (2 * lam * mu) * math.sqrt(4 * b * b + 2 * b - a * a + 2 * b * mu) - 1


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Second term ``-constant * (1 - r^2)^-exponent`` of ``E N_f(r)``.

    ``constant`` is a non-negative magnitude; it is ``None`` when no
    prediction is available for the covariance family.
    """

    exponent: Fraction
    constant: float | None
    case_label: str
    multiplicity: int = 0  # half-order of the deepest spectral zero

    @property
    def alpha(self) -> float:
        return float(self.exponent)


def case_prediction(a: float, b: float, tol: float = TOL_REGION) -> AsymptoticPrediction:
    label = classify_region(a, b, tol)
    if label is RegionLabel.OUTSIDE:
        raise OutsideRegion(f"(a, b) = ({a}, {b}) is not in the PD region")
    if label is RegionLabel.CORNER_DEGENERATE:
        return AsymptoticPrediction(Fraction(3, 4), 2.0 ** -1.25, "III", 2)
    if label is RegionLabel.BOUNDARY_ELLIPSE:
        return AsymptoticPrediction(Fraction(1, 2), math.sqrt(2 * b / (6 * b - 1)), "I", 1)
    if label is RegionLabel.BOUNDARY_LINE:
        return AsymptoticPrediction(
            Fraction(1, 2), 0.5 * math.sqrt((1 - 2 * b) / (1 - 6 * b)), "II", 1
        )
    if a == 0 and b == 0:
        return AsymptoticPrediction(Fraction(0), 0.0, "IV")
    if a >= 0 and b > 0 and 4 * b - 8 * b * b - a * a > 0:
        return AsymptoticPrediction(Fraction(0), interior_constant(a, b), "IV")
    value = -_residue_sum(two_dependent(a, b), 1.0)[0].real
    return AsymptoticPrediction(Fraction(0), value, "IV")


def circle_zeros(cov: Covariance):
    """Zeros of the spectral density on the unit circle with their multiplicities."""
    cov = cov.trimmed()
    if cov.order == 0:
        return []
    rs = _lift_roots(cov, 1.0)
    out = []
    for center, members, mult in multiple_root_clusters(spectral_poly(cov, 1.0).lift, rs.roots):
        if abs(abs(center) - 1.0) < max(CIRCLE_TOL, 10 * _spread(members)):
            out.append((center / abs(center), mult))
    return out


def _spread(members):
    members = np.asarray(members)
    return float(np.max(np.abs(members - members.mean())))


def _known_family(cov: Covariance):
    cov = cov.trimmed()
    n = cov.order
    # two-dependent labels (I-IV) take precedence over the binomial one
    if n <= 2 and cov.is_real:
        g = list(cov.gamma) + [0j] * (3 - len(cov.gamma))
        return "two", (g[1].real, g[2].real)
    if n >= 1 and cov.is_real:
        ref = binomial_covariance(n).gamma
        if max(abs(x - y) for x, y in zip(cov.gamma, ref)) < 1e-12:
            return "binomial", n
    return None, None


def general_exponent(cov: Covariance) -> AsymptoticPrediction:
    """Exponent ``(2k-1)/(2k)`` set by the deepest zero of the spectral density.

    ``k`` is the largest half-multiplicity among unit-circle zeros of
    ``Theta(1, .)``; with no such zeros the exponent is 0 and the constant is
    ``-J(1)``, computed from the (off-circle) root set at ``r = 1``.
    """
    zeros = circle_zeros(cov)
    for w, m in zeros:
        if m % 2:
            raise OddMultiplicity(f"circle zero at {w:.6g} has odd multiplicity {m}")
    k = max((m // 2 for _, m in zeros), default=0)
    kind, data = _known_family(cov)
    if kind == "binomial" and k == data:
        return AsymptoticPrediction(Fraction(2 * k - 1, 2 * k), dn_constant(k), f"BinomialN({k})", k)
    if kind == "two":
        # the root clusters can see a boundary point that the strict region
        # test misses when (a, b) is given to ~10 digits; retry loosely
        for tol in (TOL_REGION, SNAP_TOL):
            try:
                pred = case_prediction(*data, tol=tol)
            except OutsideRegion:
                continue
            if pred.multiplicity == k:
                return pred
    if k == 0:
        value = -_residue_sum(cov, 1.0)[0].real
        return AsymptoticPrediction(Fraction(0), value, "IV" if kind == "two" else "GeneralMultiplicity(0)")
    return AsymptoticPrediction(Fraction(2 * k - 1, 2 * k), None, f"GeneralMultiplicity({k})", k)


@dataclass(frozen=True)
class IdentityReport:
    n: int
    residuals: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def identity_checks(n: int) -> IdentityReport:
    """Evaluate the phase identities behind the leading residue sum.

    * ``sum_{k<n} e_k = 1 / sin(pi / 2n)``
    * ``sum_{k<n} e_k^2 = 0`` for ``n >= 2`` (the cancellation of the next order)
    * ``prod_{j != k} (e_k - e_j) = 2n (-1)^(n-1) / e_k`` for every ``k``
    * ``sum_{l != k} prod_{j != k,l} (b_k - b_j) (b_k^2 - b_l^2)
      = (-1)^(n-1) 8 n (n-1) C(2(n-1), n-1)``
    """
    e = unit_phases(n)
    res = {"sum_e": abs(e[:n].sum() - 1.0 / math.sin(math.pi / (2 * n)))}
    if n >= 2:
        # a single phase cannot cancel; the identity starts at n = 2
        res["sum_e2"] = abs((e[:n] ** 2).sum())
    prod_err = 0.0
    for k in range(2 * n):
        p = np.prod(e[k] - np.delete(e, k))
        prod_err = max(prod_err, abs(p - 2 * n * (-1) ** (n - 1) / e[k]))
    res["product"] = prod_err

    b = np.array([br.b for br in puiseux_branches(n)])
    binom = math.comb(2 * (n - 1), n - 1)
    target = (-1) ** (n - 1) * 8 * n * (n - 1) * binom
    sum_err = 0.0
    for k in range(2 * n):
        s = 0j
        for l in range(2 * n):
            if l == k:
                continue
            others = [j for j in range(2 * n) if j not in (k, l)]
            s += np.prod(b[k] - b[others]) * (b[k] ** 2 - b[l] ** 2)
        sum_err = max(sum_err, abs(s - target) / max(1.0, abs(target)))
    res["second_order_sum"] = sum_err
    return IdentityReport(n, {k: float(v) for k, v in res.items()})


def branch_errors(n: int, r_values) -> np.ndarray:
    """Max over branches of ``|z_j(r) - predicted_root(n, j, r)|`` per ``r``.

    Computed roots are matched to the predictions by minimum-cost assignment.
    """
    cov = binomial_covariance(n)
    out = []
    for r in r_values:
        roots = theta_roots(cov, r).roots
        pred = np.array([predicted_root(n, j, r) for j in range(2 * n)])
        dist = np.abs(roots[:, None] - pred[None, :])
        rows, cols = linear_sum_assignment(dist)
        out.append(dist[rows, cols].max())
    return np.array(out)


@dataclass(frozen=True)
class EmpiricalAsymptotics:
    s: np.ndarray  # 1 - r^2
    correction: np.ndarray
    exponent: float  # log-log slope of -J against 1/s
    constant: float  # Richardson limit of -J s^alpha at the predicted alpha
    alpha_used: float


def empirical_asymptotics(cov: Covariance, s_values, prediction: AsymptoticPrediction | None = None):
    """Fit the second-order term from residue values at ``r = sqrt(1 - s)``.

    The exponent is a free log-log fit; the constant is a Richardson limit of
    ``-J(r) s^alpha`` using the predicted exponent and the correction rates
    of the predicted zero order.
    """
    if prediction is None:
        prediction = general_exponent(cov)
    s = np.asarray(s_values, dtype=float)
    J = np.array([correction_residue(cov, math.sqrt(1.0 - x)) for x in s])
    alpha = prediction.alpha
    if alpha > 0:
        slope, _, _ = power_law_fit(s, -J)
        rates = correction_rates(max(prediction.multiplicity, 1))[: len(s) - 1]
        constant = richardson(s, -J * s**alpha, rates)
        exponent = -slope
    else:
        exponent = 0.0
        constant = richardson(s, -J, [1.0][: len(s) - 1])
    return EmpiricalAsymptotics(s, J, exponent, constant, alpha)
