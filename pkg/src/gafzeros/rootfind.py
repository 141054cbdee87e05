"""Polynomial roots and their continuation in r.

Coefficient arrays are ascending throughout: ``c[k]`` multiplies ``z**k``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.optimize import linear_sum_assignment

from .covariance import Covariance, spectral_poly
from .errors import AmbiguousMatching, ConvergenceError, DegenerateInput, DomainError

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps
TOL_ROOT = 1e-12
MAX_ITER = 500
CLUSTER_RADIUS = 1e-6
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
EXTENDED_SEPARATION = 1e-5


@numba.njit(cache=True)
def _newton_ratio(c, z):
    """Return ``p(z)/p'(z)``, ``|p(z)|`` and the rounding bound, scale-free.

    For ``|z| > 1`` the reversed polynomial is evaluated at ``1/z`` so that
    nothing overflows for high degree.
    """
    d = c.shape[0] - 1
    if abs(z) <= 1.0:
        p = c[d]
        dp = 0.0 + 0.0j
        bound = abs(c[d])
        az = abs(z)
        for k in range(d - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
            bound = bound * az + abs(c[k])
        if dp == 0:
            return p / EPS, abs(p), bound
        return p / dp, abs(p), bound
    y = 1.0 / z
    ay = abs(y)
    rp = c[0]
    rdp = 0.0 + 0.0j
    bound = abs(c[0])
    for k in range(1, d + 1):
        rdp = rdp * y + rp
        rp = rp * y + c[k]
        bound = bound * ay + abs(c[k])
    den = d * rp - y * rdp
    if den == 0:
        return z * rp / EPS, abs(rp), bound
    return z * rp / den, abs(rp), bound


@numba.njit(cache=True)
def _aberth(c, z, tol, max_iter):
    """Gauss-Seidel Aberth-Ehrlich sweeps; returns the sweep count or -1."""
    d = z.shape[0]
    done = np.zeros(d, dtype=np.bool_)
    for it in range(max_iter):
        active = 0
        for i in range(d):
            if done[i]:
                continue
            ratio, pabs, bound = _newton_ratio(c, z[i])
            if pabs <= tol * bound:
                done[i] = True
                continue
            s = 0.0 + 0.0j
            for j in range(d):
                if j != i:
                    s += 1.0 / (z[i] - z[j])
            w = ratio / (1.0 - ratio * s)
            z[i] -= w
            if abs(w) <= 2.0 * EPS * abs(z[i]):
                done[i] = True
            else:
                active += 1
        if active == 0:
            return it + 1
    return -1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    t = 134217729.0 * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _cmul_exact(x, y):
    """Complex product as (value, rounding error) via error-free transforms."""
    p1, e1 = _two_prod(x.real, y.real)
    p2, e2 = _two_prod(x.imag, y.imag)
    p3, e3 = _two_prod(x.real, y.imag)
    p4, e4 = _two_prod(x.imag, y.real)
    re, e5 = _two_sum(p1, -p2)
    im, e6 = _two_sum(p3, p4)
    return complex(re, im), complex(e1 - e2 + e5, e3 + e4 + e6)


def _cadd_exact(x, y):
    re, er = _two_sum(x.real, y.real)
    im, ei = _two_sum(x.imag, y.imag)
    return complex(re, im), complex(er, ei)


def comp_horner(c, z):
    """Compensated Horner: ``p(z)`` and ``p'(z)`` in roughly doubled precision."""
    d = len(c) - 1
    s, err = complex(c[d]), 0j
    ds, derr = 0j, 0j
    for k in range(d - 1, -1, -1):
        prod, pe = _cmul_exact(ds, z)
        ds, se = _cadd_exact(prod, s)
        derr = derr * z + (pe + se) + err
        prod, pe = _cmul_exact(s, z)
        s, se = _cadd_exact(prod, complex(c[k]))
        err = err * z + (pe + se)
    return s + err, ds + derr


def _polish(c, z, extended, steps=3):
    for i in range(len(z)):
        for _ in range(steps):
            if extended:
                p, dp = comp_horner(c, z[i])
                if dp == 0:
                    break
                step = p / dp
            else:
                step = _newton_ratio(c, z[i])[0]
            if not np.isfinite(step) or abs(step) <= EPS * abs(z[i]):
                break
            before = _backward_error(c, z[i])
            cand = z[i] - step
            if _backward_error(c, cand) <= before:
                z[i] = cand
            else:
                break
    return z


def _backward_error(c, z):
    _, pabs, bound = _newton_ratio(c, complex(z))
    return pabs / bound if bound > 0 else 0.0


def cluster_roots(roots, radius=CLUSTER_RADIUS):
    """Single-linkage clusters of ``roots``; returns a list of index arrays."""
    roots = np.asarray(roots)
    n = len(roots)
    label = -np.ones(n, dtype=int)
    dist = np.abs(roots[:, None] - roots[None, :])
    nxt = 0
    for i in range(n):
        if label[i] >= 0:
            continue
        stack = [i]
        label[i] = nxt
        while stack:
            j = stack.pop()
            for k in np.nonzero((dist[j] <= radius) & (label < 0))[0]:
                label[k] = nxt
                stack.append(k)
        nxt += 1
    return [np.nonzero(label == g)[0] for g in range(nxt)]


@dataclass(frozen=True)
class RootSet:
    """All roots of a polynomial (repeated by multiplicity) plus diagnostics."""

    roots: np.ndarray
    residual: float
    backward_error: float = 0.0
    sweeps: int = 0
    inside: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.inside is None:
            object.__setattr__(
                self, "inside", np.nonzero(np.abs(self.roots) < 1.0)[0]
            )

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def inside_roots(self) -> np.ndarray:
        return self.roots[self.inside]

    @property
    def multiplicity(self) -> np.ndarray:
        """Cluster size of each root at radius ``CLUSTER_RADIUS``."""
        m = np.ones(len(self.roots), dtype=int)
        for idx in cluster_roots(self.roots):
            m[idx] = len(idx)
        return m


def _trim(coeffs):
    c = np.asarray(coeffs, dtype=complex).ravel()
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        raise DegenerateInput("the zero polynomial has no well-defined roots")
    return c[: nz[-1] + 1]


def poly_roots(coeffs, tol=TOL_ROOT, max_iter=MAX_ITER, extended=False) -> RootSet:
    """All roots of ``sum_k coeffs[k] z^k`` by Aberth-Ehrlich iteration.

    Initial guesses sit on the circle of radius ``|c_0/c_d|^(1/d)`` at
    golden-angle phases; converged roots get a few Newton polishing steps
    (with compensated Horner evaluation when ``extended`` is set).

    Raises
    ------
    DegenerateInput
        If the polynomial is constant.
    ConvergenceError
        If ``max_iter`` sweeps do not converge, or a root's normwise
        backward error ``|p(z)| / sum |c_k| |z|^k`` exceeds ``tol``.
    """
    c = _trim(coeffs)
    d = len(c) - 1
    if d < 1:
        raise DegenerateInput("degree-0 polynomial")
    # exact zero roots are split off before iterating
    nzero = int(np.nonzero(c)[0][0])
    c_red = c[nzero:]
    dr = len(c_red) - 1
    z = np.zeros(0, dtype=complex)
    sweeps = 0
    if dr > 0:
        radius = abs(c_red[0] / c_red[-1]) ** (1.0 / dr)
        phases = GOLDEN_ANGLE * np.arange(dr) + 0.4
        z = radius * np.exp(1j * phases) * (1.0 + 1e-3 * np.arange(dr) / dr)
        sweeps = _aberth(c_red, z, 4.0 * EPS, max_iter)
        if sweeps < 0:
            raise ConvergenceError(f"Aberth iteration did not converge in {max_iter} sweeps")
        z = _polish(c_red, z, extended)
    roots = np.concatenate([np.zeros(nzero, dtype=complex), z])
    roots = roots[np.lexsort((np.abs(roots), np.angle(roots)))]
    with np.errstate(over="ignore", invalid="ignore"):
        residual = float(np.abs(np.polynomial.polynomial.polyval(roots, c)).max())
    berr = max(_backward_error(c, w) for w in roots)
    if berr > tol:
        raise ConvergenceError(f"backward error {berr:.2e} exceeds {tol:.0e}")
    return RootSet(roots=roots, residual=residual, backward_error=berr, sweeps=sweeps)


def multiple_root_clusters(coeffs, roots, radius=None):
    """Group computed roots into (centre, members, multiplicity) triples.

    Computed roots of an m-fold root scatter by about ``(eps*S/|a_m|)^(1/m)``
    where ``a_m = p^(m)(w)/m!`` and ``S`` is the rounding scale of ``p`` at
    ``w``. A cluster is accepted as a multiple root only when its spread is
    consistent with that bound; its centre is refined by Newton's method on
    ``p^(m-1)``, for which the multiple root is simple.
    """
    c = _trim(coeffs)
    d = len(c) - 1
    roots = np.asarray(roots, dtype=complex)
    if radius is None:
        radius = max(CLUSTER_RADIUS, 2.0 * (64.0 * d * EPS) ** (1.0 / d))
    P = np.polynomial.polynomial
    out = []
    for idx in cluster_roots(roots, radius):
        members = roots[idx]
        m = len(idx)
        if m == 1:
            out.append((members[0], members, 1))
            continue
        w = complex(members.mean())
        dm1 = P.polyder(c, m - 1)
        dm = P.polyder(c, m)
        for _ in range(5):
            den = P.polyval(w, dm)
            if den == 0:
                break
            step = P.polyval(w, dm1) / den
            w -= step
            if abs(step) <= EPS * max(abs(w), 1.0):
                break
        am = abs(P.polyval(w, dm)) / math.factorial(m)
        scale = float(np.sum(np.abs(c) * np.abs(w) ** np.arange(d + 1)))
        sigma = (16.0 * d * EPS * scale / am) ** (1.0 / m) if am > 0 else np.inf
        if np.max(np.abs(members - w)) <= 10.0 * sigma:
            out.append((w, members, m))
        else:
            out.extend((z, np.array([z]), 1) for z in members)
    return out


def _lift_roots(cov: Covariance, r: float, extended=False) -> RootSet:
    lift = spectral_poly(cov.trimmed(), r).lift
    if len(lift) == 1:
        return RootSet(roots=np.zeros(0, dtype=complex), residual=0.0)
    return poly_roots(lift, extended=extended)


def theta_roots(cov: Covariance, r: float, extended=False) -> RootSet:
    """Roots of the lift ``q(r, .)`` of the scaled spectral density.

    For ``0 < r < 1`` exactly ``n`` of the ``2n`` roots are inside the unit
    disk, paired with their reflections ``1/conj(w)`` outside.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    rs = _lift_roots(cov, r, extended)
    n = cov.trimmed().order
    if len(rs.inside) != n:
        raise ConvergenceError(
            f"found {len(rs.inside)} roots inside the unit disk, expected {n}"
        )
    return rs


def pairing_residual(roots) -> float:
    """Largest distance from a root's reflection ``1/conj(w)`` to the root set."""
    roots = np.asarray(roots)
    if len(roots) == 0:
        return 0.0
    refl = 1.0 / np.conj(roots)
    return float(np.max(np.min(np.abs(refl[:, None] - roots[None, :]), axis=1)))


def min_separation(roots) -> float:
    roots = np.asarray(roots)
    if len(roots) < 2:
        return np.inf
    d = np.abs(roots[:, None] - roots[None, :])
    return float(d[~np.eye(len(roots), dtype=bool)].min())


@dataclass(frozen=True)
class BranchTrack:
    """Roots of ``q(r, .)`` followed continuously along ``r_grid``.

    ``branches[j, m]`` is branch ``j`` at ``r_grid[m]``.
    """

    r_grid: np.ndarray
    branches: np.ndarray
    labels: dict
    substeps: int = 0


def _match(prev, new):
    """Assignment of previous roots to new ones, or None if ambiguous."""
    dist = np.abs(prev[:, None] - new[None, :])
    rows, cols = linear_sum_assignment(dist)
    order = np.empty(len(prev), dtype=int)
    order[rows] = cols
    for i, j in zip(rows, cols):
        others = np.delete(dist[i], j)
        if len(others) and dist[i, j] >= 0.5 * others.min():
            return None
    return order


def track_branches(cov: Covariance, r_grid, max_depth=24) -> BranchTrack:
    """Follow each root of ``q(r, .)`` along an increasing grid in (0, 1).

    Steps are subdivided uniformly in ``log(1 - r)`` until every root's move
    is under half its distance to the nearest competing root; when the
    subdivision budget is exhausted :class:`AmbiguousMatching` is raised.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.ndim != 1 or len(r_grid) == 0:
        raise DomainError("r_grid must be a non-empty 1-d sequence")
    if np.any(r_grid <= 0) or np.any(r_grid >= 1) or np.any(np.diff(r_grid) <= 0):
        raise DomainError("r_grid must be strictly increasing inside (0, 1)")

    def roots_at(r, prev=None):
        rs = theta_roots(cov, r)
        sep = min_separation(rs.roots)
        if sep < EXTENDED_SEPARATION:
            rs = theta_roots(cov, r, extended=True)
        return rs.roots

    current = roots_at(r_grid[0])
    cols = [current.copy()]
    substeps = 0

    def advance(z_prev, r0, r1, depth):
        nonlocal substeps
        z_new = roots_at(r1)
        order = _match(z_prev, z_new)
        if order is not None:
            return z_new[order]
        if depth >= max_depth:
            raise AmbiguousMatching(
                f"branches collide between r={r0!r} and r={r1!r}; refine the grid"
            )
        substeps += 1
        rm = 1.0 - math.sqrt((1.0 - r0) * (1.0 - r1))
        mid = advance(z_prev, r0, rm, depth + 1)
        return advance(mid, rm, r1, depth + 1)

    for r0, r1 in zip(r_grid[:-1], r_grid[1:]):
        current = advance(current, r0, r1, 0)
        cols.append(current.copy())

    branches = np.array(cols).T if len(current) else np.zeros((0, len(r_grid)), complex)
    labels = {
        j: {"final": complex(branches[j, -1]), "inside": bool(abs(branches[j, -1]) < 1)}
        for j in range(len(branches))
    }
    return BranchTrack(r_grid=r_grid, branches=branches, labels=labels, substeps=substeps)
