"""Newton potentials of radial densities and the power-law kernels.

For radial g the potential phi[g](x) = int g(y) |x-y|^(2-N) dy collapses
to one dimension through the spherical average of the kernel,

    phi[g](r) = a_N int_0^inf g(s) s^(N-1) max(r, s)^(2-N) ds,

with a_N the surface measure of S^(N-1) (Newton's theorem: the sphere
of radius s acts like a point charge outside and a constant inside).
The general kernels Psi_beta[g](x) = int |x-y|^(-beta) g(y) dy have no
such reduction and are evaluated by axisymmetric quadrature in
(radius, polar angle) with panels graded into the near-singular corner
|y| ~ |x|, theta ~ 0.  Both satisfy |x|^beta Psi_beta -> int g, which the
tests verify rather than assume.
"""

import numpy as np

from .errors import NotIntegrable, ValidationError
from .ground_state import sphere_area
from .quadrature import (cumulative_integrals, gauss_nodes,
                         graded_breakpoints, integrate_adaptive)

__all__ = [
    "RadialDensity",
    "newton_potential",
    "psi_beta",
    "cross_potential_bound",
    "PotentialTable",
    "equator_area",
]


def equator_area(N):
    """Surface measure of the unit (N-2)-sphere (the theta-slice factor)."""
    from scipy.special import gamma
    return float(2.0 * np.pi ** ((N - 1) / 2.0) / gamma((N - 1) / 2.0))


class RadialDensity:
    """Nonnegative radial density g(r), evaluable at arbitrary radii.

    Carries an effective support radius (the integrals are truncated
    there; the profiles decay like e^(-r) or faster, so the truncation
    error sits below the quadrature tolerance) and panel breakpoints
    hinting where g varies.
    """

    def __init__(self, fn, support, breakpoints=None):
        self.fn = fn
        self.support = float(support)
        if breakpoints is None:
            breakpoints = np.linspace(0.0, self.support, 101)
        self.breakpoints = np.asarray(breakpoints, dtype=float)

    def __call__(self, r):
        return self.fn(np.asarray(r, dtype=float))

    @classmethod
    def from_profile(cls, profile, power=2):
        """g = w^power on the profile's grid (power=2 is the charge)."""
        fn = lambda r: profile.interp(r) ** power
        breaks = np.linspace(0.0, profile.r_max, 101)
        return cls(fn, profile.r_max, breaks)

    @classmethod
    def from_callable(cls, fn, support, breakpoints=None):
        return cls(fn, support, breakpoints)

    def total_integral(self, N):
        """int_{R^N} g = a_N int g(s) s^(N-1) ds."""
        val = integrate_adaptive(
            lambda s: self(s) * s ** (N - 1), self.breakpoints,
            rel_tol=1e-10, max_splits=6)
        return sphere_area(N) * val


def _split_at(breaks, r):
    out = np.unique(np.concatenate([breaks, np.atleast_1d(r)]))
    return out[(out >= breaks[0]) & (out <= breaks[-1])]


def newton_potential(g, N, r):
    """phi[g](r) for scalar or array r >= 0.

    Exact one-dimensional form a_N [ r^(2-N) M(r) + T(r) ] with
    M(r) = int_0^r g s^(N-1) ds and T(r) = int_r^R g s ds; nonincreasing
    in r and r^(N-2) phi -> int_{R^N} g.
    """
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r_arr < 0):
        raise ValidationError("newton_potential needs r >= 0")
    R = g.support
    inside = np.clip(r_arr, 0.0, R)
    pts = np.unique(np.concatenate([g.breakpoints, inside]))

    def refine(pts):
        mids = 0.5 * (pts[:-1] + pts[1:])
        return np.sort(np.concatenate([pts, mids]))

    def tabulate(pts, n):
        near = cumulative_integrals(lambda s: g(s) * s ** (N - 1), pts, n)
        farc = cumulative_integrals(lambda s: g(s) * s, pts, n)
        Mv = np.interp(inside, pts, near)
        Tv = farc[-1] - np.interp(inside, pts, farc)
        return Mv, Tv, max(abs(near[-1]), abs(farc[-1]), 1e-300)

    M1, T1, _ = tabulate(pts, 16)
    for _ in range(5):
        pts = refine(pts)
        M2, T2, scale = tabulate(pts, 16)
        if (np.max(np.abs(M2 - M1)) <= 1e-9 * scale
                and np.max(np.abs(T2 - T1)) <= 1e-9 * scale):
            break
        M1, T1 = M2, T2
    else:
        raise NotIntegrable("radial potential quadrature did not settle")

    with np.errstate(divide="ignore"):
        bulk = np.where(r_arr > 0, r_arr ** (2.0 - N), 0.0) * M2
    bulk[r_arr == 0.0] = 0.0
    phi = sphere_area(N) * (bulk + T2)
    return float(phi[0]) if np.isscalar(r) or np.ndim(r) == 0 else phi


def psi_beta(g, N, beta, x_norm):
    """Psi_beta[g](|x|) by 2D axisymmetric quadrature.

    beta is an integer in [1, N-1]; the polar weight is sin^(N-2) theta
    and the angular panels are graded toward theta = 0 where the kernel
    is near singular for |y| close to |x|.
    """
    if not (1 <= beta <= N - 1):
        raise ValidationError(f"beta must lie in [1, N-1], got {beta}")
    R = float(x_norm)
    if R <= 0:
        raise ValidationError("psi_beta needs |x| > 0")
    sup = g.support
    x_th, w_th = gauss_nodes(24)

    def theta_integral(svals):
        out = np.empty_like(svals)
        for i, s in enumerate(svals):
            gap = abs(R - s) / max(R, s)
            th = graded_breakpoints(0.0, np.pi, 0.0,
                                    max(gap, 1e-8), factor=2.5)
            a = th[:-1]
            half = 0.5 * np.diff(th)
            nodes = (a[:, None] + half[:, None] * (x_th + 1.0)).ravel()
            wts = (half[:, None] * w_th[None, :]).ravel()
            ker = (R * R + s * s - 2.0 * R * s * np.cos(nodes)) ** (-0.5 * beta)
            out[i] = np.dot(wts, np.sin(nodes) ** (N - 2) * ker)
        return out

    sbreaks = _split_at(g.breakpoints, min(R, sup))
    near = graded_breakpoints(max(0.0, R - 2.0), min(sup, R + 2.0),
                              min(R, sup), 0.02)
    sbreaks = np.unique(np.concatenate([sbreaks, near]))

    def integrand(svals):
        return g(svals) * svals ** (N - 1) * theta_integral(svals)

    try:
        val = integrate_adaptive(integrand, sbreaks, rel_tol=1e-8, n=16,
                                 max_splits=4)
    except Exception as exc:
        raise NotIntegrable(f"psi_beta quadrature failed: {exc}") from exc
    return equator_area(N) * val


def cross_potential_bound(profile, d, x):
    """Envelope for the cross Poisson potential of two unit peaks.

    In rescaled variables (peaks of profile w at 0 and d e_1, so that
    d = |P_i - P_j|/eps), returns

        w(d/2) ( phi[w](|x|) + phi[w](|x - d e_1|) ),

    an upper bound for phi[w_i w_j](x)/eps^2: wherever |y| >= d/2 the
    first factor of w(|y|) w(|y - d e_1|) is at most w(d/2), and the
    complementary region swaps the roles.
    """
    if d <= 0:
        raise ValidationError("peak separation d must be positive")
    x = np.asarray(x, dtype=float)
    table = PotentialTable.for_profile(profile, power=1)
    shift = np.zeros_like(x)
    shift[0] = d
    r1 = float(np.linalg.norm(x))
    r2 = float(np.linalg.norm(x - shift))
    return profile.evaluate(0.5 * d) * (table(r1) + table(r2))


class PotentialTable:
    """phi[g] tabulated on a radial grid with the exact far field.

    Inside the table the potential is monotone and smooth, interpolated
    shape preservingly; beyond it phi = (int g) r^(2-N) up to the
    exponentially small truncated charge.
    """

    def __init__(self, g, N, grid=None):
        from scipy.interpolate import PchipInterpolator
        self.N = N
        if grid is None:
            grid = np.linspace(0.0, g.support, 401)
        self.grid = np.asarray(grid, dtype=float)
        self.values = newton_potential(g, N, self.grid)
        self.total = g.total_integral(N)
        self._interp = PchipInterpolator(self.grid, self.values)

    _cache = {}

    @classmethod
    def for_profile(cls, profile, power=2):
        key = (id(profile), power)
        hit = cls._cache.get(key)
        if hit is None:
            hit = cls(RadialDensity.from_profile(profile, power=power),
                      profile.N)
            cls._cache[key] = hit
        return hit

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        out = np.empty_like(r)
        inner = r <= self.grid[-1]
        out[inner] = self._interp(r[inner])
        out[~inner] = self.total * r[~inner] ** (2.0 - self.N)
        return float(out[0]) if scalar else out
