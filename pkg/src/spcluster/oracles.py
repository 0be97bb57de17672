"""Brute-force two-peak integrals: the verification side of the energy
expansions.

Everything here runs at eps = 1 in rescaled variables with the peak
separation d as the asymptotic parameter (no underflow, and the o(1)
trends stay visible); the exact change of variables back to eps is a
helper.  Axisymmetric quadrature in (axial t, transverse radius rho)
with weight sigma_{N-2} rho^(N-2) reduces every integral to 2D:

    int f(w_1) w_2          -> 2 gamma0 w(d) (1 + o(1))
    H = int [F(l1 w1 + l2 w2) - F(w1) - F(w2) - 2 l1 l2 f(w1) w2]
                            -> o(w(d))
    int int w1^2 w2^2 / |x-y|^(N-2)  -> (int w^2)^2 / d^(N-2) (1 + o(1))

The two-peak field energy is assembled from these pieces through the
per-peak equation (the cross gradient term integrates by parts onto
int f(w1) w2), so (E(d) - 2 I[w]) / w(d) -> -2 l1 l2 gamma0.
"""

import numpy as np

from .errors import QuadratureNotConverged, ValidationError
from .ground_state import energy_I
from .quadrature import gauss_nodes
from .radial_poisson import PotentialTable, equator_area

__all__ = [
    "two_peak_interaction",
    "scaled_two_peak_interaction",
    "H_two_peak",
    "pair_coulomb_energy",
    "schrodinger_energy_two_peak",
]


def _axisym_integral(f, N, t_lo, t_hi, rho_hi, splits=(), panel=1.0,
                     rel_tol=1e-6, max_halvings=2):
    """integral f(t, rho) sigma_{N-2} rho^(N-2) drho dt over the box,
    p-refined (12 vs 18 nodes) and h-refined until two estimates agree."""

    def breaks(lo, hi, extra):
        pts = np.arange(lo, hi + 0.5 * panel, panel)
        pts[-1] = hi
        return np.unique(np.concatenate([pts, [lo, hi], list(extra)]))

    def estimate(tb, rb, n):
        x, w = gauss_nodes(n)
        ta = tb[:-1]
        th = 0.5 * np.diff(tb)
        tn = (ta[:, None] + th[:, None] * (x + 1.0)).ravel()
        tw = (th[:, None] * w[None, :]).ravel()
        ra = rb[:-1]
        rh = 0.5 * np.diff(rb)
        rn = (ra[:, None] + rh[:, None] * (x + 1.0)).ravel()
        rw = (rh[:, None] * w[None, :]).ravel()
        vals = f(tn[:, None], rn[None, :]) * rn[None, :] ** (N - 2)
        return float(tw @ vals @ rw), float(tw @ np.abs(vals) @ rw)

    tb = breaks(t_lo, t_hi, splits)
    rb = breaks(0.0, rho_hi, ())
    for _ in range(max_halvings + 1):
        coarse, _ = estimate(tb, rb, 12)
        fine, gross = estimate(tb, rb, 18)
        # cancellation-heavy integrands converge relative to the gross
        # integral of |f|, not the possibly tiny signed result
        tol = max(rel_tol * abs(fine), 1e-8 * gross, 1e-300)
        if abs(fine - coarse) <= tol:
            return equator_area(N) * fine
        tb = np.unique(np.concatenate([tb, 0.5 * (tb[:-1] + tb[1:])]))
        rb = np.unique(np.concatenate([rb, 0.5 * (rb[:-1] + rb[1:])]))
    raise QuadratureNotConverged(
        f"axisymmetric panels did not reach rel_tol={rel_tol:g}")


def _check_d(d, allow_zero=False):
    if d < 0 or (d == 0 and not allow_zero):
        raise ValidationError(f"peak separation d must be positive, got {d}")


def two_peak_interaction(profile, d):
    """int f(w(|x|)) w(|x - d e1|) dx at eps = 1."""
    _check_d(d, allow_zero=True)
    nl = profile.nonlinearity
    N = profile.N
    w = profile.interp

    def f(t, rho):
        r1 = np.sqrt(t * t + rho * rho)
        r2 = np.sqrt((t - d) ** 2 + rho * rho)
        return nl.f(w(r1)) * w(r2)

    return _axisym_integral(f, N, -30.0, d + 30.0, 0.5 * d + 30.0,
                            splits=(0.0, d))


def scaled_two_peak_interaction(profile, eps, separation):
    """int f(w_{P_1}) w_{P_2} = eps^N * value(separation/eps): the exact
    change of variables out of the rescaled frame."""
    if not eps > 0:
        raise ValidationError("eps must be positive")
    return eps ** profile.N * two_peak_interaction(profile, separation / eps)


def H_two_peak(profile, d, signs=(1, 1)):
    """H = int [F(l1 w1 + l2 w2) - F(w1) - F(w2) - 2 l1 l2 f(w1) w2] dx.

    F is even, so the peak signs enter only through the product l1 l2.
    |H|/w(d) -> 0 as d grows; below the admissible regime (d ~ 0) the
    value is still finite but carries no assertion.
    """
    _check_d(d, allow_zero=True)
    l1, l2 = signs
    if abs(l1) != 1 or abs(l2) != 1:
        raise ValidationError("signs must be +-1")
    nl = profile.nonlinearity
    N = profile.N
    w = profile.interp

    def f(t, rho):
        r1 = np.sqrt(t * t + rho * rho)
        r2 = np.sqrt((t - d) ** 2 + rho * rho)
        w1 = w(r1)
        w2 = w(r2)
        return (nl.F(l1 * w1 + l2 * w2) - nl.F(w1) - nl.F(w2)
                - 2.0 * l1 * l2 * nl.f(w1) * w2)

    return _axisym_integral(f, N, -30.0, d + 30.0, 0.5 * d + 30.0,
                            splits=(0.0, d))


def pair_coulomb_energy(profile, d):
    """int int w^2(x) w^2(y - d e1) |x-y|^(2-N) dy dx, computed as
    int w^2(x) phi[w^2](|x - d e1|) dx with the exact radial potential
    as the inner factor.  d = 0 returns the self energy D."""
    _check_d(d, allow_zero=True)
    N = profile.N
    w = profile.interp
    table = PotentialTable.for_profile(profile, power=2)

    def f(t, rho):
        r1 = np.sqrt(t * t + rho * rho)
        r2 = np.sqrt((t - d) ** 2 + rho * rho)
        return w(r1) ** 2 * table(r2)

    return _axisym_integral(f, N, -30.0, 30.0, 30.0, splits=(0.0,),
                            rel_tol=1e-7, max_halvings=3)


def schrodinger_energy_two_peak(profile, d, signs=(1, 1)):
    """E(d) = int [ (|grad w_P|^2 + w_P^2)/2 - F(w_P) ] at eps = 1, via
    the expansion pieces: the cross gradient term integrates by parts to
    int f(w1) w2 through the per-peak equation, so

        E = 2 I[w] - l1 l2 int f(w1) w2 - H.
    """
    _check_d(d)
    l1, l2 = signs
    if abs(l1) != 1 or abs(l2) != 1:
        raise ValidationError("signs must be +-1")
    V = two_peak_interaction(profile, d)
    H = H_two_peak(profile, d, signs)
    return 2.0 * energy_I(profile) - l1 * l2 * V - H
