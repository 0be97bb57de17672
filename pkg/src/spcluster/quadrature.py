"""Composite Gauss-Legendre panel quadrature.

All kernel and energy integrals in this package run through the helpers
here: fixed panels for smooth integrands, adaptive panel splitting for
near-singular kernels, and cumulative panel sums used to tabulate radial
potentials on many radii in one pass.
"""

import functools

import numpy as np

from .errors import QuadratureNotConverged

__all__ = [
    "gauss_nodes",
    "panel_nodes",
    "integrate_panels",
    "integrate_adaptive",
    "cumulative_integrals",
    "graded_breakpoints",
]


@functools.lru_cache(maxsize=64)
def gauss_nodes(n):
    """Gauss-Legendre nodes and weights on [-1, 1], cached per order."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_nodes(breaks, n):
    """Nodes and weights of an n-point rule on every panel of `breaks`.

    Returns flat arrays (len = n * (len(breaks) - 1)); the dot product of
    f(nodes) with the weights is the composite integral.
    """
    breaks = np.asarray(breaks, dtype=float)
    x, w = gauss_nodes(n)
    a = breaks[:-1]
    half = 0.5 * np.diff(breaks)
    nodes = (a[:, None] + half[:, None] * (x[None, :] + 1.0)).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_panels(f, breaks, n=32):
    """Integral of f over the panel decomposition `breaks` (fixed order)."""
    nodes, weights = panel_nodes(breaks, n)
    return float(np.dot(weights, f(nodes)))


def integrate_adaptive(f, breaks, rel_tol=1e-8, abs_floor=0.0, n=32,
                       max_splits=6):
    """Panel integral refined by uniform splitting until two successive
    levels agree to `rel_tol` (relative, with `abs_floor` guarding zero).

    Raises QuadratureNotConverged when the depth limit is hit.
    """
    breaks = np.unique(np.asarray(breaks, dtype=float))
    prev = integrate_panels(f, breaks, n)
    for _ in range(max_splits):
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        breaks = np.sort(np.concatenate([breaks, mids]))
        cur = integrate_panels(f, breaks, n)
        if abs(cur - prev) <= rel_tol * max(abs(cur), abs_floor):
            return cur
        prev = cur
    raise QuadratureNotConverged(
        f"panel splitting did not reach rel_tol={rel_tol:g} "
        f"(last delta {abs(cur - prev):.3e})")


def cumulative_integrals(f, points, n=16):
    """Integrals of f from points[0] to every point, by per-segment GL.

    `points` must be increasing.  Returns an array c with c[0] = 0 and
    c[i] = integral over [points[0], points[i]].
    """
    points = np.asarray(points, dtype=float)
    x, w = gauss_nodes(n)
    a = points[:-1]
    half = 0.5 * np.diff(points)
    nodes = (a[:, None] + half[:, None] * (x[None, :] + 1.0)).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    seg = (f(nodes) * weights).reshape(-1, n).sum(axis=1)
    out = np.empty(len(points))
    out[0] = 0.0
    np.cumsum(seg, out=out[1:])
    return out


def graded_breakpoints(a, b, focus, scale, factor=2.0, max_panels=40):
    """Panel breakpoints on [a, b] geometrically graded toward `focus`.

    The panel adjacent to `focus` has width about `scale`; widths grow by
    `factor` away from it.  Used for kernels with a near-singularity at a
    known location.
    """
    if not a <= focus <= b:
        pts = [a, b]
        return np.array(pts)
    pts = {a, b, focus}
    width = scale
    left, right = focus, focus
    for _ in range(max_panels):
        grown = False
        if left > a:
            left = max(a, left - width)
            pts.add(left)
            grown = True
        if right < b:
            right = min(b, right + width)
            pts.add(right)
            grown = True
        if not grown:
            break
        width *= factor
    return np.array(sorted(pts))
