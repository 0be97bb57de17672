"""Signed peak layouts: the four symmetric existence families.

Every configuration is a set of base points B_i with signs, to be scaled
by the cluster radius r (peak centers P_i = r B_i).  The four families:

  polygon   one positive center peak, k >= 7 negative peaks on a unit
            regular k-gon; dominant gap beta_k = 2 sin(pi/k) < 1.
  polytope  one positive center peak, negative peaks on the vertices of a
            regular polytope of circumradius 1 and side s, admissible for
            s < 1 (any h) or s = 1 with more than two nearest neighbors.
  nested    positive center, k negative peaks on every m-th vertex of a
            radius-1 km-gon, km positive peaks on a radius-2 km-gon;
            admissible iff k > min{6, pi/(m arcsin 1/4)}, equivalently
            iff the dominant gap min{2 sin(pi/k), 4 sin(pi/(mk))} < 1.
  rings     2q alternating rays, ray i carrying m_{I(i)} peaks of sign
            (-1)^i at radii 1 + (j-1) sin(pi/2q); dominant gap
            s_q = sin(pi/2q) between consecutive peaks of one ray.

The distance spectrum groups ordered pairs (i != j) by distance
multiplier and sign product; every reduced-energy sum runs over it.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConditionViolated, DegenerateFamily, EmptyRange,
                     TooFewVertices, UnknownPolytope, ValidationError)

__all__ = [
    "DistanceSpectrum",
    "PeakConfiguration",
    "polygon_config",
    "polytope_config",
    "nested_config",
    "rings_config",
    "raw_config",
    "distance_spectrum",
    "gamma_membership",
    "admissible_range",
    "nested_condition_threshold",
    "nested_leading_count",
    "polytope_geometry",
]

GROUP_TOL = 1e-12  # distances are well-separated algebraic numbers


@dataclass(frozen=True)
class DistanceSpectrum:
    """Sorted (multiplier, ordered same-sign count, ordered opposite count)."""

    multipliers: tuple
    same_counts: tuple
    opposite_counts: tuple

    def __iter__(self):
        return iter(zip(self.multipliers, self.same_counts,
                        self.opposite_counts))

    @property
    def total_ordered_pairs(self):
        return sum(self.same_counts) + sum(self.opposite_counts)

    def as_rows(self):
        return [[m, s, o] for m, s, o in self]


def distance_spectrum(points, signs=None):
    """Exact pairwise-distance grouping with tolerance GROUP_TOL.

    Accepts a PeakConfiguration or an (l, dim) array plus signs.  Counts
    are over ordered pairs and sum to l(l-1).
    """
    if isinstance(points, PeakConfiguration):
        signs = points.signs
        points = points.base_points
    pts = np.asarray(points, dtype=float)
    sg = np.asarray(signs)
    ell = len(pts)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=-1))
    iu = np.triu_indices(ell, k=1)
    d = dist[iu]
    same = sg[iu[0]] == sg[iu[1]]
    order = np.argsort(d, kind="stable")
    d = d[order]
    same = same[order]
    mult, cs, co = [], [], []
    for dk, sk in zip(d, same):
        if mult and dk - mult[-1][-1] <= GROUP_TOL:
            mult[-1].append(dk)
            cs[-1] += 2 * int(sk)
            co[-1] += 2 * int(not sk)
        else:
            mult.append([dk])
            cs.append(2 * int(sk))
            co.append(2 * int(not sk))
    reps = tuple(group[0] for group in mult)
    return DistanceSpectrum(reps, tuple(cs), tuple(co))


@dataclass(frozen=True)
class PeakConfiguration:
    family: str
    params: tuple                 # sorted (name, value) pairs
    dim: int
    base_points: np.ndarray       # (l, dim)
    signs: np.ndarray             # (l,) of +-1
    spectrum: DistanceSpectrum
    dominant_gap: float
    d_max: float                  # enclosing diameter 2 max|B_i|
    symmetry_order: int           # order of the defining rotation

    @property
    def n_peaks(self):
        return len(self.signs)

    def embedded(self, N):
        """Base points zero-padded into R^N."""
        if N < self.dim:
            raise ValidationError(
                f"configuration needs dimension >= {self.dim}, got {N}")
        out = np.zeros((self.n_peaks, N))
        out[:, :self.dim] = self.base_points
        return out

    def param_dict(self):
        return dict(self.params)

    def as_dict(self):
        return {
            "family": self.family,
            "params": self.param_dict(),
            "points": [[float(v) for v in row] for row in self.base_points],
            "signs": [int(s) for s in self.signs],
            "spectrum": self.spectrum.as_rows(),
            "dominant_gap": self.dominant_gap,
            "d_max": self.d_max,
        }


def _finalize(family, params, points, signs, symmetry_order):
    pts = np.asarray(points, dtype=float)
    sg = np.asarray(signs, dtype=int)
    spec = distance_spectrum(pts, sg)
    if spec.multipliers:
        gap = float(spec.multipliers[0])
        if gap <= GROUP_TOL:
            raise ValidationError("coincident base points")
    else:
        gap = float("inf")   # single peak: no pair, no gap
    d_max = 2.0 * float(np.max(np.linalg.norm(pts, axis=1)))
    return PeakConfiguration(
        family=family, params=tuple(sorted(params.items())), dim=pts.shape[1],
        base_points=pts, signs=sg, spectrum=spec, dominant_gap=gap,
        d_max=d_max, symmetry_order=symmetry_order)


# -- polygon ---------------------------------------------------------------

def polygon_config(k):
    """Center peak plus k negative peaks on the unit k-gon (k >= 7)."""
    k = int(k)
    if k <= 6:
        raise TooFewVertices(
            f"polygon needs k >= 7 so that 2 sin(pi/k) < 1; got k={k} "
            f"(side {2.0 * math.sin(math.pi / k):.6g})")
    ang = 2.0 * np.pi * np.arange(k) / k
    pts = np.vstack([[0.0, 0.0], np.column_stack([np.cos(ang), np.sin(ang)])])
    signs = np.concatenate([[1], -np.ones(k, dtype=int)])
    return _finalize("polygon", {"k": k}, pts, signs, k)


# -- polytopes -------------------------------------------------------------

_PHI = (1.0 + math.sqrt(5.0)) / 2.0


def _simplex_vertices(h):
    # h+1 points of R^{h+1} centered and rotated into the sum-zero subspace
    e = np.eye(h + 1) - np.full((h + 1, h + 1), 1.0 / (h + 1))
    q, _ = np.linalg.qr(np.ones((h + 1, 1)), mode="complete")
    basis = q[:, 1:]
    pts = e @ basis
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def _hypercube_vertices(h):
    corners = np.array(np.meshgrid(*([[ -1.0, 1.0]] * h),
                                   indexing="ij")).reshape(h, -1).T
    return corners / math.sqrt(h)


def _cross_vertices(h):
    return np.vstack([np.eye(h), -np.eye(h)])


def _dodecahedron_vertices():
    pts = []
    for sx in (-1, 1):
        for sy in (-1, 1):
            for sz in (-1, 1):
                pts.append([sx, sy, sz])
    cyc = [[0.0, 1.0 / _PHI, _PHI], [1.0 / _PHI, _PHI, 0.0],
           [_PHI, 0.0, 1.0 / _PHI]]
    for base in cyc:
        for s1 in (-1, 1):
            for s2 in (-1, 1):
                v = list(base)
                nz = [i for i, x in enumerate(v) if x != 0.0]
                v[nz[0]] *= s1
                v[nz[1]] *= s2
                pts.append(v)
    pts = np.array(pts)
    return pts / math.sqrt(3.0)


def _icosahedron_vertices():
    pts = []
    cyc = [[0.0, 1.0, _PHI], [1.0, _PHI, 0.0], [_PHI, 0.0, 1.0]]
    for base in cyc:
        for s1 in (-1, 1):
            for s2 in (-1, 1):
                v = list(base)
                nz = [i for i, x in enumerate(v) if x != 0.0]
                v[nz[0]] *= s1
                v[nz[1]] *= s2
                pts.append(v)
    pts = np.array(pts)
    return pts / math.sqrt(1.0 + _PHI ** 2)


def _even_permutations_4():
    perms = []
    import itertools
    for p in itertools.permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4)
                  if p[i] > p[j])
        if inv % 2 == 0:
            perms.append(p)
    return perms


def _cell600_vertices():
    pts = set()
    for signs in np.array(np.meshgrid(*([[ -0.5, 0.5]] * 4),
                                      indexing="ij")).reshape(4, -1).T:
        pts.add(tuple(signs))
    for i in range(4):
        for s in (-1.0, 1.0):
            v = [0.0] * 4
            v[i] = s
            pts.add(tuple(v))
    base = [0.5 * _PHI, 0.5, 0.5 / _PHI, 0.0]
    for perm in _even_permutations_4():
        arranged = [base[perm.index(i)] for i in range(4)]
        nz = [i for i, x in enumerate(arranged) if x != 0.0]
        for s0 in (-1, 1):
            for s1 in (-1, 1):
                for s2 in (-1, 1):
                    v = list(arranged)
                    v[nz[0]] *= s0
                    v[nz[1]] *= s1
                    v[nz[2]] *= s2
                    pts.add(tuple(v))
    return np.array(sorted(pts))


_POLYTOPES = {
    "simplex": (_simplex_vertices, range(2, 7)),
    "hypercube": (_hypercube_vertices, range(2, 7)),
    "cross": (_cross_vertices, range(2, 7)),
    "dodecahedron": (lambda h: _dodecahedron_vertices(), (3,)),
    "icosahedron": (lambda h: _icosahedron_vertices(), (3,)),
    "cell600": (lambda h: _cell600_vertices(), (4,)),
}


def polytope_geometry(name, h):
    """Vertices (circumradius 1), side s and nearest-neighbor count q."""
    if name not in _POLYTOPES:
        raise UnknownPolytope(
            f"unknown polytope {name!r}; catalog: {sorted(_POLYTOPES)}")
    builder, dims = _POLYTOPES[name]
    h = int(h)
    if h not in dims:
        raise UnknownPolytope(
            f"{name} is not realized in dimension h={h} "
            f"(supported: {list(dims)})")
    verts = builder(h)
    dist = np.linalg.norm(verts[:, None, :] - verts[None, :, :], axis=-1)
    off = dist[0][1:]
    s = float(off.min())
    q = int(np.sum(np.abs(dist[0] - s) <= 1e-9) )
    return verts, s, q


def polytope_config(name, h):
    """Center peak plus the negative vertex peaks of a cataloged polytope.

    Accepts s < 1 for any h >= 2, or s = 1 with h > 2, rejecting the
    two-neighbor degenerate case at s = 1.
    """
    verts, s, q = polytope_geometry(name, h)
    one = abs(s - 1.0) <= 1e-12
    if s > 1.0 + 1e-12:
        raise ConditionViolated(
            f"{name} in h={h} has side s={s:.6g} > 1: same-sign neighbor "
            f"pairs would not dominate the center interaction")
    if one and h <= 2:
        raise ConditionViolated(
            f"{name} in h={h} has side s=1 with h=2: need s < 1 or h > 2")
    if one and q == 2:
        raise ConditionViolated(
            f"{name} in h={h} has s=1 with only q=2 side neighbors: "
            f"leading multiplicity (q-2)k vanishes")
    k = len(verts)
    pts = np.vstack([np.zeros((1, h)), verts])
    signs = np.concatenate([[1], -np.ones(k, dtype=int)])
    return _finalize("polytope", {"name": name, "h": h}, pts, signs, q)


# -- nested polygons -------------------------------------------------------

def nested_condition_threshold(m):
    return min(6.0, math.pi / (m * math.asin(0.25)))


def nested_config(k, m):
    """Center peak, k negative on every m-th vertex of the unit km-gon,
    km positive on the radius-2 km-gon."""
    k, m = int(k), int(m)
    if m < 1 or k < 2:
        raise ValidationError(f"need k >= 2 and m >= 1, got k={k}, m={m}")
    thresh = nested_condition_threshold(m)
    if not k > thresh:
        raise ConditionViolated(
            f"nested polygons need k > min{{6, pi/(m arcsin 1/4)}} = "
            f"{thresh:.6g}; got k={k} (m={m})")
    km = k * m
    inner_ang = 2.0 * np.pi * (np.arange(k) * m) / km
    outer_ang = 2.0 * np.pi * np.arange(km) / km
    pts = np.vstack([
        [0.0, 0.0],
        np.column_stack([np.cos(inner_ang), np.sin(inner_ang)]),
        2.0 * np.column_stack([np.cos(outer_ang), np.sin(outer_ang)]),
    ])
    signs = np.concatenate([[1], -np.ones(k, dtype=int),
                            np.ones(km, dtype=int)])
    return _finalize("nested", {"k": k, "m": m}, pts, signs, k)


def nested_leading_count(k, m):
    """Ordered same-sign pairs at the dominant gap: 2k, 2km or 2k(1+m)."""
    inner = 2.0 * math.sin(math.pi / k)
    outer = 4.0 * math.sin(math.pi / (m * k))
    if abs(inner - outer) <= GROUP_TOL:
        return 2 * k * (1 + m)
    return 2 * k if inner < outer else 2 * k * m


# -- alternating rings -----------------------------------------------------

def rings_config(q, m1, m2):
    """2q rays of alternating sign; ray i carries m_{I(i)} radially
    stacked peaks spaced by s_q = sin(pi/2q)."""
    q, m1, m2 = int(q), int(m1), int(m2)
    if q < 2:
        raise ValidationError(f"need q >= 2, got q={q}")
    if m1 < 1 or m2 < 1:
        raise ValidationError("ray peak counts must be >= 1")
    if (m1, m2) == (1, 1):
        raise DegenerateFamily(
            "m1 = m2 = 1 leaves no same-ray pair: leading multiplicity "
            "2(k+h) - 4q = 0")
    sq = math.sin(math.pi / (2 * q))
    pts, signs = [], []
    for i in range(1, 2 * q + 1):
        mi = m1 if i % 2 == 1 else m2
        sign = -1 if i % 2 == 1 else 1
        ang = np.pi * (i - 1) / q
        u = np.array([math.cos(ang), math.sin(ang)])
        for j in range(1, mi + 1):
            pts.append((1.0 + (j - 1) * sq) * u)
            signs.append(sign)
    return _finalize("rings", {"q": q, "m1": m1, "m2": m2},
                     np.array(pts), np.array(signs), q)


def raw_config(points, signs):
    """User-supplied cloud; no admissibility guarantees, no family laws."""
    pts = np.asarray(points, dtype=float)
    sg = np.asarray(signs, dtype=int)
    if pts.ndim != 2 or len(pts) != len(sg):
        raise ValidationError("points must be (l, dim) with matching signs")
    if not np.all(np.abs(sg) == 1):
        raise ValidationError("signs must be +-1")
    return _finalize("raw", {"l": len(sg)}, pts, sg, 1)


# -- admissibility ---------------------------------------------------------

def gamma_membership(cfg, r, eps, params):
    """True iff every pairwise distance r |B_i - B_j| lies strictly inside
    (beta^2 eps log(1/eps^2), eps (log 1/eps^2)^2)."""
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0,1), got {eps}")
    if r <= 0.0:
        raise ValidationError(f"radius must be positive, got {r}")
    if not cfg.spectrum.multipliers:
        return True   # single peak, no separation constraint
    L = math.log(1.0 / eps ** 2)
    lo = params.beta ** 2 * eps * L
    hi = eps * L * L
    dmin = r * cfg.spectrum.multipliers[0]
    dmax = r * cfg.spectrum.multipliers[-1]
    return bool(lo < dmin and dmax < hi)


def admissible_range(cfg, eps):
    """R_eps = (s eps log(1/eps^2), eps (log 1/eps^2)^2 / d_max) with s
    the dominant gap and d_max the enclosing diameter 2 max|B_i|."""
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0,1), got {eps}")
    L = math.log(1.0 / eps ** 2)
    lo = cfg.dominant_gap * eps * L
    hi = eps * L * L / cfg.d_max
    if not lo < hi:
        raise EmptyRange(
            f"admissible radius range empty at eps={eps:g}: "
            f"({lo:.6g}, {hi:.6g})")
    return lo, hi
