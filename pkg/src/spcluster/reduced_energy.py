"""Leading-order reduced energy of a signed peak cluster.

Up to a positive factor, a configuration with peaks P_i = r B_i costs

    M(r; eps) = -gamma0 sum_{i!=j} l_i l_j w(|B_i - B_j| r / eps)
                + eps^2 C2 sum_{i!=j} (|B_i - B_j| r / eps)^(2-N),

opposite-sign pairs attract (+), same-sign pairs repel (-), and the
Coulomb term pushes the cluster apart.  For each symmetric family the
sum collapses onto the dominant gap s and M reduces to a multiple of
the one-variable model

    alpha_{eps,C}(rho) = -gamma0 w(rho) + C eps^2 rho^(2-N),

whose unique interior maximizer rho_eps = log(1/eps^2)
+ (N-1)/2 loglog(1/eps^2) + ... encodes the cluster radius law
r_eps s / (eps log(1/eps^2)) -> 1.  The o(1) corrections of the
expansion are not modeled; comparisons against the asymptotic laws
carry tolerance bands, and the eps^(2 tau) remainder is only reported.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import ReductionParameters
from .configurations import admissible_range, nested_leading_count
from .errors import (BoundaryMax, DomainViolation, NoInteriorMax,
                     UnknownFamily, ValidationError)

__all__ = [
    "ReducedEvaluation",
    "MaximizerResult",
    "LeadingReduction",
    "SweepRow",
    "ReducedEnergy",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ReducedEvaluation:
    value: float
    attraction: float       # gamma0-weighted opposite-sign w sum (enters +)
    repulsion: float        # gamma0-weighted same-sign w sum (enters -)
    coulomb: float          # eps^2 C2 distance-power sum
    remainder_scale: float  # eps^(2 tau), reported but never added

    def as_dict(self):
        return {
            "value": self.value, "attraction": self.attraction,
            "repulsion": self.repulsion, "coulomb": self.coulomb,
            "remainder_scale": self.remainder_scale,
        }


@dataclass(frozen=True)
class MaximizerResult:
    argmax: float
    value: float
    bracket: tuple
    iterations: int
    normalized: float

    def as_dict(self):
        return {
            "argmax": self.argmax, "value": self.value,
            "bracket": list(self.bracket), "iterations": self.iterations,
            "normalized": self.normalized,
        }


@dataclass(frozen=True)
class LeadingReduction:
    multiplicity: float
    coefficient: float
    gap: float


@dataclass(frozen=True)
class SweepRow:
    eps: float
    r_eps: float
    normalized: float
    M_value: float
    alpha_pred: float
    status: str


def _golden_max(f, a, b, rel_tol=1e-8, max_iter=200):
    """Golden-section maximization; ties break toward smaller argument."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while (b - a) > rel_tol * max(abs(a), abs(b), 1e-30) and it < max_iter:
        if fc >= fd:           # >= keeps the smaller-r side on ties
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        it += 1
    x = c if fc >= fd else d
    return x, f(x), (a, b), it


class ReducedEnergy:
    """Evaluator bundle: ground state w, the constants gamma0 and C2,
    dimension N and the reduction exponents.

    Built from a profile and its InteractionConstants; the keyword
    overrides let tests drop in synthetic w or scaled constants.
    """

    def __init__(self, profile=None, constants=None, params=None, *,
                 w=None, gamma0=None, C2=None, N=None):
        if w is None:
            if profile is None:
                raise ValidationError("need a profile or an explicit w")
            w = profile.evaluate
        self.w = w
        self.gamma0 = gamma0 if gamma0 is not None else constants.gamma0
        self.C2 = C2 if C2 is not None else constants.C2
        if N is None:
            N = profile.N if profile is not None else constants.N
        self.N = int(N)
        if params is None:
            if profile is not None:
                params = ReductionParameters.for_nonlinearity(
                    profile.nonlinearity)
            else:
                params = ReductionParameters()
        self.params = params

    # -- one-variable model ------------------------------------------------

    def alpha(self, rho, eps, C=None):
        """alpha_{eps,C}(rho) = -gamma0 w(rho) + C eps^2 rho^(2-N) on
        rho >= beta^2 log(1/eps^2)."""
        if not 0.0 < eps < 1.0:
            raise ValidationError(f"eps must lie in (0,1), got {eps}")
        C = self.C2 if C is None else C
        if C < 0.0:
            raise ValidationError("Coulomb coefficient must be >= 0")
        lo = self.params.beta ** 2 * math.log(1.0 / eps ** 2)
        rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
        if np.any(rho_arr < lo - 1e-12):
            raise DomainViolation(
                f"rho below the model domain floor beta^2 log(1/eps^2) "
                f"= {lo:.6g}")
        val = (-self.gamma0 * np.asarray(self.w(rho_arr), dtype=float)
               + C * eps * eps * rho_arr ** (2.0 - self.N))
        return float(val[0]) if np.ndim(rho) == 0 else val

    def maximize_alpha(self, eps, C=None, scan_points=10_000):
        """Unique interior maximizer of alpha over
        [beta^2 log(1/eps^2), log(1/eps^2)^2].

        Uniqueness is asserted by counting sign changes of the discrete
        slope on the scan; anything but a single rise-fall raises
        NoInteriorMax.
        """
        L = math.log(1.0 / eps ** 2)
        lo, hi = self.params.beta ** 2 * L, L * L
        if not lo < hi:
            raise NoInteriorMax(f"empty model domain at eps={eps:g}")
        rho = np.linspace(lo, hi, scan_points)
        vals = self.alpha(rho, eps, C)
        d = np.diff(vals)
        s = np.sign(d)
        s = s[s != 0.0]
        changes = int(np.sum(s[1:] != s[:-1])) if s.size else 0
        if changes != 1 or s.size == 0 or s[0] <= 0:
            raise NoInteriorMax(
                f"slope scan found {changes} sign change(s) at eps={eps:g}; "
                f"need exactly one interior rise-fall")
        i = int(np.argmax(vals))
        if i == 0 or i == len(rho) - 1:
            raise NoInteriorMax("scan maximum sits on the domain boundary")
        f = lambda x: self.alpha(float(x), eps, C)
        x, fx, bracket, it = _golden_max(f, rho[i - 1], rho[i + 1])
        return MaximizerResult(argmax=x, value=fx, bracket=bracket,
                               iterations=it, normalized=x / L)

    # -- full configuration functional --------------------------------------

    def evaluate(self, cfg, r, eps):
        """Leading-order M over the full distance spectrum (no truncation
        to the dominant gap)."""
        if not 0.0 < eps < 1.0:
            raise ValidationError(f"eps must lie in (0,1), got {eps}")
        if r <= 0.0:
            raise ValidationError(f"radius must be positive, got {r}")
        mult = np.array(cfg.spectrum.multipliers)
        same = np.array(cfg.spectrum.same_counts, dtype=float)
        opp = np.array(cfg.spectrum.opposite_counts, dtype=float)
        rho = mult * r / eps
        wv = np.asarray(self.w(rho), dtype=float)
        attraction = self.gamma0 * float(np.dot(opp, wv))
        repulsion = self.gamma0 * float(np.dot(same, wv))
        coulomb = (eps * eps * self.C2
                   * float(np.dot(same + opp, rho ** (2.0 - self.N))))
        return ReducedEvaluation(
            value=attraction - repulsion + coulomb,
            attraction=attraction, repulsion=repulsion, coulomb=coulomb,
            remainder_scale=eps ** (2.0 * self.params.tau))

    reduced_m = evaluate

    def leading_reduction(self, cfg):
        """(multiplicity, coefficient, gap) of the family's one-variable
        collapse M ~ multiplicity * alpha_{eps, coefficient}(r gap / eps).

        multiplicity counts ordered same-sign minus opposite-sign pairs
        at the dominant gap; the coefficient is forced by rewriting the
        full Coulomb sum over the gap variable,

            coefficient = C2 sum_{i!=j} (gap/d_ij)^(N-2) / multiplicity,

        which reproduces the polygon constant
        C2 (1 + beta_k^(N-2) + 1/2 sum beta_k^(N-2)/(beta_k^i)^(N-2)),
        the polytope constants in both the s<1 and s=1 branches, and the
        nested/rings constants.
        """
        if cfg.family not in ("polygon", "polytope", "nested", "rings"):
            raise UnknownFamily(
                f"leading reduction needs a theorem family, got "
                f"{cfg.family!r}")
        gap = cfg.dominant_gap
        same0 = cfg.spectrum.same_counts[0]
        opp0 = cfg.spectrum.opposite_counts[0]
        mult = float(same0 - opp0)
        if mult <= 0:
            raise UnknownFamily(
                "dominant-gap pair count is not positive; no leading "
                "reduction")
        m = np.array(cfg.spectrum.multipliers)
        tot = (np.array(cfg.spectrum.same_counts, dtype=float)
               + np.array(cfg.spectrum.opposite_counts, dtype=float))
        S = float(np.dot(tot, (gap / m) ** (self.N - 2.0)))
        if cfg.family == "nested":
            pd = cfg.param_dict()
            expected = nested_leading_count(pd["k"], pd["m"])
            assert int(mult) == expected, "nested leading count mismatch"
        return LeadingReduction(multiplicity=mult,
                                coefficient=self.C2 * S / mult, gap=gap)

    def maximize_m(self, cfg, eps, scan_points=2048):
        """Maximize M over the closed admissible radius range by a
        log-uniform scan plus golden section; the maximizer must be
        interior (BoundaryMax otherwise) and is reported with the
        normalized radius r_eps gap / (eps log(1/eps^2))."""
        lo, hi = admissible_range(cfg, eps)
        r = np.geomspace(lo, hi, scan_points)
        vals = np.array([self.evaluate(cfg, ri, eps).value for ri in r])
        i = int(np.argmax(vals))
        if i == 0 or i == len(r) - 1:
            raise BoundaryMax(
                f"M maximizer at the R_eps boundary for eps={eps:g}; "
                f"eps is not small enough for this family")
        f = lambda x: self.evaluate(cfg, float(x), eps).value
        x, fx, bracket, it = _golden_max(f, r[i - 1], r[i + 1])
        span = hi - lo
        if min(x - lo, hi - x) <= 1e-9 * span:
            raise BoundaryMax(
                f"refined maximizer within 1e-9 of the R_eps boundary "
                f"at eps={eps:g}")
        L = math.log(1.0 / eps ** 2)
        return MaximizerResult(
            argmax=x, value=fx, bracket=bracket, iterations=it,
            normalized=x * cfg.dominant_gap / (eps * L))

    def sweep(self, cfg, eps_list):
        """Maximize per epsilon; failures are recorded per row and the
        sweep continues."""
        rows = []
        for eps in eps_list:
            try:
                res = self.maximize_m(cfg, eps)
                try:
                    lead = self.leading_reduction(cfg)
                    pred = lead.multiplicity * self.alpha(
                        res.argmax * lead.gap / eps, eps, lead.coefficient)
                except Exception:
                    pred = float("nan")
                rows.append(SweepRow(eps=eps, r_eps=res.argmax,
                                     normalized=res.normalized,
                                     M_value=res.value, alpha_pred=pred,
                                     status="ok"))
            except Exception as exc:
                rows.append(SweepRow(eps=eps, r_eps=float("nan"),
                                     normalized=float("nan"),
                                     M_value=float("nan"),
                                     alpha_pred=float("nan"),
                                     status=type(exc).__name__))
        return rows
