"""Nine points on a plane cubic, algebraic structures and motivic bookkeeping.

The blow-up of P^2 at nine points p_1..p_9 of a smooth cubic E contains the
strict transform of E with normal bundle O_E(3H - p_1 - ... - p_9). With E
uniformized so that an inflection point is the origin, O(3H)|_E = O(9 o) and
the degree-zero class is the point -(z_1 + ... + z_9).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .bundles import (
    DEFAULT_DENOMINATOR_BOUND,
    BundleHopfForm,
    BundleTauForm,
    diophantine_report,
    hopf_to_tau,
    is_torsion,
)
from .cobordism import DEFAULT_ISOGENY_DEGREE, DEFAULT_NMAX, enumerate_cobordant
from .errors import PreconditionError
from .hopf import DEFAULT_RELATION_BOUND, joint_hopf
from .torus import HalfPlanePoint, LatticePoint, match_reduced, reduce_to_fundamental_domain

NINE = 9


@dataclass(frozen=True)
class NinePointConfig:
    tau: HalfPlanePoint
    points: tuple  # nine LatticePoint values, collisions allowed

    def __post_init__(self):
        if len(self.points) != NINE:
            raise ValueError(f"need exactly nine points, got {len(self.points)}")
        for p in self.points:
            if p.tau != self.tau:
                raise ValueError("all points must lie on the curve of modulus tau")

    @classmethod
    def from_coordinates(cls, tau: HalfPlanePoint, coords) -> "NinePointConfig":
        """Points given as lattice coordinates (a, b), meaning a + b*tau."""
        pts = tuple(LatticePoint(complex(a + b * tau.re, b * tau.im), tau) for a, b in coords)
        return cls(tau, pts)

    @classmethod
    def from_dict(cls, data: dict) -> "NinePointConfig":
        re, im = data["tau"]
        return cls.from_coordinates(HalfPlanePoint(float(re), float(im)), data["points"])

    @classmethod
    def load(cls, path) -> "NinePointConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def normal_bundle_class(cfg: NinePointConfig) -> BundleTauForm:
    """Normal bundle of the strict transform of the cubic, as (tau, u, v).

    The class -(z_1 + ... + z_9) = a + b*tau is presented as (tau, -b, a).
    Coordinates are summed with math.fsum, so the result does not depend on
    the order of the points.
    """
    coords = [p.coordinates() for p in cfg.points]
    a = -math.fsum(c[0] for c in coords)
    b = -math.fsum(c[1] for c in coords)
    return BundleTauForm(cfg.tau, -b + 0.0, a + 0.0)


def enumerate_algebraic_structures(
    cfg: NinePointConfig,
    count: int,
    *,
    torsion_bound: int = DEFAULT_DENOMINATOR_BOUND,
    n_max: int = DEFAULT_NMAX,
    isogeny_degree: Optional[int] = DEFAULT_ISOGENY_DEGREE,
) -> list:
    """Algebraic structures on the complement of the cubic.

    Report k stands for a blow-up of P^2 at nine points of a cubic with
    modulus ``graft_reduced``; report 0 is the original surface. The nine new
    points are not computed.
    """
    b = normal_bundle_class(cfg)
    tv = is_torsion(b, torsion_bound)
    if tv.is_torsion:
        raise PreconditionError(f"normal bundle torsion (order {tv.order})", "non-torsion")
    rep = diophantine_report(b, n_max)
    if rep.verdict == "torsion":
        raise PreconditionError(
            f"normal bundle torsion (n * class on the lattice at n = {rep.worst_n})", "non-torsion"
        )
    if rep.verdict == "suspect":
        raise PreconditionError(
            f"normal bundle not Diophantine (exponent estimate {rep.exponent_estimate:.3f} "
            f"> {rep.threshold} up to n = {n_max})",
            "diophantine",
        )
    return enumerate_cobordant(
        b, count, torsion_bound=torsion_bound, n_max=n_max, isogeny_degree=isogeny_degree
    )


@dataclass(frozen=True)
class MotivicClass:
    """Integer polynomial sum_i c_i L^i in the Lefschetz class L."""

    coefficients: tuple

    def __post_init__(self):
        cs = [int(c) for c in self.coefficients]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coefficients", tuple(cs) or (0,))

    def _padded(self, other):
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return a, b

    def __add__(self, other: "MotivicClass") -> "MotivicClass":
        a, b = self._padded(other)
        return MotivicClass(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "MotivicClass") -> "MotivicClass":
        a, b = self._padded(other)
        return MotivicClass(tuple(x - y for x, y in zip(a, b)))

    def euler_characteristic(self) -> int:
        """Specialization L -> 1."""
        return sum(self.coefficients)

    def __str__(self):
        terms = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("L" if i == 1 else f"L^{i}")
            coef = str(c) if (c != 1 or not mono) else ""
            terms.append(f"{coef}{mono}")
        return " + ".join(terms) or "0"


LEFSCHETZ = MotivicClass((0, 1))


def motivic_class_blowup_p2(n_points: int) -> MotivicClass:
    """[P^2 blown up at n points] = L^2 + (n + 1) L + 1.

    A length-n subscheme is booked like n reduced points.
    """
    if n_points < 0:
        raise ValueError("n_points must be >= 0")
    return MotivicClass((1, n_points + 1, 1))


@dataclass(frozen=True)
class HypothesisCheck:
    surface: str  # "H(E,W)" or "H(F,W)"
    hypothesis: str  # "two-curves" | "non-torsion" | "diophantine-consistent"
    passed: bool
    detail: str


@dataclass(frozen=True)
class K0Witness:
    tauE: HalfPlanePoint
    tauF: HalfPlanePoint
    outcome: str  # "identity" | "witness" | "no witness found within budget"
    witness_tau: Optional[HalfPlanePoint] = None
    bundleE: Optional[BundleTauForm] = None
    bundleF: Optional[BundleTauForm] = None
    checks: tuple = ()
    candidates_tried: int = 0
    budget: int = 0
    settings: dict = field(default_factory=dict, compare=False)

    @property
    def found(self) -> bool:
        return self.outcome != "no witness found within budget"


# plastic number, the real root of x^3 = x + 1
_PLASTIC = 1.324717957244746
_R2_STEP = np.array([1.0 / _PLASTIC, 1.0 / _PLASTIC**2])


def witness_candidates(count: int, offset: int = 0) -> list:
    """Kronecker (R2) points mapped to Re in (-1/2, 1/2], Im in [1, 3].

    Point n is frac(1/2 + n * (1/p, 1/p^2)) with p the plastic number. Halton
    or Sobol points would not do here: their coordinates are rationals with
    small 2- and 3-power denominators, so every candidate would be torsion.
    """
    if count <= 0:
        return []
    ns = np.arange(offset + 1, offset + count + 1, dtype=float)[:, None]
    pts = np.mod(0.5 + ns * _R2_STEP, 1.0)
    return [HalfPlanePoint(float(0.5 - x), float(1.0 + 2.0 * y)) for x, y in pts]


def _surface_checks(name, tau_curve, tau_w, relation_bound, torsion_bound, n_max):
    """Checks for H(q^tau_curve, q^tau_w) and the normal bundle of the first curve."""
    h, cls = joint_hopf(tau_curve, tau_w, relation_bound)
    bundle = hopf_to_tau(BundleHopfForm(h.lambda_exp, h.mu_exp))
    tv = is_torsion(bundle, torsion_bound)
    dr = diophantine_report(bundle, n_max)
    checks = [
        HypothesisCheck(
            name,
            "two-curves",
            cls.kind == "two-curves",
            f"{cls.kind} (relation search up to {relation_bound})",
        ),
        HypothesisCheck(
            name,
            "non-torsion",
            not tv.is_torsion,
            f"order {tv.order}" if tv.is_torsion else f"no denominator <= {torsion_bound}",
        ),
        HypothesisCheck(
            name,
            "diophantine-consistent",
            dr.verdict == "diophantine-consistent",
            f"{dr.verdict}, exponent {dr.exponent_estimate:.4f} up to n = {n_max}",
        ),
    ]
    return bundle, checks


def verify_k0an_equality(
    tauE: HalfPlanePoint,
    tauF: HalfPlanePoint,
    budget: int = 100,
    *,
    offset: int = 0,
    relation_bound: int = DEFAULT_RELATION_BOUND,
    torsion_bound: int = DEFAULT_DENOMINATOR_BOUND,
    n_max: int = DEFAULT_NMAX,
) -> K0Witness:
    """Search a curve W joined to both E and F by generic Hopf surfaces.

    Candidates are tried in sequence order starting at ``offset``; the first W
    for which every check passes on H(E, W) and H(F, W) wins.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    settings = {
        "budget": budget,
        "offset": offset,
        "relation_bound": relation_bound,
        "torsion_bound": torsion_bound,
        "n_max": n_max,
    }
    rE, _ = reduce_to_fundamental_domain(tauE)
    rF, _ = reduce_to_fundamental_domain(tauF)
    if match_reduced(rE, rF) is not None:
        return K0Witness(tauE, tauF, "identity", witness_tau=tauE, budget=budget, settings=settings)
    for i, w in enumerate(witness_candidates(budget, offset), start=1):
        bE, cE = _surface_checks("H(E,W)", tauE, w, relation_bound, torsion_bound, n_max)
        bF, cF = _surface_checks("H(F,W)", tauF, w, relation_bound, torsion_bound, n_max)
        checks = tuple(cE + cF)
        if all(c.passed for c in checks):
            return K0Witness(tauE, tauF, "witness", w, bE, bF, checks, i, budget, settings)
    return K0Witness(
        tauE, tauF, "no witness found within budget", candidates_tried=budget, budget=budget,
        settings=settings,
    )
