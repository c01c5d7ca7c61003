"""Degree-zero line bundles on elliptic curves.

Two presentations are used throughout, and only exponents are stored:

* tau form ``(tau, u, v)``: the quotient of C^2 by (x, y) ~ (x + 1, q^u y) and
  (x, y) ~ (x + tau, q^v y), where q^s = exp(2 pi i s);
* Hopf form ``(base_exp, fiber_exp)``: C* x C modulo diag(q^base, q^fiber).

The map (x, y) -> (q^x, q^(-u x) y) identifies the tau form with the Hopf
form whose fiber exponent is ``-u*tau + v``. The Pic^0 class of either is the
point ``v - u*tau`` (equivalently ``fiber_exp``) modulo Z + Z*tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .torus import HalfPlanePoint, LatticePoint, lattice_distances, packing_radius

TORSION_TOL = 1e-10
DEFAULT_DENOMINATOR_BOUND = 10**6
SUSPECT_THRESHOLD = 4.0
# d_n below this counts as a lattice hit
TORSION_HIT = 1e-13


@dataclass(frozen=True)
class BundleTauForm:
    tau: HalfPlanePoint
    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError("monodromy exponents must be finite")


@dataclass(frozen=True)
class BundleHopfForm:
    base_exp: HalfPlanePoint
    fiber_exp: HalfPlanePoint


@dataclass(frozen=True)
class TorsionVerdict:
    is_torsion: bool
    order: Optional[int]
    denominator_bound: int


@dataclass(frozen=True)
class DiophantineReport:
    n_max: int
    exponent_estimate: float
    worst_n: int
    worst_distance: float
    verdict: str  # "diophantine-consistent" | "suspect" | "torsion"
    threshold: float = SUSPECT_THRESHOLD
    scale: float = 1.0  # packing radius used to normalize distances


def pic0_point(b: BundleTauForm) -> LatticePoint:
    """Canonical representative of v - u*tau in C/(Z + Z*tau)."""
    return LatticePoint(complex(b.v - b.u * b.tau.re, -b.u * b.tau.im), b.tau).canonical()


def convergents(x: float):
    """Continued-fraction convergents p/q of the exact value of the float x."""
    frac = Fraction(x)
    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        a = math.floor(frac)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield Fraction(p1, q1)
        rem = frac - a
        if rem == 0:
            return
        frac = 1 / rem


def rational_reconstruction(x: float, bound: int, tol: float = TORSION_TOL) -> Optional[Fraction]:
    """Smallest-denominator p/q (q <= bound) with |q*x - p| < tol, or None.

    For tol < 1/(2*bound) any such fraction is a convergent of x, so walking
    the convergents is exhaustive.
    """
    for c in convergents(x):
        if c.denominator > bound:
            return None
        if abs(c.denominator * x - c.numerator) < tol:
            return c
    return None


def is_torsion(
    b: BundleTauForm,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
    tol: float = TORSION_TOL,
) -> TorsionVerdict:
    """Torsion test by rational reconstruction of both exponents.

    A negative answer only means "non-torsion up to denominator_bound".
    """
    if denominator_bound < 1:
        raise ValueError("denominator_bound must be >= 1")
    ru = rational_reconstruction(b.u, denominator_bound, tol)
    rv = rational_reconstruction(b.v, denominator_bound, tol) if ru is not None else None
    if ru is None or rv is None:
        return TorsionVerdict(False, None, denominator_bound)
    return TorsionVerdict(True, math.lcm(ru.denominator, rv.denominator), denominator_bound)


def default_u_rep(u: float) -> float:
    """The representative of u mod 1 in [-1, 0)."""
    r = u - math.floor(u) - 1.0
    # u just below an integer rounds to r = 0.0
    return r if r < 0 else r - 1.0


def tau_to_hopf(b: BundleTauForm, u_rep: Optional[float] = None) -> BundleHopfForm:
    """Hopf presentation L(q^tau, q^(-u_rep*tau + v)); needs u_rep < 0, u_rep = u mod 1."""
    if u_rep is None:
        u_rep = default_u_rep(b.u)
    if not u_rep < 0:
        raise PreconditionError(f"u_rep must be negative, got {u_rep}", "negative-u-representative")
    shift = u_rep - b.u
    if abs(shift - round(shift)) > 1e-10:
        raise PreconditionError(f"u_rep={u_rep} is not congruent to u={b.u} mod 1", "u-congruence")
    # B = q^v is unchanged by the integer shift of u
    t = b.tau
    fiber = complex(b.v - u_rep * t.re, -u_rep * t.im)
    return BundleHopfForm(base_exp=t, fiber_exp=HalfPlanePoint.from_complex(fiber))


def hopf_to_tau(h: BundleHopfForm) -> BundleTauForm:
    """Solve fiber_exp = -u*tau + v for real u, v."""
    t, s = h.base_exp, h.fiber_exp
    u = -s.im / t.im
    v = s.re + u * t.re
    return BundleTauForm(t, u, v)


def inverse_bundle(b: BundleTauForm) -> BundleTauForm:
    return BundleTauForm(b.tau, -b.u, -b.v)


def power_distances(b: BundleTauForm, n_max: int) -> np.ndarray:
    """d_n = lattice distance of n * pic0_point(b) for n = 2..n_max."""
    p = pic0_point(b)
    a, c = p.coordinates()
    ns = np.arange(2, n_max + 1, dtype=float)
    # multiply lattice coordinates, not the complex point, to keep n*p accurate
    za = np.mod(ns * a, 1.0)
    zb = np.mod(ns * c, 1.0)
    z = za + zb * b.tau.re + 1j * zb * b.tau.im
    return lattice_distances(z, b.tau)


def diophantine_report(
    b: BundleTauForm,
    n_max: int = 10_000,
    threshold: float = SUSPECT_THRESHOLD,
) -> DiophantineReport:
    """Finite-range estimate of the exponent in -log d(O, L^n) = O(log n).

    Distances are measured in units of the packing radius of Z + Z*tau, so the
    constant in the O(log n) bound does not inflate the small-n ratios. The
    verdict is heuristic: no finite sweep proves an asymptotic statement.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    d = power_distances(b, n_max)
    scale = packing_radius(b.tau)
    hits = np.nonzero(d < TORSION_HIT)[0]
    if hits.size:
        i = int(hits[0])
        return DiophantineReport(n_max, math.inf, i + 2, float(d[i]), "torsion", threshold, scale)
    ns = np.arange(2, n_max + 1, dtype=float)
    ratios = -np.log(d / scale) / np.log(ns)
    i = int(np.argmax(ratios))
    est = float(ratios[i])
    verdict = "suspect" if est > threshold else "diophantine-consistent"
    return DiophantineReport(n_max, est, i + 2, float(d[i]), verdict, threshold, scale)
