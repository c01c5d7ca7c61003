"""Diagonal Hopf surfaces H(lambda, mu) = (C^2 - 0) / diag(lambda, mu)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bundles import BundleHopfForm, BundleTauForm
from .errors import PreconditionError
from .torus import HalfPlanePoint

RELATION_TOL = 1e-9
DEFAULT_RELATION_BOUND = 50

X_AXIS = "x-axis-curve"  # E_lambda, image of {y = 0}
Y_AXIS = "y-axis-curve"  # E_mu, image of {x = 0}


@dataclass(frozen=True)
class HopfSurface:
    lambda_exp: HalfPlanePoint
    mu_exp: HalfPlanePoint

    def swapped(self) -> "HopfSurface":
        return HopfSurface(self.mu_exp, self.lambda_exp)


@dataclass(frozen=True)
class HopfClassification:
    kind: str  # "elliptic-fibration" | "two-curves"
    relation: Optional[tuple]  # (n, m) with lambda^n = mu^m
    search_bound: int


@dataclass(frozen=True)
class SecondaryHopfData:
    base: HopfSurface
    n: int
    r: int


def classify_hopf(h: HopfSurface, search_bound: int = DEFAULT_RELATION_BOUND) -> HopfClassification:
    """Look for lambda^n = mu^m, i.e. n*lambda_exp - m*mu_exp in Z.

    Both imaginary parts are positive, so any relation has n, m of one sign
    and the relations form multiples of one primitive pair; that pair is
    returned with n, m > 0. Without a hit the verdict is "two-curves up to
    search_bound".
    """
    if search_bound < 1:
        raise ValueError("search_bound must be >= 1")
    lam, mu = h.lambda_exp.z, h.mu_exp.z
    ks = np.arange(1, search_bound + 1)
    diff = ks[:, None] * lam - ks[None, :] * mu
    resid = np.abs(diff - np.rint(diff.real))
    hits = np.argwhere(resid <= RELATION_TOL)
    if hits.size == 0:
        return HopfClassification("two-curves", None, search_bound)
    n, m = min(((int(i) + 1, int(j) + 1) for i, j in hits), key=lambda nm: (nm[0] + nm[1], nm[0]))
    return HopfClassification("elliptic-fibration", (n, m), search_bound)


def complement_bundle(h: HopfSurface, removed_axis: str) -> BundleHopfForm:
    """Line bundle whose total space is H minus one of the two axis curves.

    Removing E_mu leaves L(lambda, mu) over E_lambda; removing E_lambda leaves
    L(mu, lambda) over E_mu.
    """
    if removed_axis == Y_AXIS:
        return BundleHopfForm(h.lambda_exp, h.mu_exp)
    if removed_axis == X_AXIS:
        return BundleHopfForm(h.mu_exp, h.lambda_exp)
    raise ValueError(f"unknown axis {removed_axis!r}")


def surface_from_complement(bundle: BundleHopfForm, removed_axis: str = Y_AXIS) -> HopfSurface:
    """Inverse of complement_bundle."""
    if removed_axis == Y_AXIS:
        return HopfSurface(bundle.base_exp, bundle.fiber_exp)
    if removed_axis == X_AXIS:
        return HopfSurface(bundle.fiber_exp, bundle.base_exp)
    raise ValueError(f"unknown axis {removed_axis!r}")


def joint_hopf(tauE: HalfPlanePoint, tauF: HalfPlanePoint, search_bound: int = DEFAULT_RELATION_BOUND):
    """H(q^tauE, q^tauF): its axis curves are C*/q^tauE = E and C*/q^tauF = F.

    An elliptic-fibration verdict means the normal bundles are torsion, so
    the pair is useless for a Hopf transform.
    """
    h = HopfSurface(tauE, tauF)
    return h, classify_hopf(h, search_bound)


def secondary_quotient(h: HopfSurface, n: int, r: int) -> SecondaryHopfData:
    """Descriptor of H / diag(q^(1/n), q^(r/n)); both roots must be primitive."""
    if n < 2:
        raise PreconditionError(f"quotient order must be >= 2, got {n}", "quotient-order")
    if math.gcd(r, n) != 1:
        raise PreconditionError(
            f"q^({r}/{n}) is not a primitive {n}-th root of unity; the action is not free",
            "free-action",
        )
    return SecondaryHopfData(h, n, r % n)


def isogeny_pullback(b: BundleTauForm, n: int) -> BundleTauForm:
    """Pull back along C/(Z + Z*n*tau) -> C/(Z + Z*tau), a degree-n isogeny."""
    if n < 1:
        raise ValueError("isogeny degree must be >= 1")
    t = b.tau
    return BundleTauForm(HalfPlanePoint(n * t.re, n * t.im), b.u, n * b.v)
