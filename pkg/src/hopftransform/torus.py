"""Moduli of complex tori C/(Z + Z*tau).

Upper half-plane points, the modular group SL2(Z), reduction to the standard
fundamental domain, the j-invariant, distances to the lattice Z + Z*tau and a
bounded-degree isogeny search.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

# modulus equality / isogeny residual tolerances
MODULUS_TOL = 1e-9
ISOGENY_TOL = 1e-8

_J_OVERFLOW_IM = 112.0

# boundary snapping in the reduction loop
_EDGE_EPS = 1e-12


@dataclass(frozen=True)
class HalfPlanePoint:
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite modulus ({self.re}, {self.im})")
        if not self.im > 0:
            raise ValueError(f"modulus must have positive imaginary part, got {self.im}")

    @classmethod
    def from_complex(cls, z: complex) -> "HalfPlanePoint":
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def nome(self) -> complex:
        """q = exp(2 pi i tau)."""
        return cmath.exp(2j * math.pi * self.z)


@dataclass(frozen=True)
class ModularMatrix:
    """[[k, l], [m, n]] with k*n - l*m = 1."""

    k: int
    l: int
    m: int
    n: int

    def __post_init__(self):
        for name in ("k", "l", "m", "n"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise TypeError(f"entry {name} must be an integer")
        if self.k * self.n - self.l * self.m != 1:
            raise ValueError(f"determinant of {self.entries()} is not 1")

    @classmethod
    def identity(cls) -> "ModularMatrix":
        return cls(1, 0, 0, 1)

    def entries(self):
        return ((self.k, self.l), (self.m, self.n))

    def __matmul__(self, other: "ModularMatrix") -> "ModularMatrix":
        return ModularMatrix(
            self.k * other.k + self.l * other.m,
            self.k * other.l + self.l * other.n,
            self.m * other.k + self.n * other.m,
            self.m * other.l + self.n * other.n,
        )

    def inverse(self) -> "ModularMatrix":
        return ModularMatrix(self.n, -self.l, -self.m, self.k)

    def negate(self) -> "ModularMatrix":
        return ModularMatrix(-self.k, -self.l, -self.m, -self.n)

    def canonical_sign(self) -> "ModularMatrix":
        """Representative of +-gamma with m > 0, or m == 0 and n > 0."""
        if self.m < 0 or (self.m == 0 and self.n < 0):
            return self.negate()
        return self

    def max_entry(self) -> int:
        return max(abs(self.k), abs(self.l), abs(self.m), abs(self.n))


T = ModularMatrix(1, 1, 0, 1)
S = ModularMatrix(0, -1, 1, 0)


def apply_mobius(gamma: ModularMatrix, tau: HalfPlanePoint) -> HalfPlanePoint:
    t = tau.z
    return HalfPlanePoint.from_complex((gamma.k * t + gamma.l) / (gamma.m * t + gamma.n))


def in_fundamental_domain(tau: HalfPlanePoint, eps: float = _EDGE_EPS) -> bool:
    """Half-open on Re, closed on the arc only for Re >= 0."""
    x, y = tau.re, tau.im
    if not (-0.5 + eps < x <= 0.5 + eps):
        return False
    r2 = x * x + y * y
    if r2 < 1.0 - eps:
        return False
    if abs(r2 - 1.0) <= eps and x < -eps:
        return False
    return True


def reduce_to_fundamental_domain(tau: HalfPlanePoint):
    """Return ``(tau_star, gamma)`` with ``gamma . tau = tau_star`` in the domain.

    Domain: Re in (-1/2, 1/2], |tau| >= 1, and Re >= 0 on the unit arc.
    Points already in the domain come back unchanged with the identity.
    """
    if in_fundamental_domain(tau):
        return tau, ModularMatrix.identity()
    z = tau.z
    k, l, m, n = 1, 0, 0, 1
    for _ in range(10_000):
        shift = math.floor(z.real + 0.5)
        if shift:
            z -= shift
            k, l = k - shift * m, l - shift * n
        if z.real <= -0.5 + _EDGE_EPS:
            z += 1
            k, l = k + m, l + n
        r2 = z.real * z.real + z.imag * z.imag
        if r2 < 1.0 - _EDGE_EPS:
            z = -1 / z
            k, l, m, n = -m, -n, k, l
            continue
        if abs(r2 - 1.0) <= _EDGE_EPS and z.real < -_EDGE_EPS:
            z = -1 / z
            k, l, m, n = -m, -n, k, l
        break
    else:  # pragma: no cover - only for pathological inputs
        raise ArithmeticError(f"reduction of {tau} did not terminate")
    gamma = ModularMatrix(k, l, m, n).canonical_sign()
    return HalfPlanePoint.from_complex(z), gamma


def _boundary_moves():
    # SL2(Z) elements with entries in {-1, 0, 1}; enough to identify
    # boundary points of the closed domain that numerical noise split apart.
    out = []
    for k in (-1, 0, 1):
        for l in (-1, 0, 1):
            for m in (-1, 0, 1):
                for n in (-1, 0, 1):
                    if k * n - l * m == 1:
                        g = ModularMatrix(k, l, m, n).canonical_sign()
                        if g not in out:
                            out.append(g)
    return tuple(out)


_BOUNDARY_MOVES = _boundary_moves()


def _near_boundary(tau: HalfPlanePoint, slack: float) -> bool:
    return abs(abs(tau.re) - 0.5) < slack or abs(abs(tau.z) - 1.0) < slack


def match_reduced(a: HalfPlanePoint, b: HalfPlanePoint, tol: float = MODULUS_TOL):
    """Matrix delta with delta . a ~= b for two reduced points, or None.

    Usually delta is the identity; near the domain boundary a small move may be
    needed because rounding can put equivalent points on opposite edges.
    """
    if abs(a.z - b.z) <= tol:
        return ModularMatrix.identity()
    slack = 1e-6
    if _near_boundary(a, slack) and _near_boundary(b, slack):
        for g in _BOUNDARY_MOVES:
            if abs(apply_mobius(g, a).z - b.z) <= tol:
                return g
    return None


def _lambert(q: complex, power: int) -> complex:
    total = 0j
    qn = q
    nn = 1
    while True:
        term = nn**power * qn / (1 - qn)
        total += term
        if abs(term) < 1e-18:
            return total
        nn += 1
        qn *= q


def _discriminant(q: complex) -> complex:
    # Delta = q * prod (1 - q^n)^24
    prod = 1 + 0j
    qn = q
    while abs(qn) >= 1e-18:
        prod *= 1 - qn
        qn *= q
    return q * prod**24


def j_invariant(tau: HalfPlanePoint) -> complex:
    """Klein's j via j = E4^3 / Delta, evaluated at the reduced modulus.

    |j| ~ exp(2 pi Im tau) leaves double range once Im tau > ~112; such
    moduli return complex(inf, 0).
    """
    t, _ = reduce_to_fundamental_domain(tau)
    if t.im > _J_OVERFLOW_IM:
        return complex(math.inf, 0.0)
    q = t.nome()
    e4 = 1 + 240 * _lambert(q, 3)
    return e4**3 / _discriminant(q)


@dataclass(frozen=True)
class LatticePoint:
    """A point of C modulo the lattice Z + Z*tau."""

    z: complex
    tau: HalfPlanePoint

    def coordinates(self):
        """Real (a, b) with z = a + b*tau."""
        b = self.z.imag / self.tau.im
        a = self.z.real - b * self.tau.re
        return a, b

    def canonical(self) -> "LatticePoint":
        a, b = self.coordinates()
        a, b = _frac(a), _frac(b)
        return LatticePoint(complex(a + b * self.tau.re, b * self.tau.im), self.tau)

    def __neg__(self):
        return LatticePoint(-self.z, self.tau)

    def scale(self, n) -> "LatticePoint":
        return LatticePoint(n * self.z, self.tau)


def _frac(x: float) -> float:
    f = x - math.floor(x)
    return 0.0 if f >= 1.0 else f


def reduced_basis(tau: HalfPlanePoint):
    """A Gauss-reduced basis (w1, w2) of Z + Z*tau, |w1| <= |w2|."""
    _, g = reduce_to_fundamental_domain(tau)
    t = tau.z
    return g.m * t + g.n, g.k * t + g.l


def packing_radius(tau: HalfPlanePoint) -> float:
    """Half the length of a shortest non-zero vector of Z + Z*tau."""
    w1, _ = reduced_basis(tau)
    return abs(w1) / 2


def lattice_distances(z, tau: HalfPlanePoint) -> np.ndarray:
    """Vectorized Euclidean distance from each z to the lattice Z + Z*tau."""
    z = np.asarray(z, dtype=complex)
    w1, w2 = reduced_basis(tau)
    # coordinates in the reduced basis
    det = w1.real * w2.imag - w1.imag * w2.real
    alpha = (z.real * w2.imag - z.imag * w2.real) / det
    beta = (w1.real * z.imag - w1.imag * z.real) / det
    a0 = np.rint(alpha)
    b0 = np.rint(beta)
    fa = alpha - a0
    fb = beta - b0
    best = np.full(z.shape, np.inf)
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            d = np.abs((fa - i) * w1 + (fb - j) * w2)
            best = np.minimum(best, d)
    return best


def lattice_distance(p: LatticePoint) -> float:
    """Distance from p.z to the nearest point of Z + Z*tau."""
    return float(lattice_distances(np.array([p.z]), p.tau)[0])


@dataclass(frozen=True)
class IsogenyCertificate:
    matrix: tuple  # ((a, b), (c, d)) integer entries, det = degree
    degree: int
    residual: float

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if a * d - b * c != self.degree or self.degree <= 0:
            raise ValueError("certificate degree must equal a positive determinant")


def _hermite_forms(degree: int):
    # upper-triangular representatives [[a, b], [0, degree // a]] of
    # SL2(Z) \ {integer matrices of determinant degree}
    for a in range(degree, 0, -1):
        if degree % a:
            continue
        d = degree // a
        for b in range(d):
            yield a, b, d


def _matmul2(x, y):
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def bounded_isogeny_search(
    tau1: HalfPlanePoint,
    tau2: HalfPlanePoint,
    max_degree: int,
    tol: float = ISOGENY_TOL,
) -> Optional[IsogenyCertificate]:
    """First integer matrix of determinant <= max_degree carrying tau1 to tau2.

    Degrees are tried in increasing order and, within a degree, Hermite forms
    [[a, b], [0, d]] with a descending, then b ascending. Every integer matrix
    of that determinant equals an SL2(Z) element times one of these forms, so
    a ``None`` return means no isogeny of degree <= max_degree exists to
    within ``tol``; it says nothing about higher degrees.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    t1 = tau1.z
    target, h = reduce_to_fundamental_domain(tau2)
    h_inv = h.inverse()
    for degree in range(1, max_degree + 1):
        for a, b, d in _hermite_forms(degree):
            w = HalfPlanePoint.from_complex((a * t1 + b) / d)
            w_red, g = reduce_to_fundamental_domain(w)
            delta = match_reduced(w_red, target, tol)
            if delta is None:
                continue
            residual = abs(apply_mobius(delta, w_red).z - target.z)
            left = h_inv @ delta @ g
            matrix = _matmul2(left.entries(), ((a, b), (0, d)))
            return IsogenyCertificate(matrix=matrix, degree=degree, residual=residual)
    return None
