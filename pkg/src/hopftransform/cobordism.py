"""Hopf-dual and analytically cobordant line bundles.

A move ``(gamma, r, use_negation)`` with gamma = [[k, l], [m, n]] in SL2(Z)
sends a bundle L(tau, q^u, q^v) to the diagonal Hopf surface
H(q^tau', q^sigma') with

    tau'   = (k tau + l) / (m tau + n)
    u'     = m v + n u + r            (must be < 0)
    v'     = k v + l u
    sigma' = -u' tau' + v' = (v - u tau - r (k tau + l)) / (m tau + n)

The curve C*/q^sigma' is the graft; the bundle over it obtained by removing
the other axis is Hopf dual to the source. Moves are well-ordered: in shell
s >= 1 we list every gamma with max|entry| <= s in lexicographic order, and
with it every admissible r such that max(|k|, |l|, |m|, |n|, |r|) == s,
sorted by |u'| and then by the negation flag. Each shell is finite, so every
move is reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional

from .bundles import (
    DEFAULT_DENOMINATOR_BOUND,
    BundleHopfForm,
    BundleTauForm,
    DiophantineReport,
    TorsionVerdict,
    diophantine_report,
    hopf_to_tau,
    inverse_bundle,
    is_torsion,
    pic0_point,
)
from .errors import PreconditionError
from .hopf import (
    X_AXIS,
    HopfSurface,
    SecondaryHopfData,
    complement_bundle,
    isogeny_pullback,
    secondary_quotient,
)
from .torus import (
    _BOUNDARY_MOVES,
    MODULUS_TOL,
    HalfPlanePoint,
    IsogenyCertificate,
    LatticePoint,
    ModularMatrix,
    apply_mobius,
    bounded_isogeny_search,
    j_invariant,
    lattice_distance,
    _near_boundary,
    match_reduced,
    reduce_to_fundamental_domain,
)

IDENTITY_TOL = 1e-10
# u' closer to 0 than this is treated as non-negative
ADMISSIBLE_EPS = 1e-12
DEFAULT_NMAX = 10_000
DEFAULT_ISOGENY_DEGREE = 20
DEFAULT_SECONDARY_N = 12


@dataclass(frozen=True)
class CobordismMove:
    gamma: ModularMatrix
    r: int
    use_negation: bool = False


@dataclass(frozen=True)
class GraftReport:
    move: CobordismMove
    graft_exponent: HalfPlanePoint
    graft_reduced: HalfPlanePoint
    graft_j: complex
    target_bundle: BundleTauForm
    torsion: Optional[TorsionVerdict] = None
    diophantine: Optional[DiophantineReport] = None
    isogeny_to_source: Optional[IsogenyCertificate] = None
    relation: str = "hopf-dual"  # or "identity" for the report L' = L
    surface: Optional[HopfSurface] = field(default=None, compare=False)


@dataclass(frozen=True)
class CompactificationRecord:
    kind: str  # "ruled" | "primary-hopf" | "secondary-hopf"
    data: object  # BundleTauForm | HopfSurface | SecondaryHopfData
    move: Optional[CobordismMove] = None


def _move_data(b: BundleTauForm, mv: CobordismMove):
    g = mv.gamma
    u, v = (-b.u, -b.v) if mv.use_negation else (b.u, b.v)
    u2 = g.m * v + g.n * u + mv.r
    v2 = g.k * v + g.l * u
    return u, v, u2, v2


def graft_exponents(b: BundleTauForm, mv: CobordismMove):
    """The two algebraically equal expressions for the graft modulus.

    Returns ``(direct, via_move)`` with direct = (v - u tau - r (k tau + l)) /
    (m tau + n) and via_move = -u' tau' + v'.
    """
    g = mv.gamma
    t = b.tau.z
    u, v, u2, v2 = _move_data(b, mv)
    direct = (v - u * t - mv.r * (g.k * t + g.l)) / (g.m * t + g.n)
    t2 = (g.k * t + g.l) / (g.m * t + g.n)
    return direct, -u2 * t2 + v2


def _graft(b: BundleTauForm, mv: CobordismMove):
    """Cheap part of apply_move: (tau', sigma', target bundle)."""
    u, v, u2, v2 = _move_data(b, mv)
    if not u2 < -ADMISSIBLE_EPS:
        raise PreconditionError(
            f"move gives u' = {u2:.6g} >= 0; no Hopf presentation exists", "admissible-move"
        )
    direct, via = graft_exponents(b, mv)
    if abs(direct - via) > IDENTITY_TOL * max(1.0, abs(direct)):
        raise ArithmeticError(f"graft identity violated: {direct} vs {via}")
    tau2 = apply_mobius(mv.gamma, b.tau)
    sigma = HalfPlanePoint.from_complex(direct)
    surface = HopfSurface(tau2, sigma)
    target = hopf_to_tau(complement_bundle(surface, X_AXIS))
    return tau2, sigma, surface, target


def _require_non_torsion(b: BundleTauForm, bound: int, what: str = "normal bundle"):
    tv = is_torsion(b, bound)
    if tv.is_torsion:
        raise PreconditionError(f"{what} torsion (order {tv.order})", "non-torsion")
    return tv


def _finish(
    source: BundleTauForm,
    mv: CobordismMove,
    sigma: HalfPlanePoint,
    surface: Optional[HopfSurface],
    target: BundleTauForm,
    relation: str,
    torsion_bound: int,
    n_max: Optional[int],
    isogeny_degree: Optional[int],
) -> GraftReport:
    reduced, _ = reduce_to_fundamental_domain(sigma)
    return GraftReport(
        move=mv,
        graft_exponent=sigma,
        graft_reduced=reduced,
        graft_j=j_invariant(reduced),
        target_bundle=target,
        torsion=is_torsion(target, torsion_bound),
        diophantine=diophantine_report(target, n_max) if n_max else None,
        isogeny_to_source=(
            bounded_isogeny_search(sigma, source.tau, isogeny_degree) if isogeny_degree else None
        ),
        relation=relation,
        surface=surface,
    )


def apply_move(
    b: BundleTauForm,
    mv: CobordismMove,
    *,
    torsion_bound: int = DEFAULT_DENOMINATOR_BOUND,
    n_max: Optional[int] = DEFAULT_NMAX,
    isogeny_degree: Optional[int] = DEFAULT_ISOGENY_DEGREE,
) -> GraftReport:
    """Graft report for one move on b (the target is Hopf dual to b).

    ``n_max`` / ``isogeny_degree`` set the Diophantine and isogeny budgets;
    pass None to skip those fields.
    """
    _require_non_torsion(b, torsion_bound)
    _, sigma, surface, target = _graft(b, mv)
    return _finish(b, mv, sigma, surface, target, "hopf-dual", torsion_bound, n_max, isogeny_degree)


@lru_cache(maxsize=None)
def _matrices_upto(s: int):
    out = []
    rng = range(-s, s + 1)
    for k, l, m in product(rng, rng, rng):
        if k:
            num = 1 + l * m
            if num % k == 0 and abs(num // k) <= s:
                out.append(ModularMatrix(k, l, m, num // k))
        elif l * m == -1:
            for n in rng:
                out.append(ModularMatrix(k, l, m, n))
    out.sort(key=lambda g: (g.k, g.l, g.m, g.n))
    return tuple(out)


def _shell_moves(b: BundleTauForm, gamma: ModularMatrix, s: int):
    """Admissible moves of height s for this gamma, by (|u'|, negation)."""
    if gamma.max_entry() == s:
        rs = range(-s, s + 1)
    else:
        rs = (-s, s)
    found = []
    for neg in (False, True):
        _, _, base, _ = _move_data(b, CobordismMove(gamma, 0, neg))
        for r in rs:
            u2 = base + r
            if u2 < -ADMISSIBLE_EPS:
                found.append((-u2, neg, r))
    found.sort()
    return [CobordismMove(gamma, r, neg) for _, neg, r in found]


def canonical_moves(b: BundleTauForm, max_shell: Optional[int] = None) -> Iterator[CobordismMove]:
    """All admissible moves on b in the canonical well-order (see module doc)."""
    s = 1
    while max_shell is None or s <= max_shell:
        for g in _matrices_upto(s):
            yield from _shell_moves(b, g, s)
        s += 1


class _EquivalenceIndex:
    """Bundles already seen, bucketed by reduced modulus."""

    _CELL = 1e-6

    def __init__(self):
        self._buckets = {}

    def _key(self, t: HalfPlanePoint):
        return (math.floor(t.re / self._CELL), math.floor(t.im / self._CELL))

    def add(self, b: BundleTauForm):
        nf = _normal_form(b)
        taus = [nf.tau]
        if _near_boundary(nf.tau, 1e-6):
            # equivalent moduli may land on the opposite edge
            taus += [apply_mobius(g, nf.tau) for g in _BOUNDARY_MOVES]
        for key in {self._key(t) for t in taus}:
            self._buckets.setdefault(key, []).append(nf)

    def contains(self, b: BundleTauForm, tol: float = MODULUS_TOL) -> bool:
        nf = _normal_form(b)
        i, j = self._key(nf.tau)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                for other in self._buckets.get((i + di, j + dj), ()):
                    if _normal_forms_equivalent(nf, other, tol):
                        return True
        return False


def transport(b: BundleTauForm, gamma: ModularMatrix) -> BundleTauForm:
    """The same bundle presented over gamma . tau."""
    g = gamma
    return BundleTauForm(apply_mobius(g, b.tau), g.m * b.v + g.n * b.u, g.k * b.v + g.l * b.u)


def _normal_form(b: BundleTauForm):
    red, g = reduce_to_fundamental_domain(b.tau)
    return transport(b, g)


_ROOTS = tuple(complex(math.cos(math.pi * k / 6), math.sin(math.pi * k / 6)) for k in range(12))


def _lattice_units(tau: HalfPlanePoint, tol: float):
    """Roots of unity zeta with zeta * (Z + Z tau) = Z + Z tau."""
    out = []
    for zeta in _ROOTS:
        if lattice_distance(LatticePoint(zeta, tau)) < tol and lattice_distance(
            LatticePoint(zeta * tau.z, tau)
        ) < tol:
            out.append(zeta)
    return out


def _normal_forms_equivalent(a: BundleTauForm, b: BundleTauForm, tol: float) -> bool:
    delta = match_reduced(a.tau, b.tau, tol)
    if delta is None:
        return False
    if delta != ModularMatrix.identity():
        a = transport(a, delta)
    pa = pic0_point(a).z
    pb = pic0_point(b).z
    for zeta in _lattice_units(b.tau, tol):
        if lattice_distance(LatticePoint(pb - zeta * pa, b.tau)) < tol:
            return True
    return False


def bundles_equivalent(b1: BundleTauForm, b2: BundleTauForm, tol: float = MODULUS_TOL) -> bool:
    """Isomorphic curves and Pic^0 classes matching up to Aut(E, 0).

    Classes are compared modulo the lattice (translations of the curve extend
    to the Hopf surface) and up to the automorphisms fixing zero: negation
    always, plus the order-4 or order-6 units at j = 1728 or j = 0.
    """
    return _normal_forms_equivalent(_normal_form(b1), _normal_form(b2), tol)


def _identity_report(b, torsion_bound, n_max, isogeny_degree):
    mv = CobordismMove(ModularMatrix.identity(), 0, False)
    return _finish(b, mv, b.tau, None, b, "identity", torsion_bound, n_max, isogeny_degree)


def iter_hopf_duals(
    b: BundleTauForm,
    *,
    torsion_bound: int = DEFAULT_DENOMINATOR_BOUND,
    n_max: Optional[int] = DEFAULT_NMAX,
    isogeny_degree: Optional[int] = DEFAULT_ISOGENY_DEGREE,
    seen: Optional[_EquivalenceIndex] = None,
    max_shell: Optional[int] = None,
) -> Iterator[GraftReport]:
    """Pairwise non-equivalent Hopf duals of b, in canonical move order."""
    _require_non_torsion(b, torsion_bound)
    seen = seen if seen is not None else _EquivalenceIndex()
    for mv in canonical_moves(b, max_shell):
        _, sigma, surface, target = _graft(b, mv)
        if seen.contains(target):
            continue
        seen.add(target)
        yield _finish(b, mv, sigma, surface, target, "hopf-dual", torsion_bound, n_max, isogeny_degree)


def iter_cobordant(
    b: BundleTauForm,
    *,
    torsion_bound: int = DEFAULT_DENOMINATOR_BOUND,
    n_max: Optional[int] = DEFAULT_NMAX,
    isogeny_degree: Optional[int] = DEFAULT_ISOGENY_DEGREE,
    max_shell: Optional[int] = None,
) -> Iterator[GraftReport]:
    """b itself, then the Hopf duals of b^-1, deduplicated up to equivalence."""
    _require_non_torsion(b, torsion_bound)
    yield _identity_report(b, torsion_bound, n_max, isogeny_degree)
    seen = _EquivalenceIndex()
    seen.add(b)
    yield from iter_hopf_duals(
        inverse_bundle(b),
        torsion_bound=torsion_bound,
        n_max=n_max,
        isogeny_degree=isogeny_degree,
        seen=seen,
        max_shell=max_shell,
    )


def _take(it, count):
    out = []
    for rep in it:
        out.append(rep)
        if len(out) >= count:
            break
    return out


def enumerate_cobordant(b: BundleTauForm, count: int, **budgets) -> list:
    """First ``count`` analytically cobordant bundles of b with graft reports."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return _take(iter_cobordant(b, **budgets), count)


def enumerate_hopf_duals(b: BundleTauForm, count: int, **budgets) -> list:
    if count < 1:
        raise ValueError("count must be >= 1")
    return _take(iter_hopf_duals(b, **budgets), count)


def _secondary_records(b, torsion_bound, max_n):
    for n in range(2, max_n + 1):
        pulled = isogeny_pullback(b, n)
        if is_torsion(pulled, torsion_bound).is_torsion:
            continue
        first = next(iter_hopf_duals(pulled, torsion_bound=torsion_bound, n_max=None, isogeny_degree=None))
        for r in range(1, n):
            if math.gcd(r, n) == 1:
                yield CompactificationRecord(
                    "secondary-hopf", secondary_quotient(first.surface, n, r), first.move
                )


def minimal_compactifications(
    b: BundleTauForm,
    count: int,
    *,
    torsion_bound: int = DEFAULT_DENOMINATOR_BOUND,
    secondary_max_n: int = DEFAULT_SECONDARY_N,
) -> list:
    """The ruled surface P(O + L), then Hopf surfaces compactifying Tot(L).

    Primary Hopf records come from moves on b itself. Secondary descriptors
    come from pulling b back along the degree-n isogeny (n <= secondary_max_n)
    and taking the first primary surface of the pullback, one descriptor per
    r coprime to n. The two Hopf streams alternate, primary first.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    _require_non_torsion(b, torsion_bound)
    records = [CompactificationRecord("ruled", b)]
    primary = (
        CompactificationRecord("primary-hopf", rep.surface, rep.move)
        for rep in iter_hopf_duals(b, torsion_bound=torsion_bound, n_max=None, isogeny_degree=None)
    )
    secondary = _secondary_records(b, torsion_bound, secondary_max_n)
    streams = [primary, secondary]
    turn = 0
    while len(records) < count and streams:
        stream = streams[turn % len(streams)]
        rec = next(stream, None)
        if rec is None:
            streams.remove(stream)
            continue
        records.append(rec)
        turn += 1
    return records
