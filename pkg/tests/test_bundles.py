import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopftransform.bundles import (
    BundleHopfForm,
    BundleTauForm,
    convergents,
    default_u_rep,
    diophantine_report,
    hopf_to_tau,
    inverse_bundle,
    is_torsion,
    pic0_point,
    power_distances,
    rational_reconstruction,
    tau_to_hopf,
)
from hopftransform.errors import PreconditionError
from hopftransform.torus import HalfPlanePoint, LatticePoint, lattice_distance

I = HalfPlanePoint(0.0, 1.0)
GOLDEN = (math.sqrt(5) - 1) / 2

taus = st.builds(HalfPlanePoint, st.floats(-0.5, 0.5), st.floats(0.5, 3))
exps = st.floats(-3, 3, allow_nan=False)
bundles = st.builds(BundleTauForm, taus, exps, exps)


@pytest.mark.parametrize(
    "u, v, expected",
    [(0.0, 0.0, 0j), (0.0, 0.5, 0.5 + 0j), (-0.5, 0.0, 0.5j)],
)
def test_pic0_examples(u, v, expected):
    assert abs(pic0_point(BundleTauForm(I, u, v)).z - expected) < 1e-15


@given(bundles)
def test_pic0_is_v_minus_u_tau_mod_lattice(b):
    p = pic0_point(b)
    direct = b.v - b.u * b.tau.z
    assert lattice_distance(LatticePoint(p.z - direct, b.tau)) < 1e-9
    a, c = p.coordinates()
    assert 0 <= a < 1 + 1e-12 and 0 <= c < 1 + 1e-12


def test_torsion_examples():
    tv = is_torsion(BundleTauForm(I, 1 / 3, 1 / 2), 100)
    assert tv.is_torsion and tv.order == 6
    tv = is_torsion(BundleTauForm(I, 0.0, 0.0))
    assert tv.is_torsion and tv.order == 1
    tv = is_torsion(BundleTauForm(I, -1 / math.sqrt(2), 1 / math.sqrt(3)), 10**6)
    assert not tv.is_torsion and tv.order is None and tv.denominator_bound == 10**6


def test_torsion_respects_bound():
    b = BundleTauForm(I, 1 / 7, 2 / 9)
    # the bound applies to each exponent's denominator
    assert is_torsion(b, 9).order == 63
    assert not is_torsion(b, 8).is_torsion


def test_truncated_decimal_is_torsion_of_large_order():
    # 0.333333 is exactly 333333/10^6: torsion, but not of order 3
    tv = is_torsion(BundleTauForm(I, 0.333333, 0.5))
    assert tv.is_torsion and tv.order == 10**6


@settings(max_examples=200)
@given(st.integers(-500, 500), st.integers(1, 1000), st.integers(-500, 500), st.integers(1, 1000))
def test_torsion_recovers_exact_orders(p1, q1, p2, q2):
    b = BundleTauForm(I, p1 / q1, p2 / q2)
    tv = is_torsion(b, 10**6)
    assert tv.is_torsion
    assert tv.order == math.lcm(Fraction(p1, q1).denominator, Fraction(p2, q2).denominator)


@settings(max_examples=200)
@given(st.floats(-10, 10, allow_nan=False), st.integers(1, 10**4))
def test_rational_reconstruction_matches_fraction_oracle(x, bound):
    got = rational_reconstruction(x, bound)
    # oracle: best approximation with denominator <= bound from the stdlib
    best = Fraction(x).limit_denominator(bound)
    if abs(best.denominator * x - best.numerator) < 1e-10:
        assert got is not None and got.denominator <= best.denominator
    if got is not None:
        assert abs(got.denominator * x - got.numerator) < 1e-10


def test_convergents_of_golden_ratio_are_fibonacci():
    cs = [c for _, c in zip(range(10), convergents(GOLDEN))]
    assert [c.denominator for c in cs[1:8]] == [1, 2, 3, 5, 8, 13, 21]


def test_tau_to_hopf_examples():
    b = BundleTauForm(I, -0.5, 0.0)
    h = tau_to_hopf(b, -0.5)
    assert h.base_exp == I and abs(h.fiber_exp.z - 0.5j) < 1e-15
    # lambda = e^{-2 pi}, mu = e^{-pi}
    assert abs(abs(h.base_exp.nome()) - math.exp(-2 * math.pi)) < 1e-15
    assert abs(abs(h.fiber_exp.nome()) - math.exp(-math.pi)) < 1e-15
    h2 = tau_to_hopf(b, -1.5)
    assert abs(h2.fiber_exp.z - 1.5j) < 1e-15
    with pytest.raises(PreconditionError):
        tau_to_hopf(b, 0.5)
    with pytest.raises(PreconditionError):
        tau_to_hopf(b, -0.7)


def test_default_u_rep_is_negative_and_congruent():
    for u in (-3.2, -1.0, 0.0, 0.25, 2.0):
        r = default_u_rep(u)
        assert -1 <= r < 0
        assert abs((r - u) - round(r - u)) < 1e-12


def test_hopf_to_tau_examples():
    b = hopf_to_tau(BundleHopfForm(I, HalfPlanePoint(0.0, 0.5)))
    assert (b.u, b.v) == pytest.approx((-0.5, 0.0))
    b = hopf_to_tau(BundleHopfForm(I, HalfPlanePoint(0.5, 0.5)))
    assert (b.u, b.v) == pytest.approx((-0.5, 0.5))


def test_hopf_round_trip_example():
    b = BundleTauForm(HalfPlanePoint(0.3, 1.2), -0.7, 0.4)
    back = hopf_to_tau(tau_to_hopf(b, -0.7))
    assert back.tau == b.tau
    assert abs(back.u - b.u) < 1e-10 and abs(back.v - b.v) < 1e-10


@given(bundles)
def test_hopf_round_trip_preserves_class(b):
    back = hopf_to_tau(tau_to_hopf(b))
    assert lattice_distance(LatticePoint(pic0_point(back).z - pic0_point(b).z, b.tau)) < 1e-9


def test_inverse_examples():
    b = inverse_bundle(BundleTauForm(I, -0.5, 1 / 3))
    assert (b.u, b.v) == (0.5, -1 / 3)
    triv = BundleTauForm(I, 0.0, 0.0)
    assert pic0_point(inverse_bundle(triv)).z == 0


@given(bundles)
def test_inverse_negates_class(b):
    s = pic0_point(inverse_bundle(b)).z + pic0_point(b).z
    assert lattice_distance(LatticePoint(s, b.tau)) < 1e-9


def test_power_distances_brute_force():
    b = BundleTauForm(HalfPlanePoint(0.13, 1.1), -0.377, 0.811)
    d = power_distances(b, 200)
    p = b.v - b.u * b.tau.z
    for n in (2, 3, 17, 200):
        ref = lattice_distance(LatticePoint(n * p, b.tau))
        assert abs(d[n - 2] - ref) < 1e-9


def test_diophantine_golden_ratio():
    rep = diophantine_report(BundleTauForm(I, 0.0, GOLDEN), 10**5)
    assert rep.verdict == "diophantine-consistent"
    assert rep.exponent_estimate <= 1.2


def test_diophantine_torsion_hits_at_six():
    rep = diophantine_report(BundleTauForm(I, 1 / 3, 1 / 2), 10)
    assert rep.verdict == "torsion" and rep.worst_n == 6 and rep.exponent_estimate == math.inf


def test_diophantine_generic_is_consistent():
    rep = diophantine_report(BundleTauForm(I, -1 / math.sqrt(2), 1 / math.sqrt(3)), 10**4)
    assert rep.verdict == "diophantine-consistent"
    assert 0 < rep.exponent_estimate < 2


def test_diophantine_close_rational_is_suspect():
    # a rational with a huge denominator looks like a very good approximation
    rep = diophantine_report(BundleTauForm(I, 0.0, 1 / 7 + 1e-12), 100)
    assert rep.verdict == "suspect"


def test_diophantine_rejects_tiny_nmax():
    with pytest.raises(ValueError):
        diophantine_report(BundleTauForm(I, 0.1, 0.2), 1)
