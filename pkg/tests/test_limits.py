import math

import pytest

from fracmass import (Ball, Box, Bump, Complement, Constant, HalfSpace,
                      Indicator, Intersection, LimitsError, Periodic1D,
                      PeriodicProfile, Polynomial, Product, ProfileReach,
                      RadialAngular, RadialShells, Sector, Sum, TrigPoly,
                      Union, F0_even_p, F0_main, critical_alpha,
                      interaction_energy, limit_report, perimeter_limit)

DISK = Ball((0.0, 0.0), 1.0)
INTERVAL = Box((-1.0,), (1.0,))
BUMP2 = Bump((0.0, 0.0), 1.0)
SECTOR_HALF = Sector(2, arcs=((0.0, math.pi / 2),))
# sector wide enough to contain Ball((3,0),1) entirely
SECTOR_IN = Sector(2, arcs=((-math.pi / 4, math.pi / 2),))
BALL_INSIDE = Ball((3.0, 0.0), 1.0)


def example_v():
    ramp = Product((Polynomial(1, ((1.0, (1,)),)), Indicator(INTERVAL)))
    return Sum((Constant(1, 1.0), ramp))


# ---------------------------------------------------------------------------
# binomial limit functional


def test_f0_compact_support(spec):
    # ||bump||^2 over the unit disk is pi/5, limit is half the sphere mass
    # times that
    est = F0_main(BUMP2, Ball((0.0, 0.0), 1.5), 2, spec)
    assert est.value == pytest.approx(math.pi ** 2 / 5, abs=1e-9)


def test_f0_constant_vanishes(spec):
    est = F0_main(Constant(2, 3.0), DISK, 2, spec)
    assert abs(est.value) <= max(est.error, 1e-10)


def test_f0_ramp_example(spec):
    # exact moments: int v = 2, int v^2 = 8/3, |omega| = 2, all alphas 1
    est = F0_main(example_v(), INTERVAL, 1, spec)
    assert est.value == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_even_p_two_matches_main(spec):
    for f, om in ((Indicator(SECTOR_HALF), DISK),
                  (BUMP2, Ball((0.0, 0.0), 1.5))):
        via_p = F0_even_p(f, om, 2, 2, spec)
        direct = F0_main(f, om, 2, spec)
        assert via_p.value == pytest.approx(direct.value, abs=1e-13)


def test_even_p_indicator_telescopes(spec):
    est = F0_even_p(Indicator(SECTOR_HALF), DISK, 4, 2, spec)
    a = math.pi / 2
    m_in = math.pi / 4
    m_out = math.pi - m_in
    oracle = (2.0 * math.pi - a) / 4.0 * m_in + a / 4.0 * m_out
    assert est.value == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("p", [2, 4, 6])
def test_even_p_constant_vanishes(spec, p):
    est = F0_even_p(Constant(1, 2.0), INTERVAL, p, 1, spec)
    assert abs(est.value) <= max(est.error, 1e-9)


@pytest.mark.parametrize("p", [1, 3, 5, 2.5])
def test_non_even_p_rejected(spec, p):
    with pytest.raises(LimitsError):
        F0_even_p(Indicator(SECTOR_HALF), DISK, p, 2, spec)


# ---------------------------------------------------------------------------
# interaction energy route


def test_interaction_compact_matches_f0(spec):
    om = Ball((0.0, 0.0), 1.5)
    ie = interaction_energy(BUMP2, om, 2)
    assert ie.value == pytest.approx(math.pi ** 2 / 5, abs=1e-9)
    assert ie.value == pytest.approx(F0_main(BUMP2, om, 2, spec).value,
                                     abs=1e-8)


def test_interaction_constant_zero():
    est = interaction_energy(Constant(2, 3.0), DISK, 2)
    assert est.value == 0.0


def test_interaction_sector_seen_from_inside(spec):
    # u = 1 on omega, u_inf = arc indicator, so the angular factor
    # integrates to the complementary arc length
    ie = interaction_energy(Indicator(SECTOR_IN), BALL_INSIDE, 2)
    target = 0.5 * (2.0 * math.pi - math.pi / 2) * math.pi
    assert ie.value == pytest.approx(target, abs=1e-8)
    f0 = F0_main(Indicator(SECTOR_IN), BALL_INSIDE, 2, spec)
    assert abs(ie.value - f0.value) <= 1e-8


def test_interaction_needs_angular_limit():
    stripes = Periodic1D(PeriodicProfile(1.0, (0.0, 0.5), (1.0, 0.0)))
    with pytest.raises(LimitsError):
        interaction_energy(stripes, INTERVAL, 1)
    with pytest.raises(LimitsError):
        interaction_energy(Indicator(RadialShells(2)), DISK, 2)


EQUIVALENCE_CASES = [
    (BUMP2, Ball((0.0, 0.0), 1.5)),
    (Sum((Constant(2, 0.5), BUMP2)), Ball((0.0, 0.0), 1.5)),
    (Indicator(SECTOR_IN), BALL_INSIDE),
    (RadialAngular(ProfileReach(1.0, 1.0), TrigPoly(1.0, (0.5,))),
     Ball((0.0, 0.0), 2.0)),
]


@pytest.mark.parametrize("f,om", EQUIVALENCE_CASES)
def test_binomial_interaction_equivalence(spec, f, om):
    f0 = F0_main(f, om, 2, spec)
    ie = interaction_energy(f, om, 2)
    assert abs(f0.value - ie.value) <= 1e-6
    assert ie.value >= 0.0
    assert f0.value >= -1e-10


# ---------------------------------------------------------------------------
# perimeter limit


def test_perimeter_bounded_set(spec):
    est = perimeter_limit(Ball((0.2, 0.0), 0.5), DISK, 2, spec)
    assert est.value == pytest.approx(math.pi ** 2 / 4, abs=1e-10)


def test_perimeter_halfspace_through_center(spec):
    est = perimeter_limit(HalfSpace((1.0, 0.0)), DISK, 2, spec)
    assert est.value == pytest.approx(math.pi ** 2 / 2, abs=1e-10)


def test_perimeter_sector(spec):
    th = math.pi / 3
    est = perimeter_limit(Sector(2, arcs=((0.0, th),)), DISK, 2, spec)
    assert est.value == pytest.approx(0.5 * th * (2.0 * math.pi - th),
                                      abs=1e-10)


def test_perimeter_needs_mass_at_infinity(spec):
    with pytest.raises(LimitsError):
        perimeter_limit(RadialShells(2), DISK, 2, spec)


@pytest.mark.parametrize("region", [HalfSpace((1.0, 0.0)),
                                    Sector(2, arcs=((0.0, math.pi / 3),))])
def test_perimeter_matches_indicator_f0(spec, region):
    per = perimeter_limit(region, DISK, 2, spec)
    f0 = F0_main(Indicator(region), DISK, 2, spec)
    assert abs(per.value - f0.value) <= 1e-12


# ---------------------------------------------------------------------------
# critical case


def test_critical_halfspace(spec):
    est = critical_alpha(Indicator(HalfSpace((1.0, 0.0))), DISK, 2, spec)
    assert est.value == pytest.approx(math.pi ** 2 / 2, abs=1e-10)


def test_critical_constant_zero(spec):
    est = critical_alpha(Constant(2, 5.0), DISK, 2, spec)
    assert abs(est.value) <= est.error + 1e-12


def test_critical_survives_wild_tail(spec):
    # half-measure inside omega, oscillating shells glued on outside: the
    # derived field is still constant, so the critical limit exists even
    # though alpha_1 of the set does not
    wild = Union((
        Intersection((HalfSpace((1.0, 0.0)), Ball((0.0, 0.0), 1.0))),
        Intersection((RadialShells(2), Complement(Ball((0.0, 0.0), 2.0)))),
    ))
    est = critical_alpha(Indicator(wild), DISK, 2, spec)
    assert est.value == pytest.approx(math.pi ** 2 / 2, abs=1e-10)
    with pytest.raises(LimitsError):
        perimeter_limit(wild, DISK, 2, spec)


def test_critical_general_route_compact_field(spec):
    # non-indicator field exercises the derived-field construction; only
    # the constant term contributes to its mass, giving int f^2 back
    est = critical_alpha(Bump((0.0,), 1.0), Ball((0.0,), 2.0), 1, spec)
    assert est.value == pytest.approx(256.0 / 315.0, abs=1e-10)


# ---------------------------------------------------------------------------
# combined report


def test_report_all_routes_agree(spec):
    rep = limit_report(Indicator(HalfSpace((1.0, 0.0))), DISK, 2, spec)
    assert rep.F0_binomial is not None
    assert rep.interaction_energy is not None
    assert rep.perimeter_limit is not None
    assert rep.critical_alpha is not None
    assert len(rep.consistency_deltas) == 6
    for key, delta in rep.consistency_deltas.items():
        assert "_vs_" in key
        assert delta <= 1e-9


def test_report_skips_inapplicable_routes(spec):
    rep = limit_report(Constant(2, 2.0), DISK, 2, spec)
    assert rep.perimeter_limit is None
    assert rep.F0_binomial is not None
    assert rep.interaction_energy is not None
    assert rep.critical_alpha is not None
    assert len(rep.consistency_deltas) == 3
    assert all(d <= 1e-9 for d in rep.consistency_deltas.values())
