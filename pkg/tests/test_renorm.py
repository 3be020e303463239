import pytest

from lemonlimbs.angles import Angle
from lemonlimbs.combinatorics import dynamically_reducible
from lemonlimbs.errors import NotInLimb
from lemonlimbs.numerics import CubicMap, landing_point, trace_ray
from lemonlimbs.renorm import (
    build_wakes,
    classify_coland_orbit,
    critical_orbit,
    lren_membership,
    make_chebyshev_basilica,
    make_merging_example,
)
from lemonlimbs.simulating import simulating_pair

CENTER_1_3 = 0.500869863534904 - 0.25967795067238336j


@pytest.fixture(scope="module")
def center_wakes():
    return build_wakes(CubicMap(CENTER_1_3), "1/3")


@pytest.fixture(scope="module")
def cheb():
    return make_chebyshev_basilica()


def test_chebyshev_basilica_critical_orbits(cheb):
    P = cheb
    # 0 lands on a fixed point after two steps; -2a has period two
    p2 = P.iterate(0j, 2)
    assert abs(P(p2) - p2) < 1e-12
    assert abs(P(0j) - p2) > 1e-3
    w = -2 * P.a
    assert abs(P.iterate(w, 2) - w) < 1e-12
    assert abs(P(w) - w) > 1e-3
    assert P.a == pytest.approx(0.5717794991099596 + 0.12022438929346632j, abs=1e-10)
    assert P.b == pytest.approx(-1.191214237957742 - 1.1271967994194019j, abs=1e-10)


def test_chebyshev_basilica_rays(cheb):
    P = cheb
    # ray 0 lands on the image of the central critical value
    assert landing_point(P, "0").z == pytest.approx(P.iterate(0j, 2), abs=1e-8)
    assert landing_point(P, "2/3").z == pytest.approx(P.b, abs=1e-8)
    assert landing_point(P, "2/9").z == pytest.approx(0, abs=1e-5)


def test_chebyshev_basilica_report(cheb):
    rep = classify_coland_orbit(cheb, "1/3")
    assert rep.period == 1 and rep.merged
    assert abs(rep.multiplier) > 1
    assert rep.rotation == Angle(1, 2)
    assert rep.yoccoz_ok
    assert lren_membership(cheb, "1/3").kind == "InLocus"


def test_merging_example():
    P = make_merging_example()
    rep = classify_coland_orbit(P, "1/5")
    assert (rep.period, rep.merged, rep.yoccoz_ok) == (2, True, True)
    # merging is only possible for reducible combinatorics
    assert dynamically_reducible(simulating_pair("1/5").sigma) is not None


def test_center_is_not_merged():
    rep = classify_coland_orbit(CubicMap(CENTER_1_3), "1/3")
    assert rep.period == 2 and not rep.merged
    assert rep.yoccoz_ok
    assert rep.rotation == Angle(0)


@pytest.mark.parametrize(
    "b,kind,detail",
    [
        (0, "InLocus", ""),
        (-0.03 - 0.01j, "InLocus", ""),
        (-0.04 - 0.03j, "Escaped", "left-wake"),
        (0.05, "Escaped", "to-infinity"),
        (0.3, "Escaped", "to-infinity"),
    ],
)
def test_lren_verdicts(b, kind, detail):
    v = lren_membership(CubicMap(CENTER_1_3, b), "1/3")
    assert v.kind == kind
    assert v.detail == detail


def test_lren_outside_the_limb_is_inconclusive():
    v = lren_membership(CubicMap(CENTER_1_3, 0.04j), "1/3")
    assert v.kind == "Inconclusive"


def test_build_wakes_rejects_non_colanding():
    with pytest.raises(NotInLimb):
        build_wakes(CubicMap(CENTER_1_3, 0.04j), "1/3")


def _sample(P, theta, potentials=(0.6, 0.2, 0.05, 0.01)):
    tr = trace_ray(P, theta, s_end=min(potentials))
    return [z for z, s in tr.points if any(abs(s - p) / p < 0.03 for p in potentials)]


@pytest.mark.parametrize("theta", ["13/16", "4/5", "31/40", "6/7"])
def test_peripheral_wake_maps_to_next_wake(center_wakes, theta):
    W = center_wakes
    P = W.P
    sigma = W.sp.sigma
    pts = _sample(P, Angle.parse(theta))
    assert pts
    for z in pts:
        assert W.wake_index(z) == 2
        assert W.wake_index(P(z)) == sigma(2)


@pytest.mark.parametrize("theta", ["4/15", "3/11", "3/5", "11/18"])
def test_critical_wake_minus_subwake_maps_onto_next_wake(center_wakes, theta):
    W = center_wakes
    P = W.P
    k = W.sp.k
    for z in _sample(P, Angle.parse(theta)):
        assert W.wake_index(z) == k
        assert not W.subwake.contains(z)
        assert W.wake_index(P(z)) == W.sp.sigma(k)


def test_critical_orbit_continues_periodically(cheb):
    orbit = critical_orbit(cheb, 0j, 200)
    assert len(orbit) == 201
    assert abs(orbit[-1] - orbit[2]) < 1e-9
