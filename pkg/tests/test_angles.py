from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from lemonlimbs.angles import Angle, cyclically_between, forward_orbit, is_periodic, mul_map, parse_angle_list, period
from lemonlimbs.errors import ZeroDenominator

from oracles import cycles

angles = st.builds(lambda p, q: Angle(p, q), st.integers(-500, 500), st.integers(1, 500))


def test_reduced_and_normalized():
    a = Angle(10, 8)
    assert (a.num, a.den) == (1, 4)
    assert Angle(-1, 3) == Angle(2, 3)
    assert str(Angle(0, 5)) == "0"


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDenominator):
        Angle(1, 0)


def test_parse_and_format_round_trip():
    xs = parse_angle_list("{1/7,2/7,4/7}")
    assert xs == [Angle(1, 7), Angle(2, 7), Angle(4, 7)]
    assert str(Angle.parse(" 3/9 ")) == "1/3"


@given(angles, angles)
def test_addition_is_exact(a, b):
    assert (a + b).value == (a.value + b.value) % 1


@given(angles, st.integers(1, 6), st.integers(1, 6))
def test_multiplication_maps_compose(a, j, k):
    assert mul_map(j, mul_map(k, a)) == mul_map(j * k, a)


@given(st.integers(2, 4), st.integers(0, 400), st.integers(1, 400))
def test_period_returns_angle(k, p, q):
    theta = Angle(p, q)
    if gcd(theta.den, k) != 1:
        assert not is_periodic(k, theta)
        return
    x = theta
    for _ in range(period(k, theta)):
        x = mul_map(k, x)
    assert x == theta


@given(st.integers(2, 3), st.integers(0, 300), st.integers(1, 300))
def test_forward_orbit_strictly_increasing(k, p, q):
    theta = Angle(p, q)
    if gcd(theta.den, k) != 1:
        return
    vals = [a.value for a in forward_orbit(k, theta)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert all(0 <= v < 1 for v in vals)


@pytest.mark.parametrize("k,q", [(2, 1), (2, 4), (2, 6), (3, 3), (3, 4)])
def test_periodic_points_are_fractions_over_k_power_minus_one(k, q):
    n = k**q - 1
    exact = {Fraction(p, n) for p in range(n) if period(k, Angle(p, n)) == q}
    from_cycles = {x for c in cycles(k, q) for x in c}
    assert exact == from_cycles


def test_cyclically_between_wraps():
    assert cyclically_between(Angle(7, 8), Angle(0), Angle(1, 8))
    assert not cyclically_between(Angle(1, 8), Angle(1, 2), Angle(1, 4))
