import pytest
from hypothesis import given, settings, strategies as st

from lemonlimbs.angles import Angle, forward_orbit
from lemonlimbs.combinatorics import (
    Permutation,
    all_cycles,
    combinatorics,
    count_realizations,
    degree,
    dynamically_reducible,
    enumerate_realizations,
    m2_combinatorics,
    parse_cyclic,
    parse_permutation,
    reduction_certificates,
    rotation_number,
)
from lemonlimbs.errors import DegreeTooHigh, InstanceTooLarge

from oracles import cycles, cyclic_descents, one_line, realizations


def test_parse_notations_agree():
    assert parse_permutation("(1243)") == parse_permutation("[2,4,1,3]") == parse_permutation("(1 2 4 3)")
    assert str(parse_cyclic("(1243)")) == "(1243)"
    with pytest.raises(ValueError):
        parse_cyclic("(12)(34)")


def test_combinatorics_of_period_four_doubling_cycle():
    sigma = combinatorics(forward_orbit(2, Angle(1, 5)))
    assert str(sigma) == "(1243)"
    assert degree(sigma) == 2
    assert rotation_number(sigma) is None


def test_rotation_cycle():
    sigma = combinatorics(forward_orbit(2, Angle(1, 7)))
    assert degree(sigma) == 1
    assert rotation_number(sigma) == Angle(1, 3)


def test_single_point_has_degree_one():
    assert degree(Permutation((1,))) == 1


@pytest.mark.parametrize("q", range(2, 9))
def test_degree_matches_descent_oracle(q):
    for c in cycles(2, q):
        images = one_line(c, 2)
        sigma = Permutation(images)
        assert degree(sigma) == cyclic_descents(images)
        assert degree(sigma) in (1, 2)
        # degree decides which of sigma(1), sigma(q) is larger
        if degree(sigma) == 2:
            assert sigma(q) > sigma(1)
        else:
            assert sigma(q) < sigma(1)
        assert (degree(sigma) == 1) == (rotation_number(sigma) is not None)


@pytest.mark.parametrize("q", range(1, 7))
def test_enumeration_matches_brute_force(q):
    for sigma in m2_combinatorics(q):
        got = {tuple(a.value for a in o) for o in enumerate_realizations(sigma, 3)}
        assert got == set(realizations(sigma.images, 3))
        assert len(got) == count_realizations(sigma, 3) == q + 1
        assert len(enumerate_realizations(sigma, 2)) == 1


def test_example_realization_count():
    assert count_realizations(parse_cyclic("(1243)"), 3) == 5


def test_all_cycles_matches_oracle():
    assert {tuple(a.value for a in o) for o in all_cycles(3, 3)} == set(cycles(3, 3))


def test_degree_too_high():
    # a period-6 cycle of tripling with three cyclic descents
    sigma = Permutation((2, 3, 5, 1, 6, 4))
    assert sigma.is_cyclic() and degree(sigma) == 3
    assert count_realizations(sigma, 3) == len(realizations(sigma.images, 3))
    with pytest.raises(DegreeTooHigh):
        count_realizations(sigma, 2)


def test_scan_limit():
    with pytest.raises(InstanceTooLarge):
        enumerate_realizations(Permutation(tuple(list(range(2, 14)) + [1])), 3)


def test_reduction_example():
    cert = dynamically_reducible(parse_cyclic("(1243)"))
    assert cert is not None and (cert.p, cert.r) == (2, 2)
    assert str(parse_cyclic("(1243)") ** 2) == "(14)(23)"
    assert dynamically_reducible(parse_cyclic("(12354)")) is None
    assert dynamically_reducible(parse_cyclic("(123465)")) is None


@pytest.mark.parametrize("q", range(2, 9))
def test_reductions_unique(q):
    for sigma in m2_combinatorics(q):
        assert len(reduction_certificates(sigma)) <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7).flatmap(lambda q: st.tuples(st.just(q), st.permutations(range(1, q + 1)))))
def test_count_formula_matches_enumeration_for_any_cycle(data):
    q, images = data
    sigma = Permutation(tuple(images))
    if not sigma.is_cyclic() or degree(sigma) > 3:
        return
    assert count_realizations(sigma, 3) == len(realizations(sigma.images, 3))
