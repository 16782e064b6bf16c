from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capentropy.capacity import (
    Capacity,
    CapacityError,
    additive_uniform,
    blend,
    blend_with_uniform,
    cardinality_based,
    chain_distribution,
    grade,
    validate,
)
from capentropy.oracle import random_capacity, random_zero_one_capacity
from capentropy.order import enumerate_maximal_chains
from capentropy.setsystem import SetSystem, to_lattice

B2 = SetSystem.power_set(2)
B3 = SetSystem.power_set(3)


def two_player(v1, v2, top=1.0):
    return Capacity.from_mapping(B2, {"-": 0, "1": v1, "2": v2, "12": top}, check=False)


def test_validate_ok():
    assert validate(additive_uniform(B3)) is True
    assert validate(two_player(0.7, 0.2)) is True


def test_validate_top():
    bad = validate(two_player(0.7, 0.2, top=0.9))
    assert not bad and bad.kind == "boundary" and bad.elements == (B2.top,)


def test_validate_range():
    bad = validate(two_player(1.1, 0.2))
    assert not bad and bad.kind == "range"


def test_validate_monotone():
    s = SetSystem.power_set(3)
    vals = additive_uniform(s).values.copy()
    vals[s.index("12")] = 0.1
    bad = validate(s, vals)
    assert not bad and bad.kind == "monotonicity"
    with pytest.raises(CapacityError) as err:
        Capacity(s, vals)
    assert err.value.violation.kind == "monotonicity"


def test_games_skip_capacity_checks():
    g = Capacity(B2, [0, -1, 3, 0.5], game=True)
    assert validate(g) is True
    with pytest.raises(CapacityError):
        Capacity(B2, [1, 0, 0, 1], game=True)


def test_missing_value():
    with pytest.raises(CapacityError):
        Capacity.from_mapping(B2, {"-": 0, "12": 1})


def test_additive_uniform():
    v = additive_uniform(B3, exact=True)
    assert v["13"] == Fraction(2, 3)
    assert v["-"] == 0 and v["123"] == 1


def test_additive_uniform_on_l1(l1):
    v = additive_uniform(l1, exact=True)
    assert v["b"] == Fraction(2, 3)
    assert list(grade(l1)) == [0, 1, 1, 1, 2, 2, 3]


def test_cardinality_based():
    third = Fraction(1, 3)
    v = cardinality_based(B3, [0, third, 2 * third, 1])
    assert all(v.values == additive_uniform(B3, exact=True).values)
    w = cardinality_based(B3, [0, 0, 0, 1])
    assert w["12"] == 0 and w["123"] == 1


def test_cardinality_based_on_s2(s2):
    v = cardinality_based(s2, [0, 0.5, 0.75, 1])
    assert v["1"] == v["3"] == 0.5
    assert v["12"] == v["23"] == 0.75


def test_cardinality_based_rejects_bad_levels(remark_system):
    with pytest.raises(CapacityError):
        cardinality_based(B3, [0, 0.5, 0.4, 1])
    with pytest.raises(CapacityError):
        cardinality_based(B3, [0, 1])
    with pytest.raises(CapacityError):
        cardinality_based(remark_system, [0, 0.2, 0.5, 1])


def test_chain_distribution():
    v = two_player(0.7, 0.2)
    p = chain_distribution(v, [B2.index("-"), B2.index("1"), B2.index("12")])
    assert np.allclose(p.probs, [0.7, 0.3])
    star = additive_uniform(B3, exact=True)
    for c in enumerate_maximal_chains(B3.poset):
        assert list(chain_distribution(star, c).probs) == [Fraction(1, 3)] * 3


def test_chain_distribution_of_zero_one():
    z = random_zero_one_capacity(B3, 5)
    for c in enumerate_maximal_chains(B3.poset):
        p = chain_distribution(z, c).probs
        assert sorted(p.tolist()) == [0.0, 0.0, 1.0]


def test_chain_distribution_rejects_non_chain():
    v = additive_uniform(B3)
    with pytest.raises(CapacityError):
        chain_distribution(v, [B3.index("-"), B3.index("12"), B3.index("123")])


def test_blend_endpoints():
    v = two_player(0.0, 0.2)
    star = additive_uniform(B2)
    assert blend_with_uniform(v, 0).allclose(v)
    assert blend_with_uniform(v, 1).allclose(star)
    assert blend_with_uniform(v, 0.5)["1"] == 0.25


def test_blend_pointwise():
    v = two_player(0.7, 0.2)
    u = additive_uniform(B2)
    w = blend(v, u, 0.25)
    assert np.allclose(w.values, 0.25 * u.values + 0.75 * v.values)
    assert blend(v, u, 0).allclose(v) and blend(v, u, 1).allclose(u)
    with pytest.raises(ValueError):
        blend(v, u, 1.5)


def test_blend_exact():
    v = Capacity(B2, [Fraction(0), Fraction(7, 10), Fraction(1, 5), Fraction(1)])
    w = blend_with_uniform(v, Fraction(1, 2))
    assert w.exact and w["1"] == Fraction(3, 5)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from(["b3", "b4", "s1", "l1"]))
def test_random_capacities_validate(seed, which):
    structures = {
        "b3": B3,
        "b4": SetSystem.power_set(4),
        "s1": SetSystem.from_labels(3, ["-", "1", "3", "12", "13", "23", "123"]),
        "l1": to_lattice(SetSystem.from_labels(3, ["-", "d", "e", "f", "de", "ef", "def"], players="def")),
    }
    s = structures[which]
    v = random_capacity(s, seed)
    assert validate(v) is True
    assert random_capacity(s, seed).allclose(v)
    assert validate(random_zero_one_capacity(s, seed)) is True
