import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capentropy.canonical import (
    bicap_as_multichoice_check,
    bicap_step_chain_count,
    bicapacity_chain_count,
    bicapacity_entropy,
    bicapacity_lattice,
    bicapacity_normalize,
    bicapacity_shapley,
    bicapacity_shapley_generic,
    boolean_chain_count,
    boolean_lattice,
    gamma_bicap,
    multichoice_chain_count,
    multichoice_entropy,
    multichoice_lattice,
    multichoice_shapley,
    multichoice_shapley_generic,
    multichoice_step_chain_count,
    xi_coefficient,
)
from capentropy.capacity import Capacity, CapacityError, additive_uniform
from capentropy.measures import entropy, shapley_classical
from capentropy.oracle import random_capacity
from capentropy.order import (
    count_maximal_chains,
    is_distributive,
    is_vee_minimal_regular,
    is_wedge_minimal_regular,
)
from capentropy.setsystem import SetSystem


def test_boolean_lattice():
    assert len(boolean_lattice(1)) == 2
    lat = boolean_lattice(3)
    assert count_maximal_chains(lat) == 6 == boolean_chain_count(3)
    assert is_distributive(boolean_lattice(2))
    assert lat.labels[0b101] == "13"
    with pytest.raises(ValueError):
        boolean_lattice(13)


def test_bicapacity_lattice_shape():
    q = bicapacity_lattice(2)
    assert len(q) == 9
    assert q.labels[q.bottom] == "-|12" and q.labels[q.top] == "12|-"
    assert is_distributive(q)
    assert [count_maximal_chains(bicapacity_lattice(n)) for n in (1, 2, 3)] == [1, 6, 90]
    assert [bicapacity_chain_count(n) for n in (1, 2, 3)] == [1, 6, 90]


def test_bicapacity_join_and_meet():
    q = bicapacity_lattice(3)
    x = q.index_of_pair(0b001, 0b010)
    y = q.index_of_pair(0b100, 0b011)
    # (A1 ∪ B1, A2 ∩ B2) and (A1 ∩ B1, A2 ∪ B2)
    assert q.pair(q.join(x, y)) == (0b101, 0b010)
    assert q.pair(q.meet(x, y)) == (0b000, 0b011)


def test_bicapacity_join_irreducibles():
    q = bicapacity_lattice(2)
    got = {q.labels[x] for x in q.join_irreducibles}
    assert got == {"-|2", "1|2", "-|1", "2|1"}


def test_bicapacity_normalize():
    q = bicapacity_lattice(1)
    v = bicapacity_normalize(q, {"-|1": -1, "-|-": 0, "1|-": 1})
    assert v["1|-"] == 1 and v["-|1"] == 0 and v["-|-"] == 0.5
    exact = bicapacity_normalize(q, {"-|1": Fraction(-1), "-|-": Fraction(0), "1|-": Fraction(1)})
    assert exact["-|-"] == Fraction(1, 2)
    with pytest.raises(CapacityError):
        bicapacity_normalize(q, {"-|1": -1, "-|-": 0.2, "1|-": 1})


def test_gamma_examples():
    assert gamma_bicap(1, 0, 0) == 1
    assert gamma_bicap(2, 0, 0) == Fraction(1, 3)
    with pytest.raises(ValueError):
        gamma_bicap(2, 1, 1)


def test_gamma_normalization():
    # player i leaves neutral exactly once per chain, upward or downward
    for n in range(1, 6):
        total = sum(math.comb(n - 1, k) * math.comb(n - 1 - k, l) * gamma_bicap(n, k, l)
                    for k in range(n) for l in range(n - k))
        assert total == 1
        counts = sum(math.comb(n - 1, k) * math.comb(n - 1 - k, l) * bicap_step_chain_count(n, k, l)
                     for k in range(n) for l in range(n - k))
        assert counts == bicapacity_chain_count(n)


def test_bicapacity_shapley_single_player():
    q = bicapacity_lattice(1)
    v = bicapacity_normalize(q, {"-|1": Fraction(-1), "-|-": Fraction(0), "1|-": Fraction(1)})
    bi = bicapacity_shapley(v)
    assert list(bi.plus) == [Fraction(1, 2)] and list(bi.minus) == [Fraction(1, 2)]


def test_bicapacity_shapley_symmetric():
    q = bicapacity_lattice(2)
    v = additive_uniform(q, exact=True)
    bi = bicapacity_shapley(v)
    assert bi.plus[0] == bi.plus[1] and bi.minus[0] == bi.minus[1]
    assert sum(bi.phi) == 1


def test_multichoice_lattice():
    lat = multichoice_lattice((2, 3))
    assert len(lat) == 12
    assert count_maximal_chains(lat) == 10 == multichoice_chain_count((2, 3))
    assert is_vee_minimal_regular(lat) and is_wedge_minimal_regular(lat)
    assert len(lat.join_irreducibles) == 5
    assert all(np.count_nonzero(lat.profiles[x]) == 1 for x in lat.join_irreducibles)
    chain = multichoice_lattice((2,))
    assert count_maximal_chains(chain) == 1 and len(chain.join_irreducibles) == 2


def test_multichoice_of_ones_is_boolean():
    lat = multichoice_lattice((1, 1, 1))
    assert np.array_equal(np.asarray(lat.leq), np.asarray(boolean_lattice(3).leq))


def test_xi_examples():
    assert xi_coefficient((2,), (1,), 0) == 1
    assert xi_coefficient((1, 1), (1, 0), 0) == Fraction(1, 2)
    with pytest.raises(ValueError):
        xi_coefficient((1, 1), (0, 1), 0)


def test_xi_normalization():
    # every chain raises player i through each of its levels exactly once
    for levels in [(2, 3), (1, 2, 2), (4,), (3, 1)]:
        total = multichoice_chain_count(levels)
        for i, li in enumerate(levels):
            for j in range(1, li + 1):
                profiles = [a for a in np.ndindex(*(l + 1 for l in levels)) if a[i] == j]
                assert sum(xi_coefficient(levels, a, i) for a in profiles) == 1
                assert sum(multichoice_step_chain_count(levels, a, i) for a in profiles) == total


def test_multichoice_reduces_to_classical():
    lat = multichoice_lattice((1, 1))
    s = SetSystem.power_set(2)
    v = random_capacity(s, 3)
    # profile (a1, a2) is the subset with player i present iff a_i = 1
    vals = {f"{m & 1},{m >> 1 & 1}": v.values[s.position(m)] for m in range(4)}
    w = Capacity.from_mapping(lat, vals)
    assert np.allclose(multichoice_shapley(w).phi, shapley_classical(v).phi, atol=1e-15)


def test_multichoice_uniform():
    lat = multichoice_lattice((2, 3))
    mc = multichoice_shapley(additive_uniform(lat, exact=True))
    assert all(x == Fraction(1, 5) for row in mc.table for x in row)
    assert mc.total() == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_bicapacity_closed_forms(n, seed):
    v = random_capacity(bicapacity_lattice(n), seed)
    a, b = bicapacity_shapley(v), bicapacity_shapley_generic(v)
    assert np.allclose(a.plus, b.plus, rtol=0, atol=1e-12)
    assert np.allclose(a.minus, b.minus, rtol=0, atol=1e-12)
    assert abs(a.phi.sum() - 1) <= 1e-12
    assert abs(bicapacity_entropy(v) - entropy(v).H) <= 1e-12
    if n <= 2:
        assert bicap_as_multichoice_check(v)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 3), (1, 1), (3, 2, 2), (1, 2, 1, 3), (7,)]), st.integers(0, 2**31 - 1))
def test_multichoice_closed_forms(levels, seed):
    v = random_capacity(multichoice_lattice(levels), seed)
    a, b = multichoice_shapley(v), multichoice_shapley_generic(v)
    for x, y in zip(a.table, b.table):
        assert np.allclose(x, y, rtol=0, atol=1e-12)
    assert abs(a.total() - 1) <= 1e-12
    assert abs(multichoice_entropy(v) - entropy(v).H) <= 1e-12


def test_bicap_check_uniform():
    assert bicap_as_multichoice_check(additive_uniform(bicapacity_lattice(2)))


def test_closed_forms_exact():
    q = bicapacity_lattice(2)
    v = random_capacity(q, 9)
    exact = Capacity(q, [Fraction(x).limit_denominator(100) for x in v.values], check=False)
    a, b = bicapacity_shapley(exact), bicapacity_shapley_generic(exact, exact=True)
    assert list(a.plus) == list(b.plus) and list(a.minus) == list(b.minus)
    assert sum(a.phi) == 1


def test_kind_checks():
    with pytest.raises(CapacityError):
        bicapacity_shapley(additive_uniform(multichoice_lattice((2, 2))))
    with pytest.raises(CapacityError):
        multichoice_shapley(additive_uniform(bicapacity_lattice(2)))
