import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capentropy.canonical import boolean_lattice
from capentropy.capacity import Capacity, additive_uniform, cardinality_based
from capentropy.measures import (
    StructureError,
    classical_gamma,
    edge_weights,
    entropy,
    entropy_terms,
    marichal_entropy_direct,
    relative_entropy,
    shannon_entropy,
    shannon_relative,
    shapley,
    shapley_chain,
    shapley_classical,
    shapley_lattice,
    shapley_lattice_dual,
    shapley_terms,
)
from capentropy.oracle import (
    oracle_entropy,
    oracle_marichal,
    oracle_relative_entropy,
    oracle_shapley,
    random_capacity,
    random_zero_one_capacity,
)
from capentropy.setsystem import SetSystem, from_lattice, to_lattice

B2 = SetSystem.power_set(2)

# values computed once by direct evaluation and cross-checked by the oracles below
MARICHAL_07_02 = 0.8016094970590275
RELATIVE_07_02 = 0.19839050294097252
KL_34_UNIFORM = 0.18872187554086717


def v0702(exact=False):
    vals = [0, 0.7, 0.2, 1]
    if exact:
        vals = [Fraction(0), Fraction(7, 10), Fraction(1, 5), Fraction(1)]
    return Capacity(B2, vals)


# Shannon

def test_shannon_entropy():
    assert shannon_entropy([0.5, 0.5]) == 1.0
    assert shannon_entropy([1, 0, 0]) == 0.0
    assert shannon_entropy([1 / 3] * 3) == pytest.approx(math.log2(3), abs=1e-15)


def test_shannon_relative():
    assert shannon_relative([0.3, 0.7], [0.3, 0.7]) == 0
    assert shannon_relative([1, 0], [0.5, 0.5]) == 1.0
    assert shannon_relative([0.75, 0.25], [0.5, 0.5]) == pytest.approx(KL_34_UNIFORM, abs=1e-15)
    assert shannon_relative([0.5, 0.5], [1, 0]) == math.inf


def test_shannon_rejects_non_distributions():
    with pytest.raises(ValueError):
        shannon_entropy([0.5, 0.6])
    with pytest.raises(ValueError):
        shannon_relative([1.0], [0.5, 0.5])


# classical Shapley and Marichal entropy

def test_classical_gamma():
    assert classical_gamma(3, 0, exact=True) == Fraction(1, 3)
    assert classical_gamma(3, 1, exact=True) == Fraction(1, 6)
    assert sum(math.comb(4, k) * classical_gamma(5, k, exact=True) for k in range(5)) == 1


def test_shapley_classical_two_players():
    phi = shapley_classical(v0702(exact=True))
    assert phi["1"] == Fraction(3, 4) and phi["2"] == Fraction(1, 4)
    assert shapley_classical(v0702())["1"] == pytest.approx(0.75, abs=1e-15)


def test_shapley_classical_additive_and_uniform():
    s = SetSystem.power_set(3)
    w = np.array([0.5, 0.3, 0.2])
    vals = [float(sum(w[k] for k in range(3) if m >> k & 1)) for m in s.family]
    assert np.allclose(shapley_classical(Capacity(s, vals)).phi, w, atol=1e-15)
    assert np.allclose(shapley_classical(additive_uniform(s)).phi, 1 / 3, atol=1e-15)


def test_marichal_direct():
    assert marichal_entropy_direct(v0702()) == pytest.approx(MARICHAL_07_02, abs=1e-15)
    assert oracle_marichal(v0702()) == pytest.approx(MARICHAL_07_02, abs=1e-15)
    by_hand = 0.5 * (shannon_entropy([0.7, 0.3]) + shannon_entropy([0.2, 0.8]))
    assert by_hand == pytest.approx(MARICHAL_07_02, abs=1e-15)
    for n in (2, 3, 5):
        s = SetSystem.power_set(n)
        assert marichal_entropy_direct(additive_uniform(s)) == pytest.approx(math.log2(n), abs=1e-12)
        assert marichal_entropy_direct(random_zero_one_capacity(s, n)) == 0


def test_marichal_direct_needs_power_set(s2):
    with pytest.raises(StructureError):
        marichal_entropy_direct(additive_uniform(s2))


def test_marichal_direct_large_n():
    s = SetSystem.power_set(12)
    v = random_capacity(s, 1)
    assert marichal_entropy_direct(v) == pytest.approx(entropy(v).H, abs=1e-10)


# chain and lattice Shapley

def test_shapley_chain_matches_classical():
    for n in range(1, 6):
        v = random_capacity(SetSystem.power_set(n), n)
        assert np.allclose(shapley_chain(v).phi, shapley_classical(v).phi, rtol=0, atol=1e-12)


def test_shapley_chain_uniform_on_eta_l1(eta_l1):
    phi = shapley_chain(additive_uniform(eta_l1, exact=True))
    assert list(phi.phi) == [Fraction(1, 3)] * 3


def test_shapley_lattice_l1(l1):
    phi = shapley_lattice(additive_uniform(l1, exact=True))
    assert phi.labels == ("d", "e", "f")
    assert list(phi.phi) == [Fraction(1, 3)] * 3


def test_shapley_lattice_on_boolean_is_classical():
    lat = boolean_lattice(3)
    s = SetSystem.power_set(3)
    v = random_capacity(s, 4)
    w = Capacity.from_mapping(lat, v.as_dict())
    a, b = shapley_lattice(w), shapley_classical(v)
    assert all(abs(a[k] - b[k]) <= 1e-12 for k in "123")


def test_shapley_dual_on_boolean_is_coatom_copy():
    lat = boolean_lattice(3)
    v = Capacity.from_mapping(lat, random_capacity(SetSystem.power_set(3), 8).as_dict())
    dual, classical = shapley_lattice_dual(v), shapley_lattice(v)
    # co-atom N \ i is left exactly when player i enters
    for i, coatom in zip("123", ("23", "13", "12")):
        assert abs(dual[coatom] - classical[i]) <= 1e-12


def test_shapley_dual_on_chain(chain3):
    v = Capacity(chain3, [0, 0.3, 1])
    phi = shapley_lattice_dual(v)
    assert phi.as_dict() == pytest.approx({"a": 0.3, "b": 0.7})
    assert shapley(v, "dual").total() == pytest.approx(1)


def test_shapley_dual_rejects_s2(s2):
    with pytest.raises(StructureError):
        shapley_lattice_dual(random_capacity(to_lattice(s2), 0))


def test_eta_equivariance(l1):
    v = random_capacity(l1, 2)
    rep = from_lattice(l1)
    w = Capacity(rep, v.values)  # from_lattice keeps element order
    a, b = shapley_lattice(v), shapley_chain(w)
    assert a.labels == b.labels
    assert np.allclose(a.phi, b.phi, rtol=0, atol=1e-15)


def test_shapley_modes(s1, remark_system):
    v = random_capacity(SetSystem.power_set(3), 0)
    assert np.allclose(shapley(v).phi, shapley(v, "chain").phi)
    with pytest.raises(ValueError):
        shapley(v, "bogus")
    with pytest.raises(StructureError):
        shapley(additive_uniform(SetSystem.power_set(2)), "lattice")
    with pytest.raises(StructureError):
        shapley_chain(Capacity(remark_system, [0, 0.5, 0.5, 1]))
    assert shapley(random_capacity(s1, 1)).total() == pytest.approx(1, abs=1e-12)


def test_shapley_terms_classical():
    terms = shapley_terms(SetSystem.power_set(2))
    assert sorted(c for c, _, _ in terms["1"]) == [Fraction(1, 2), Fraction(1, 2)]


# entropy

def test_entropy_two_players():
    rep = entropy(v0702(), per_chain=True)
    assert rep.H == pytest.approx(MARICHAL_07_02, abs=1e-15)
    assert rep.chain_count == 2
    assert sorted(h for _, h in rep.per_chain) == pytest.approx(
        sorted([shannon_entropy([0.7, 0.3]), shannon_entropy([0.2, 0.8])]))


def test_entropy_uniform_is_log_n(s2, l1, eta_l1):
    for s, n in ((SetSystem.power_set(4), 4), (s2, 3), (l1, 3), (eta_l1, 3)):
        assert entropy(additive_uniform(s)).H == pytest.approx(math.log2(n), abs=1e-12)


def test_entropy_cardinality_based_s2(s2):
    rep = entropy(cardinality_based(s2, [0, 0.5, 0.75, 1]), per_chain=True)
    assert rep.H == pytest.approx(1.5, abs=1e-15)
    assert all(h == pytest.approx(1.5, abs=1e-15) for _, h in rep.per_chain)


def test_entropy_requires_regular(remark_system):
    with pytest.raises(StructureError):
        entropy(Capacity(remark_system, [0, 0.5, 0.5, 1]))


def test_entropy_terms_sum_to_rank(l1):
    # each chain has |J| steps, so the edge weights sum to |J|
    assert sum(c for c, _, _ in entropy_terms(l1)) == 3
    assert sum(edge_weights(l1, exact=True)) == 3


def test_relative_entropy():
    star = additive_uniform(B2)
    v = v0702()
    assert relative_entropy(v, star) == pytest.approx(RELATIVE_07_02, abs=1e-15)
    assert oracle_relative_entropy(v, star) == pytest.approx(RELATIVE_07_02, abs=1e-15)
    assert relative_entropy(v, v) == 0
    assert relative_entropy(star, star) == 0
    z = Capacity(B2, [0, 1, 0, 1])
    assert relative_entropy(star, z) == math.inf
    assert relative_entropy(z, star) == pytest.approx(1.0)


STRUCTURES = {
    "b3": SetSystem.power_set(3),
    "b4": SetSystem.power_set(4),
    "s1": SetSystem.from_labels(3, ["-", "1", "3", "12", "13", "23", "123"]),
    "s2": SetSystem.from_labels(3, ["-", "1", "3", "12", "23", "123"]),
    "l1": to_lattice(SetSystem.from_labels(3, ["-", "d", "e", "f", "de", "ef", "def"], players="def")),
}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(STRUCTURES)), st.integers(0, 2**31 - 1), st.integers(0, 2**31 - 1))
def test_measures_match_oracles(which, seed, seed2):
    s = STRUCTURES[which]
    v, u = random_capacity(s, seed), random_capacity(s, seed2)
    sv = shapley(v)
    ref = oracle_shapley(v)
    assert all(abs(sv[k] - ref[k]) <= 1e-12 for k in ref.labels)
    assert abs(sv.total() - 1) <= 1e-12
    assert entropy(v).H == pytest.approx(oracle_entropy(v), abs=1e-12)
    rel, orel = relative_entropy(v, u), oracle_relative_entropy(v, u)
    assert rel == orel or abs(rel - orel) <= 1e-12
    assert rel >= 0


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["s1", "l1"]), st.integers(0, 2**31 - 1))
def test_exact_mode_matches_float(which, seed):
    s = STRUCTURES[which]
    v = random_capacity(s, seed)
    exact = Capacity(s, [Fraction(x).limit_denominator(1000) for x in v.values], check=False)
    a = shapley(exact, exact=True)
    assert sum(a.phi) == 1
    b = shapley(exact.to_float())
    assert np.allclose(np.asarray(a.phi, dtype=float), b.phi, atol=1e-12)
