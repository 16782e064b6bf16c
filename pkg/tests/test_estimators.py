import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from capentropy.capacity import CapacityError
from capentropy.estimators import ChainEntropy, ChainShapley
from capentropy.measures import entropy, relative_entropy, shapley
from capentropy.oracle import random_capacity
from capentropy.setsystem import SetSystem


def rows(structure, k, seed=0):
    caps = [random_capacity(structure, seed + i) for i in range(k)]
    return caps, np.vstack([c.values for c in caps])


def test_shapley_transform_matches_library():
    s = SetSystem.power_set(4)
    caps, X = rows(s, 5)
    est = ChainShapley(s).fit(X)
    out = est.transform(X)
    assert out.shape == (5, 4)
    for c, row in zip(caps, out):
        assert np.allclose(row, shapley(c).phi, atol=1e-12)
    assert list(est.get_feature_names_out()) == ["1", "2", "3", "4"]


def test_shapley_on_lattice_shorthand():
    est = ChainShapley("multi:2,3").fit()
    lat = est.structure_
    caps, X = rows(lat, 3)
    for c, row in zip(caps, est.transform(X)):
        assert np.allclose(row, shapley(c).phi, atol=1e-12)


def test_shapley_docstring_example():
    out = ChainShapley("boolean:2").fit().transform([[0, 0.7, 0.2, 1]])
    assert np.allclose(out, [[0.75, 0.25]])


def test_entropy_transform():
    s = SetSystem.from_labels(3, ["-", "1", "3", "12", "13", "23", "123"])
    caps, X = rows(s, 4)
    out = ChainEntropy(s).fit().transform(X)
    assert out.shape == (4, 1)
    assert np.allclose(out[:, 0], [entropy(c).H for c in caps], atol=1e-12)


def test_relative_entropy_transform():
    s = SetSystem.power_set(3)
    caps, X = rows(s, 4)
    u = random_capacity(s, 99)
    out = ChainEntropy(s, reference=u.values).fit().transform(X)
    want = [relative_entropy(c, u) for c in caps]
    assert np.allclose(out[:, 0], want, atol=1e-12)


def test_relative_entropy_inf():
    out = ChainEntropy("boolean:2", reference=[0, 1, 0, 1]).fit().transform([[0, 0.5, 0.5, 1]])
    assert out[0, 0] == np.inf


def test_params_and_clone():
    est = ChainShapley("boolean:3", mode="chain")
    assert est.get_params() == {"structure": "boolean:3", "mode": "chain", "check_capacity": True}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and not hasattr(twin, "coef_")
    est.set_params(mode="classical")
    assert est.mode == "classical"


def test_pipeline():
    s = SetSystem.power_set(3)
    _, X = rows(s, 3)
    pipe = make_pipeline(ChainShapley(s))
    assert pipe.fit_transform(X).shape == (3, 3)


def test_input_validation():
    est = ChainShapley("boolean:2").fit()
    with pytest.raises(ValueError):
        est.transform([[0, 0.5, 1]])
    with pytest.raises(CapacityError):
        est.transform([[0, 0.9, 0.2, 0.5]])
    loose = ChainShapley("boolean:2", check_capacity=False).fit()
    assert loose.transform([[0, 0.9, 0.2, 0.5]]).shape == (1, 2)
    with pytest.raises(ValueError):
        ChainShapley().fit()


def test_not_fitted():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        ChainShapley("boolean:2").transform([[0, 0.5, 0.5, 1]])
