"""scikit-learn style wrappers.

Each row of ``X`` holds the values of one capacity, columns ordered like
``structure.labels``. The structure itself is a hyperparameter, given as an
object or as a shorthand string such as ``"boolean:3"``.

    >>> est = ChainShapley("boolean:2").fit()
    >>> est.transform([[0, 0.7, 0.2, 1]])
    array([[0.75, 0.25]])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .capacity import Capacity, CapacityError, validate
from .io import load_structure
from .measures import _h, _require_regular, edge_weights, shapley

__all__ = ["ChainShapley", "ChainEntropy"]


def _resolve(structure):
    if isinstance(structure, str):
        return load_structure(structure)
    if structure is None:
        raise ValueError("structure is required")
    return structure


class _CapacityTransformer(TransformerMixin, BaseEstimator):

    def _check_rows(self, X):
        X = check_array(X, dtype=np.float64)
        m = len(self.structure_)
        if X.shape[1] != m:
            raise ValueError(f"X has {X.shape[1]} columns, the structure has {m} elements")
        if self.check_capacity:
            for r, row in enumerate(X):
                bad = validate(self.structure_, row)
                if bad is not True:
                    raise CapacityError(f"row {r}: {bad.message}", bad)
        return X


class ChainShapley(_CapacityTransformer):
    """Shapley value of every row, as a linear map fitted once per structure.

    ``mode`` is passed to :func:`capentropy.shapley`.
    """

    def __init__(self, structure=None, mode="auto", check_capacity=True):
        self.structure = structure
        self.mode = mode
        self.check_capacity = check_capacity

    def fit(self, X=None, y=None):
        s = _resolve(self.structure)
        m = len(s)
        cols = []
        for j in range(m):
            e = np.zeros(m)
            e[j] = 1.0
            sv = shapley(Capacity(s, e, game=True, check=False), self.mode, exact=False)
            cols.append(np.asarray(sv.phi, dtype=np.float64))
        self.structure_ = s
        self.coef_ = np.vstack(cols)
        self.feature_names_out_ = np.asarray(sv.labels, dtype=object)
        self.n_features_in_ = m
        return self

    def transform(self, X):
        check_is_fitted(self, "coef_")
        return self._check_rows(X) @ self.coef_

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "coef_")
        return self.feature_names_out_.copy()


class ChainEntropy(_CapacityTransformer):
    """Chain-average entropy of every row, or relative entropy to ``reference``.

    ``reference`` is a sequence of capacity values on the same structure.
    """

    def __init__(self, structure=None, reference=None, check_capacity=True):
        self.structure = structure
        self.reference = reference
        self.check_capacity = check_capacity

    def fit(self, X=None, y=None):
        s = _resolve(self.structure)
        _require_regular(s)
        self.structure_ = s
        self.covers_ = s.cover_array
        self.weights_ = edge_weights(s)
        self.reference_ = None
        if self.reference is not None:
            u = Capacity(s, np.asarray(self.reference, dtype=np.float64))
            self.reference_ = u.values[self.covers_[:, 1]] - u.values[self.covers_[:, 0]]
        self.n_features_in_ = len(s)
        return self

    def transform(self, X):
        check_is_fitted(self, "weights_")
        X = self._check_rows(X)
        d = X[:, self.covers_[:, 1]] - X[:, self.covers_[:, 0]]
        w = self.weights_
        if self.reference_ is None:
            return (_h(d) @ w)[:, None]
        p = np.maximum(d, 0.0)
        q = np.broadcast_to(np.maximum(self.reference_, 0.0), p.shape)
        live = (p > 0) & (w > 0)
        out = np.zeros(len(X))
        inf = (live & (q <= 0)).any(axis=1)
        ok = live & (q > 0)
        terms = np.zeros_like(p)
        terms[ok] = p[ok] * np.log2(p[ok] / q[ok])
        out[:] = terms @ w
        out[inf] = np.inf
        return out[:, None]

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["H"], dtype=object)
