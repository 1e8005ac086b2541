"""scikit-learn style wrappers: a sparse Fourier classifier and a
Walsh-Hadamard transformer over truth tables."""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_bits_matrix, n_from_length
from .core import BooleanFunction, _wht, popcounts
from .exceptions import InputError
from .learning import TableOracle, agnostic_learn, as_oracle, km_search, build_sparse_approx


class SparseFourierClassifier(ClassifierMixin, BaseEstimator):
    """Membership-query learner behind fit/predict.

    ``fit(X, y)`` takes labels for every point of the cube (X as an (2^n, n) bit
    matrix or point indices) and queries them as an oracle; ``fit(oracle=...)``
    takes any MembershipOracle. With ``theta`` set the search runs at that
    threshold, otherwise theta comes from K.
    """

    def __init__(self, K=2.0, eps=0.1, theta=None, C=None, confidence=0.9, budget=None,
                 random_state=0):
        self.K = K
        self.eps = eps
        self.theta = theta
        self.C = C
        self.confidence = confidence
        self.budget = budget
        self.random_state = random_state

    def _oracle(self, X, y, oracle):
        if oracle is not None:
            return as_oracle(oracle)
        if X is None or y is None:
            raise InputError("fit needs (X, y) or oracle=")
        y = np.asarray(y)
        n = X.shape[1] if np.ndim(X) == 2 else n_from_length(len(y))
        idx = check_bits_matrix(X, n)
        if idx.size != (1 << n) or np.unique(idx).size != idx.size:
            raise InputError("membership queries need a label for every point of the cube")
        table = np.empty(1 << n, dtype=np.uint8)
        table[idx] = y
        return TableOracle(BooleanFunction.from_table(table))

    def fit(self, X=None, y=None, oracle=None):
        orc = self._oracle(X, y, oracle)
        self.n_features_in_ = orc.n
        self.classes_ = np.array([0, 1])
        if self.theta is None:
            res = agnostic_learn(orc, self.K, self.eps, seed=self.random_state, C=self.C,
                                 confidence=self.confidence, budget=self.budget)
            self.result_ = res
            self.polynomial_ = res.hypothesis
        else:
            masks = km_search(orc, self.theta, confidence=self.confidence, budget=self.budget,
                              seed=self.random_state)
            masks = sorted(set(masks) | {0})
            self.result_ = None
            self.polynomial_ = build_sparse_approx(orc, masks, seed=self.random_state,
                                                   tau=self.eps / 4)
        self.masks_ = sorted(self.polynomial_.coeffs)
        self.coef_ = np.array([self.polynomial_.coeffs[m] for m in self.masks_])
        self.queries_ = orc.queries
        return self

    def _points(self, X):
        check_is_fitted(self, "polynomial_")
        return check_bits_matrix(X, self.n_features_in_)

    def decision_function(self, X):
        """The fitted polynomial in the 0/1 view; predict thresholds it at 1/2."""
        return self.polynomial_(self._points(X))

    def predict(self, X):
        return self.polynomial_.predict(self._points(X))


def walsh_hadamard(values, max_degree=None):
    """Row-wise f^(S) = E[f chi_S] for an (m, 2^n) array of function tables."""
    A = np.atleast_2d(np.asarray(values, dtype=np.float64))
    n = n_from_length(A.shape[1])
    out = np.stack([_wht(row) for row in A]) / A.shape[1] if A.shape[0] else A.copy()
    if max_degree is not None:
        out[:, popcounts(n) > max_degree] = 0.0
    return out


class WalshHadamardTransformer(TransformerMixin, BaseEstimator):
    """Maps rows of function values on {0,1}^n to Fourier coefficients."""

    def __init__(self, max_degree=None):
        self.max_degree = max_degree

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        self.n_ = n_from_length(X.shape[1])
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features_in_:
            raise InputError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        return walsh_hadamard(X, self.max_degree)

    def inverse_transform(self, C):
        check_is_fitted(self, "n_")
        C = np.atleast_2d(np.asarray(C, dtype=np.float64))
        # the butterfly is its own inverse up to the 2^n factor
        return np.stack([_wht(row) for row in C]) if C.shape[0] else C.copy()
