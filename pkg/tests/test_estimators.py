import numpy as np
import pytest
from sklearn.base import clone

from boolfourier import InputError, spectrum, zoo
from boolfourier.estimators import (
    SparseFourierClassifier,
    WalshHadamardTransformer,
    walsh_hadamard,
)
from boolfourier.learning import TableOracle


def cube(n):
    x = np.arange(1 << n)
    return ((x[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def test_classifier_full_cube():
    f = zoo.majority(5)
    X = cube(5)
    clf = SparseFourierClassifier(theta=0.2, random_state=0).fit(X, f.table)
    assert clf.score(X, f.table) == 1.0
    assert clf.n_features_in_ == 5 and list(clf.classes_) == [0, 1]
    assert len(clf.coef_) == len(clf.masks_)


def test_classifier_with_oracle_and_K():
    f = zoo.tribes(2, 3)
    clf = SparseFourierClassifier(K=2, eps=0.1).fit(oracle=TableOracle(f))
    assert clf.result_ is not None
    assert np.mean(clf.predict(cube(6)) != f.table) <= 0.1


def test_classifier_needs_full_cube():
    with pytest.raises(InputError):
        SparseFourierClassifier().fit(cube(4)[:10], np.zeros(10))


def test_classifier_clone_keeps_params():
    c = clone(SparseFourierClassifier(K=3, theta=0.4))
    assert c.get_params()["K"] == 3 and c.theta == 0.4


def test_walsh_hadamard_matches_spectrum():
    f = zoo.address(2)
    row = walsh_hadamard(f.table)[0]
    assert np.allclose(row, spectrum(f).coeffs)


def test_transformer_round_trip():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(3, 16))
    t = WalshHadamardTransformer().fit(X)
    assert np.allclose(t.inverse_transform(t.transform(X)), X)
    low = WalshHadamardTransformer(max_degree=1).fit_transform(X)
    assert np.count_nonzero(low[0]) <= 5
    with pytest.raises(InputError):
        t.transform(X[:, :8])
