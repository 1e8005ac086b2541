import numpy as np
import pytest
from hypothesis import given, strategies as st

from boolfourier import BooleanFunction, InputError, zoo
from boolfourier.identities import (
    identities_suite,
    isoperimetry_check,
    random_low_degree,
    random_real,
)

seeds = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("spec", [s.label() for s in zoo.standard_zoo(10)])
def test_zoo_identities(spec):
    f = zoo.make(zoo.parse_family(spec))
    g = random_real(f.n, np.random.default_rng(1))
    for rep in identities_suite(f, g, seed=2):
        assert rep.passed, rep.to_dict()


@given(st.integers(1, 8), seeds)
def test_random_boolean_pairs(n, seed):
    rng = np.random.default_rng(seed)
    f = BooleanFunction.from_table(rng.integers(0, 2, 1 << n))
    g = BooleanFunction.from_table(rng.integers(0, 2, 1 << n))
    assert all(r.passed for r in identities_suite(f, g, seed=seed))


@given(st.integers(1, 7), st.integers(0, 4), seeds)
def test_random_low_degree_pairs(n, d, seed):
    rng = np.random.default_rng(seed)
    f = random_low_degree(n, d, rng)
    g = random_real(n, rng)
    assert all(r.passed for r in identities_suite(f, g, seed=seed))


def test_isoperimetry_conventions():
    rep = isoperimetry_check(zoo.dictator(3))
    assert rep.passed
    assert rep.witness["flip_pass"] and not rep.witness["derivative_pass"]
    assert not isoperimetry_check(zoo.dictator(3), convention="derivative").passed


def test_isoperimetry_needs_boolean():
    with pytest.raises(InputError):
        isoperimetry_check(random_real(3, np.random.default_rng(0)))


def test_mismatched_cubes():
    with pytest.raises(InputError):
        identities_suite(zoo.majority(3), zoo.majority(5))
