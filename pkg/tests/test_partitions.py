from fractions import Fraction
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boolfourier import InputError, zoo
from boolfourier.core import homogeneous_part
from boolfourier.identities import random_low_degree
from boolfourier.partitions import (
    AlmostHomogeneous,
    Partition,
    exact_split_probability,
    exchange_check,
    find_good_partition,
    good_character_set,
    hypercontractivity_check,
    sample_partition,
    split_probability_check,
)


def brute_split(d, v):
    m = d // v
    hits = sum(1 for lab in itertools.product(range(m), repeat=d)
               if all(lab.count(j) == v for j in range(m)))
    return Fraction(hits, m ** d)


@pytest.mark.parametrize("d,v", [(2, 1), (4, 2), (4, 1), (6, 2), (6, 3)])
def test_exact_split_probability_matches_enumeration(d, v):
    assert exact_split_probability(d, v) == brute_split(d, v)


def test_partition_validation():
    with pytest.raises(InputError):
        Partition(3, 2, [1, 2, 3])
    p = Partition(4, 2, [1, 2, 1, 2])
    assert p.parts == [0b0101, 0b1010]
    assert list(p.sizes()) == [2, 2]


def test_good_character_membership():
    p = Partition(4, 2, [1, 2, 1, 2])
    G = good_character_set(p, 2, 1, 0)
    assert 0b0011 in G and 0b0101 not in G
    members = G.members()
    assert members.sum() == 4


def test_almost_homogeneous_rejects_low_levels():
    f = zoo.majority(5)
    with pytest.raises(InputError):
        AlmostHomogeneous(f, 1, 3)
    AlmostHomogeneous(homogeneous_part(f, 3), 1, 3)


def test_find_good_partition_reports():
    f = zoo.majority(7)
    g = AlmostHomogeneous(homogeneous_part(f, 3) + homogeneous_part(f, 5), Fraction(1, 2), 5)
    part, ratio, rep = find_good_partition(f, g, 2, 0.5, attempts=8, seed=0)
    assert 0 <= ratio <= 1 and rep.inequality == "partition-retained-mass"


def test_split_probability_monte_carlo():
    reps = split_probability_check(8, 2, 1, 0.5, trials=20000, seed=3)
    assert all(r.passed for r in reps)
    assert reps[1].witness["exact"] == exact_split_probability(8, 4)


@given(st.integers(1, 7), st.integers(0, 3), st.integers(0, 2 ** 32 - 1))
def test_norm_inequalities_random(n, d, seed):
    rng = np.random.default_rng(seed)
    hs = [random_low_degree(n, d, rng) for _ in range(3)]
    ps = [random_low_degree(n, n, rng) for _ in range(3)]
    assert exchange_check(hs, d).passed
    assert exchange_check(hs, d, partners=ps).passed
    rep = hypercontractivity_check(hs[0], 4, d)
    assert rep.passed and isinstance(rep.lhs, Fraction)


def test_degree_is_certified():
    with pytest.raises(InputError):
        hypercontractivity_check(zoo.majority(3), 4, 1)


def test_sample_partition_seeded():
    assert np.array_equal(sample_partition(10, 3, 5).labels, sample_partition(10, 3, 5).labels)


def test_float_eps_window_is_decimal():
    reps = split_probability_check(90, 3, 1, 0.4, trials=2000, seed=1)
    assert reps[0].passed
    G = good_character_set(Partition(4, 2, [1, 2, 1, 2]), 2, 1.0, 0.4)
    assert G.bounds()[1][1] == Fraction(7, 5)
