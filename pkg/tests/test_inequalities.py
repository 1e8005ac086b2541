from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boolfourier import BooleanFunction, InputError, zoo
from boolfourier.core import homogeneous_part, truncate_degree
from boolfourier.inequalities import (
    ParameterSchedule,
    base_case_check,
    boosted_base_check,
    corollary_param_check,
    kkl_chain_check,
    main_bound_terms,
    main_inequality_check,
    power,
    required_gap_indices,
)
from boolfourier.reports import mp

F = Fraction


def test_basic_c1_by_hand():
    # 2^k d^((1+e)d) (2/delta)^((1+e)d/d_0) = 2 * 2^3 * 4^3
    s = ParameterSchedule([1, 2], [F(1, 2)], eps=0.5)
    assert main_bound_terms(s, "basic").C1 == 1024


def test_basic_c2_by_hand():
    # 2^k delta^(1/8) 3^(d/4) = 2 * 1/2 * 3
    s = ParameterSchedule([1, 4], [F(1, 256)], eps=0.25)
    assert main_bound_terms(s, "basic").C2 == 3


def test_improved_c3_vanishes_for_one_step():
    s = ParameterSchedule([1, 3], [F(1, 64)], eps=0.25)
    assert main_bound_terms(s, "improved").C3 == 0


def test_power_exact_and_high_precision():
    assert power(F(1, 256), F(1, 8)) == F(1, 2)
    assert power(4, F(3, 2)) == 8
    v = power(2, F(1, 3))
    assert abs(v ** 3 - 2) < mp.mpf(10) ** -30


def test_gap_indices_differ_by_family():
    assert required_gap_indices("basic", 4) == [3, 4]
    assert required_gap_indices("improved", 4) == [2, 3, 4]
    s = ParameterSchedule([1, 2, 4], [F(1, 4), F(1, 256)], alpha=0.5)
    assert any("gap" in fl for fl in main_bound_terms(s, "improved").flags)
    assert main_bound_terms(s, "basic").flags == []


def test_boosted_ceiling_flag():
    s = ParameterSchedule([1, 2], [F(1, 4)])
    assert "outside-hypothesis:eta-ceiling" in main_bound_terms(s, "boosted").flags


@pytest.mark.parametrize("bad", [
    dict(degrees=[1, 2], deltas=[]),
    dict(degrees=[2, 1], deltas=[F(1, 2)]),
    dict(degrees=[1, 2, 3], deltas=[F(1, 4), F(1, 2)]),
    dict(degrees=[1, 2], deltas=[0]),
])
def test_schedule_validation(bad):
    with pytest.raises(InputError):
        ParameterSchedule(**bad)


@given(st.integers(2, 8), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_base_case_random(n, d, seed):
    rng = np.random.default_rng(seed)
    f = BooleanFunction.from_table(rng.integers(0, 2, 1 << n))
    d = min(d, n)
    g = truncate_degree(f, d) - truncate_degree(f, 0)
    for rep in base_case_check(f, g, [F(1, 2), F(1, 2 ** 20)], d):
        assert rep.passed


@pytest.mark.parametrize("theorem", ["basic", "improved", "boosted"])
def test_main_on_tribes(theorem):
    f = zoo.tribes(2, 3)
    s = ParameterSchedule([1, 2], [F(1, 4)], alpha=1)
    rep = main_inequality_check(f, homogeneous_part(f, 2), s, theorem)
    assert rep.passed and rep.inequality == f"main-{theorem}"


def test_main_rejects_wrong_band():
    f = zoo.majority(5)
    s = ParameterSchedule([1, 3], [F(1, 4)], alpha=1)
    with pytest.raises(InputError):
        main_inequality_check(f, homogeneous_part(f, 1), s)


@pytest.mark.parametrize("which", ["basic", "improved", "boosted"])
def test_corollaries_random_dnf(which):
    f = zoo.random_dnf(10, 6, 3, seed=2)
    g = homogeneous_part(f, 3) + homogeneous_part(f, 4)
    rep = corollary_param_check(f, g, 4, F(1, 16), F(1, 2), F(1, 4), which)
    assert rep.passed


def test_boosted_base_on_degree_ten():
    f = zoo.tribes(2, 5)
    g = homogeneous_part(f, 10)
    assert any(v != 0 for v in g.exact_values())
    reps = boosted_base_check(f, g, [F(1, 2 ** 20)])
    assert reps and all(r.passed for r in reps)


@pytest.mark.parametrize("spec", ["majority:n=5", "tribes:w=2,s=3", "address:k=2"])
def test_kkl_chain(spec):
    f = zoo.make(zoo.parse_family(spec))
    assert all(r.passed for r in kkl_chain_check(f, 3))
