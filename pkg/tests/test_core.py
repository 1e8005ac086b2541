from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boolfourier import (
    BooleanFunction,
    InputError,
    RealFunction,
    cross_influence,
    derivative,
    entropy_report,
    generalized_influence,
    influence_profile,
    inner,
    restrict,
    spectrum,
    truncate_degree,
    zoo,
)
from boolfourier.core import character, homogeneous_part, inverse, norm_sq

F = Fraction
tables = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))


def test_dictator_spectrum():
    s = spectrum(zoo.dictator(1))
    assert s.coeff(0) == F(1, 2)
    assert s.coeff(1) == F(-1, 2)


def test_xor_spectrum(xor2):
    s = spectrum(xor2)
    assert [s.coeff(m) for m in range(4)] == [F(1, 2), 0, 0, F(-1, 2)]


def test_maj3_spectrum(maj3):
    s = spectrum(maj3)
    assert s.coeff(0) == F(1, 2)
    assert all(s.coeff(1 << i) == F(-1, 4) for i in range(3))
    assert all(s.coeff(m) == 0 for m in (3, 5, 6))
    assert s.coeff(7) == F(1, 4)


def test_truncate_maj3(maj3):
    s = spectrum(truncate_degree(maj3, 1))
    assert s.coeff(0) == F(1, 2) and s.coeff(2) == F(-1, 4) and s.coeff(7) == 0


def test_truncate_full_degree_is_identity(maj3):
    t = truncate_degree(maj3, 3)
    assert t.exact_values() == [F(int(v)) for v in maj3.table]


def test_truncate_xor_degree_one(xor2):
    t = truncate_degree(xor2, 1)
    assert set(t.exact_values()) == {F(1, 2)}


def test_derivative_examples(xor2):
    assert set(derivative(zoo.dictator(1), 1).exact_values()) == {F(-1, 2)}
    d = derivative(xor2, 1)
    expect = [-F(1, 2) * int(c) for c in character(2, 2)]
    assert d.exact_values() == expect
    assert derivative(xor2, 0).exact_values() == [F(int(v)) for v in xor2.table]


def test_restrict_examples(xor2, maj3):
    r = restrict(xor2, 0b10, [1])
    assert list(r.table) == [1, 0]
    r = restrict(maj3, 0b100, 0b100)
    assert list(r.table) == [0, 1, 1, 1]
    assert restrict(maj3, 0, 0) == maj3


def test_influence_examples(maj3):
    p = influence_profile(zoo.dictator(1))
    assert p.per_coordinate == (F(1, 4),) and p.total == F(1, 4)
    p = influence_profile(maj3)
    assert p.per_coordinate == (F(1, 8),) * 3
    assert p.total == F(3, 8) and p.variance == F(1, 4) and p.normalized == F(3, 2)
    p = influence_profile(zoo.parity(5))
    assert p.total == F(5, 4)
    assert p.flip == (F(1),) * 5


def test_generalized_influence(maj3, xor2):
    assert generalized_influence(maj3, 0b011) == F(1, 16)
    assert generalized_influence(maj3, 0) == norm_sq(maj3)
    assert generalized_influence(xor2, 1) == F(1, 4)


def test_cross_influence(maj3):
    assert cross_influence(maj3, maj3) == pytest.approx(3 / 8)
    assert cross_influence(zoo.dictator(2, 1), zoo.dictator(2, 2)) == 0
    low = truncate_degree(maj3, 1)
    assert cross_influence(maj3, low) == pytest.approx(3 / (8 * math.sqrt(2)))


def test_entropy_examples(xor2, maj3):
    r = entropy_report(xor2)
    assert r.entropy == pytest.approx(math.log(2))
    assert r.min_entropy == pytest.approx(math.log(4))
    assert entropy_report(xor2, convention="plus-minus-one").entropy == pytest.approx(0.0)
    assert entropy_report(maj3, 3).entropy == pytest.approx(0.25 * math.log(4) + 0.25 * math.log(16))


@given(tables)
def test_wht_round_trip_exact(table):
    f = BooleanFunction.from_table(table)
    back = inverse(spectrum(f))
    assert back.exact_values() == [F(v) for v in table]


@given(tables, st.integers(0, 2 ** 32 - 1))
def test_parseval_exact(table, seed):
    f = BooleanFunction.from_table(table)
    rng = np.random.default_rng(seed)
    g = RealFunction(f.n, rng.integers(-9, 10, size=1 << f.n), 3)
    a, b = spectrum(f), spectrum(g)
    direct = sum((a.coeff(m) * b.coeff(m) for m in range(1 << f.n)), F(0))
    assert inner(f, g) == direct


@given(tables)
def test_influence_is_level_weighted_mass(table):
    f = BooleanFunction.from_table(table)
    s = spectrum(f)
    level = sum((bin(m).count("1") * s.coeff(m) ** 2 for m in range(1 << f.n)), F(0))
    assert influence_profile(f).total == level


@given(tables, st.data())
def test_generalized_influence_is_derivative_norm(table, data):
    f = BooleanFunction.from_table(table)
    T = data.draw(st.integers(0, (1 << f.n) - 1))
    assert generalized_influence(f, T) == norm_sq(derivative(f, T))


@given(tables)
def test_homogeneous_parts_sum_to_function(table):
    f = BooleanFunction.from_table(table)
    total = homogeneous_part(f, 0)
    for d in range(1, f.n + 1):
        total = total + homogeneous_part(f, d)
    assert total.exact_values() == [F(v) for v in table]


def test_float_mode_matches_exact(maj3):
    g = RealFunction.from_floats(np.linspace(-1, 1, 8) * math.pi)
    assert inner(maj3, g) == pytest.approx(float(np.dot(maj3.table, g.floats()) / 8))


def test_bad_tables_rejected():
    with pytest.raises(InputError):
        BooleanFunction.from_table([0, 1, 1])
    with pytest.raises(InputError):
        BooleanFunction.from_table([0, 2])
