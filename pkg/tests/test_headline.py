import itertools
import math

import numpy as np
import pytest

from boolfourier import InputError, zoo
from boolfourier.calibration import (
    CONCENTRATION_C,
    CONCENTRATION_ETA,
    ENTROPY_K_THRESHOLD,
    WITNESS_C_STAR,
    WITNESS_THRESHOLD,
)
from boolfourier.headline import (
    concentration_mass,
    entropy_bound_fit,
    min_entropy_witness,
    witness_report,
)


def enumerated_spectrum(f):
    """Coefficients by summing f(x) chi_S(x) over the cube, point by point."""
    n = f.n
    out = {}
    for S in range(1 << n):
        acc = 0
        for x in range(1 << n):
            acc += int(f.table[x]) * (-1) ** bin(S & x).count("1")
        out[S] = acc / (1 << n)
    return out


def test_maj3_witness_matches_enumeration(maj3):
    coeffs = enumerated_spectrum(maj3)
    var = 0.25
    itilde = sum(bin(S).count("1") * c * c for S, c in coeffs.items()) / var
    expect = -math.log(abs(coeffs[1]) / math.sqrt(var)) / math.log1p(itilde)
    S, c, rep = min_entropy_witness(maj3)
    assert S == 1
    assert c == pytest.approx(expect, abs=1e-12)
    assert c == pytest.approx(0.7564707973660301, abs=1e-6)


def test_maj3_entropy_fit_matches_enumeration(maj3):
    coeffs = enumerated_spectrum(maj3)
    sq = {S: c * c for S, c in coeffs.items() if c != 0}
    H = -sum(v * math.log(v) for v in sq.values())
    sizes = {S: bin(S).count("1") for S in sq}
    I = sum(sizes[S] * v for S, v in sq.items())
    weighted = sum(sizes[S] * math.log(sizes[S] + 1) * v for S, v in sq.items())
    fit = entropy_bound_fit(maj3)
    assert fit.entropy == pytest.approx(H, abs=1e-12)
    assert fit.K == pytest.approx(H / (weighted + I), abs=1e-12)
    assert fit.K == pytest.approx(1.3593, abs=1e-4)


def test_witness_tie_break():
    # all singletons tie on majority; the smallest mask wins
    S, _, rep = min_entropy_witness(zoo.majority(5))
    assert S == 1 and rep.coords == [1]


def test_parity_witness_is_zero():
    S, c, _ = min_entropy_witness(zoo.parity(5))
    assert S == 31 and c == 0.0 and math.copysign(1, c) == 1


def test_constant_rejected():
    with pytest.raises(InputError):
        min_entropy_witness(zoo.constant(3, 1))


@pytest.mark.parametrize("spec", [s.label() for s in zoo.standard_zoo(12)])
def test_zoo_witness_matches_calibration(spec):
    f = zoo.make(zoo.parse_family(spec))
    if f.variance() < 0.1:
        return
    S, c, rep = min_entropy_witness(f)
    assert rep.found and 1 <= bin(S).count("1") <= 10 * rep.normalized_influence
    assert c == pytest.approx(WITNESS_C_STAR[spec], abs=1e-9)
    assert witness_report(f, WITNESS_THRESHOLD).passed
    assert c >= rep.c_min


@pytest.mark.parametrize("spec", ["majority:n=7", "tribes:w=2,s=3", "dictator:n=4,i=2",
                                  "graph-property:N=4,property=triangle"])
def test_monotone_singleton_at_least_witness(spec):
    f = zoo.make(zoo.parse_family(spec))
    _, c, rep = min_entropy_witness(f)
    assert rep.singleton_c is None or rep.singleton_c >= c - 1e-12


def test_concentration_within_calibrated_budget():
    for spec in zoo.standard_zoo(12):
        f = zoo.make(spec)
        if f.variance() < 0.1:
            continue
        rep = concentration_mass(f, CONCENTRATION_C, CONCENTRATION_ETA)
        assert rep.within, spec.label()


def test_entropy_fit_below_calibrated_threshold():
    for spec in zoo.standard_zoo(12):
        f = zoo.make(spec)
        if f.variance() >= 0.1:
            assert entropy_bound_fit(f).K <= ENTROPY_K_THRESHOLD


def test_bucket_trace_counts_nonempty_support(maj3):
    fit = entropy_bound_fit(maj3)
    assert sum(b["count"] for b in fit.buckets) == 4
    assert sum(b["mass"] for b in fit.buckets) == pytest.approx(0.25)
