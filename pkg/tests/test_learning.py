import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boolfourier import BudgetExceededError, InputError, zoo
from boolfourier.learning import (
    NoisyOracle,
    RealOracle,
    TableOracle,
    agnostic_learn,
    bucket_weight,
    build_sparse_approx,
    exact_bucket_weight,
    hoeffding_samples,
    hypothesis_error,
    km_exact,
    km_search,
    learner_theta,
    planted_sparse,
    signed_spectrum,
    sparse_oracle,
)


def test_hoeffding_by_hand():
    # range 2, tolerance 0.1, failure 0.05: 4 ln(40) / 0.02
    assert hoeffding_samples(2, 0.1, 0.05) == math.ceil(4 * math.log(40) / 0.02)
    with pytest.raises(InputError):
        hoeffding_samples(1, 0, 0.1)


def test_oracle_counts_and_signs():
    o = TableOracle(zoo.dictator(3))
    pts = np.arange(8)
    assert list(o(pts)) == [0, 1] * 4
    assert list(o.signed(pts)) == [1, -1] * 4
    assert o.queries == 16
    o.reset_counter()
    assert o.queries == 0
    with pytest.raises(InputError):
        o(np.array([8]))


def test_counter_is_thread_safe():
    o = TableOracle(zoo.majority(5))
    pts = np.arange(32)
    with ThreadPoolExecutor(4) as ex:
        list(ex.map(lambda _: o(pts), range(200)))
    assert o.queries == 200 * 32


def test_noisy_oracle_is_consistent_and_seeded():
    base = TableOracle(zoo.parity(16))
    a = NoisyOracle(base, 0.1, seed=3)
    pts = np.arange(1 << 16)
    first = a(pts)
    assert np.array_equal(first, a(pts))
    assert np.array_equal(first, NoisyOracle(base, 0.1, seed=3)(pts))
    rate = float(np.mean(a.flips(pts)))
    assert abs(rate - 0.1) < 5 * math.sqrt(0.09 / pts.size)


@pytest.mark.parametrize("spec", ["majority:n=5", "tribes:w=2,s=3", "address:k=2"])
def test_bucket_weight_matches_exact(spec):
    f = zoo.make(zoo.parse_family(spec))
    for k, beta in [(0, 0), (1, 1), (2, 2), (f.n, 1)]:
        est, se = bucket_weight(TableOracle(f), k, beta, 40000, seed=k)
        assert abs(est - exact_bucket_weight(f, k, beta)) <= 5 * se + 1e-12


def test_signed_spectrum_parseval():
    f = zoo.tribes(2, 3)
    assert np.sum(signed_spectrum(f) ** 2) == pytest.approx(1.0)


@pytest.mark.parametrize("spec,theta", [("majority:n=5", 0.3), ("parity:n=8", 0.5),
                                        ("tribes:w=2,s=2", 0.4)])
def test_km_search_matches_exact_search(spec, theta):
    f = zoo.make(zoo.parse_family(spec))
    got = km_search(TableOracle(f), theta, seed=1)
    heavy = {int(S) for S in np.flatnonzero(np.abs(signed_spectrum(f)) >= theta)}
    assert heavy <= set(got) <= set(km_exact(f, theta / 2 ** 0.5))


def test_km_shuffle_same_answer():
    f = zoo.parity(10)
    assert km_search(TableOracle(f), 0.5, seed=2, shuffle=True) == [1023]


def test_budget_is_enforced():
    with pytest.raises(BudgetExceededError):
        km_search(TableOracle(zoo.parity(12)), 0.5, budget=1000)


def test_sparse_recovery_real_target():
    o, coef = planted_sparse(14, k=4, magnitude=0.3, seed=5)
    masks = km_search(o, 0.3, seed=5, samples=40000)
    assert set(coef) <= set(masks)
    h = build_sparse_approx(o, sorted(masks), samples=40000, seed=1)
    for m, c in coef.items():
        assert h.coeffs[m] == pytest.approx(c, abs=0.05)


def test_sparse_oracle_values():
    o = sparse_oracle(3, [0b011], [0.5])
    assert list(o(np.arange(4))) == [0.5, -0.5, -0.5, 0.5]


def test_hypothesis_error_exact_and_sampled():
    f = zoo.majority(5)
    assert hypothesis_error(f, f).value == 0.0
    est = hypothesis_error(zoo.dictator(5), TableOracle(f), samples=20000)
    exact = float(np.mean(zoo.dictator(5).table != f.table))
    assert abs(est.value - exact) < 5 * est.sigma + 1e-9


def test_learner_theta():
    assert learner_theta(2, 1) == pytest.approx(1 / 9)


def test_agnostic_learn_small_tribes():
    f = zoo.tribes(2, 3)
    o = NoisyOracle(TableOracle(f), 0.05, seed=4)
    res = agnostic_learn(o, 2, 0.1, seed=4)
    assert res.error <= 0.05 + 0.1
    assert hypothesis_error(res.hypothesis, f).value <= 0.1
    assert 0 in res.masks and res.queries == o.queries
    assert "no L1" in res.to_dict()["method"]


def test_agnostic_learn_rejects_bad_args():
    with pytest.raises(InputError):
        agnostic_learn(TableOracle(zoo.parity(3)), 0.5, 0.1)
    with pytest.raises(InputError):
        agnostic_learn(TableOracle(zoo.parity(3)), 2, 1.5)


@given(st.integers(3, 10), st.integers(0, 2 ** 20))
def test_parity_always_found(n, seed):
    rng = np.random.default_rng(seed)
    mask = int(rng.integers(1, 1 << n))
    f = zoo.parity(n, mask)
    assert km_search(TableOracle(f), 0.5, seed=seed) == [mask]


def test_real_oracle_bound():
    o = RealOracle(np.array([0.25, -0.75, 0.5, 0.0]))
    assert o.bound == 0.75


def test_cached_flips_match_hashed():
    o = NoisyOracle(TableOracle(zoo.tribes(2, 4)), 0.2, seed=9)
    pts = np.arange(1 << 8)
    assert np.array_equal(o.flips(pts), o._hash_flips(pts))
