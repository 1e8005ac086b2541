"""Membership-query learning: Kushilevitz-Mansour heavy-coefficient search,
sparse polynomial fitting and a thresholded agnostic learner."""
from dataclasses import dataclass, field
import math
import threading

import numpy as np

from ._validation import check_n, check_probability, coords_from_mask
from .core import BooleanFunction, RealFunction, _wht, spectrum
from .exceptions import BudgetExceededError, InputError

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_FLIP_CACHE_MAX_N = 22

# Default constant in theta = (1 + K)^(-C K); see scripts/calibrate.py.
try:
    from .calibration import LEARNER_C as DEFAULT_LEARNER_C
except ImportError:  # pragma: no cover - before the first calibration run
    DEFAULT_LEARNER_C = 1.0


def splitmix64(x):
    """Vectorized splitmix64 finalizer on uint64 arrays (wrapping arithmetic)."""
    z = np.asarray(x, dtype=_U64) + _GOLDEN
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _chi(points, mask):
    """+-1 character values at integer points."""
    par = np.bitwise_count(np.asarray(points, dtype=_U64) & _U64(mask)) & 1
    return 1.0 - 2.0 * par


def _random_points(rng, bits, size):
    if bits == 0:
        return np.zeros(size, dtype=np.int64)
    return rng.integers(0, 1 << bits, size=size, dtype=np.int64)


# -- oracles -------------------------------------------------------------------


class MembershipOracle:
    """Point-evaluation access to a target on {0,1}^n with an exact query counter.

    Points are integer masks (bit i-1 is x_i). Boolean oracles answer 0/1;
    ``bound`` caps |value| and feeds the sample-size rules.
    """

    boolean = False
    bound = 1.0

    def __init__(self, n):
        self.n = check_n(n)
        self._queries = 0
        self._lock = threading.Lock()

    @property
    def queries(self):
        return self._queries

    def reset_counter(self):
        with self._lock:
            self._queries = 0

    def _evaluate(self, points):
        raise NotImplementedError

    def __call__(self, points):
        points = np.atleast_1d(np.asarray(points, dtype=np.int64))
        if points.size and (points.min() < 0 or points.max() >= (1 << self.n)):
            raise InputError("query point out of range")
        with self._lock:
            self._queries += int(points.size)
        return self._evaluate(points)

    def signed(self, points):
        """Values in the +-1 view for Boolean oracles, raw values otherwise."""
        v = self(points)
        return 1.0 - 2.0 * v if self.boolean else v


class TableOracle(MembershipOracle):
    boolean = True

    def __init__(self, f):
        if not isinstance(f, BooleanFunction):
            raise InputError("TableOracle needs a BooleanFunction")
        super().__init__(f.n)
        self._table = f.table.astype(np.float64)

    def _evaluate(self, points):
        return self._table[points]


class RealOracle(MembershipOracle):
    def __init__(self, g):
        if isinstance(g, RealFunction):
            values = g.floats()
            n = g.n
        else:
            values = np.asarray(g, dtype=np.float64)
            n = int(values.size).bit_length() - 1
            if values.ndim != 1 or (1 << n) != values.size:
                raise InputError("value table length must be a power of two")
        super().__init__(n)
        self._values = np.asarray(values, dtype=np.float64)
        self.bound = float(np.max(np.abs(self._values))) if self._values.size else 0.0

    def _evaluate(self, points):
        return self._values[points]


class NoisyOracle(MembershipOracle):
    """Boolean oracle with each label flipped independently with rate ``rho``.

    Labels are pinned by a hash of (seed, x), so repeated queries agree.
    """

    boolean = True

    def __init__(self, base, rho, seed=0):
        if not base.boolean:
            raise InputError("label noise needs a Boolean base oracle")
        super().__init__(base.n)
        self.base = base
        self.rho = check_probability(rho, "rho")
        self.seed = int(seed)
        self._key = splitmix64(np.array([self.seed], dtype=_U64))[0]
        self._flip_table = None

    def _hash_flips(self, points):
        h = splitmix64(np.asarray(points, dtype=_U64) ^ self._key)
        u = (h >> _U64(11)).astype(np.float64) * 2.0 ** -53
        return u < self.rho

    def flips(self, points):
        # small cubes: hash every point once, same labels as hashing per query
        if self.n <= _FLIP_CACHE_MAX_N:
            if self._flip_table is None:
                self._flip_table = self._hash_flips(np.arange(1 << self.n, dtype=np.int64))
            return self._flip_table[points]
        return self._hash_flips(points)

    def _evaluate(self, points):
        v = self.base(points)
        return np.where(self.flips(points), 1.0 - v, v)

    def as_function(self):
        """The noisy labels as a truth table (no queries are counted)."""
        pts = np.arange(1 << self.n, dtype=np.int64)
        t = self.base._evaluate(pts).astype(np.uint8)
        return BooleanFunction.from_table(np.where(self.flips(pts), 1 - t, t))


class CallableOracle(MembershipOracle):
    """Wraps a vectorized ``fn(points) -> values``."""

    def __init__(self, n, fn, bound=1.0, boolean=False):
        super().__init__(n)
        self._fn = fn
        self.bound = float(bound)
        self.boolean = bool(boolean)

    def _evaluate(self, points):
        return np.asarray(self._fn(points), dtype=np.float64)


def as_oracle(target):
    if isinstance(target, MembershipOracle):
        return target
    if isinstance(target, BooleanFunction):
        return TableOracle(target)
    if isinstance(target, RealFunction):
        return RealOracle(target)
    raise InputError(f"cannot make an oracle from {type(target).__name__}")


def sparse_oracle(n, masks, coeffs):
    """Real target sum_S c_S chi_S."""
    masks = [int(m) for m in masks]
    coeffs = [float(c) for c in coeffs]

    def fn(points):
        out = np.zeros(points.shape, dtype=np.float64)
        for m, c in zip(masks, coeffs):
            out += c * _chi(points, m)
        return out

    return CallableOracle(n, fn, bound=sum(abs(c) for c in coeffs))


def planted_sparse(n, k=8, magnitude=0.3, seed=0):
    """k distinct nonempty masks with random-sign coefficients of the given magnitude."""
    rng = np.random.default_rng(seed)
    masks = set()
    while len(masks) < k:
        m = int(rng.integers(1, 1 << n))
        masks.add(m)
    masks = sorted(masks)
    coeffs = magnitude * rng.choice([-1.0, 1.0], size=k)
    return sparse_oracle(n, masks, coeffs), dict(zip(masks, coeffs.tolist()))


# -- polynomials -----------------------------------------------------------------


@dataclass
class SparsePolynomial:
    """p = sum_S coeffs[S] chi_S, coefficients in the 0/1 view of the target."""

    n: int
    coeffs: dict = field(default_factory=dict)
    residual: float = None
    tau: float = None
    samples: int = 0

    @property
    def l1(self):
        return float(sum(abs(c) for c in self.coeffs.values()))

    @property
    def sparsity(self):
        return sum(1 for c in self.coeffs.values() if c != 0)

    def __call__(self, points):
        points = np.atleast_1d(np.asarray(points, dtype=np.int64))
        out = np.zeros(points.shape, dtype=np.float64)
        for m, c in self.coeffs.items():
            out += c * _chi(points, m)
        return out

    def predict(self, points):
        """0/1 hypothesis: 1 where p >= 1/2."""
        return (self(points) >= 0.5).astype(np.uint8)

    def to_boolean(self):
        return BooleanFunction.from_table(self.predict(np.arange(1 << self.n)))

    def to_dict(self):
        return {
            "n": self.n,
            "masks": [int(m) for m in self.coeffs],
            "coords": [coords_from_mask(int(m)) for m in self.coeffs],
            "coefficients": [float(c) for c in self.coeffs.values()],
            "l1": self.l1,
            "sparsity": self.sparsity,
            "residual": self.residual,
            "tau": self.tau,
            "samples": self.samples,
        }


# -- sample sizes ------------------------------------------------------------------


def hoeffding_samples(value_range, tolerance, failure):
    """Two-sided Hoeffding: samples so the mean of [a, b]-valued draws is within
    ``tolerance`` with probability at least 1 - failure (value_range = b - a)."""
    if tolerance <= 0 or not 0 < failure < 1:
        raise InputError("need tolerance > 0 and failure in (0, 1)")
    return max(1, math.ceil(value_range ** 2 * math.log(2.0 / failure) / (2.0 * tolerance ** 2)))


# -- bucket weights ------------------------------------------------------------------


def _level_sample(oracle, k, m, rng):
    """Paired points sharing the suffix; returns (u = y ^ y', F = v(x) v(x'))."""
    x = _random_points(rng, oracle.n, m)
    y2 = _random_points(rng, k, m)
    x2 = (x & ~((1 << k) - 1)) | y2
    F = oracle.signed(x) * oracle.signed(x2)
    return (x ^ x2), F


def bucket_weight(oracle, k, beta, samples, seed=0):
    """Estimate W(k, beta) = sum over S with S & prefix = beta of the squared
    coefficients (+-1 view for Boolean oracles). Returns (estimate, stderr)."""
    oracle = as_oracle(oracle)
    if not 0 <= k <= oracle.n:
        raise InputError(f"prefix length {k} outside [0, {oracle.n}]")
    if samples < 1:
        raise InputError("samples must be positive")
    beta = int(beta)
    if beta >> k:
        raise InputError("beta must lie inside the prefix")
    rng = np.random.default_rng(seed)
    u, F = _level_sample(oracle, k, int(samples), rng)
    vals = F * _chi(u, beta)
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
    return float(vals.mean()), se


def signed_spectrum(f):
    """Float coefficients of the +-1 view of a Boolean function (raw for real ones)."""
    c = spectrum(f).coeffs
    if isinstance(f, BooleanFunction):
        c = -2.0 * c
        c[0] += 1.0
    return c


def exact_bucket_weight(f, k, beta):
    c = signed_spectrum(f)
    masks = np.arange(c.size)
    sel = (masks & ((1 << k) - 1)) == int(beta)
    return float(np.sum(c[sel] ** 2))


def km_exact(f, theta):
    """The prefix search with exact bucket weights in place of estimates."""
    sq = signed_spectrum(f) ** 2
    n = f.n
    masks = np.arange(sq.size)
    keep = [0]
    for k in range(1, n + 1):
        low = masks & ((1 << k) - 1)
        w = np.bincount(low, weights=sq, minlength=1 << k)
        cand = [b | (e << (k - 1)) for b in keep for e in (0, 1)]
        keep = [b for b in cand if w[b] >= theta ** 2 / 2]
    return sorted(keep)


# -- search --------------------------------------------------------------------------


@dataclass
class SearchInfo:
    theta: float
    samples_per_level: int
    tolerance: float
    failure_per_estimate: float
    planned_queries: int
    levels: list = field(default_factory=list)


def _bit_scatter(points, order):
    out = np.zeros_like(points)
    for j, c in enumerate(order):
        out |= ((points >> j) & 1) << c
    return out


class _PermutedOracle(MembershipOracle):
    def __init__(self, base, order):
        super().__init__(base.n)
        self.base = base
        self.order = order
        self.boolean = base.boolean
        self.bound = base.bound

    def _evaluate(self, points):
        return self.base(_bit_scatter(points, self.order))


def km_search(oracle, theta, confidence=0.9, budget=None, seed=0, samples=None,
              shuffle=False, return_info=False):
    """All S with |F^(S)| >= theta, and none with |F^(S)| < theta/2, with
    probability >= confidence (F is the +-1 view of a Boolean oracle).

    Buckets at prefix length k are kept while their estimated weight is at
    least theta^2/2. ``samples`` overrides the Hoeffding sample size per level.
    """
    oracle = as_oracle(oracle)
    if not theta > 0:
        raise InputError("theta must be positive")
    check_probability(confidence, "confidence", open_interval=True)
    n = oracle.n
    rng = np.random.default_rng(seed)
    B2 = max(oracle.bound, 1e-300) ** 2
    tol = theta ** 2 / 4
    max_buckets = max(1, math.floor(B2 / tol))
    n_estimates = max(1, n * 2 * max_buckets)
    fail = (1 - confidence) / n_estimates
    m = int(samples) if samples is not None else hoeffding_samples(2 * B2, tol, fail)
    planned = 2 * m * n
    if budget is not None and planned > budget:
        raise BudgetExceededError(
            f"search needs {planned} queries (theta={theta}, {m} samples per level), budget {budget}",
            queries_used=0, budget=budget)
    order = None
    target = oracle
    if shuffle:
        order = [int(c) for c in rng.permutation(n)]
        target = _PermutedOracle(oracle, order)
    info = SearchInfo(theta, m, tol, fail, planned)
    keep = [0]
    for k in range(1, n + 1):
        cand = np.array([b | (e << (k - 1)) for b in keep for e in (0, 1)], dtype=np.int64)
        u, F = _level_sample(target, k, m, rng)
        if k <= 22 and cand.size * m > 4 * k * (1 << k):
            hist = np.bincount(u, weights=F, minlength=1 << k)
            est = _wht(hist)[cand] / m
        else:
            est = np.array([np.dot(F, _chi(u, b)) / m for b in cand])
        sel = est >= theta ** 2 / 2
        keep = [int(b) for b in cand[sel]]
        info.levels.append({"k": k, "candidates": int(cand.size), "kept": len(keep)})
        if len(keep) > 4 * max_buckets:
            # estimates this far off are a confidence failure; cap the work
            top = np.argsort(-est[sel], kind="stable")[: 4 * max_buckets]
            keep = sorted(keep[i] for i in top)
    if order is not None:
        keep = [int(_bit_scatter(np.array([b]), order)[0]) for b in keep]
    keep = sorted(keep)
    return (keep, info) if return_info else keep


def build_sparse_approx(oracle, masks, samples=None, seed=0, tau=0.02, confidence=0.9):
    """Estimate the 0/1-view coefficients on ``masks`` from one shared sample.

    Default sample size: Hoeffding so each estimate is within ``tau`` with a
    union bound over the masks. ``residual`` is the sample estimate of ||f - p||_2.
    """
    oracle = as_oracle(oracle)
    masks = [int(m) for m in masks]
    B = max(oracle.bound, 1e-300)
    if samples is None:
        fail = (1 - confidence) / max(1, len(masks))
        samples = hoeffding_samples(2 * B, tau, fail)
    samples = int(samples)
    rng = np.random.default_rng(seed)
    x = _random_points(rng, oracle.n, samples)
    v = oracle(x)
    coeffs = {}
    approx = np.zeros(samples)
    for m in masks:
        chi = _chi(x, m)
        c = float(np.dot(v, chi) / samples)
        coeffs[m] = c
        approx += c * chi
    resid = float(math.sqrt(np.mean((v - approx) ** 2)))
    return SparsePolynomial(oracle.n, coeffs, residual=resid, tau=tau, samples=samples)


# -- errors and the agnostic learner ----------------------------------------------------


@dataclass
class ErrorEstimate:
    value: float
    sigma: float
    exact: bool
    samples: int


def _predict(h, points):
    if isinstance(h, BooleanFunction):
        return h.table[points]
    if hasattr(h, "predict"):
        return np.asarray(h.predict(points))
    return np.asarray(h(points))


def hypothesis_error(h, reference, samples=20000, seed=0):
    """Disagreement rate of ``h`` with ``reference``.

    Exact enumeration for a truth table, Monte Carlo with a standard error for an oracle.
    """
    if isinstance(reference, BooleanFunction):
        pts = np.arange(1 << reference.n, dtype=np.int64)
        err = float(np.mean(_predict(h, pts) != reference.table))
        return ErrorEstimate(err, 0.0, True, pts.size)
    oracle = as_oracle(reference)
    rng = np.random.default_rng(seed)
    pts = _random_points(rng, oracle.n, int(samples))
    dis = (_predict(h, pts) != oracle(pts)).astype(np.float64)
    return ErrorEstimate(float(dis.mean()), float(dis.std() / math.sqrt(samples)), False, int(samples))


@dataclass
class LearnResult:
    hypothesis: SparsePolynomial
    masks: list
    error: float
    error_sigma: float
    queries: int
    theta: float
    K: float
    eps: float
    C: float
    seed: int
    samples: dict
    method: str = "coefficient estimation + 1/2 threshold (no L1 regression)"

    def to_dict(self):
        return {
            "masks": [int(m) for m in self.masks],
            "coords": [coords_from_mask(int(m)) for m in self.masks],
            "coefficients": [float(self.hypothesis.coeffs[m]) for m in self.masks],
            "error": self.error,
            "error_sigma": self.error_sigma,
            "queries": self.queries,
            "theta": self.theta,
            "K": self.K,
            "eps": self.eps,
            "C": self.C,
            "seed": self.seed,
            "samples": dict(self.samples),
            "method": self.method,
        }


def learner_theta(K, C=None):
    C = DEFAULT_LEARNER_C if C is None else C
    return float((1.0 + K) ** (-C * K))


def agnostic_learn(oracle, K, eps, seed=0, C=None, confidence=0.9, budget=None,
                   samples=None, error_samples=None):
    """Heavy coefficients at theta = (1 + K)^(-C K), fitted and rounded at 1/2."""
    oracle = as_oracle(oracle)
    if K < 1:
        raise InputError("K must be at least 1")
    check_probability(eps, "eps", open_interval=True)
    C = DEFAULT_LEARNER_C if C is None else float(C)
    theta = learner_theta(K, C)
    start = oracle.queries
    ss = np.random.SeedSequence(seed).spawn(3)
    seeds = [int(s.generate_state(1)[0]) for s in ss]
    remaining = None if budget is None else budget
    masks, info = km_search(oracle, theta, confidence=confidence, budget=remaining,
                            seed=seeds[0], samples=samples, return_info=True)
    masks = sorted(set(masks) | {0})
    tau = eps / (4 * math.sqrt(len(masks)))
    fail = (1 - confidence) / len(masks)
    fit_samples = hoeffding_samples(2 * max(oracle.bound, 1e-300), tau, fail)
    if budget is not None and oracle.queries - start + fit_samples > budget:
        raise BudgetExceededError("coefficient fitting exceeds the query budget",
                                  queries_used=oracle.queries - start, budget=budget)
    p = build_sparse_approx(oracle, masks, samples=fit_samples, seed=seeds[1], tau=tau)
    if error_samples is None:
        error_samples = hoeffding_samples(1.0, eps / 8, 1 - confidence)
    est = hypothesis_error(p, oracle, samples=error_samples, seed=seeds[2])
    used = oracle.queries - start
    return LearnResult(
        hypothesis=p,
        masks=masks,
        error=est.value,
        error_sigma=est.sigma,
        queries=used,
        theta=theta,
        K=K,
        eps=eps,
        C=C,
        seed=seed,
        samples={"search_per_level": info.samples_per_level,
                 "fit": fit_samples, "error": int(error_samples)},
    )
