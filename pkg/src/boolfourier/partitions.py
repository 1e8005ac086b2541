"""Random partitions of the coordinates, good-character sieving, and the
degree-sensitive norm inequalities that go with them."""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .core import (
    RealFunction,
    as_function,
    popcounts,
    spectrum,
)
from .exceptions import InputError
from .reports import make_report

_FLOAT_ZERO = 1e-12


@dataclass(frozen=True, eq=False)
class Partition:
    """Labelling of coordinates 1..n into parts 1..m; ``labels[i-1]`` is the part of i."""

    n: int
    m: int
    labels: np.ndarray

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if self.m < 1:
            raise InputError("a partition needs at least one part")
        if labels.shape != (self.n,):
            raise InputError(f"expected {self.n} labels, got shape {labels.shape}")
        if labels.size and (labels.min() < 1 or labels.max() > self.m):
            raise InputError(f"labels must lie in 1..{self.m}")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @property
    def parts(self):
        """Bitmask of each part, in order."""
        out = []
        for j in range(1, self.m + 1):
            mask = 0
            for i in np.flatnonzero(self.labels == j):
                mask |= 1 << int(i)
            out.append(mask)
        return out

    def sizes(self):
        return np.bincount(self.labels - 1, minlength=self.m)

    def intersections(self, masks):
        """(len(masks), m) array of |S & I_j|."""
        masks = np.asarray(masks, dtype=np.uint64)
        return np.stack([np.bitwise_count(masks & np.uint64(p)).astype(np.int64)
                         for p in self.parts], axis=-1)


def sample_partition(n, m, seed=None):
    """Each coordinate picks its part uniformly and independently."""
    if m < 1:
        raise InputError("m must be at least 1")
    rng = np.random.default_rng(seed)
    return Partition(n, m, rng.integers(1, m + 1, size=n))


def _frac(x):
    # floats go through repr so 0.4 becomes 2/5, not its binary expansion
    if isinstance(x, float):
        return Fraction(repr(x))
    return x if isinstance(x, Fraction) else Fraction(x)


def size_window(target, factor):
    """Bounds of 'size target within factor': factor*target <= |S| <= target, exact."""
    target, factor = _frac(target), _frac(factor)
    return factor * target, target


@dataclass(frozen=True)
class GoodCharacterSet:
    """Characters S with alpha*d <= |S| <= d whose every part intersection
    satisfies (1-2eps)*alpha*(1+eps)*d/m <= |S & I_j| <= (1+eps)*d/m."""

    partition: Partition
    d: int
    alpha: float
    eps: float

    def bounds(self):
        a, e = _frac(self.alpha), _frac(self.eps)
        outer = size_window(self.d, a)
        inner = size_window((1 + e) * self.d / self.partition.m, (1 - 2 * e) * a)
        return outer, inner

    def _check(self, sizes, inter):
        (lo, hi), (plo, phi) = self.bounds()
        ok = (sizes * lo.denominator >= lo.numerator) & (sizes * hi.denominator <= hi.numerator)
        ok &= np.all((inter * plo.denominator >= plo.numerator)
                     & (inter * phi.denominator <= phi.numerator), axis=-1)
        return ok

    def __contains__(self, S):
        S = int(S)
        inter = self.partition.intersections([S])
        return bool(self._check(np.array([bin(S).count("1")]), inter)[0])

    def members(self):
        """Boolean array over all 2^n masks."""
        n = self.partition.n
        masks = np.arange(1 << n, dtype=np.uint64)
        return self._check(popcounts(n), self.partition.intersections(masks))


def good_character_set(partition, d, alpha, eps):
    return GoodCharacterSet(partition, d, alpha, eps)


def _float_support(spec):
    c = spec.coeffs
    if spec.exact:
        return spec.num != 0
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    return np.abs(c) > _FLOAT_ZERO * max(scale, 1.0)


@dataclass(frozen=True, eq=False)
class AlmostHomogeneous:
    """A function whose spectrum lives on sizes alpha*d <= |S| <= d."""

    g: RealFunction
    alpha: float
    d: int

    def __post_init__(self):
        g = as_function(self.g)
        object.__setattr__(self, "g", g)
        if not 0 < float(self.alpha) <= 1:
            raise InputError("alpha must lie in (0, 1]")
        spec = spectrum(g)
        sizes = popcounts(g.n)[_float_support(spec)]
        lo, hi = size_window(self.d, self.alpha)
        bad = sizes[(sizes * lo.denominator < lo.numerator) | (sizes > hi)]
        if bad.size:
            raise InputError(
                f"not ({self.alpha}, {self.d})-almost-homogeneous: support has size {int(bad[0])}")

    @property
    def n(self):
        return self.g.n


def _coefficient_products(f, g):
    a = spectrum(as_function(f)).coeffs
    b = spectrum(as_function(g)).coeffs
    return np.abs(a * b)


def partition_guarantee(d, m, alpha, eps):
    """Lower bound on the retained fraction for a random partition (and the /2m variant)."""
    weak = 1 - 2 * m * math.exp(-eps ** 2 * alpha * d / (3 * m))
    strong = 1 - 2 * m * math.exp(-eps ** 2 * alpha * d / (2 * m))
    return weak, strong


def exact_split_bound(d, v):
    """(1/(16 sqrt v))^(d/v)."""
    return (1.0 / (16.0 * math.sqrt(v))) ** (d / v)


def exact_split_probability(d, v):
    """Exact Pr[every one of the d/v parts receives exactly v of d fixed points]."""
    if d % v:
        raise InputError("v must divide d")
    m = d // v
    return Fraction(math.factorial(d), math.factorial(v) ** m * m ** d)


def find_good_partition(f, g, m, eps, attempts=64, seed=None, exact_split=False):
    """Best of ``attempts`` random partitions by retained |f^ g^| mass.

    ``g`` is an AlmostHomogeneous. Returns (partition, ratio, report), where
    ratio is retained mass over the total sum of |f^(S) g^(S)|.
    With ``exact_split`` the retained set is {|S| = d, |S & I_j| = d/m for all j}
    and g must be homogeneous.
    """
    if not isinstance(g, AlmostHomogeneous):
        raise InputError("g must be wrapped as AlmostHomogeneous")
    if attempts < 1:
        raise InputError("attempts must be at least 1")
    d, alpha = g.d, g.alpha
    if exact_split:
        if d % m:
            raise InputError("exact split needs m to divide d")
        AlmostHomogeneous(g.g, 1, d)
    prods = _coefficient_products(f, g.g)
    total = float(prods.sum())
    n = g.n
    masks = np.arange(1 << n, dtype=np.uint64)
    sizes = popcounts(n)
    rng = np.random.default_rng(seed)
    best, best_kept = None, -1.0
    for _ in range(attempts):
        part = Partition(n, m, rng.integers(1, m + 1, size=n))
        if exact_split:
            inter = part.intersections(masks)
            keep = (sizes == d) & np.all(inter == d // m, axis=-1)
        else:
            keep = GoodCharacterSet(part, d, alpha, eps).members()
        kept = float(prods[keep].sum())
        if kept > best_kept:
            best, best_kept = part, kept
    ratio = 1.0 if total == 0 else best_kept / total
    if exact_split:
        bound = exact_split_bound(d, d // m)
        terms = {"guarantee": bound}
        extra = {}
    else:
        bound, strong = partition_guarantee(d, m, alpha, eps)
        terms = {"guarantee": bound}
        extra = {"guarantee_2m": strong}
    report = make_report(
        "partition-exact-split" if exact_split else "partition-retained-mass",
        ratio, terms, reverse=True,
        params={"n": n, "d": d, "m": m, "alpha": alpha, "eps": eps, "attempts": attempts,
                "seed": seed},
        witness={"labels": [int(v) for v in best.labels], "retained": best_kept,
                 "total": total, **extra},
        functions=(f, g.g),
    )
    return best, ratio, report


def split_probability_check(d, m, alpha, eps, trials, seed=None, size=None, sigmas=5.0):
    """Monte Carlo on a fixed S of ``size`` points (default d) split into m random parts.

    Returns two reports. The window report compares the empirical rate of
    "some part misses the window" against m*2exp(-eps^2|S|/(3m)). The
    exact-split report (only when m divides d) compares the empirical rate of a
    perfect split against (1/(16 sqrt v))^(d/v) with v = d/m. Both pass if the
    comparison holds within ``sigmas`` standard errors; the strict verdict is
    kept in the witness.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    if m < 1:
        raise InputError("m must be at least 1")
    s = d if size is None else size
    rng = np.random.default_rng(seed)
    counts = np.zeros((trials, m), dtype=np.int64)
    chunk = max(1, 2_000_000 // max(s, 1))
    for start in range(0, trials, chunk):
        stop = min(trials, start + chunk)
        labels = rng.integers(0, m, size=(stop - start, s))
        for j in range(m):
            counts[start:stop, j] = (labels == j).sum(axis=1)
    (lo, hi) = size_window((1 + _frac(eps)) * d / m, (1 - 2 * _frac(eps)) * _frac(alpha))
    inside = np.all((counts * lo.denominator >= lo.numerator)
                    & (counts * hi.denominator <= hi.numerator), axis=1)
    fail = 1.0 - float(inside.mean())
    se = math.sqrt(max(fail * (1 - fail), 1.0 / trials) / trials)
    stated = 2 * math.exp(-eps ** 2 * s / (3 * m))
    bound = m * stated
    params = {"d": d, "m": m, "alpha": alpha, "eps": eps, "size": s, "trials": trials,
              "seed": seed}
    window = make_report(
        "partition-window", fail - sigmas * se, {"bound": bound},
        params=params,
        witness={"failure_rate": fail, "stderr": se, "strict_pass": fail <= bound,
                 "single_part_bound": stated},
    )
    reports = [window]
    if d % m == 0 and s == d:
        v = d // m
        rate = float(np.all(counts == v, axis=1).mean())
        se = math.sqrt(max(rate * (1 - rate), 1.0 / trials) / trials)
        lower = exact_split_bound(d, v)
        exact = exact_split_probability(d, v)
        split = make_report(
            "partition-exact-split-rate", rate + sigmas * se, {"bound": lower},
            reverse=True, params={**params, "v": v},
            witness={"rate": rate, "stderr": se, "strict_pass": rate >= lower,
                     "exact": exact, "exact_pass": float(exact) >= lower},
        )
        reports.append(split)
    return reports


# -- norm inequalities for low-degree functions -------------------------------

def certify_degree(h, d):
    """Raise unless every coefficient of h above degree d vanishes."""
    h = as_function(h)
    spec = spectrum(h)
    high = popcounts(h.n) > d
    if np.any(_float_support(spec) & high):
        raise InputError(f"function has degree {spec.degree()} > {d}")
    return h


def _norm2(v):
    return math.sqrt(float(np.mean(v * v)))


def exchange_check(hs, d=None, partners=None):
    """E max_i h_i^2 <= 3^d max_i ||h_i|| (E sum_i h_i^2)^(1/2).

    With ``partners`` (the functions h'_i, any degree) checks instead
    E (sum |h'_i|^(4/3) |h_i|^(4/3))^(3/4)
        <= 3^d max_i (||h_i|| ||h'_i||)^(1/4) (E sum h'_i^2 * E sum h_i^2)^(3/8).
    """
    hs = [as_function(h) for h in hs]
    if not hs:
        raise InputError("need at least one function")
    if d is None:
        d = max(spectrum(h).degree() for h in hs)
    for h in hs:
        certify_degree(h, d)
    H = np.stack([h.floats() for h in hs])
    norms = np.array([_norm2(row) for row in H])
    sq_sum = float(np.mean(np.sum(H * H, axis=0)))
    params = {"n": hs[0].n, "k": len(hs), "d": d}
    if partners is None:
        lhs = float(np.mean(np.max(H * H, axis=0)))
        rhs = 3.0 ** d * float(norms.max()) * math.sqrt(sq_sum)
        return make_report(
            "exchange", lhs, {"bound": rhs}, params=params,
            witness={"max_norm_sq": float(norms.max()) ** 2}, functions=hs)
    P = np.stack([as_function(h).floats() for h in partners])
    if P.shape != H.shape:
        raise InputError("partners must pair one-to-one with the functions")
    pnorms = np.array([_norm2(row) for row in P])
    inner = np.sum(np.abs(P) ** (4 / 3) * np.abs(H) ** (4 / 3), axis=0)
    lhs = float(np.mean(inner ** 0.75))
    p_sum = float(np.mean(np.sum(P * P, axis=0)))
    rhs = 3.0 ** d * float(np.max(norms * pnorms)) ** 0.25 * (p_sum * sq_sum) ** 0.375
    return make_report("exchange-paired", lhs, {"bound": rhs}, params=params, functions=hs)


def hypercontractivity_check(f, q, d=None):
    """||f||_q <= (q-1)^(d/2) ||f||_2 for f of degree at most d.

    For an exact f and even integer q both sides are raised to the q-th power
    and compared as Fractions.
    """
    if q < 2:
        raise InputError("q must be at least 2")
    g = as_function(f)
    if d is None:
        d = spectrum(g).degree()
    certify_degree(g, d)
    params = {"n": g.n, "q": q, "d": d}
    if g.exact and float(q).is_integer() and int(q) % 2 == 0:
        q = int(q)
        num = g.num.astype(object)
        den = 1 << g.exp
        lhs = Fraction(int(np.sum(num ** q)), den ** q * g.size)
        two = Fraction(int(np.sum(num ** 2)), den ** 2 * g.size)
        rhs = Fraction((q - 1) ** (q * d // 2)) * two ** (q // 2) if (q * d) % 2 == 0 else None
        if rhs is not None:
            return make_report("hypercontractivity", lhs, {"bound": rhs},
                               params={**params, "power": q}, functions=(g,))
    v = np.abs(g.floats())
    lhs = float(np.mean(v ** q) ** (1.0 / q))
    rhs = (q - 1) ** (d / 2) * _norm2(v)
    return make_report("hypercontractivity", lhs, {"bound": rhs}, params=params, functions=(g,))

