"""Closed-form bound constants, the base-case and main inequalities, the
parameter-regime corollaries, and the low-degree influence chain.

Three theorem families are supported, keyed by name:

* ``"basic"``: the max-coefficient form with C1 = 2^k d_k^{(1+eps)d_k} (2/delta_k)^{...}.
* ``"improved"``: the 4/3-power-sum form with cheaper C1 and C3.
* ``"boosted"``: the improved form seeded by a very small eta = delta_1.

Constants are exact Fractions when every factor is a rational power with a
rational result of modest size, and high-precision mpmath floats otherwise.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .core import (
    BooleanFunction,
    RealFunction,
    as_function,
    cross_influence,
    derivative,
    influence_profile,
    inner,
    norm,
    norm_sq,
    popcounts,
    spectrum,
    truncate_degree,
)
from .exceptions import InputError
from .partitions import AlmostHomogeneous, certify_degree
from .reports import make_report, mp, to_mpf

THEOREMS = ("basic", "improved", "boosted")

# Bit budget above which exact rational powers fall back to mpmath.
_EXACT_BITS = 4096


# -- exact-or-mpf arithmetic ---------------------------------------------------

def _rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    return None


def _iroot(a, q):
    """Largest r with r^q <= a, for a >= 0."""
    if a < 2:
        return a
    x = 1 << -(-a.bit_length() // q)
    while True:
        y = ((q - 1) * x + a // x ** (q - 1)) // q
        if y >= x:
            return x
        x = y


def _exact_root(a, q):
    r = _iroot(a, q)
    return r if r ** q == a else None


def power(base, exponent):
    """base ** exponent, exact when the answer is a small rational."""
    b, e = _rational(base), _rational(exponent)
    if b is not None and e is not None and b >= 0:
        if b == 0:
            return Fraction(1) if e == 0 else (Fraction(0) if e > 0 else mp.inf)
        p, q = e.numerator, e.denominator
        bits = abs(p) * max(b.numerator.bit_length(), b.denominator.bit_length()) / q
        if bits <= _EXACT_BITS:
            num = _exact_root(b.numerator, q)
            den = _exact_root(b.denominator, q)
            if num is not None and den is not None:
                return Fraction(num, den) ** p
    return mp.power(to_mpf(base), to_mpf(exponent))


def mul(*xs):
    qs = [_rational(x) for x in xs]
    if all(q is not None for q in qs):
        out = Fraction(1)
        for q in qs:
            out *= q
        return out
    out = mp.mpf(1)
    for x in xs:
        out *= to_mpf(x)
    return out


def add(*xs):
    qs = [_rational(x) for x in xs]
    if all(q is not None for q in qs):
        return sum(qs, Fraction(0))
    return mp.fsum([to_mpf(x) for x in xs])


def div(a, b):
    qa, qb = _rational(a), _rational(b)
    if qa is not None and qb is not None:
        return qa / qb
    return to_mpf(a) / to_mpf(b)


def _q(x):
    """Coerce a user number to Fraction when it is an int/float/Fraction."""
    r = _rational(x)
    return r if r is not None else x


# -- schedules and constants ---------------------------------------------------

@dataclass
class ParameterSchedule:
    """Degree ladder d_0 < ... < d_k (d_0 = 1) and thresholds delta_1 >= ... >= delta_k."""

    degrees: list
    deltas: list
    alpha: float = 1.0
    eps: float = 0.25

    def __post_init__(self):
        self.degrees = [_q(d) for d in self.degrees]
        self.deltas = [_q(x) for x in self.deltas]
        if len(self.degrees) != len(self.deltas) + 1:
            raise InputError("need k+1 degrees and k thresholds")
        if not self.deltas:
            raise InputError("k must be at least 1")
        if any(to_mpf(x) <= 0 for x in self.deltas):
            raise InputError("thresholds must be positive")
        if any(to_mpf(a) >= to_mpf(b) for a, b in zip(self.degrees, self.degrees[1:])):
            raise InputError("degree ladder must be increasing")
        if any(to_mpf(a) < to_mpf(b) for a, b in zip(self.deltas, self.deltas[1:])):
            raise InputError("thresholds must be non-increasing")
        if not 0 < float(self.alpha) <= 1:
            raise InputError("alpha must lie in (0, 1]")
        if not 0 < float(self.eps) < 1:
            raise InputError("eps must lie in (0, 1)")

    @property
    def k(self):
        return len(self.deltas)

    def d(self, j):
        return self.degrees[j]

    def delta(self, j):
        return self.deltas[j - 1]

    def gap_holds(self, j):
        """d_{j-1} >= 3/(alpha eps^2 (1-2eps)^k) ln(4(1+eps) d_j / d_{j-1})."""
        a, e, k = float(self.alpha), float(self.eps), self.k
        lo, hi = to_mpf(self.d(j - 1)), to_mpf(self.d(j))
        if 1 - 2 * e <= 0:
            return False
        need = 3 / (a * e ** 2 * (1 - 2 * e) ** k) * mp.log(4 * (1 + e) * hi / lo)
        return bool(lo >= need)

    def gap_report(self):
        return {j: self.gap_holds(j) for j in range(1, self.k + 1)}


def required_gap_indices(theorem, k):
    start = 3 if theorem == "basic" else 2
    return list(range(start, k + 1))


@dataclass
class BoundTerms:
    theorem: str
    C1: object
    C2: object
    C3: object
    flags: list = field(default_factory=list)
    gaps: dict = field(default_factory=dict)

    def as_dict(self):
        return {"C1": self.C1, "C2": self.C2, "C3": self.C3}


def _basic_constants(s):
    k, e = s.k, s.eps
    one_e = 1 + _q(e)
    two_k = Fraction(2 ** k)

    def block(j):
        dj, dprev = s.d(j), s.d(j - 1)
        return mul(power(dj, mul(one_e, dj)), power(div(2, s.delta(j)), div(mul(one_e, dj), dprev)))

    C1 = mul(two_k, block(k))
    C2 = mul(two_k, power(s.delta(1), Fraction(1, 8)), power(3, div(s.d(1), 4)))
    if k == 1:
        C3 = Fraction(0)
    else:
        terms = [mul(block(j), power(3, div(s.d(j + 1), 2)),
                     power(s.delta(j + 1), Fraction(1, 4))) for j in range(1, k)]
        C3 = mul(two_k, power(one_e, k), s.d(k), add(*terms))
    return C1, C2, C3


def _improved_block(s, j):
    one_e = 1 + _q(s.eps)
    return power(div(2, s.delta(j)), div(mul(one_e, s.d(j)), mul(4, s.d(j - 1))))


def _improved_constants(s):
    k = s.k
    d1, delta1 = s.d(1), s.delta(1)
    base_c1 = power(div(d1, delta1), div(d1, 4))
    C2_core = mul(power(delta1, Fraction(1, 8)), power(3, div(d1, 4)))
    if k == 1:
        return base_c1, mul(Fraction(2), C2_core), Fraction(0)
    two_k = Fraction(2 ** k)
    C1 = mul(two_k, _improved_block(s, k))
    C2 = mul(two_k, C2_core)
    terms = [mul(base_c1, power(s.delta(2), Fraction(1, 4)))]
    for j in range(2, k):
        terms.append(mul(_improved_block(s, j), power(3, s.d(j + 1)),
                         power(s.delta(j + 1), Fraction(1, 4))))
    C3 = mul(two_k, power(1 + _q(s.eps), k), s.d(k), add(*terms))
    return C1, C2, C3


def boosted_eta_ceiling(e_prime):
    """10^(-320 sqrt(10 e')) as an mpf."""
    return mp.power(10, -320 * mp.sqrt(10 * to_mpf(e_prime)))


def _boosted_constants(s):
    k = s.k
    d1 = s.d(1)
    eta = s.delta(1)
    big = power(eta, mul(-300, d1))
    if k == 1:
        ten_d = mul(Fraction(10), d1)
        return mul(ten_d, big), mul(ten_d, power(eta, Fraction(1, 16))), mul(ten_d, eta)
    two_k = Fraction(2 ** k)
    C1 = mul(two_k, _improved_block(s, k))
    C2 = mul(two_k, Fraction(100), d1, d1, power(eta, Fraction(1, 16)))
    terms = [mul(Fraction(10), s.d(k), big, power(s.delta(2), Fraction(1, 4)))]
    for j in range(2, k):
        terms.append(mul(_improved_block(s, j), power(3, s.d(j + 1)),
                         power(s.delta(j + 1), Fraction(1, 4))))
    C3 = mul(two_k, power(1 + _q(s.eps), k), add(*terms))
    return C1, C2, C3


def main_bound_terms(schedule, theorem="basic"):
    """C1, C2, C3 of the selected theorem family for this schedule.

    Gap-condition failures at the indices the theorem needs are flagged, not
    raised; the boosted family also flags delta_1 above its ceiling.
    """
    if theorem not in THEOREMS:
        raise InputError(f"theorem must be one of {THEOREMS}")
    s = schedule
    gaps = s.gap_report()
    flags = []
    bad = [j for j in required_gap_indices(theorem, s.k) if not gaps[j]]
    if bad:
        flags.append("outside-hypothesis:gap@" + ",".join(map(str, bad)))
    if theorem == "basic":
        C = _basic_constants(s)
    elif theorem == "improved":
        C = _improved_constants(s)
    else:
        if to_mpf(s.delta(1)) > boosted_eta_ceiling(s.d(1)):
            flags.append("outside-hypothesis:eta-ceiling")
        C = _boosted_constants(s)
    return BoundTerms(theorem, *C, flags=flags, gaps=gaps)


# -- spectral ingredients ------------------------------------------------------

def _coeffs(f):
    return spectrum(as_function(f)).coeffs


def _size_mask(n, d, alpha):
    sizes = popcounts(n)
    a = Fraction(alpha) if not isinstance(alpha, Fraction) else alpha
    return (sizes * a.denominator >= a.numerator * d) & (sizes <= d)


def max_product(f, g, keep=None):
    """max |f^(S) g^(S)| over ``keep`` (default all S), exact when possible."""
    sf, sg = spectrum(as_function(f)), spectrum(as_function(g))
    if sf.exact and sg.exact:
        prod = np.abs(sf.num.astype(object) * sg.num.astype(object))
        if keep is not None:
            prod = prod[keep]
        top = max(prod) if prod.size else 0
        return Fraction(int(top), 1 << (sf.exp + sg.exp))
    prod = np.abs(sf.coeffs * sg.coeffs)
    if keep is not None:
        prod = prod[keep]
    return float(prod.max()) if prod.size else 0.0


def four_thirds_sum(f, g, keep=None):
    """(sum |f^(S)|^(4/3) |g^(S)|^(4/3))^(3/4) over ``keep``."""
    prod = np.abs(_coeffs(f) * _coeffs(g))
    if keep is not None:
        prod = prod[keep]
    return mp.mpf(float(np.sum(prod ** (4.0 / 3.0)) ** 0.75))


def _lhs(f, g):
    return inner(as_function(f), as_function(g))


def _norm2(f):
    v = norm_sq(as_function(f))
    return mp.sqrt(to_mpf(v))


# -- base cases ----------------------------------------------------------------

def base_case_check(f, g, delta, d=None):
    """<f,g> against the two base-case bounds for g of degree at most d.

    Returns [max-form report, 4/3-sum-form report] per delta (a scalar or a
    sequence):
      (d/delta)^d max|f^ g^| + 2 delta^(1/8) 3^(d/4) I[f,g]
      (d/delta)^(d/4) (sum |f^ g^|^(4/3))^(3/4) + 2 delta^(1/8) 3^(d/4) I[f,g]
    """
    if not isinstance(f, BooleanFunction):
        raise InputError("f must be Boolean")
    g = as_function(g)
    deltas = list(delta) if isinstance(delta, (list, tuple)) else [delta]
    if any(to_mpf(x) <= 0 for x in deltas):
        raise InputError("delta must be positive")
    if d is None:
        d = spectrum(g).degree()
    certify_degree(g, d)
    lhs = _lhs(f, g)
    cross = cross_influence(f, g)
    mx = max_product(f, g)
    ps = four_thirds_sum(f, g)
    reports = []
    for delta in deltas:
        delta = _q(delta)
        infl_c = mul(Fraction(2), power(delta, Fraction(1, 8)), power(3, Fraction(d, 4)))
        infl = mul(infl_c, cross)
        params = {"n": f.n, "d": d, "delta": delta}
        c_max = power(Fraction(d) / delta, d)
        c_sum = power(Fraction(d) / delta, Fraction(d, 4))
        reports.append(make_report(
            "base-case", lhs, {"coefficient": mul(c_max, mx), "influence": infl},
            params=params, witness={"C_coefficient": c_max, "C_influence": infl_c,
                                    "max_product": mx, "cross_influence": cross},
            functions=(f, g)))
        reports.append(make_report(
            "base-case-improved", lhs, {"coefficient": mul(c_sum, ps), "influence": infl},
            params=params, witness={"C_coefficient": c_sum, "C_influence": infl_c,
                                    "power_sum": ps, "cross_influence": cross},
            functions=(f, g)))
    return reports


def collapsed_eta_ladder(eta, k):
    """eta_1 = eta, eta_{i+1} = eta_i^((e_{i+1}/e_i)(1 + 4 e_i^(-1/4))), e_i = 10^i."""
    etas = [to_mpf(eta)]
    for i in range(1, k):
        e_i = mp.mpf(10) ** i
        etas.append(mp.power(etas[-1], 10 * (1 + 4 * mp.power(e_i, mp.mpf(-1) / 4))))
    return etas


def boosted_constants(etas):
    """C1, C2, C3 for the boosted base case with e_i = 10^i and thresholds ``etas``.

    For k = 1 this is the 4/3-sum base case at degree 10.
    """
    k = len(etas)
    if k < 1:
        raise InputError("need at least one threshold")
    etas = [_q(x) for x in etas]
    if any(to_mpf(x) <= 0 for x in etas):
        raise InputError("thresholds must be positive")
    if any(to_mpf(a) < to_mpf(b) for a, b in zip(etas, etas[1:])):
        raise InputError("thresholds must be non-increasing")
    e = [None] + [10 ** i for i in range(1, k + 1)]

    def ratio(x):
        return Fraction(10) / x if isinstance(x, Fraction) else 10 / to_mpf(x)

    if k == 1:
        C1 = power(ratio(etas[0]), Fraction(5, 2))
        C2 = mul(Fraction(2), power(etas[0], Fraction(1, 8)), power(3, Fraction(e[1], 4)))
        return C1, C2, Fraction(0)
    split = [power(Fraction(16 ** 2 * e[i]), Fraction(5)) for i in range(1, k)]
    prod = mul(*split)
    C1 = mul(Fraction(10 ** k), power(Fraction(16 ** 2 * e[k - 1]), Fraction(5)),
             power(ratio(etas[k - 1]), Fraction(5, 2)))
    C2 = mul(Fraction(2), power(etas[0], Fraction(1, 8)), power(3, Fraction(e[1], 4)), prod)
    terms = [mul(power(ratio(etas[j - 1]), Fraction(5, 2)), power(3, e[j + 1]),
                 power(etas[j], Fraction(1, 4))) for j in range(1, k)]
    C3 = mul(Fraction(10 ** k), prod, add(*terms))
    return C1, C2, C3


def boosted_base_check(f, g, etas):
    """<f,g> for g homogeneous of degree 10^k (k = len(etas)) against the boosted
    base-case bound, plus the collapsed single-eta form when eta_1 is below
    10^(-320 sqrt(e')).

      C1 (sum_{|S|=e'} |f^ g^|^(4/3))^(3/4) + C2 I[f,g] + C3 ||f|| ||g||
      collapsed: eta^(-30 e') (...)^(3/4) + eta^(1/16) I[f,g] + eta ||f|| ||g||
    """
    if not isinstance(f, BooleanFunction):
        raise InputError("f must be Boolean")
    g = as_function(g)
    k = len(etas)
    e_prime = 10 ** k
    spec = spectrum(g)
    sizes = popcounts(g.n)
    support = spec.num != 0 if spec.exact else np.abs(spec.coeffs) > 1e-12
    if np.any(support & (sizes != e_prime)):
        raise InputError(f"g is not homogeneous of degree {e_prime}")
    C1, C2, C3 = boosted_constants(etas)
    lhs = _lhs(f, g)
    keep = sizes == e_prime
    ps = four_thirds_sum(f, g, keep)
    cross = cross_influence(f, g)
    norms = mul(_norm2(f), _norm2(g))
    params = {"n": f.n, "k": k, "e_prime": e_prime, "etas": list(etas)}
    main = make_report(
        "boosted-base-case", lhs,
        {"coefficient": mul(C1, ps), "influence": mul(C2, cross), "norm": mul(C3, norms)},
        params=params, witness={"C1": C1, "C2": C2, "C3": C3}, functions=(f, g))
    reports = [main]
    eta = to_mpf(etas[0])
    ceiling = mp.power(10, -320 * mp.sqrt(e_prime))
    flags = [] if eta <= ceiling else ["outside-hypothesis:eta-ceiling"]
    collapsed = make_report(
        "boosted-base-case-collapsed", lhs,
        {"coefficient": mul(mp.power(eta, -30 * e_prime), ps),
         "influence": mul(mp.power(eta, mp.mpf(1) / 16), cross),
         "norm": mul(eta, norms)},
        params={"n": f.n, "e_prime": e_prime, "eta": etas[0]},
        flags=flags, functions=(f, g))
    reports.append(collapsed)
    return reports


# -- main inequality -----------------------------------------------------------

def main_inequality_check(f, g, schedule, theorem="basic"):
    """<f,g> <= C1 * A + C2 I[f,g] + C3 ||f|| ||g|| for g (alpha, d_k)-almost-homogeneous.

    A is max |f^ g^| over alpha d_k <= |S| <= d_k for the basic family and the
    4/3-power sum over the same sizes otherwise.
    """
    if not isinstance(f, BooleanFunction):
        raise InputError("f must be Boolean")
    s = schedule
    dk = s.d(s.k)
    if isinstance(g, AlmostHomogeneous):
        g = g.g
    AlmostHomogeneous(g, s.alpha, dk)
    g = as_function(g)
    terms = main_bound_terms(s, theorem)
    keep = _size_mask(g.n, dk, s.alpha)
    A = max_product(f, g, keep) if theorem == "basic" else four_thirds_sum(f, g, keep)
    cross = cross_influence(f, g)
    norms = mul(_norm2(f), _norm2(g))
    lhs = _lhs(f, g)
    return make_report(
        f"main-{theorem}", lhs,
        {"coefficient": mul(terms.C1, A), "influence": mul(terms.C2, cross),
         "norm": mul(terms.C3, norms)},
        params={"n": f.n, "k": s.k, "degrees": s.degrees, "deltas": s.deltas,
                "alpha": s.alpha, "eps": s.eps},
        witness={**terms.as_dict(), "gaps": {str(j): v for j, v in terms.gaps.items()}},
        flags=terms.flags, functions=(f, g))


# -- parameter-regime corollaries ----------------------------------------------

def corollary_schedule(d, delta, alpha, eps, which):
    """The ladder used to instantiate a theorem family from (d, delta, alpha, eps).

    k = floor(1/eps) and eps' = 1/k; d_j = d^(j/k); delta_1 = delta and
    delta_{j+1} = delta_j^(80 d^eps) for the basic family,
    delta_j^((1+eps)^2 d^eps) for the improved one.
    """
    k = max(1, math.floor(1 / eps))
    eps_used = Fraction(1, k)
    degrees = [Fraction(1)] + [mp.power(d, mp.mpf(j) / k) for j in range(1, k + 1)]
    degrees[-1] = _q(d)
    for j in range(1, k):
        v = degrees[j]
        r = int(mp.nint(v))
        if abs(v - r) < mp.mpf(10) ** -30:
            degrees[j] = Fraction(r)
    grow = 80 * mp.power(d, eps) if which == "basic" else (1 + eps) ** 2 * mp.power(d, eps)
    deltas = [_q(delta)]
    for _ in range(1, k):
        deltas.append(mp.power(to_mpf(deltas[-1]), grow))
    return ParameterSchedule(degrees, deltas, alpha, float(eps_used)), float(grow)


def corollary_param_check(f, g, d, delta, alpha, eps, which="improved"):
    """The three-term corollary bound for (alpha, d)-almost-homogeneous g.

    ``basic`` evaluates the basic theorem at the corollary's own ladder (the
    implied exponents of delta are stored in the witness); ``improved`` and
    ``boosted`` use the closed forms
      delta^(-c d) ||f||^(3/4) ||g||^(3/4) max|f^ g^|^(1/4) + delta^(1/16) I + delta ||f|| ||g||
    with c = 6 and c = 10^5 respectively.
    """
    if which not in THEOREMS:
        raise InputError(f"which must be one of {THEOREMS}")
    if not isinstance(f, BooleanFunction):
        raise InputError("f must be Boolean")
    if isinstance(g, AlmostHomogeneous):
        g = g.g
    g = as_function(g)
    AlmostHomogeneous(g, alpha, d)
    dm, dl, a, e = to_mpf(d), to_mpf(delta), to_mpf(alpha), to_mpf(eps)
    flags = []
    if which in ("basic", "improved"):
        if not 0 < eps < 0.5:
            flags.append("outside-hypothesis:eps-range")
        if d > 1 and mp.power(dm, e) < 100 / (a * e) * mp.log(dm):
            flags.append("outside-hypothesis:degree-lower-bound")
        ceiling = mp.power(2, -4 * mp.power(dm, e)) if which == "basic" else \
            mp.power(2, -(16 / e) * mp.power(dm, e))
    else:
        ceiling = mp.power(dm, -96000 / mp.sqrt(a))
    if dl > ceiling:
        flags.append("outside-hypothesis:delta-ceiling")
    keep = _size_mask(g.n, d, alpha)
    mx = max_product(f, g, keep)
    cross = cross_influence(f, g)
    nf, ng = _norm2(f), _norm2(g)
    lhs = _lhs(f, g)
    params = {"n": f.n, "d": d, "delta": delta, "alpha": alpha, "eps": eps}
    witness = {}
    if which == "basic":
        sched, grow = corollary_schedule(d, delta, alpha, eps, "basic")
        terms = main_bound_terms(sched, "basic")
        flags += terms.flags
        terms_map = {"coefficient": mul(terms.C1, mx), "influence": mul(terms.C2, cross),
                     "norm": mul(terms.C3, nf, ng)}
        log_delta = mp.log(dl)

        def expo(c):
            c = to_mpf(c)
            return None if c <= 0 else mp.log(c) / log_delta

        witness = {"k": sched.k, "eps_used": sched.eps, "delta_growth": grow,
                   "C1": terms.C1, "C2": terms.C2, "C3": terms.C3,
                   "C1_delta_exponent_per_d": (expo(terms.C1) / dm) if expo(terms.C1) else None,
                   "C2_delta_exponent": expo(terms.C2), "C3_delta_exponent": expo(terms.C3)}
    else:
        c = 6 if which == "improved" else 10 ** 5
        first = mul(mp.power(dl, -c * dm), mp.power(nf * ng, mp.mpf(3) / 4),
                    mp.power(to_mpf(mx), mp.mpf(1) / 4))
        terms_map = {"coefficient": first,
                     "influence": mul(mp.power(dl, mp.mpf(1) / 16), cross),
                     "norm": mul(dl, nf, ng)}
        witness = {"delta_exponent": -c}
    return make_report(f"corollary-{which}", lhs, terms_map, params=params, witness=witness,
                       flags=flags, functions=(f, g))


# -- influence chain -----------------------------------------------------------

def kkl_chain_check(f, d):
    """Each link of the chain bounding <f, f^{<=d} - f^({})> by
    2 sqrt(3)^d I[f] max_i I_i[f^{<=d}]^(1/4), as separate reports:

      <f,g> <= sum_i <d_i f, d_i f^{<=d}>
            <= sum_i ||d_i f||_{4/3} ||d_i f^{<=d}||_4
            <= sqrt(3)^d sum_i ||d_i f||_{4/3} ||d_i f^{<=d}||_2
            <= 2 sqrt(3)^d I[f] max_i I_i[f^{<=d}]^(1/4)
    """
    if not isinstance(f, BooleanFunction):
        raise InputError("f must be Boolean")
    n = f.n
    low = truncate_degree(f, d)
    const = spectrum(f).coeff(0)
    g = low - _constant(n, const)
    t0 = float(inner(f, g))
    t1 = t2 = t3 = 0.0
    for i in range(n):
        a = derivative(f, 1 << i)
        b = derivative(low, 1 << i)
        t1 += float(inner(a, b))
        n43 = norm(a, 4 / 3)
        t2 += n43 * norm(b, 4)
        t3 += n43 * norm(b, 2)
    t3 *= math.sqrt(3) ** d
    prof_f = influence_profile(f)
    prof_low = influence_profile(low)
    t4 = 2 * math.sqrt(3) ** d * float(prof_f.total) * max(
        float(v) for v in prof_low.per_coordinate) ** 0.25
    chain = [t0, t1, t2, t3, t4]
    names = ["kkl-derivative-sum", "kkl-holder", "kkl-hypercontractive", "kkl-booleanity"]
    params = {"n": n, "d": d}
    return [make_report(name, chain[i], {"bound": chain[i + 1]}, params=params,
                        witness={"chain": chain}, functions=(f,))
            for i, name in enumerate(names)]


def _constant(n, value):
    if isinstance(value, Fraction):
        den = value.denominator
        exp = den.bit_length() - 1
        return RealFunction(n, np.full(1 << n, value.numerator, dtype=np.int64), exp)
    return RealFunction(n, np.full(1 << n, float(value)), None)
