"""Exact Fourier analysis of functions on the Boolean hypercube.

Points ``x`` of ``{0,1}^n`` are integers with ``x_1`` in the least significant
bit, and subsets ``S`` of ``[n]`` are bitmasks in the same convention, so the
character ``chi_S(x) = (-1)^{popcount(x & S)}``.

Real-valued functions are held either exactly, as integer numerators over a
common power-of-two denominator (dyadic mode), or as float64 arrays. Every
quantity derived from an exact function is returned as a ``Fraction``.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
import math
import operator

import numpy as np

from ._validation import (
    check_mask,
    check_n,
    check_real_values,
    check_truth_table,
    coords_from_mask,
    n_from_length,
)
from .exceptions import InputError

_INT64_SAFE = 1 << 62


def popcounts(n):
    """Popcount of every mask in ``range(2**n)`` as an int64 array."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def character(n, mask):
    """chi_S as a length-2^n int64 array of +-1."""
    idx = np.arange(1 << n, dtype=np.uint64)
    parity = np.bitwise_count(idx & np.uint64(mask)) & 1
    return 1 - 2 * parity.astype(np.int64)


def _max_abs(num):
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max(abs(int(v)) for v in num)
    return int(np.max(np.abs(num)))


def _promote(num, growth_bits):
    """Return ``num`` as int64 if values times 2^growth_bits stay safe, else as Python ints."""
    if num.dtype == object:
        return num
    if (_max_abs(num) << growth_bits) < _INT64_SAFE:
        return num.astype(np.int64, copy=False)
    return num.astype(object)


def _as_object(num):
    return num if num.dtype == object else num.astype(object)


def _wht(a):
    """Unnormalized Walsh-Hadamard butterfly: out[S] = sum_x a[x] chi_S(x)."""
    size = a.size
    h = 1
    a = a.copy()
    while h < size:
        a = a.reshape(-1, 2, h)
        lo = a[:, 0, :]
        hi = a[:, 1, :]
        a = np.stack((lo + hi, lo - hi), axis=1).reshape(-1)
        h <<= 1
    return a


def _normalize(num, exp):
    """Cancel common powers of two between numerators and the 2^exp denominator."""
    if exp == 0 or num.size == 0:
        return num, exp
    if num.dtype == object:
        acc = reduce(operator.or_, (int(v) for v in num), 0)
    else:
        acc = int(np.bitwise_or.reduce(num))
    if acc == 0:
        return num, 0
    tz = (acc & -acc).bit_length() - 1
    shift = min(tz, exp)
    if shift == 0:
        return num, exp
    if num.dtype == object:
        return np.array([int(v) >> shift for v in num], dtype=object), exp - shift
    return num >> shift, exp - shift


def _dyadic_parts(value):
    """Split a dyadic rational into (numerator, exponent) or raise."""
    frac = Fraction(value)
    den = frac.denominator
    if den & (den - 1):
        raise InputError(f"{value!r} is not a dyadic rational")
    return frac.numerator, den.bit_length() - 1


class _Dense:
    """Shared storage for a length-2^n array that is either dyadic or float."""

    __slots__ = ()

    @property
    def exact(self):
        return self.exp is not None

    @property
    def size(self):
        return 1 << self.n

    def floats(self):
        if self.exact:
            if self.num.dtype == object:
                return np.array([float(Fraction(int(v), 1 << self.exp)) for v in self.num],
                                dtype=np.float64)
            return self.num.astype(np.float64) / float(2 ** self.exp)
        return self.num

    def value_at(self, index):
        if self.exact:
            return Fraction(int(self.num[index]), 1 << self.exp)
        return float(self.num[index])

    def _same_mode(self, other):
        if self.n != other.n:
            raise InputError(f"dimension mismatch: n={self.n} vs n={other.n}")
        return self.exact and other.exact


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """Truth table of f: {0,1}^n -> {0,1}; ``table[x]`` is f(x)."""

    n: int
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "table", check_truth_table(self.table, self.n))

    @classmethod
    def from_table(cls, table):
        table = np.asarray(table)
        return cls(n_from_length(table.size), table)

    @classmethod
    def from_callable(cls, n, fn):
        """Build from ``fn(bits)`` where ``bits`` is a (2^n, n) 0/1 matrix, column i-1 = x_i."""
        check_n(n)
        bits = point_bits(n)
        return cls(n, np.asarray(fn(bits)).astype(np.uint8))

    def __call__(self, x):
        return int(self.table[x])

    def __eq__(self, other):
        return isinstance(other, BooleanFunction) and self.n == other.n and bool(
            np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def as_real(self):
        return RealFunction(self.n, self.table.astype(np.int64), 0)

    def pm(self):
        """The +-1 view 1 - 2f."""
        return RealFunction(self.n, 1 - 2 * self.table.astype(np.int64), 0)

    def negate(self):
        return BooleanFunction(self.n, 1 - self.table)

    def mean(self):
        return Fraction(int(self.table.sum()), self.size)

    def variance(self):
        p = self.mean()
        return p * (1 - p)

    @property
    def size(self):
        return 1 << self.n


@dataclass(frozen=True, eq=False)
class RealFunction(_Dense):
    """g: {0,1}^n -> R. Exact when ``exp`` is set: g(x) = num[x] / 2^exp."""

    n: int
    num: np.ndarray
    exp: int | None = None

    def __post_init__(self):
        num = np.array(self.num, copy=True)
        n = n_from_length(num.size)
        if n != self.n:
            raise InputError(f"values length {num.size} does not match n={self.n}")
        check_n(n)
        if self.exp is None:
            num = check_real_values(num, n)
        else:
            if self.exp < 0:
                raise InputError("exponent must be non-negative")
            if num.dtype != object:
                if not np.issubdtype(num.dtype, np.integer):
                    raise InputError("exact mode needs integer numerators")
                num = num.astype(np.int64)
            num, exp = _normalize(num, self.exp)
            object.__setattr__(self, "exp", exp)
        num.flags.writeable = False
        object.__setattr__(self, "num", num)

    @classmethod
    def from_floats(cls, values):
        values = np.asarray(values, dtype=np.float64)
        return cls(n_from_length(values.size), values, None)

    @classmethod
    def from_dyadic(cls, values):
        """Exact function from a sequence of dyadic rationals (ints, Fractions, exact floats)."""
        parts = [_dyadic_parts(v) for v in values]
        n = n_from_length(len(parts))
        exp = max((e for _, e in parts), default=0)
        num = np.array([p << (exp - e) for p, e in parts], dtype=object)
        return cls(n, _promote(num, 0), exp)

    @classmethod
    def zeros(cls, n):
        return cls(n, np.zeros(1 << n, dtype=np.int64), 0)

    @property
    def values(self):
        return self.floats()

    def exact_values(self):
        if not self.exact:
            raise InputError("function is in float mode")
        return [Fraction(int(v), 1 << self.exp) for v in self.num]

    def to_float(self):
        return self if not self.exact else RealFunction(self.n, self.floats(), None)

    def __neg__(self):
        return RealFunction(self.n, -self.num, self.exp)

    def __add__(self, other):
        return _combine(self, as_function(other), 1)

    def __sub__(self, other):
        return _combine(self, as_function(other), -1)

    def scale(self, factor):
        if self.exact:
            p, e = _dyadic_parts(factor)
            return RealFunction(self.n, _as_object(self.num) * p, self.exp + e)
        return RealFunction(self.n, self.num * float(factor), None)


def _combine(f, g, sign):
    if f._same_mode(g):
        exp = max(f.exp, g.exp)
        a = _as_object(f.num) * (1 << (exp - f.exp))
        b = _as_object(g.num) * (1 << (exp - g.exp))
        return RealFunction(f.n, _promote(a + sign * b, 0), exp)
    return RealFunction(f.n, f.floats() + sign * g.floats(), None)


def as_function(f):
    """Coerce a BooleanFunction to its exact RealFunction; pass RealFunctions through."""
    if isinstance(f, BooleanFunction):
        return f.as_real()
    if isinstance(f, RealFunction):
        return f
    raise InputError(f"expected BooleanFunction or RealFunction, got {type(f).__name__}")


def point_bits(n):
    """(2^n, n) uint8 matrix; row x holds (x_1, ..., x_n)."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class Spectrum(_Dense):
    """All 2^n Fourier coefficients; exact: f^(S) = num[S] / 2^exp."""

    n: int
    num: np.ndarray
    exp: int | None = None

    def __post_init__(self):
        num = np.asarray(self.num)
        if self.exp is not None:
            num, exp = _normalize(num if num.dtype == object else num.astype(np.int64), self.exp)
            object.__setattr__(self, "exp", exp)
        num.flags.writeable = False
        object.__setattr__(self, "num", num)

    @property
    def coeffs(self):
        return self.floats()

    def coeff(self, mask):
        return self.value_at(check_mask(mask, self.n))

    def squares(self):
        """Float array of f^(S)^2."""
        c = self.coeffs
        return c * c

    def mass(self, keep=None):
        """Sum of squared coefficients over ``keep`` (bool array) or everything; exact if possible."""
        if self.exact:
            num = _as_object(self.num)
            if keep is not None:
                num = num[np.asarray(keep, dtype=bool)]
            return Fraction(int(np.dot(num, num)) if num.size else 0, 1 << (2 * self.exp))
        sq = self.squares()
        return float(sq.sum() if keep is None else sq[np.asarray(keep, dtype=bool)].sum())

    def support(self):
        """Masks with nonzero coefficient, increasing."""
        return np.flatnonzero(self.num != 0)

    def degree(self):
        supp = self.support()
        if supp.size == 0:
            return 0
        return int(popcounts(self.n)[supp].max())

    def mask_where(self, keep):
        """Spectrum with coefficients outside the boolean array ``keep`` set to zero."""
        keep = np.asarray(keep, dtype=bool)
        num = self.num.copy()
        num[~keep] = 0
        return Spectrum(self.n, num, self.exp)

    def to_function(self):
        """Inverse transform: g(x) = sum_S f^(S) chi_S(x)."""
        num = _promote(self.num, self.n + 1)
        return RealFunction(self.n, _wht(num), self.exp)

    def csv_rows(self):
        """(mask, numerator, denominator) per coefficient in lowest terms."""
        if not self.exact:
            raise InputError("CSV export needs an exact spectrum")
        rows = []
        for s in range(self.size):
            frac = Fraction(int(self.num[s]), 1 << self.exp)
            rows.append((s, frac.numerator, frac.denominator))
        return rows


def spectrum(f):
    """Fourier coefficients f^(S) = E_x[f(x) chi_S(x)] by an O(n 2^n) butterfly."""
    g = as_function(f)
    if g.exact:
        num = _promote(g.num, g.n + 1)
        return Spectrum(g.n, _wht(num), g.exp + g.n)
    return Spectrum(g.n, _wht(g.num) / float(1 << g.n), None)


def inverse(spec):
    return spec.to_function()


def _degree_keep(n, d):
    return popcounts(n) <= d


def truncate_degree(f, d):
    """f^{<=d}: the part of the Fourier expansion on characters of size at most d."""
    g = as_function(f)
    if not 0 <= d <= g.n:
        raise InputError(f"degree {d} outside [0, {g.n}]")
    spec = spectrum(g)
    return spec.mask_where(_degree_keep(g.n, d)).to_function()


def homogeneous_part(f, d):
    """Part of f supported on characters of size exactly d."""
    g = as_function(f)
    spec = spectrum(g)
    return spec.mask_where(popcounts(g.n) == d).to_function()


def derivative(f, T):
    """Discrete derivative along every coordinate of T, applied pointwise.

    The result is returned on the full cube and does not depend on the
    coordinates in T.
    """
    g = as_function(f)
    T = check_mask(T, g.n)
    idx = np.arange(g.size, dtype=np.int64)
    coords = coords_from_mask(T)
    exact = g.exact
    num = _promote(g.num, len(coords)) if exact else g.num
    count = 0
    for i in coords:
        bit = 1 << (i - 1)
        lo = num[idx & ~bit]
        hi = num[idx | bit]
        num = lo - hi
        if not exact:
            num = num / 2.0
        count += 1
    if exact:
        return RealFunction(g.n, _promote(num, 0), g.exp + count)
    return RealFunction(g.n, num, None)


def _deposit(values, coords, n):
    """Scatter the bits of ``values`` into the (zero-based) positions ``coords``."""
    out = np.zeros_like(values)
    for t, c in enumerate(coords):
        out |= ((values >> t) & 1) << c
    return out


def _assignment_mask(J, z, n):
    if isinstance(z, (list, tuple, np.ndarray)):
        coords = coords_from_mask(J)
        if len(z) != len(coords):
            raise InputError(f"assignment has {len(z)} bits but J has {len(coords)} coordinates")
        zmask = 0
        for c, b in zip(coords, z):
            if b not in (0, 1):
                raise InputError("assignment bits must be 0 or 1")
            zmask |= int(b) << (c - 1)
        return zmask
    z = int(z)
    if z & ~J:
        raise InputError("assignment sets coordinates outside J")
    return z


def restrict(f, J, z):
    """f_{J -> z} on the remaining coordinates, kept in increasing order.

    ``z`` is either an n-bit mask whose bits lie inside J or a sequence of
    |J| bits listed by increasing coordinate.
    """
    n = f.n
    J = check_mask(J, n)
    zmask = _assignment_mask(J, z, n)
    free = [c - 1 for c in range(1, n + 1) if not (J >> (c - 1)) & 1]
    y = np.arange(1 << len(free), dtype=np.int64)
    x = _deposit(y, free, n) | zmask
    if isinstance(f, BooleanFunction):
        return BooleanFunction(len(free), f.table[x])
    g = as_function(f)
    return RealFunction(len(free), g.num[x], g.exp)


def inner(f, g):
    """<f, g> = E_x f(x) g(x); exact Fraction when both are exact."""
    a, b = as_function(f), as_function(g)
    if a._same_mode(b):
        total = int(np.dot(_as_object(a.num), _as_object(b.num)))
        return Fraction(total, 1 << (a.exp + b.exp + a.n))
    return float(np.dot(a.floats(), b.floats()) / a.size)


def norm_sq(f):
    return inner(f, f)


def norm(f, p=2):
    """(E|f|^p)^{1/p} as a float."""
    v = np.abs(as_function(f).floats())
    if p == np.inf:
        return float(v.max())
    return float(np.mean(v ** p) ** (1.0 / p))


def mean(f):
    g = as_function(f)
    if g.exact:
        return Fraction(int(np.sum(_as_object(g.num))), 1 << (g.exp + g.n))
    return float(g.num.mean())


def variance(f):
    return norm_sq(f) - mean(f) ** 2


@dataclass(frozen=True)
class InfluenceProfile:
    """Per-coordinate influences I_i = ||d_i f||^2 and derived totals.

    ``flip`` holds 4*I_i, which for Boolean f is Pr[f(x) != f(x ^ e_i)].
    ``normalized`` is I[f]/var(f), or None when var(f) = 0.
    """

    n: int
    per_coordinate: tuple
    total: object
    flip: tuple
    total_flip: object
    variance: object
    normalized: object

    @property
    def defined(self):
        return self.normalized is not None


def influence_profile(f):
    g = as_function(f)
    per = tuple(norm_sq(derivative(g, 1 << i)) for i in range(g.n))
    total = sum(per, Fraction(0) if g.exact else 0.0)
    var = variance(g)
    normalized = None
    if var != 0:
        normalized = total / var
    return InfluenceProfile(
        n=g.n,
        per_coordinate=per,
        total=total,
        flip=tuple(4 * v for v in per),
        total_flip=4 * total,
        variance=var,
        normalized=normalized,
    )


def total_influence(f):
    return influence_profile(f).total


def generalized_influence(f, T, d=None):
    """I_T = sum over S containing T of f^(S)^2, on f^{<=d} when d is given."""
    g = as_function(f)
    T = check_mask(T, g.n)
    spec = spectrum(g)
    masks = np.arange(g.size, dtype=np.int64)
    keep = (masks & T) == T
    if d is not None:
        if not 0 <= d <= g.n:
            raise InputError(f"degree {d} outside [0, {g.n}]")
        keep &= popcounts(g.n) <= d
    return spec.mass(keep)


def cross_influence(f, g):
    """I[f, g] = sum_i sqrt(I_i[f] I_i[g])."""
    a, b = as_function(f), as_function(g)
    if a.n != b.n:
        raise InputError("cross influence needs functions on the same cube")
    pa = influence_profile(a).per_coordinate
    pb = influence_profile(b).per_coordinate
    return float(sum(math.sqrt(float(x) * float(y)) for x, y in zip(pa, pb)))


def cross_influence_terms(f, g):
    a, b = as_function(f), as_function(g)
    pa = influence_profile(a).per_coordinate
    pb = influence_profile(b).per_coordinate
    return [math.sqrt(float(x) * float(y)) for x, y in zip(pa, pb)]


@dataclass(frozen=True)
class EntropyReport:
    """Fourier entropies (natural log) of a spectrum, optionally capped at degree D.

    The ``*_nonempty`` fields repeat the computation with S = {} removed.
    ``empty`` is set when every counted coefficient is zero.
    """

    convention: str
    degree_cap: object
    variance: float
    total_mass: float
    entropy: float
    min_entropy: float
    entropy_nonempty: float
    min_entropy_nonempty: float
    empty: bool


def _entropy_terms(sq):
    nz = sq[sq > 0]
    if nz.size == 0:
        return 0.0, math.inf
    h = float(np.sum(nz * np.log(1.0 / nz)))
    return h, float(np.log(1.0 / nz.max()))


def entropy_report(f, D=None, convention="zero-one"):
    """H[f^] = sum f^(S)^2 log(1/f^(S)^2) and H_inf[f^] = min log(1/f^(S)^2).

    With ``convention="plus-minus-one"`` a Boolean f is replaced by 1 - 2f.
    Zero coefficients contribute nothing; no renormalization is applied.
    """
    if convention not in ("zero-one", "plus-minus-one"):
        raise InputError(f"unknown convention {convention!r}")
    if convention == "plus-minus-one" and isinstance(f, BooleanFunction):
        g = f.pm()
    else:
        g = as_function(f)
    spec = spectrum(g)
    sq = spec.squares()
    if D is not None:
        if D < 0:
            raise InputError("degree cap must be non-negative")
        sq = np.where(popcounts(g.n) <= D, sq, 0.0)
    h, hmin = _entropy_terms(sq)
    h1, hmin1 = _entropy_terms(sq[1:])
    return EntropyReport(
        convention=convention,
        degree_cap=D,
        variance=float(variance(g)),
        total_mass=float(sq.sum()),
        entropy=h,
        min_entropy=hmin,
        entropy_nonempty=h1,
        min_entropy_nonempty=hmin1,
        empty=bool(not np.any(sq > 0)),
    )


def restricted_coefficient(g, live, S, zmask):
    """Coefficient of S (inside ``live``) in g restricted to z on the complement of ``live``."""
    n = g.n
    J = ((1 << n) - 1) & ~live
    r = restrict(g, J, zmask)
    live_coords = [c for c in range(1, n + 1) if (live >> (c - 1)) & 1]
    local = 0
    for t, c in enumerate(live_coords):
        if (S >> (c - 1)) & 1:
            local |= 1 << t
    return spectrum(r).coeff(local)
