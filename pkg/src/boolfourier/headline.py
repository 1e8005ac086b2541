"""Per-instance checks of the entropy-type statements: a heavy low-level
character, concentration above a coefficient threshold, and the fitted
entropy-influence constant with its bucket decomposition."""
from dataclasses import dataclass, field
import math

import numpy as np

from ._validation import coords_from_mask
from .core import BooleanFunction, entropy_report, influence_profile, popcounts, spectrum
from .exceptions import InputError
from .reports import make_report


def _profile(f):
    if not isinstance(f, BooleanFunction):
        raise InputError("expected a BooleanFunction")
    prof = influence_profile(f)
    if prof.variance == 0:
        raise InputError("constant function: normalized influence is undefined")
    return prof


@dataclass
class WitnessReport:
    """The character picked as witness and the constants fitted from it.

    c(S) = -ln(|f^(S)|/sqrt(var)) / (|S| ln(1 + I~)). ``c_star`` is c at the
    witness, the largest |f^(S)| among nonempty S with |S| <= 10 I~ (ties: smaller
    |S|, then smaller mask). ``c_min`` is the minimum of c(S) over the same range.
    """

    found: bool
    mask: int
    coords: list
    coefficient: float
    ratio: float
    c_star: float
    c_min: float
    c_min_mask: int
    normalized_influence: float
    size_limit: float
    variance: float
    singleton_c: float = None

    def to_dict(self):
        return dict(self.__dict__)


def _c_values(coeffs, sizes, var, itilde):
    with np.errstate(divide="ignore"):
        ratio = np.abs(coeffs) / math.sqrt(var)
        return -np.log(ratio) / (sizes * math.log1p(itilde)) + 0.0


def min_entropy_witness(f):
    """Returns (S, C*, WitnessReport); S is None when no nonzero coefficient is in range."""
    prof = _profile(f)
    var = float(prof.variance)
    itilde = float(prof.normalized)
    limit = 10 * itilde
    spec = spectrum(f)
    coeffs = spec.coeffs
    sizes = popcounts(f.n)
    cand = np.flatnonzero((sizes >= 1) & (sizes <= limit) & (spec.num != 0))
    if cand.size == 0:
        rep = WitnessReport(False, None, [], 0.0, 0.0, math.inf, math.inf, None, itilde, limit, var)
        return None, math.inf, rep
    mags = np.abs(coeffs[cand])
    # largest magnitude, then smallest size, then smallest mask
    order = np.lexsort((cand, sizes[cand], -mags))
    best = int(cand[order[0]])
    c = _c_values(coeffs[cand], sizes[cand], var, itilde)
    j = int(np.lexsort((cand, sizes[cand], c))[0])
    c_star = float(_c_values(coeffs[[best]], sizes[[best]], var, itilde)[0])
    singles = cand[sizes[cand] == 1]
    singleton_c = None
    if singles.size:
        singleton_c = float(np.min(_c_values(coeffs[singles], sizes[singles], var, itilde)))
    rep = WitnessReport(
        found=True,
        mask=best,
        coords=coords_from_mask(best),
        coefficient=float(coeffs[best]),
        ratio=float(abs(coeffs[best]) / math.sqrt(var)),
        c_star=c_star,
        c_min=float(c[j]),
        c_min_mask=int(cand[j]),
        normalized_influence=itilde,
        size_limit=limit,
        variance=var,
        singleton_c=singleton_c,
    )
    return best, c_star, rep


def witness_report(f, threshold):
    """Inequality row: fitted C* against a calibrated threshold."""
    S, c_star, rep = min_entropy_witness(f)
    flags = [] if rep.found else ["witness-absent"]
    return make_report("min-entropy-witness", c_star, {"threshold": float(threshold)},
                       params={"n": f.n}, witness=rep.to_dict(), flags=flags, functions=(f,))


@dataclass
class ConcentrationReport:
    threshold: float
    mass: object
    budget: float
    within: bool
    c_infimum: float
    normalized_influence: float

    def to_dict(self):
        return dict(self.__dict__)


def concentration_mass(f, C, eta):
    """Mass of coefficients with |f^(S)| <= (1 + I~)^(-C I~), against eta * var(f).

    ``c_infimum`` is the infimum over C >= 0 of the values at which the mass
    fits the budget (the bound is not attained: at C = c_infimum the
    coefficient that sets it is counted).
    """
    prof = _profile(f)
    var = float(prof.variance)
    itilde = float(prof.normalized)
    scale = itilde * math.log1p(itilde)
    tau = math.exp(-C * scale)
    spec = spectrum(f)
    mags = np.abs(spec.coeffs)
    sq = mags * mags
    mass = float(sq[mags <= tau].sum())
    budget = eta * var
    nz = np.sort(np.unique(mags[mags > 0]))
    c_inf = 0.0
    cum = 0.0
    for a in nz:
        cum += float(sq[mags == a].sum())
        if cum > budget:
            c_inf = max(0.0, -math.log(a) / scale)
            break
    return ConcentrationReport(tau, mass, budget, mass <= budget, c_inf, itilde)


@dataclass
class EntropyFit:
    entropy: float
    structural_sum: float
    weighted_sum: float
    total_influence: float
    K: float
    buckets: list = field(default_factory=list)
    C: float = 1.0

    def to_dict(self):
        return dict(self.__dict__)


def bucket_trace(f, D, C=1.0):
    """Nonempty S with |S| = d <= D grouped into buckets
    (d+1)^(-C(k+1)d) sqrt(var) < |f^(S)| <= (d+1)^(-Ckd) sqrt(var)."""
    var = float(f.variance())
    if var == 0:
        return []
    spec = spectrum(f)
    mags = np.abs(spec.coeffs)
    sizes = popcounts(f.n)
    out = {}
    for S in np.flatnonzero((sizes >= 1) & (sizes <= D) & (mags > 0)):
        d = int(sizes[S])
        r = math.log(math.sqrt(var) / mags[S]) / (C * d * math.log(d + 1))
        k = max(0, math.floor(r + 1e-12))
        key = (d, k)
        cnt, mass = out.get(key, (0, 0.0))
        out[key] = (cnt + 1, mass + float(mags[S]) ** 2)
    return [{"d": d, "k": k, "count": c, "mass": m} for (d, k), (c, m) in sorted(out.items())]


def entropy_bound_fit(f, D=None, C=1.0):
    """K = H[f^{<=D}] / (sum_{|S|<=D} |S| ln(|S|+1) f^(S)^2 + I[f])."""
    if not isinstance(f, BooleanFunction):
        raise InputError("expected a BooleanFunction")
    D = f.n if D is None else D
    if D < 0:
        raise InputError("D must be non-negative")
    H = entropy_report(f, D).entropy
    spec = spectrum(f)
    sizes = popcounts(f.n)
    keep = sizes <= D
    w = sizes * np.log(sizes + 1.0)
    weighted = float(np.sum((w * spec.squares())[keep]))
    total = float(influence_profile(f).total)
    rhs = weighted + total
    K = H / rhs if rhs > 0 else (0.0 if H == 0 else math.inf)
    return EntropyFit(H, rhs, weighted, total, K, bucket_trace(f, D, C), C)
