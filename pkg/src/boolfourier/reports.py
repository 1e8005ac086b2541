"""Inequality report rows and their JSON-safe encoding."""
from dataclasses import dataclass, field
from fractions import Fraction
import hashlib
import math

import mpmath
import numpy as np

# Working precision for constant formulas such as d^{(1+eps)d} or eta^{-300 e'}.
mp = mpmath.MPContext()
mp.dps = 40

FLOAT_RTOL = 1e-9


def to_mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def encode_number(x):
    """Plain float where it round-trips faithfully, a decimal string otherwise."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        if x.denominator & (x.denominator - 1) == 0 and abs(x.numerator) < (1 << 53):
            return float(x)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isfinite(x):
            return x
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, np.integer):
        return int(x)
    v = mp.mpf(x)
    if v == 0:
        return 0.0
    if mp.isinf(v):
        return "inf" if v > 0 else "-inf"
    mag = abs(v)
    if mp.mpf("1e-300") < mag < mp.mpf("1e300"):
        return float(v)
    return mp.nstr(v, 17)


def encode(obj):
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return encode_number(obj)


def digest(*functions):
    """Short content hash of the functions a check was run on."""
    h = hashlib.sha256()
    for f in functions:
        if f is None:
            h.update(b"none")
            continue
        h.update(str(f.n).encode())
        arr = getattr(f, "table", None)
        if arr is None:
            arr = f.num
            h.update(str(f.exp).encode())
        if arr.dtype == object:
            h.update(",".join(str(int(v)) for v in arr).encode())
        else:
            h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()[:16]


@dataclass
class InequalityReport:
    """One checked inequality: LHS against a sum of named RHS terms."""

    inequality: str
    params: dict
    lhs: object
    rhs: object
    terms: dict
    slack: object
    passed: bool
    witness: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    digest: str = ""

    def to_dict(self):
        return {
            "lemma": self.inequality,
            "params": encode(self.params),
            "lhs": encode_number(self.lhs),
            "rhs": encode_number(self.rhs),
            "terms": encode(self.terms),
            "slack": encode_number(self.slack),
            "pass": bool(self.passed),
            "witness": encode(self.witness),
            "flags": list(self.flags),
            "digest": self.digest,
        }


def compare(lhs, rhs, rtol=FLOAT_RTOL):
    """Return (slack, passed) for the claim lhs <= rhs.

    Two Fractions are compared exactly; anything else in high precision with a
    relative tolerance on the larger magnitude.
    """
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        slack = rhs - lhs
        return slack, slack >= 0
    a, b = to_mpf(lhs), to_mpf(rhs)
    slack = b - a
    scale = max(abs(a), abs(b))
    return slack, bool(slack >= -rtol * scale)


def make_report(inequality, lhs, terms, params=None, witness=None, flags=None,
                functions=(), rtol=FLOAT_RTOL, reverse=False):
    """Assemble a report for ``lhs <= sum(terms)`` (or ``>=`` when ``reverse``)."""
    values = list(terms.values())
    if values and all(isinstance(v, Fraction) for v in values):
        rhs = sum(values, Fraction(0))
    else:
        rhs = mp.fsum([to_mpf(v) for v in values]) if values else mp.mpf(0)
    if reverse:
        slack, passed = compare(rhs, lhs, rtol)
    else:
        slack, passed = compare(lhs, rhs, rtol)
    return InequalityReport(
        inequality=inequality,
        params=dict(params or {}),
        lhs=lhs,
        rhs=rhs,
        terms=dict(terms),
        slack=slack,
        passed=passed,
        witness=dict(witness or {}),
        flags=list(flags or []),
        digest=digest(*functions) if functions else "",
    )


def equality_report(inequality, lhs, rhs, params=None, witness=None, functions=(),
                    rtol=FLOAT_RTOL):
    """Report for an identity lhs == rhs; exact for Fractions, else relative tolerance."""
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        slack = rhs - lhs
        passed = slack == 0
    else:
        a, b = to_mpf(lhs), to_mpf(rhs)
        slack = b - a
        passed = bool(abs(slack) <= rtol * max(abs(a), abs(b), 1e-300))
    return InequalityReport(
        inequality=inequality,
        params=dict(params or {}),
        lhs=lhs,
        rhs=rhs,
        terms={"value": rhs},
        slack=slack,
        passed=passed,
        witness=dict(witness or {}),
        flags=["identity"],
        digest=digest(*functions) if functions else "",
    )
