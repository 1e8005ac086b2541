"""Canonical and randomized Boolean function families.

Family specs are written ``family:key=value,...``, for example
``tribes:w=2,s=3`` or ``random-dnf:n=12,terms=8,width=4,seed=3``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
import os
import re

import numpy as np

from ._validation import check_n
from .core import BooleanFunction, point_bits
from .exceptions import InputError, ParseError, ResourceError

FAMILIES = (
    "constant",
    "dictator",
    "parity",
    "majority",
    "tribes",
    "address",
    "random-dnf",
    "graph-property",
    "inner-product",
    "from-file",
)

GRAPH_PROPERTIES = ("triangle", "connected", "nonempty", "no-isolated-vertex")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")

    def __hash__(self):
        return hash(self.label())

    def label(self):
        parts = [f"{k}={v}" for k, v in sorted(self.params.items())]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return self.family + (":" + ",".join(parts) if parts else "")

    __str__ = label


def parse_family(text):
    """Parse ``family:key=value,...`` into a FamilySpec."""
    text = text.strip()
    family, _, rest = text.partition(":")
    params = {}
    seed = None
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise InputError(f"bad parameter {item!r} in family spec {text!r}")
            key = key.strip()
            value = value.strip()
            if key == "seed":
                seed = int(value)
            elif key in ("path", "property"):
                params[key] = value
            else:
                try:
                    params[key] = int(value)
                except ValueError:
                    params[key] = value
    return FamilySpec(family, params, seed)


def _need(params, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise InputError(f"missing family parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def dictator(n, i=1):
    if not 1 <= i <= n:
        raise InputError(f"dictator coordinate {i} outside [1, {n}]")
    return BooleanFunction.from_callable(n, lambda b: b[:, i - 1])


def parity(n, mask=None):
    mask = (1 << n) - 1 if mask is None else mask
    idx = np.arange(1 << check_n(n), dtype=np.uint64)
    return BooleanFunction(n, (np.bitwise_count(idx & np.uint64(mask)) & 1).astype(np.uint8))


def majority(n):
    if n % 2 == 0:
        raise InputError("majority needs an odd number of inputs")
    return BooleanFunction.from_callable(n, lambda b: b.sum(axis=1) > n // 2)


def tribes(w, s):
    """OR of s ANDs, each over its own block of w consecutive coordinates."""
    n = check_n(w * s)

    def fn(b):
        blocks = b.reshape(-1, s, w)
        return blocks.all(axis=2).any(axis=1)

    return BooleanFunction.from_callable(n, fn)


def address(k):
    """x_1..x_k select which of the 2^k data bits x_{k+1}.. is returned."""
    n = check_n(k + (1 << k))

    def fn(b):
        addr = b[:, :k].astype(np.int64) @ (1 << np.arange(k, dtype=np.int64))
        return b[np.arange(b.shape[0]), k + addr]

    return BooleanFunction.from_callable(n, fn)


def inner_product(k):
    n = check_n(2 * k)
    return BooleanFunction.from_callable(n, lambda b: (b[:, :k] & b[:, k:]).sum(axis=1) & 1)


def random_dnf(n, terms, width, seed):
    """OR of ``terms`` random conjunctions of ``width`` literals on distinct variables.

    Uses numpy's PCG64 bit generator so a seed reproduces the same formula everywhere.
    """
    check_n(n)
    if width > n:
        raise InputError("DNF width exceeds n")
    rng = np.random.Generator(np.random.PCG64(seed))
    bits = point_bits(n)
    out = np.zeros(1 << n, dtype=bool)
    for _ in range(terms):
        variables = rng.choice(n, size=width, replace=False)
        signs = rng.integers(0, 2, size=width)
        out |= np.all(bits[:, variables] == signs, axis=1)
    return BooleanFunction(n, out.astype(np.uint8))


def edge_list(N):
    """Vertex pairs (u, v), u < v, in lexicographic order; edge t is coordinate t+1."""
    return list(combinations(range(N), 2))


def _adjacency_masks(N, bits):
    adj = np.zeros((bits.shape[0], N), dtype=np.int64)
    for t, (u, v) in enumerate(edge_list(N)):
        e = bits[:, t].astype(np.int64)
        adj[:, u] |= e << v
        adj[:, v] |= e << u
    return adj


def graph_property(N, prop):
    if prop not in GRAPH_PROPERTIES:
        raise InputError(f"unknown graph property {prop!r}; choose from {', '.join(GRAPH_PROPERTIES)}")
    n = check_n(N * (N - 1) // 2)
    edges = {e: t for t, e in enumerate(edge_list(N))}

    def fn(b):
        if prop == "nonempty":
            return b.any(axis=1)
        if prop == "triangle":
            out = np.zeros(b.shape[0], dtype=bool)
            for x, y, z in combinations(range(N), 3):
                out |= (b[:, edges[x, y]] & b[:, edges[x, z]] & b[:, edges[y, z]]).astype(bool)
            return out
        adj = _adjacency_masks(N, b)
        if prop == "no-isolated-vertex":
            return np.all(adj != 0, axis=1)
        reach = np.ones(b.shape[0], dtype=np.int64)
        for _ in range(N):
            grow = reach.copy()
            for v in range(N):
                grow |= np.where((reach >> v) & 1, adj[:, v], 0)
            reach = grow
        return reach == (1 << N) - 1

    return BooleanFunction.from_callable(n, fn)


def constant(n, value=0):
    if value not in (0, 1):
        raise InputError("constant value must be 0 or 1")
    return BooleanFunction(check_n(n), np.full(1 << n, value, dtype=np.uint8))


def make(spec):
    """Build the truth table for a FamilySpec (or a spec string)."""
    if isinstance(spec, str):
        spec = parse_family(spec)
    p = spec.params
    fam = spec.family
    if fam == "constant":
        return constant(*_need(p, "n"), p.get("value", 0))
    if fam == "dictator":
        return dictator(*_need(p, "n"), p.get("i", 1))
    if fam == "parity":
        return parity(*_need(p, "n"))
    if fam == "majority":
        return majority(*_need(p, "n"))
    if fam == "tribes":
        return tribes(*_need(p, "w", "s"))
    if fam == "address":
        return address(*_need(p, "k"))
    if fam == "inner-product":
        return inner_product(*_need(p, "k"))
    if fam == "random-dnf":
        n, terms, width = _need(p, "n", "terms", "width")
        return random_dnf(n, terms, width, 0 if spec.seed is None else spec.seed)
    if fam == "graph-property":
        return graph_property(*_need(p, "N", "property"))
    if fam == "from-file":
        return load(*_need(p, "path"))
    raise InputError(f"unhandled family {fam!r}")  # pragma: no cover


def closed_form(spec):
    """Known closed-form facts for a family: Pr[f=1] and, for majority, the flip influence."""
    if isinstance(spec, str):
        spec = parse_family(spec)
    p = spec.params
    fam = spec.family
    out = {}
    if fam == "tribes":
        w, s = p["w"], p["s"]
        out["mean"] = 1 - (1 - Fraction(1, 2 ** w)) ** s
    elif fam == "majority":
        n = p["n"]
        out["mean"] = Fraction(1, 2)
        out["flip_influence"] = Fraction(comb(n - 1, (n - 1) // 2), 2 ** (n - 1))
    elif fam in ("parity", "dictator", "address"):
        out["mean"] = Fraction(1, 2)
    elif fam == "inner-product":
        out["mean"] = Fraction(1, 2) - Fraction(1, 2 ** (p["k"] + 1))
    elif fam == "constant":
        out["mean"] = Fraction(p.get("value", 0))
    if "mean" in out:
        out["variance"] = out["mean"] * (1 - out["mean"])
    return out


_STANDARD = [
    "dictator:n=1",
    "dictator:n=4,i=2",
    "parity:n=2",
    "parity:n=5",
    "parity:n=8",
    "majority:n=3",
    "majority:n=5",
    "majority:n=7",
    "majority:n=9",
    "majority:n=11",
    "majority:n=13",
    "majority:n=15",
    "tribes:w=2,s=2",
    "tribes:w=2,s=3",
    "tribes:w=3,s=2",
    "tribes:w=2,s=4",
    "tribes:w=3,s=3",
    "tribes:w=2,s=5",
    "tribes:w=3,s=4",
    "tribes:w=4,s=3",
    "tribes:w=3,s=5",
    "tribes:w=4,s=4",
    "address:k=1",
    "address:k=2",
    "address:k=3",
    "inner-product:k=2",
    "inner-product:k=3",
    "inner-product:k=4",
    "inner-product:k=5",
    "inner-product:k=6",
    "inner-product:k=7",
    "random-dnf:n=8,terms=4,width=3,seed=1",
    "random-dnf:n=10,terms=6,width=3,seed=2",
    "random-dnf:n=12,terms=8,width=4,seed=3",
    "random-dnf:n=14,terms=10,width=4,seed=4",
    "random-dnf:n=16,terms=12,width=5,seed=5",
    "graph-property:N=4,property=triangle",
    "graph-property:N=4,property=connected",
    "graph-property:N=5,property=triangle",
    "graph-property:N=5,property=connected",
    "graph-property:N=5,property=no-isolated-vertex",
    "graph-property:N=6,property=triangle",
]


def family_n(spec):
    """Number of coordinates a spec produces, without building it."""
    if isinstance(spec, str):
        spec = parse_family(spec)
    p = spec.params
    fam = spec.family
    if fam in ("constant", "dictator", "parity", "majority", "random-dnf"):
        return p["n"]
    if fam == "tribes":
        return p["w"] * p["s"]
    if fam == "address":
        return p["k"] + (1 << p["k"])
    if fam == "inner-product":
        return 2 * p["k"]
    if fam == "graph-property":
        return p["N"] * (p["N"] - 1) // 2
    return None


def standard_zoo(max_n=14):
    """The fixed list of zoo specs with at most ``max_n`` coordinates."""
    specs = [parse_family(s) for s in _STANDARD]
    return [s for s in specs if family_n(s) <= max_n]


# -- truth-table files -------------------------------------------------------

_HEADER = re.compile(rb"n=(\d+)")


def dumps(f):
    bits = "".join("1" if b else "0" for b in f.table)
    return f"n={f.n}\n{bits}\n"


def save(f, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(f))


def loads(data):
    """Parse the two-line truth-table format; errors carry the byte offset."""
    if isinstance(data, str):
        data = data.encode("ascii", errors="replace")
    nl = data.find(b"\n")
    if nl < 0:
        raise ParseError("missing newline after header", len(data))
    header = data[:nl].rstrip(b"\r")
    m = _HEADER.fullmatch(header)
    if not m:
        raise ParseError(f"malformed header {header[:40]!r}, expected n=<k>", 0)
    n = int(m.group(1))
    try:
        check_n(n)
    except ResourceError as exc:
        raise ParseError(str(exc), 2) from None
    start = nl + 1
    end = data.find(b"\n", start)
    body = data[start:] if end < 0 else data[start:end]
    body = body.rstrip(b"\r")
    expected = 1 << n
    arr = np.frombuffer(body, dtype=np.uint8)
    bad = np.flatnonzero((arr != ord("0")) & (arr != ord("1")))
    if bad.size:
        raise ParseError(f"invalid character {chr(arr[bad[0]])!r} in table", start + int(bad[0]))
    if arr.size != expected:
        raise ParseError(f"table has {arr.size} entries, expected 2^{n} = {expected}",
                         start + min(arr.size, expected))
    if end >= 0 and data[end + 1:].strip():
        raise ParseError("trailing data after table", end + 1)
    return BooleanFunction(n, arr - ord("0"))


def load(path):
    with open(os.fspath(path), "rb") as fh:
        return loads(fh.read())
