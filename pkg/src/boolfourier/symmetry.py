"""Coordinate permutation groups given by generators: orbits of subsets,
the a_T orbit-growth parameter, and the symmetric-function influence bound."""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import math

import numpy as np

from ._validation import check_mask, coords_from_mask
from .core import BooleanFunction, influence_profile, spectrum
from .exceptions import InputError, ParseError, ResourceError
from .headline import min_entropy_witness
from .reports import make_report
from .zoo import edge_list

MAX_ENUMERATION = 5_000_000


@dataclass(frozen=True)
class GroupSpec:
    """Generators as 0-based image tuples: coordinate i goes to perm[i]."""

    n: int
    generators: tuple

    def __post_init__(self):
        gens = []
        for k, g in enumerate(self.generators):
            g = tuple(int(v) for v in g)
            if len(g) != self.n or sorted(g) != list(range(self.n)):
                raise InputError(f"generator {k + 1} is not a permutation of [{self.n}]")
            gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def from_images(cls, images):
        """Build from 1-based image lists (the generators file layout)."""
        images = [list(g) for g in images]
        if not images:
            raise InputError("at least one generator is required")
        n = len(images[0])
        return cls(n, tuple(tuple(v - 1 for v in g) for g in images))

    def images(self):
        return [[v + 1 for v in g] for g in self.generators]

    def act(self, mask, g):
        out = 0
        perm = self.generators[g]
        for i in range(self.n):
            if mask >> i & 1:
                out |= 1 << perm[i]
        return out

    def point_map(self, g):
        """Image of every point of {0,1}^n under generator g, as an index array."""
        pts = np.arange(1 << self.n, dtype=np.int64)
        out = np.zeros_like(pts)
        for i, t in enumerate(self.generators[g]):
            out |= ((pts >> i) & 1) << t
        return out


def parse_generators(text):
    gens = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            try:
                gens.append([int(tok) for tok in body.split()])
            except ValueError:
                raise ParseError("non-integer entry in generator line", offset) from None
            if len(gens[-1]) != len(gens[0]):
                raise ParseError("generator lines differ in length", offset)
        offset += len(line.encode())
    if not gens:
        raise ParseError("no generators found", 0)
    try:
        return GroupSpec.from_images(gens)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def load_generators(path):
    with open(path, encoding="utf-8") as fh:
        return parse_generators(fh.read())


def save_generators(group, path):
    with open(path, "w", encoding="utf-8") as fh:
        for g in group.images():
            fh.write(" ".join(str(v) for v in g) + "\n")


def _cycle(n):
    return tuple((i + 1) % n for i in range(n))


def _transposition(n):
    p = list(range(n))
    if n >= 2:
        p[0], p[1] = 1, 0
    return tuple(p)


def symmetric_group(n):
    """S_n on coordinates: a transposition and the n-cycle."""
    return GroupSpec(n, (_transposition(n), _cycle(n)))


def cyclic_group(n):
    return GroupSpec(n, (_cycle(n),))


def trivial_group(n):
    return GroupSpec(n, (tuple(range(n)),))


def edge_action(N):
    """S_N acting on the edges of K_N in the zoo's edge ordering."""
    edges = edge_list(N)
    index = {e: t for t, e in enumerate(edges)}
    gens = []
    for vperm in (_transposition(N), _cycle(N)):
        gens.append(tuple(index[tuple(sorted((vperm[u], vperm[v])))] for u, v in edges))
    return GroupSpec(len(edges), tuple(gens))


def orbit(S, G, elements=False):
    """Closure of S under the generators; the size, or the sorted members."""
    S = check_mask(S, G.n)
    seen = {S}
    frontier = [S]
    while frontier:
        nxt = []
        for m in frontier:
            for g in range(len(G.generators)):
                t = G.act(m, g)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen) if elements else len(seen)


def min_orbit_sizes(G, s_max):
    """min over |S| = s of |orbit(S)| for s = 0..s_max, by exhaustive orbit partition."""
    if s_max < 0 or s_max > G.n:
        raise InputError(f"s_max must lie in [0, {G.n}]")
    total = sum(math.comb(G.n, s) for s in range(s_max + 1))
    if total > MAX_ENUMERATION:
        raise ResourceError(f"{total} subsets exceed the enumeration cap {MAX_ENUMERATION}")
    out = []
    for s in range(s_max + 1):
        seen = set()
        best = None
        for combo in combinations(range(G.n), s):
            m = sum(1 << i for i in combo)
            if m in seen:
                continue
            orb = orbit(m, G, elements=True)
            seen.update(orb)
            best = len(orb) if best is None else min(best, len(orb))
        out.append(best)
    return out


@dataclass
class OrbitReport:
    n: int
    s_max: int
    min_orbit: list
    T: float
    a_T: int
    margins: list = field(default_factory=list)

    def to_dict(self):
        return dict(self.__dict__)


def _holds(min_orbit, K, T):
    if K < 1:
        return True
    return all(math.log(min_orbit[s]) >= T * s * math.log(K) - 1e-12 for s in range(1, K + 1))


def a_parameter(G, T, s_max=None):
    """Largest K <= s_max with |orbit(S)| >= K^(T|S|) for every S of size at most K.

    ``margins`` lists ln(min orbit at s) - T s ln K at the chosen K.
    """
    if T < 0:
        raise InputError("T must be non-negative")
    s_max = min(G.n, 6) if s_max is None else s_max
    mins = min_orbit_sizes(G, s_max)
    K = max((k for k in range(0, s_max + 1) if _holds(mins, k, T)), default=0)
    margins = []
    if K >= 1:
        margins = [math.log(mins[s]) - T * s * math.log(K) for s in range(1, K + 1)]
    return OrbitReport(G.n, s_max, mins, T, K, margins)


def check_symmetric(f, G):
    """Raise InputError naming a generator and point with f(x) != f(pi(x))."""
    if f.n != G.n:
        raise InputError(f"function has n={f.n}, group acts on n={G.n}")
    for g in range(len(G.generators)):
        moved = f.table[G.point_map(g)]
        bad = np.flatnonzero(moved != f.table)
        if bad.size:
            x = int(bad[0])
            raise InputError(
                f"not symmetric under generator {g + 1} {G.images()[g]}: "
                f"f(x) != f(pi(x)) at x={x} (coords {coords_from_mask(x)})")


def bk_check(f, G, c=Fraction(1, 10), T=None, s_max=None):
    """I[f] >= c a_T(G) var(f) for G-symmetric f, plus the orbit bound
    |orbit(S)| f^(S)^2 <= var(f) at the min-entropy witness S.

    Returns [influence report, orbit-coefficient report].
    """
    if not isinstance(f, BooleanFunction):
        raise InputError("expected a BooleanFunction")
    check_symmetric(f, G)
    if T is None:
        from .calibration import BK_T
        T = BK_T
    rep = a_parameter(G, T, s_max)
    prof = influence_profile(f)
    var = prof.variance
    c = Fraction(c) if isinstance(c, (int, Fraction)) else c
    lhs = c * rep.a_T * var
    main = make_report(
        "symmetric-influence", lhs, {"total_influence": prof.total},
        params={"n": f.n, "c": c, "T": T, "s_max": rep.s_max},
        witness=rep.to_dict(), functions=(f,))
    if var == 0:
        witness_S = None
    else:
        witness_S = min_entropy_witness(f)[0]
    if witness_S is None:
        inter = make_report("orbit-coefficient", Fraction(0), {"variance": var},
                            params={"n": f.n}, flags=["witness-absent"], functions=(f,))
    else:
        size = orbit(witness_S, G)
        coef = spectrum(f).coeff(witness_S)
        inter = make_report(
            "orbit-coefficient", size * coef * coef, {"variance": var},
            params={"n": f.n},
            witness={"mask": witness_S, "coords": coords_from_mask(witness_S),
                     "orbit_size": size, "coefficient": coef},
            functions=(f,))
    return [main, inter]
