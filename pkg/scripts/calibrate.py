"""Brute-force calibration run; writes src/boolfourier/calibration.py.

Coefficients come from direct summation E[f chi_S] over the cube and
influences from counting edge flips, so nothing here goes through the
package's transform code. Only the zoo constructors are shared.

    python3 scripts/calibrate.py
"""
import math
from pathlib import Path
import sys

import numpy as np

from boolfourier import zoo

OUT = Path(__file__).resolve().parents[1] / "src" / "boolfourier" / "calibration.py"
MIN_VARIANCE = 0.1
MAX_N = 16
NOISE = 0.05
ETA = 0.1


def direct_coefficients(table, n, masks, block=256):
    """f^(S) = 2^-n sum_x f(x) (-1)^{|S & x|} by explicit summation."""
    x = np.arange(1 << n, dtype=np.uint64)
    f = table.astype(np.float64)
    out = np.empty(len(masks))
    for start in range(0, len(masks), block):
        S = np.asarray(masks[start:start + block], dtype=np.uint64)
        sign = 1.0 - 2.0 * (np.bitwise_count(S[:, None] & x[None, :]) & 1)
        out[start:start + block] = sign @ f / (1 << n)
    return out


def flip_influences(table, n):
    """I_i = Pr[f(x) != f(x ^ e_i)] / 4."""
    x = np.arange(1 << n)
    return [float(np.mean(table != table[x ^ (1 << i)])) / 4 for i in range(n)]


def brute_force_constants(table, n):
    """(C*, fitted K, concentration C infimum) from one direct coefficient scan."""
    p = float(table.mean())
    var = p * (1 - p)
    total = sum(flip_influences(table, n))
    itilde = total / var
    masks = list(range(1 << n))
    coeffs = direct_coefficients(table, n, masks)
    sizes = np.array([bin(S).count("1") for S in masks])
    best = None
    for S in range(1, 1 << n):
        c = coeffs[S]
        if sizes[S] > 10 * itilde or abs(c) <= 1e-12:
            continue
        key = (-abs(round(c, 12)), sizes[S], S)
        if best is None or key < best[0]:
            best = (key, S, c)
    _, S, c = best
    c_star = -math.log(abs(c) / math.sqrt(var)) / (sizes[S] * math.log1p(itilde)) + 0.0
    sq = coeffs ** 2
    nz = sq > 1e-24
    entropy = float(-np.sum(sq[nz] * np.log(sq[nz])))
    structural = float(np.sum(sizes * np.log(sizes + 1.0) * sq)) + total
    K = entropy / structural
    # smallest C with mass of |f^| <= (1+I~)^(-C I~) at most ETA var (infimum)
    mags = np.abs(coeffs[nz])
    cum = 0.0
    conc = 0.0
    for a in np.unique(np.round(mags, 12)):
        cum += float(np.sum(sq[nz][np.abs(mags - a) < 1e-12]))
        if cum > ETA * var:
            conc = max(0.0, -math.log(a) / (itilde * math.log1p(itilde)))
            break
    return c_star, K, conc


def learner_constant(step=0.05):
    """Smallest C on a grid such that, for each tribes target with K the ceiling
    of its +-1 total influence, keeping the +-1 coefficients that stay above
    theta = (1+K)^(-CK) after (1 - 2 rho) damping rounds to error <= 0.05."""
    need = 0.0
    for spec in zoo.standard_zoo(MAX_N):
        if spec.family != "tribes":
            continue
        f = zoo.make(spec)
        n = f.n
        table = f.table
        K = math.ceil(4 * sum(flip_influences(table, n)))
        pm = -2 * direct_coefficients(table, n, list(range(1 << n)))
        pm[0] += 1
        mags = np.sort(np.unique(np.round(np.abs(pm[np.abs(pm) > 1e-12]), 12)))[::-1]
        x = np.arange(1 << n, dtype=np.uint64)
        # smallest kept level that reaches the error target
        for a in mags:
            keep = np.flatnonzero(np.abs(pm) >= a - 1e-12)
            val = np.zeros(1 << n)
            for S in keep:
                val += pm[S] * (1.0 - 2.0 * (np.bitwise_count(x & np.uint64(S)) & 1))
            if np.mean((val <= 0) != table) <= 0.05:
                theta = a * (1 - 2 * NOISE)
                need = max(need, -math.log(theta) / (K * math.log1p(K)))
                break
    return math.ceil(need / step - 1e-9) * step


def main():
    rows = {}
    ks = []
    concs = []
    for spec in zoo.standard_zoo(MAX_N):
        f = zoo.make(spec)
        p = float(f.table.mean())
        if p * (1 - p) < MIN_VARIANCE:
            continue
        c, K, conc = brute_force_constants(f.table, f.n)
        rows[spec.label()] = c
        ks.append(K)
        concs.append(conc)
        print(f"{spec.label():45s} C* = {c:.10f}  K = {K:.6f}  conc = {conc:.6f}", file=sys.stderr)
    threshold = math.ceil(max(rows.values()) * 1000) / 1000
    learner_c = learner_constant()
    lines = [
        '"""Constants frozen by scripts/calibrate.py (brute-force run, do not edit)."""',
        "from fractions import Fraction as _F",
        "",
        "# C* from direct coefficient sums, zoo functions with var >= 0.1 and n <= 16",
        "WITNESS_C_STAR = {",
    ]
    lines += [f"    {k!r}: {float(v)!r}," for k, v in rows.items()]
    lines += [
        "}",
        f"WITNESS_THRESHOLD = {threshold!r}",
        "",
        "# entropy <= K (sum |S| ln(|S|+1) f^(S)^2 + I[f]) over the same functions",
        f"ENTROPY_K_THRESHOLD = {math.ceil(max(ks) * 1000) / 1000!r}",
        "",
        "# mass of |f^(S)| <= (1+I~)^(-C I~) at most CONCENTRATION_ETA * var(f)",
        f"CONCENTRATION_ETA = {ETA!r}",
        f"CONCENTRATION_C = {(math.ceil(max(concs) * 1000) + 1) / 1000!r}",
        "",
        "# symmetric-influence bound: I[f] >= BK_C * a_T(G) * var(f) with T = 2 * threshold",
        "BK_C = _F(1, 10)",
        f"BK_T = {2 * threshold!r}",
        "",
        "# agnostic learner: theta = (1 + K)^(-LEARNER_C * K)",
        f"LEARNER_C = {learner_c!r}",
        "",
    ]
    OUT.write_text("\n".join(lines))
    print(f"threshold {threshold}  learner C {learner_c}  -> {OUT}", file=sys.stderr)


if __name__ == "__main__":
    main()
