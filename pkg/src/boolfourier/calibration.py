"""Constants frozen by scripts/calibrate.py (brute-force run, do not edit)."""
from fractions import Fraction as _F

# C* from direct coefficient sums, zoo functions with var >= 0.1 and n <= 16
WITNESS_C_STAR = {
    'dictator:n=1': 0.0,
    'dictator:i=2,n=4': 0.0,
    'parity:n=2': 0.0,
    'parity:n=5': 0.0,
    'parity:n=8': 0.0,
    'majority:n=3': 0.75647079736603,
    'majority:n=5': 0.9287692526406797,
    'majority:n=7': 1.003376272171579,
    'majority:n=9': 1.0444147737809562,
    'majority:n=11': 1.0700726353923975,
    'majority:n=13': 1.0874523398720577,
    'majority:n=15': 1.0998885225645816,
    'tribes:s=2,w=2': 1.0509690586381883,
    'tribes:s=3,w=2': 1.2508957920821993,
    'tribes:s=2,w=3': 1.302232966250605,
    'tribes:s=4,w=2': 1.3713738748530009,
    'tribes:s=3,w=3': 1.4727212641321954,
    'tribes:s=5,w=2': 1.452164328973362,
    'tribes:s=4,w=3': 1.57900926455196,
    'tribes:s=3,w=4': 1.6332822441650074,
    'tribes:s=5,w=3': 1.6509196117685747,
    'tribes:s=4,w=4': 1.7369889926390893,
    'address:k=1': 0.75647079736603,
    'address:k=2': 1.261859507142915,
    'address:k=3': 1.6598842669953364,
    'inner-product:k=2': 1.1855600930625216,
    'inner-product:k=3': 1.4816713133935862,
    'inner-product:k=4': 1.718146394892252,
    'inner-product:k=5': 1.9331128839536476,
    'inner-product:k=6': 2.1369505432943887,
    'inner-product:k=7': 2.333258730491913,
    'random-dnf:n=8,terms=4,width=3,seed=1': 0.46281032337367284,
    'random-dnf:n=10,terms=6,width=3,seed=2': 0.42204234252847994,
    'random-dnf:n=12,terms=8,width=4,seed=3': 1.1556239674358388,
    'random-dnf:n=14,terms=10,width=4,seed=4': 1.2686237199091488,
    'random-dnf:n=16,terms=12,width=5,seed=5': 1.1889967657192428,
    'graph-property:N=4,property=triangle': 1.1788100431406143,
    'graph-property:N=4,property=connected': 1.060876139975212,
    'graph-property:N=5,property=triangle': 1.3282440684155974,
    'graph-property:N=5,property=connected': 1.2617488331635187,
    'graph-property:N=5,property=no-isolated-vertex': 1.3953325610816245,
    'graph-property:N=6,property=triangle': 1.4295937522024307,
}
WITNESS_THRESHOLD = 2.334

# entropy <= K (sum |S| ln(|S|+1) f^(S)^2 + I[f]) over the same functions
ENTROPY_K_THRESHOLD = 1.672

# mass of |f^(S)| <= (1+I~)^(-C I~) at most CONCENTRATION_ETA * var(f)
CONCENTRATION_ETA = 0.1
CONCENTRATION_C = 2.04

# symmetric-influence bound: I[f] >= BK_C * a_T(G) * var(f) with T = 2 * threshold
BK_C = _F(1, 10)
BK_T = 4.668

# agnostic learner: theta = (1 + K)^(-LEARNER_C * K)
LEARNER_C = 1.1
