"""Independent brute-force evaluation of the lift instance on a small box.

Theta = {0, 1} uniform, paths from the origin to the far corner, L sites
each. E = {W_max < L}, E' = {W_max = L}, S(omega) = {(pi, sub-max sites of
pi) : pi maximal}, T lifts S to 1, epsilon = (1/2)^L. Prints the frozen
values used by test_mvmp.cpp. Usage: mvmp_lift.py [rows cols]
"""
import sys
from fractions import Fraction
from itertools import product

ROWS, COLS = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (2, 3)
LENGTH = ROWS + COLS - 1
SITES = [(i, j) for i in range(ROWS) for j in range(COLS)]
TARGET = (ROWS - 1, COLS - 1)


def paths(a, b):
    if a == b:
        return [[a]]
    out = []
    if a[0] < b[0]:
        out += [[a] + p for p in paths((a[0] + 1, a[1]), b)]
    if a[1] < b[1]:
        out += [[a] + p for p in paths((a[0], a[1] + 1), b)]
    return out


ALL = paths((0, 0), TARGET)


def maximal(env):
    ws = [sum(env[s] for s in p) for p in ALL]
    best = max(ws)
    return best, [tuple(p) for p, w in zip(ALL, ws) if w == best]


def main():
    half = Fraction(1, 2)
    prob = half ** len(SITES)
    eps = half ** LENGTH
    pe = pe_prime = Fraction(0)
    min_s = None
    pre = {}
    envs = [dict(zip(SITES, bits)) for bits in product((0, 1), repeat=len(SITES))]
    for env in envs:
        best, maxi = maximal(env)
        if best == LENGTH:
            pe_prime += prob
        if best < LENGTH:
            pe += prob
            fs = {(p, tuple(s for s in p if env[s] == 0)) for p in maxi}
            min_s = len(fs) if min_s is None else min(min_s, len(fs))
            for p, S in fs:
                img = dict(env)
                for s in S:
                    img[s] = 1
                key = (tuple(img[s] for s in SITES), p, S)
                pre[key] = pre.get(key, 0) + prob
    t_sizes = {}
    hyp = True
    for (img, p, S), mass in pre.items():
        t_sizes[img] = t_sizes.get(img, 0) + 1
        hyp &= prob >= eps * mass
    max_t = max(t_sizes.values())
    bound = Fraction(max_t) / (eps * min_s) * pe_prime
    print(f"PE={pe} PEprime={pe_prime} minS={min_s} maxT={max_t} eps={eps} bound={bound} "
          f"checks={len(pre)} hypothesis={hyp} conclusion={pe <= bound}")


if __name__ == "__main__":
    main()
