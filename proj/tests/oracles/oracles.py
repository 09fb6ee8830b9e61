#!/usr/bin/env python3
# Copyright (C) 2026 The critsplit Authors
# SPDX-License-Identifier: Apache-2.0
#
"""Independent oracle for the frozen constants in the C++ tests.

Exact rationals via fractions; transcendental values via mpmath at 30 digits.
Run it to regenerate the table printed in tests/oracles/frozen.txt.
"""
from fractions import Fraction as F
from functools import lru_cache

import mpmath as mp

mp.mp.dps = 30


def h(m):
    return sum((F(1, k) for k in range(1, m + 1)), F(0))


def q(m, i):
    return F(m) / (2 * h(m - 1) * i * (m - i))


def qstar(m, i):
    return 1 / (h(m - 1) * (m - i))


def occupation(n):
    a = {n: F(1)}
    for i in range(n - 1, 0, -1):
        a[i] = sum((a[m] * qstar(m, i) for m in range(i + 1, n + 1)), F(0))
    return a


def mean_heights(nmax):
    t = {1: F(0)}
    for n in range(2, nmax + 1):
        t[n] = (1 + sum((t[i] / (n - i) for i in range(1, n)), F(0))) / h(n - 1)
    return t


# Shapes as nested tuples with canonical child order (size, then recursive).
def size(s):
    return 1 if s == () else size(s[0]) + size(s[1])


def key(s):
    return (1,) if s == () else (size(s), key(s[0]), key(s[1]))


def join(a, b):
    return (a, b) if key(a) <= key(b) else (b, a)


def text(s):
    return "." if s == () else "(" + text(s[0]) + "," + text(s[1]) + ")"


@lru_cache(None)
def shape_dist(n):
    if n == 1:
        return {(): F(1)}
    out = {}
    for a in range(1, n // 2 + 1):
        da, db = shape_dist(a), shape_dist(n - a)
        w = q(n, a) if 2 * a == n else q(n, a) + q(n, n - a)
        for sa, pa in da.items():
            for sb, pb in db.items():
                s = join(sa, sb)
                out[s] = out.get(s, F(0)) + w * pa * pb
    # For a == n - a the ordered double loop counts an unordered pair of distinct
    # shapes twice, which is the factor 2 of the recursion.
    return out


def limit_a(i):
    return 1 if i == 1 else 6 * mp.mpf(h(i - 1).numerator) / h(i - 1).denominator / (mp.pi**2 * (i - 1))


def main():
    print("# Copyright (C) 2026 The critsplit Authors")
    print("# SPDX-License-Identifier: Apache-2.0")
    print("#")
    print("split_prob(4,2) =", q(4, 2), "split_prob(4,1) =", q(4, 1))
    print("hd_transition(4,2) =", qstar(4, 2), "hd_transition(3,1) =", qstar(3, 1))
    print("a(3,2) =", occupation(3)[2], "a(4,2) =", occupation(4)[2])
    t = mean_heights(6)
    print("t2..t6 =", [str(t[k]) for k in range(2, 7)])
    for n in range(2, 7):
        for s, p in sorted(shape_dist(n).items(), key=lambda kv: key(kv[0])):
            pc = mp.mpf(p.numerator) / p.denominator * limit_a(n)
            print(f"shape n={n} {text(s):24s} P={str(p):>12s} p_chi={mp.nstr(pc, 12)}")
    print("digamma(1) =", mp.nstr(mp.digamma(1), 20))
    print("trigamma(1) =", mp.nstr(mp.psi(1, 1), 20))
    psi1 = mp.digamma(1)
    roots = [mp.findroot(lambda s: mp.digamma(s) - psi1, (-k + 1e-9, -k + 1 - 1e-9), solver="bisect")
             for k in range(1, 6)]
    for k, r in enumerate(roots, 1):
        print(f"s{k} = {mp.nstr(r, 20)} r{k} = {mp.nstr(1 / mp.psi(1, r), 20)}")
    print("mu(1e-6) =", mp.nstr(mp.quad(lambda a: a / mp.expm1(a), [0, mp.mpf("1e-6")]), 20))
    print("mu(1e-3) =", mp.nstr(mp.quad(lambda a: a / mp.expm1(a), [0, mp.mpf("1e-3")]), 20))


if __name__ == "__main__":
    main()
