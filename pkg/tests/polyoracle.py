"""Exact integrals of trivariate polynomials over the unit cube, used as test oracles."""
from fractions import Fraction
from itertools import product

import numpy as np

# Mono = (a, b, c) exponents of x, y, z


def mul(p, q):
    out = {}
    for (e1, c1), (e2, c2) in product(p.items(), q.items()):
        e = tuple(a + b for a, b in zip(e1, e2))
        out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def add(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def diff(p, axis):
    out = {}
    for e, c in p.items():
        if e[axis]:
            f = list(e)
            f[axis] -= 1
            out[tuple(f)] = out.get(tuple(f), 0) + c * e[axis]
    return out


def integrate(p):
    return sum(Fraction(c) / ((a + 1) * (b + 1) * (d + 1)) for (a, b, d), c in p.items())


def power(p, k):
    out = {(0, 0, 0): 1}
    for _ in range(k):
        out = mul(out, p)
    return out


def bump(axis, order=8):
    """(4 s (1 - s))^order in coordinate `axis`: smooth to order-1 on the periodic unit interval."""
    e1, e2 = [0, 0, 0], [0, 0, 0]
    e1[axis], e2[axis] = 1, 2
    return power({tuple(e1): 4, tuple(e2): -4}, order)


def numeric(p):
    def f(x, y, z):
        out = np.zeros_like(x, dtype=float)
        for (a, b, c), k in p.items():
            out = out + float(k) * x ** a * y ** b * z ** c
        return out
    return f


class BumpPoly:
    """q(x, y, z) times the product of bumps in x, y, z: exact form plus a stable evaluator."""

    def __init__(self, q, order=8):
        self.q, self.order = q, order
        b = mul(mul(bump(0, order), bump(1, order)), bump(2, order))
        self.exact = mul(b, q)

    def __call__(self, x, y, z):
        w = (4 * x * (1 - x) * 4 * y * (1 - y) * 4 * z * (1 - z)) ** self.order
        return w * numeric(self.q)(x, y, z)
