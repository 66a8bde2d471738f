"""Seeded random polynomial data for the property suites."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Sequence

from .maxwell_space import MaxwellChart, aname, xname
from .symalg import ZERO, Poly


def random_poly(rng: random.Random, names: Sequence[str], degree: int = 2, terms: int = 3,
                bound: int = 3) -> Poly:
    """Sum of `terms` random monomials of total degree <= degree, integer coefficients in [-bound, bound]."""
    out = ZERO
    for _ in range(terms):
        c = rng.randint(-bound, bound)
        if c == 0:
            continue
        m = Poly.const(c)
        for _ in range(rng.randint(0, degree)):
            m = m * Poly.var(rng.choice(list(names)))
        out = out + m
    return out


def base_names(chart: MaxwellChart) -> List[str]:
    return [xname(m) for m in chart.idx]


def field_names(chart: MaxwellChart) -> List[str]:
    return [aname(m) for m in chart.idx]


def random_vector(rng, chart: MaxwellChart, names=None, **kw) -> List[Poly]:
    names = names or base_names(chart)
    return [random_poly(rng, names, **kw) for _ in chart.idx]


def random_theta(rng, chart: MaxwellChart, with_fields: bool = True, **kw) -> List[Poly]:
    names = base_names(chart) + (field_names(chart) if with_fields else [])
    return random_vector(rng, chart, names, **kw)


def random_antisym(rng, chart: MaxwellChart, names=None, **kw) -> List[List[Poly]]:
    names = names or base_names(chart)
    n = chart.n
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            p = random_poly(rng, names, **kw)
            out[i][j], out[j][i] = p, -p
    return out


def random_killing(rng, chart: MaxwellChart, bound: int = 2) -> List[Poly]:
    """Poincare generator X^mu = a^mu + w^mu_nu x^nu with eta-lowered w antisymmetric."""
    n = chart.n
    low = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = rng.randint(-bound, bound)
            low[i][j], low[j][i] = w, -w
    out = []
    for i, m in enumerate(chart.idx):
        p = Poly.const(rng.randint(-bound, bound))
        for j, v in enumerate(chart.idx):
            # w^m_v = eta^{mm} w_{mv}
            c = Fraction(low[i][j] * chart.eta(m))
            if c:
                p = p + Poly.var(xname(v)) * c
        out.append(p)
    return out
