"""Maxwell phase-space charts and their Poincare-Cartan / multisymplectic forms.

Flavors:
  ddw            x^mu, A_mu, e, Pi^{A_mu nu}              (n = 4, or n = 2 on indices 1, 2)
  maxwell-dirac  same coordinates plus Pi^{mu nu} + Pi^{nu mu} = 0
  premulti       no e; e is replaced by (1/4) eta eta Pi Pi, antisymmetry as above
  ld2            2D chart with the extra coordinate sigma dual to dA_1 ^ dA_2
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .symalg import (
    ZERO, Chart, Coordinate, Form, Metric, Multivector, Poly, Relation, _RANK, dext, interior, pullback, register_names,
)

FLAVORS = ("ddw", "maxwell-dirac", "premulti", "ld2")


def xname(mu: int) -> str:
    return f"x[{mu}]"


def aname(mu: int) -> str:
    return f"A[{mu}]"


def piname(mu: int, nu: int) -> str:
    return f"Pi[A{mu},{nu}]"


ENERGY = "e"
SIGMA = "sigma"


def jet(name: str, *nus: int) -> str:
    """Jet symbol for the partial derivatives d_nu1 d_nu2 ... of `name`."""
    return "d" + "".join(str(n) for n in sorted(nus)) + f"({name})"


def _register_standard():
    names = [xname(m) for m in range(4)] + [aname(m) for m in range(4)] + [ENERGY]
    names += [piname(m, n) for m in range(4) for n in range(4)] + [SIGMA]
    register_names(names)


_register_standard()


class MaxwellChart(Chart):
    def __init__(self, coords, flavor: str, idx: Tuple[int, ...], metric: Metric,
                 constraints: Sequence[Relation] = ()):
        super().__init__(coords)
        self.flavor = flavor
        self.idx = tuple(idx)          # spacetime index labels, e.g. (0,1,2,3) or (1,2)
        self.n = len(idx)
        self.metric = metric
        self.constraints = tuple(constraints)

    def eta(self, mu: int) -> int:
        return self.metric.signature[self.idx.index(mu)]

    @property
    def constrained(self) -> bool:
        return self.flavor in ("maxwell-dirac", "premulti")

    @property
    def has_energy(self) -> bool:
        return ENERGY in self

    def pairs(self) -> List[Tuple[int, int]]:
        return [(m, n) for m in self.idx for n in self.idx]

    def __repr__(self):
        return f"MaxwellChart({self.flavor}, n={self.n}, {len(self)} coords)"

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "n": self.n,
            "coords": [{"name": c.name, "role": c.role, "indices": list(c.indices)} for c in self.coords],
            "constraints": [f"{r.lhs} = {r.rhs}" for r in self.constraints],
        }


def _coord(name, role, indices):
    return Coordinate(name, role, tuple(indices), _RANK[name])


def build_chart(flavor: str, n: int = None) -> MaxwellChart:
    return _build_chart(flavor, n if n is not None else (2 if flavor == "ld2" else 4))


@lru_cache(maxsize=None)
def _build_chart(flavor: str, n: int) -> MaxwellChart:
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    if n not in (2, 4) or (flavor == "ld2" and n != 2):
        raise ValueError(f"unsupported base dimension {n} for {flavor}")
    idx = (0, 1, 2, 3) if n == 4 else (1, 2)
    metric = Metric(n, (1, -1, -1, -1) if n == 4 else (1, -1))
    coords = [_coord(xname(m), "base", (m,)) for m in idx]
    coords += [_coord(aname(m), "field", (m,)) for m in idx]
    if flavor != "premulti":
        coords.append(_coord(ENERGY, "energy", ()))
    coords += [_coord(piname(m, v), "momentum", (m, v)) for m in idx for v in idx]
    if flavor == "ld2":
        coords.append(_coord(SIGMA, "ld-extra", ()))
    cons = []
    if flavor in ("maxwell-dirac", "premulti"):
        for m, v in itertools.combinations_with_replacement(idx, 2):
            cons.append(Relation(Poly.var(piname(m, v)) + Poly.var(piname(v, m)), ZERO, "antisymmetry"))
    return MaxwellChart(coords, flavor, idx, metric, cons)


# -- volume forms -----------------------------------------------------------

def d(chart: Chart, name: str) -> Form:
    return Form.basis(chart, name)


def D(chart: Chart, name: str) -> Multivector:
    return Multivector.basis(chart, name)


def dy(chart: MaxwellChart) -> Form:
    return Form.basis(chart, *[xname(m) for m in chart.idx])


def dy1(chart: MaxwellChart, nu: int) -> Form:
    """dy_nu = d_nu -| dy."""
    return interior(D(chart, xname(nu)), dy(chart))


def dy2(chart: MaxwellChart, mu: int, nu: int) -> Form:
    """dy_{mu nu} = d_mu -| (d_nu -| dy)."""
    return interior(D(chart, xname(mu)), dy1(chart, nu))


def premulti_energy(chart: MaxwellChart) -> Poly:
    """(1/4) eta_{mu rho} eta_{nu sigma} Pi^{mu nu} Pi^{rho sigma} for a diagonal metric."""
    out = ZERO
    for m, v in chart.pairs():
        out = out + Poly.var(piname(m, v), 2) * Fraction(chart.eta(m) * chart.eta(v), 4)
    return out


def theta(chart: MaxwellChart) -> Form:
    e = premulti_energy(chart) if chart.flavor == "premulti" else Poly.var(ENERGY)
    out = dy(chart) * e
    for m, v in chart.pairs():
        out = out + (d(chart, aname(m)) ^ dy1(chart, v)) * Poly.var(piname(m, v))
    if chart.flavor == "ld2":
        out = out + (d(chart, aname(1)) ^ d(chart, aname(2))) * Poly.var(SIGMA)
    return out


@lru_cache(maxsize=None)
def omega(chart: MaxwellChart) -> Form:
    return dext(theta(chart))


# -- Dirac constraints ------------------------------------------------------

def dirac_substitution(chart: MaxwellChart) -> Dict[str, Poly]:
    """Pi^{nu mu} -> -Pi^{mu nu} for mu < nu and Pi^{mu mu} -> 0."""
    sub = {}
    for m in chart.idx:
        sub[piname(m, m)] = ZERO
        for v in chart.idx:
            if m < v:
                sub[piname(v, m)] = -Poly.var(piname(m, v))
    return sub


def reduce_dirac(obj, chart: MaxwellChart):
    """Pull a Poly or Form back to the antisymmetric momentum surface."""
    sub = dirac_substitution(chart)
    if isinstance(obj, Poly):
        return obj.subs(sub)
    return pullback(obj, sub)


def admissible_vectorfield_basis(chart: MaxwellChart) -> List[Tuple[str, Multivector]]:
    if not chart.constrained:
        raise ValueError("admissible directions are defined for constrained charts only")
    out = [(f"D({c.name})", D(chart, c.name)) for c in chart.coords if c.role != "momentum"]
    for m, v in itertools.combinations(chart.idx, 2):
        vec = D(chart, piname(m, v)) - D(chart, piname(v, m))
        out.append((f"D({piname(m, v)})-D({piname(v, m)})", vec))
    return out


def in_degenerate_set(point: Mapping[str, Fraction], chart: MaxwellChart) -> bool:
    """Membership in the image of the degenerate correspondence: Pi antisymmetric.

    Any antisymmetric Pi equals F^{mu nu} for F_{mu nu} = eta eta Pi^{mu nu}, so
    antisymmetry is the whole test.
    """
    for m, v in chart.pairs():
        if Fraction(point.get(piname(m, v), 0)) + Fraction(point.get(piname(v, m), 0)) != 0:
            return False
    return True
