"""Legendre pairings, relations, Hamiltonians, and the 2D Lepage-Dedecker fiber data."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .maxwell_space import (
    SIGMA, MaxwellChart, aname, build_chart, dirac_substitution, jet, piname, theta, xname,
)
from .symalg import ONE, ZERO, Multivector, Poly, Relation, contract_seq

SigmaArg = Union[None, int, Fraction, Poly]


class DegeneracyError(ValueError):
    """Raised when the Lepage-Dedecker correspondence is not invertible."""

    def __init__(self, sigma, stratum: str):
        self.sigma = sigma
        self.stratum = stratum
        super().__init__(
            f"sigma = {sigma} is a root of the functional determinant (2 - sigma)*sigma^3; "
            f"the correspondence is degenerate on the {stratum} pseudofiber stratum"
        )


# -- rational expressions with a tracked denominator ------------------------

@dataclass(frozen=True)
class Quotient:
    num: Poly
    den: Poly = ONE

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @staticmethod
    def of(x) -> "Quotient":
        return x if isinstance(x, Quotient) else Quotient(Poly.coerce(x))

    def __add__(self, o):
        o = Quotient.of(o)
        if self.den == o.den:
            return Quotient(self.num + o.num, self.den)
        return Quotient(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Quotient(-self.num, self.den)

    def __sub__(self, o):
        return self + (-Quotient.of(o))

    def __rsub__(self, o):
        return Quotient.of(o) - self

    def __mul__(self, o):
        o = Quotient.of(o)
        return Quotient(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def equals(self, o) -> bool:
        o = Quotient.of(o)
        return (self.num * o.den - o.num * self.den).is_zero()

    def subs(self, mapping) -> "Quotient":
        return Quotient(self.num.subs(mapping), self.den.subs(mapping))

    def reduce(self, factors=()) -> "Quotient":
        """Cancel the given candidate factors (and a constant denominator) while exact."""
        num, den = self.num, self.den
        for f in factors:
            while not den.is_const():
                try:
                    d2 = den.div_exact(f)
                    n2 = num.div_exact(f)
                except ValueError:
                    break
                num, den = n2, d2
        if den.is_const():
            return Quotient(num * (1 / den.const_value()), ONE)
        _, lc = den.leading()
        return Quotient(num * (1 / lc), den * (1 / lc))

    def as_poly(self) -> Poly:
        q = self.reduce()
        if not q.den == ONE:
            raise ValueError("expression has a non-constant denominator")
        return q.num

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def _sigma_poly(sigma: SigmaArg) -> Poly:
    return Poly.var(SIGMA) if sigma is None else Poly.coerce(sigma)


LD_FACTORS = (Poly.var(SIGMA), 2 - Poly.var(SIGMA))


# -- velocities and pairing -------------------------------------------------

def jet_velocities(chart: MaxwellChart) -> Dict[Tuple[int, int], Poly]:
    """VelocityAssignment (mu, nu) -> Z_{nu mu} = d_nu A_mu as jet symbols."""
    return {(m, v): Poly.var(jet(aname(m), v)) for m in chart.idx for v in chart.idx}


def _check_velocities(chart: MaxwellChart, v):
    missing = [(m, n) for m in chart.idx for n in chart.idx if (m, n) not in v]
    if missing:
        raise ValueError(f"incomplete velocity assignment, missing {missing}")


def lifted_frame(chart: MaxwellChart, v) -> List[Multivector]:
    _check_velocities(chart, v)
    frame = []
    for n in chart.idx:
        comps = {xname(n): ONE}
        for m in chart.idx:
            comps[aname(m)] = Poly.coerce(v[(m, n)])
        frame.append(Multivector.from_components(chart, comps))
    return frame


def pairing(chart: MaxwellChart, v=None) -> Poly:
    """<p, v> = theta(Z_1, ..., Z_n) on the lifted frame."""
    v = jet_velocities(chart) if v is None else v
    return contract_seq(lifted_frame(chart, v), theta(chart)).scalar_part()


# -- Lagrangians ------------------------------------------------------------

def field_strength(chart: MaxwellChart, a: int, b: int) -> Poly:
    """F_{ab} = d_a A_b - d_b A_a in jet symbols."""
    return Poly.var(jet(aname(b), a)) - Poly.var(jet(aname(a), b))


def maxwell_lagrangian(chart: MaxwellChart, J: Optional[Mapping[int, Poly]] = None) -> Poly:
    """-(1/4) F_{ab} F^{ab} + J^mu A_mu (J defaults to zero)."""
    L = ZERO
    for a, b in chart.pairs():
        L = L - field_strength(chart, a, b) ** 2 * Fraction(chart.eta(a) * chart.eta(b), 4)
    for m, j in (J or {}).items():
        L = L + Poly.coerce(j) * Poly.var(aname(m))
    return L


def legendre_relations(chart: MaxwellChart, L: Optional[Poly] = None, sigma: SigmaArg = None) -> List[Relation]:
    """dL/dZ = d<p,v>/dZ for every velocity Z_{nu mu} = d_nu A_mu."""
    L = maxwell_lagrangian(chart) if L is None else L
    pv = pairing(chart)
    if chart.flavor == "ld2" and sigma is not None:
        pv = pv.subs({SIGMA: sigma})
    rels = []
    for (m, v), z in jet_velocities(chart).items():
        name = z.variables()[0]
        rels.append(Relation(L.diff(name), pv.diff(name), f"d/d {name}"))
    return rels


# -- the 2D Lepage-Dedecker correspondence ----------------------------------

def _det(m: List[List[Poly]]) -> Poly:
    n = len(m)
    if n == 1:
        return m[0][0]
    out = ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def ld2_velocity_names() -> List[str]:
    """d_rho A_sigma in lexicographic (rho, sigma) order."""
    return [jet(aname(s), r) for r in (1, 2) for s in (1, 2)]


def ld2_momentum_names() -> List[str]:
    return [piname(m, v) for m in (1, 2) for v in (1, 2)]


def _ld2_momentum_exprs(sigma: SigmaArg) -> Dict[str, Poly]:
    """pi^{mu nu} as functions of velocities, read off the relations."""
    chart = build_chart("ld2")
    out = {}
    for rel in legendre_relations(chart, sigma=sigma):
        r = rel.lhs - rel.rhs
        # every relation carries exactly one momentum with coefficient -1
        (p,) = [v for v in r.variables() if v.startswith("Pi[")]
        c = r.diff(p)
        out[p] = (r - c * Poly.var(p)) * (-1 / c.const_value())
    return out


def functional_det(sigma: SigmaArg = None) -> Poly:
    """det[d pi^{mu nu} / d(d_rho A_sigma)] assembled from the relations."""
    pis = _ld2_momentum_exprs(sigma)
    m = [[pis[p].diff(z) for z in ld2_velocity_names()] for p in ld2_momentum_names()]
    return _det(m)


def _degenerate_stratum(s: Fraction) -> Optional[str]:
    if s == 0:
        return "sigma=0"
    if s == 2:
        return "sigma=2"
    return None


def invert_ld2(sigma: SigmaArg = None) -> Dict[str, Quotient]:
    """Velocities as rational functions of the momenta (Cramer's rule)."""
    if sigma is not None and not isinstance(sigma, Poly):
        st = _degenerate_stratum(Fraction(sigma))
        if st:
            raise DegeneracyError(sigma, st)
    pis = _ld2_momentum_exprs(sigma)
    zs = ld2_velocity_names()
    ps = ld2_momentum_names()
    M = [[pis[p].diff(z) for z in zs] for p in ps]
    rhs = [Poly.var(p) for p in ps]
    det = _det(M)
    if det.is_zero():
        raise DegeneracyError(sigma, "degenerate")
    out = {}
    for j, z in enumerate(zs):
        Mj = [row[:j] + [rhs[i]] + row[j + 1:] for i, row in enumerate(M)]
        out[z] = Quotient(_det(Mj), det).reduce(LD_FACTORS)
    return out


# -- Hamiltonians -----------------------------------------------------------

@dataclass(frozen=True)
class HamiltonianFn:
    chart: MaxwellChart
    expr: Poly
    den: Poly = ONE
    sigma: SigmaArg = None
    J: Tuple[Tuple[int, Poly], ...] = ()

    @property
    def quotient(self) -> Quotient:
        return Quotient(self.expr, self.den)

    @property
    def poly(self) -> Poly:
        if not self.den == ONE:
            raise ValueError("Hamiltonian has a non-constant denominator; fix sigma first")
        return self.expr

    def at_sigma(self, value) -> "HamiltonianFn":
        q = self.quotient.subs({SIGMA: value}).reduce(LD_FACTORS)
        return HamiltonianFn(self.chart, q.num, q.den, Fraction(value), self.J)

    def __str__(self):
        return str(self.quotient)

    def to_json(self) -> dict:
        d = {"chart": self.chart.flavor, "hamiltonian": self.expr.to_json()}
        if not self.den == ONE:
            d["denominator"] = self.den.to_json()
        if self.sigma is not None:
            d["sigma"] = str(self.sigma)
        return d


def _symmetric_lift(chart: MaxwellChart, h: Poly) -> Poly:
    """Spread (Pi^{mu nu})^2, mu < nu, evenly over Pi^{mu nu} and Pi^{nu mu}."""
    out = ZERO
    for mono, c in h.items():
        term = Poly({mono: c})
        sq = [(v, e) for v, e in mono if v.startswith("Pi[") and e == 2]
        if len(mono) == 1 and sq:
            name = sq[0][0]
            (m, n) = next((a, b) for a, b in chart.pairs() if piname(a, b) == name)
            term = (Poly.var(piname(m, n), 2) + Poly.var(piname(n, m), 2)) * (c / 2)
        out = out + term
    return out


def ddw_hamiltonian_on_graph(chart: MaxwellChart, L: Poly) -> Poly:
    """pairing - L evaluated on the correspondence Pi = F with antisymmetric Pi.

    Velocities are chosen as d_a A_b = (1/2) F_{ab} = (1/2) eta_a eta_b Pi^{ab};
    the result is a polynomial in e and Pi^{mu nu}, mu < nu.
    """
    sub = dirac_substitution(chart)
    v = {}
    for m, n in chart.pairs():
        # Z_{n m} = d_n A_m = (1/2) eta_n eta_m Pi^{n m}
        v[(m, n)] = Poly.var(piname(n, m)).subs(sub) * Fraction(chart.eta(n) * chart.eta(m), 2)
    pv = pairing(chart, v).subs(sub)
    jet_sub = {jet(aname(m), n): v[(m, n)] for m, n in chart.pairs()}
    return pv - L.subs(jet_sub).subs(sub)


def hamiltonian(chart: MaxwellChart, L: Optional[Poly] = None, sigma: SigmaArg = None,
                J: Optional[Mapping[int, Poly]] = None) -> HamiltonianFn:
    """H = <p, v> - L with velocities eliminated through the correspondence."""
    Jt = tuple(sorted((m, Poly.coerce(j)) for m, j in (J or {}).items()))
    if L is None:
        L = maxwell_lagrangian(chart, J)
    if chart.flavor in ("ddw", "maxwell-dirac"):
        h = _symmetric_lift(chart, ddw_hamiltonian_on_graph(chart, L))
        # diagonal momenta vanish on the graph; complete to the covariant -(1/4) Pi_{mu nu} Pi^{mu nu}
        for m in chart.idx:
            h = h - Poly.var(piname(m, m), 2) * Fraction(1, 4)
        return HamiltonianFn(chart, h, ONE, None, Jt)
    if chart.flavor == "ld2":
        vel = invert_ld2(sigma)
        s = _sigma_poly(sigma)
        pv = pairing(chart).subs({SIGMA: s})
        Lq = L
        # pairing and L are quadratic in velocities: expand with tracked denominators
        total = Quotient.of(ZERO)
        for expr, sign in ((pv, 1), (Lq, -1)):
            for mono, c in expr.items():
                term = Quotient.of(Poly.const(c * sign))
                for v, e in mono:
                    factor = vel[v] if v in vel else Quotient.of(Poly.var(v))
                    for _ in range(e):
                        term = term * factor
                total = total + term
        total = total.reduce(LD_FACTORS + LD_FACTORS)
        return HamiltonianFn(chart, total.num, total.den, sigma, Jt)
    if chart.flavor == "premulti":
        raise ValueError("the pre-multisymplectic chart fixes the Hamiltonian level; use build_chart('maxwell-dirac')")
    raise ValueError(chart.flavor)


# -- pseudofibers -----------------------------------------------------------

def ld2_dimensions(n: int = 2, k: int = 2) -> Dict[str, int]:
    lam_q = comb(n + k, n)
    return {
        "Gr^n": n + k + n * k,
        "Lambda^n T*Z": n + k + lam_q,
        "D_q": n * k,
        "Lambda^n T*_q Z": lam_q,
        "P_q": lam_q - n * k,
        "P_q^h": lam_q - n * k - 1,
    }


@dataclass(frozen=True)
class Stratum:
    name: str
    member: bool
    dims: Dict[str, int] = field(default_factory=dict)
    detail: str = ""

    def to_json(self) -> dict:
        return {"stratum": self.name, "member": self.member, "dims": dict(self.dims), "detail": self.detail}


def pseudofiber_classify(point: Mapping[str, object]) -> Stratum:
    """Stratum of a point (e, pi^{A_mu nu}, sigma) of the 2D fiber."""
    g = lambda m, n: Fraction(point.get(piname(m, n), 0))
    s = Fraction(point.get(SIGMA, 0))
    dims = {k: v for k, v in ld2_dimensions().items() if k in ("P_q", "P_q^h")}
    if s not in (0, 2):
        return Stratum("regular", True, dims, "(2 - sigma)*sigma^3 != 0")
    if s == 0:
        ok = g(1, 1) == 0 and g(2, 2) == 0 and g(1, 2) + g(2, 1) == 0
        detail = "needs pi^{A1,1} = pi^{A2,2} = 0 and pi^{A1,2} + pi^{A2,1} = 0"
        return Stratum("sigma=0" if ok else "not-in-Pq", ok, dims, detail)
    ok = g(1, 2) == g(2, 1)
    detail = "needs pi^{A1,2} = pi^{A2,1}"
    return Stratum("sigma=2" if ok else "not-in-Pq", ok, dims, detail)
