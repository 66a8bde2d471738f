"""Generalized Hamilton equations by coefficient matching of X -| Omega = (-1)^n dH."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .legendre import HamiltonianFn, field_strength, hamiltonian
from .maxwell_space import (
    ENERGY, SIGMA, MaxwellChart, aname, build_chart, dirac_substitution, jet, omega, piname,
    reduce_dirac, xname,
)
from .symalg import (
    ONE, ZERO, Form, Multivector, Poly, Relation, contract_seq, dext, graph_pullback, interior,
)


# -- coefficient symbols ----------------------------------------------------

def th(a: int, m: int) -> str:
    return f"Th[{a},{m}]"


def ups(a: int) -> str:
    return f"Y[{a}]"


def ups_pi(a: int, m: int, n: int) -> str:
    return f"Y[{a}|A{m},{n}]"


@dataclass(frozen=True)
class GeneralVectorField:
    chart: MaxwellChart
    vectors: Tuple[Multivector, ...]
    paired: bool

    def wedge(self) -> Multivector:
        out = self.vectors[0]
        for v in self.vectors[1:]:
            out = out ^ v
        return out


def general_vector_field(chart: MaxwellChart, paired: Optional[bool] = None,
                         values: Optional[Dict[str, object]] = None) -> GeneralVectorField:
    """X_a = d_a + Th[a,m] d_{A_m} + Y[a] d_e + momentum terms.

    With `paired` the momentum terms are Y[a|Am,n](d_{Pi^{mn}} - d_{Pi^{nm}})
    summed over all (m, n). `values` substitutes numbers for coefficient symbols.
    """
    paired = chart.constrained if paired is None else paired
    vals = {k: Poly.coerce(v) for k, v in (values or {}).items()}
    vecs = []
    for a in chart.idx:
        comps: Dict[str, Poly] = {xname(a): ONE}
        for m in chart.idx:
            comps[aname(m)] = Poly.var(th(a, m)).subs(vals)
        if chart.has_energy:
            comps[ENERGY] = Poly.var(ups(a)).subs(vals)
        for m, n in chart.pairs():
            y = Poly.var(ups_pi(a, m, n)).subs(vals)
            if paired:
                if m == n:
                    continue
                comps[piname(m, n)] = comps.get(piname(m, n), ZERO) + y
                comps[piname(n, m)] = comps.get(piname(n, m), ZERO) - y
            else:
                comps[piname(m, n)] = y
        vecs.append(Multivector.from_components(chart, comps))
    return GeneralVectorField(chart, tuple(vecs), paired)


def contract_general(X: GeneralVectorField, Om: Form) -> Form:
    """(X_1 ^ ... ^ X_n) -| Omega, fully expanded, X_1 inserted first."""
    if not X.chart.same(Om.chart):
        raise ValueError("vector field and form live on different charts")
    return contract_seq(X.vectors, Om)


# -- systems ----------------------------------------------------------------

@dataclass
class PDESystem:
    chart: MaxwellChart
    hamiltonian: str
    raw: List[Relation]                     # before the jet identification
    relations: List[Relation]               # field equations after the identification
    definitions: List[Relation] = field(default_factory=list)  # dx^rho rows: energy-flux definitions
    trivial: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def by_provenance(self, prefix: str) -> List[Relation]:
        return [r for r in self.relations if r.provenance.startswith(prefix)]

    def residuals(self) -> List[Poly]:
        return [r.normalized() for r in self.relations]

    def to_json(self) -> dict:
        return {
            "chart": self.chart.flavor,
            "hamiltonian-ref": self.hamiltonian,
            "relations": [r.to_json() for r in self.relations],
            "definitions": [r.to_json() for r in self.definitions],
            "trivial": list(self.trivial),
            "notes": list(self.notes),
        }

    def render(self) -> str:
        lines = [f"# chart {self.chart.flavor}, H = {self.hamiltonian}"]
        for r in self.relations:
            lines.append(f"[{r.provenance}] {r}")
        for r in self.definitions:
            lines.append(f"[{r.provenance}] (definition) {r}")
        for t in self.trivial:
            lines.append(f"[{t}] trivially satisfied")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def jet_identification(chart: MaxwellChart) -> Dict[str, Poly]:
    """Th[a,m] -> d_a A_m, Y[a] -> d_a e, Y[a|Am,n] -> d_a Pi^{mn}."""
    sub: Dict[str, Poly] = {}
    for a in chart.idx:
        for m in chart.idx:
            sub[th(a, m)] = Poly.var(jet(aname(m), a))
        sub[ups(a)] = Poly.var(jet(ENERGY, a))
        for m, n in chart.pairs():
            sub[ups_pi(a, m, n)] = Poly.var(jet(piname(m, n), a))
    return sub


def _is_field_jet(v: str) -> bool:
    return v.startswith("d") and "(A[" in v


def present(residual: Poly, provenance: str) -> Relation:
    """Split a residual into lhs (momentum side) = rhs (potential-jet side)."""
    lhs, rhs = ZERO, ZERO
    for mono, c in residual.items():
        t = Poly({mono: c})
        if any(_is_field_jet(v) or v.startswith("J[") for v, _ in mono):
            rhs = rhs - t
        else:
            lhs = lhs + t
    if lhs.is_zero():
        lhs, rhs = -rhs, ZERO
    elif lhs.leading()[1] < 0:
        lhs, rhs = -lhs, -rhs
    return Relation(lhs, rhs, provenance)


def _match(chart: MaxwellChart, lhs: Form, rhs: Form) -> List[Tuple[str, Poly, Poly]]:
    rows = []
    keys = sorted(set(k for k, _ in lhs.items()) | set(k for k, _ in rhs.items()))
    for k in keys:
        name = chart.names[k[0]]
        rows.append((name, lhs.terms.get(k, ZERO), rhs.terms.get(k, ZERO)))
    return rows


def derive(chart: MaxwellChart, H: Optional[HamiltonianFn] = None, sigma=1) -> PDESystem:
    """Match X -| Omega = (-1)^n dH on d e, dA_mu, dPi^{mu nu}, dx^rho."""
    if chart.flavor == "premulti":
        return derive_premulti(chart)
    if H is None:
        H = hamiltonian(chart, sigma=sigma if chart.flavor == "ld2" else None)
    if chart.flavor == "ld2":
        if H.sigma is None or not isinstance(H.sigma, (int, Fraction)):
            H = H.at_sigma(sigma)
        sigma = H.sigma
    h = H.poly
    X = general_vector_field(chart)
    lhs = contract_general(X, omega(chart))
    rhs = dext(Form.scalar(chart, h)) * (-1) ** chart.n
    if chart.constrained:
        lhs = reduce_dirac(lhs, chart)
        rhs = reduce_dirac(rhs, chart)
    if chart.flavor == "ld2":
        # restrict to the level sigma = const: drop d(sigma), substitute its value
        keep = lambda f: Form(chart, 1, {k: c.subs({SIGMA: sigma}) for k, c in f.items()
                                         if chart.names[k[0]] != SIGMA})
        lhs, rhs = keep(lhs), keep(rhs)
    jets = jet_identification(chart)
    sysm = PDESystem(chart, str(H), [], [])
    for name, l, r in _match(chart, lhs, rhs):
        prov = f"d({name})"
        raw = Relation(l, r, prov)
        if raw.holds():
            sysm.trivial.append(prov)
            continue
        sysm.raw.append(raw)
        rel = present(raw.residual.subs(jets), prov)
        if name in [xname(a) for a in chart.idx]:
            sysm.definitions.append(rel)
        else:
            sysm.relations.append(rel)
    if chart.flavor == "ddw":
        sysm.notes.append(
            "without the antisymmetry constraint the dPi rows give d_nu A_mu = (1/2) F_{nu mu}; "
            "with Pi = F this forces the symmetric part of dA to vanish and is not the Euler-Lagrange system"
        )
    return sysm


# -- pre-multisymplectic dynamics -------------------------------------------

def derive_premulti(chart: Optional[MaxwellChart] = None, jets_mode: str = "symbols") -> PDESystem:
    """(Xi -| Omega0) restricted to the graph vanishes for every admissible Xi.

    Base directions are not used: along them the condition only restates the
    energy-momentum bookkeeping of the graph.
    """
    from .maxwell_space import admissible_vectorfield_basis

    chart = chart or build_chart("premulti")
    if chart.flavor != "premulti":
        raise ValueError("derive_premulti needs the premulti chart")
    Om = omega(chart)
    graph = {}
    for m in chart.idx:
        graph[aname(m)] = {xname(a): Poly.var(th(a, m)) for a in chart.idx}
    for m, n in chart.pairs():
        graph[piname(m, n)] = {xname(a): Poly.var(ups_pi(a, m, n)) for a in chart.idx}
    # graph tangent restricted to antisymmetric momenta
    ysub = {}
    for a in chart.idx:
        for m in chart.idx:
            ysub[ups_pi(a, m, m)] = ZERO
            for n in chart.idx:
                if m < n:
                    ysub[ups_pi(a, n, m)] = -Poly.var(ups_pi(a, m, n))
    vol = Form.basis(chart, *[xname(a) for a in chart.idx])
    vk = next(iter(vol.terms))
    sysm = PDESystem(chart, "H = 0 level", [], [])
    jets = jet_identification(chart)
    for label, xi in admissible_vectorfield_basis(chart):
        if label.startswith("D(x["):
            continue
        f = reduce_dirac(interior(xi, Om), chart)
        g = graph_pullback(f, graph).subs(ysub)
        coeff = g.terms.get(vk, ZERO)
        prov = label
        raw = Relation(coeff, ZERO, prov)
        if raw.holds():
            sysm.trivial.append(prov)
            continue
        sysm.raw.append(raw)
        sysm.relations.append(present(coeff.subs(jets), prov))
    return sysm


# -- post-processing helpers ------------------------------------------------

def reduce_jets_dirac(p: Poly, chart: MaxwellChart) -> Poly:
    """d_a Pi^{nm} -> -d_a Pi^{mn} (m < n), d_a Pi^{mm} -> 0."""
    sub = {}
    for a in chart.idx:
        for m in chart.idx:
            sub[jet(piname(m, m), a)] = ZERO
            for n in chart.idx:
                if m < n:
                    sub[jet(piname(n, m), a)] = -Poly.var(jet(piname(m, n), a))
    return p.subs(sub).subs(dirac_substitution(chart))


def lowered_momentum(chart: MaxwellChart, m: int, n: int) -> Poly:
    """F_{mn} as read off the momenta: eta_m eta_n Pi^{mn}."""
    return Poly.var(piname(m, n)) * (chart.eta(m) * chart.eta(n))


def maxwell_expected(chart: MaxwellChart) -> List[Poly]:
    """Monic residuals of F_{mn} = d_m A_n - d_n A_m (m<n) and d_n(Pi^{mn} - Pi^{nm}) = 0."""
    out = []
    for m, n in itertools.combinations(chart.idx, 2):
        r = lowered_momentum(chart, m, n) - field_strength(chart, m, n)
        out.append(reduce_dirac(r, chart).monic())
    for m in chart.idx:
        r = ZERO
        for n in chart.idx:
            r = r + Poly.var(jet(piname(m, n), n)) - Poly.var(jet(piname(n, m), n))
        out.append(r.monic())
    return out


def recovers_maxwell(sysm: PDESystem) -> bool:
    """Every expected Maxwell relation occurs among the derived ones, modulo the Dirac reduction."""
    chart = sysm.chart
    norm = lambda p: reduce_jets_dirac(p, chart).monic()
    got = {norm(r.residual) for r in sysm.relations}
    return all(norm(p) in got for p in maxwell_expected(chart))

def ddw_failure_residuals(sysm: PDESystem) -> List[Poly]:
    """(1/2) F_{mn} - d_m A_n with Pi replaced by F(jets) on the dPi rows."""
    chart = sysm.chart
    out = []
    fsub = {}
    for m, n in chart.pairs():
        fsub[piname(m, n)] = field_strength(chart, m, n) * (chart.eta(m) * chart.eta(n))
    for rel in sysm.by_provenance("d(Pi["):
        out.append(rel.residual.subs(fsub))
    return out


def second_jet_derivative(p: Poly, nu: int) -> Poly:
    """Total derivative d_nu of a polynomial in first A-jets (chart coords held fixed)."""
    out = ZERO
    for v in p.variables():
        if v.startswith("d") and "(A[" in v:
            inner = v[v.index("(") + 1:-1]
            idx = [int(ch) for ch in v[1:v.index("(")]]
            out = out + p.diff(v) * Poly.var(jet(inner, *(idx + [nu])))
    return out


def ld2_flatness_symbolic(sysm: PDESystem) -> Dict[str, Poly]:
    """Eliminate pi through the Legendre rows; return the divergence rows in second jets.

    Returns the two divergence rows together with d_1 F_12 and d_2 F_12 so that
    proportionality can be checked exactly.
    """
    chart = sysm.chart
    # Legendre rows (from dPi) give pi as first jets
    pis: Dict[str, Poly] = {}
    for rel in sysm.by_provenance("d(Pi["):
        p = rel.lhs.variables()
        (name,) = [v for v in p if v.startswith("Pi[")]
        c = rel.lhs.diff(name).const_value()
        pis[name] = (rel.rhs - (rel.lhs - rel.lhs.diff(name) * Poly.var(name))) * (1 / c)
    sub = {}
    for name, expr in pis.items():
        for nu in chart.idx:
            sub[jet(name, nu)] = second_jet_derivative(expr, nu)
    rows = [rel.residual.subs(sub) for rel in sysm.by_provenance("d(A[")]
    F12 = field_strength(chart, 1, 2)
    return {
        "div_rows": rows,
        "dF12": [second_jet_derivative(F12, 1), second_jet_derivative(F12, 2)],
        "pi": pis,
    }
