"""Observable (n-1)-forms, their symplectomorphisms, and Poisson brackets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .legendre import HamiltonianFn
from .maxwell_space import (
    ENERGY, MaxwellChart, aname, admissible_vectorfield_basis, build_chart, dirac_substitution,
    dy, dy1, dy2, jet, omega, piname, reduce_dirac, theta, xname,
)
from .symalg import (
    ZERO, Form, Multivector, Poly, Relation, contract, contract_seq, dext, graph_pullback,
    interior, wedge,
)


class NotAlgebraicError(ValueError):
    pass


# -- solving Xi -| Omega = -d(form) -----------------------------------------

def _reduce(obj, chart: MaxwellChart):
    return reduce_dirac(obj, chart) if chart.constrained else obj


@lru_cache(maxsize=None)
def _directions(chart: MaxwellChart):
    if chart.constrained:
        dirs = [v for _, v in admissible_vectorfield_basis(chart)]
    else:
        dirs = [Multivector.basis(chart, n) for n in chart.names]
    Om = omega(chart)
    images = [_reduce(interior(v, Om), chart) for v in dirs]
    return dirs, images


def solve_xi(form: Form, chart: Optional[MaxwellChart] = None) -> Optional[Multivector]:
    """The vector field Xi with Xi -| Omega + d(form) = 0, or None when none exists.

    Gauss-Jordan elimination over the rationals with polynomial right-hand sides;
    columns are the admissible directions, rows the n-form monomials.
    """
    chart = chart or form.chart
    dirs, images = _directions(chart)
    target = -_reduce(dext(form), chart)
    keys = sorted(set(k for im in images for k in im.terms) | set(target.terms))
    rows = []
    for k in keys:
        coeffs = {}
        for j, im in enumerate(images):
            c = im.terms.get(k)
            if c is not None:
                coeffs[j] = c
        rows.append([coeffs, target.terms.get(k, ZERO)])
    pivots: Dict[int, int] = {}
    used = set()
    for j in range(len(dirs)):
        piv = None
        for i, (coeffs, _) in enumerate(rows):
            if i in used:
                continue
            c = coeffs.get(j)
            if c is not None and c.is_const():
                piv = i
                break
        if piv is None:
            continue
        used.add(piv)
        pivots[j] = piv
        pc = rows[piv][0][j].const_value()
        rows[piv][0] = {col: v * (1 / pc) for col, v in rows[piv][0].items()}
        rows[piv][1] = rows[piv][1] * (1 / pc)
        for i, row in enumerate(rows):
            if i == piv or j not in row[0]:
                continue
            f = row[0][j]
            if not f.is_const():
                continue
            f = f.const_value()
            new = dict(row[0])
            for col, v in rows[piv][0].items():
                w = new.get(col, ZERO) - v * f
                if w.is_zero():
                    new.pop(col, None)
                else:
                    new[col] = w
            row[0] = new
            row[1] = row[1] - rows[piv][1] * f
    sol: Dict[int, Poly] = {j: rows[i][1] for j, i in pivots.items()}
    # remaining columns are free; any leftover dependence on them is checked below
    xi = Multivector.zero(chart, 1)
    for j, c in sol.items():
        xi = xi + dirs[j] * c
    check = _reduce(contract(xi, omega(chart)), chart) + _reduce(dext(form), chart)
    if not check.is_zero():
        return None
    return xi


# -- observables ------------------------------------------------------------

@dataclass
class ObservableForm:
    form: Form
    xi: Optional[Multivector]
    family: str = "custom"
    params: Dict[str, object] = field(default_factory=dict)
    algebraic: bool = False
    dynamical: Optional[bool] = None

    @property
    def chart(self) -> MaxwellChart:
        return self.form.chart

    def verify(self) -> bool:
        if self.xi is None:
            return False
        ch = self.chart
        return (_reduce(contract(self.xi, omega(ch)), ch) + _reduce(dext(self.form), ch)).is_zero()

    def to_json(self) -> dict:
        d = {"family": self.family, "form": self.form.to_json(), "algebraic": self.algebraic}
        if self.xi is not None:
            d["xi"] = self.xi.to_json()
        if self.dynamical is not None:
            d["dynamical"] = self.dynamical
        return d


def observable(form: Form, family: str = "custom", params=None, chart=None) -> ObservableForm:
    xi = solve_xi(form, chart)
    o = ObservableForm(form, xi, family, dict(params or {}))
    o.algebraic = xi is not None and o.verify()
    return o


def _check_base_only(chart: MaxwellChart, polys, what: str, allowed=()):
    ok = set(xname(m) for m in chart.idx) | set(allowed)
    for p in polys:
        bad = [v for v in p.variables() if v in chart and v not in ok]
        if bad:
            raise ValueError(f"{what} may not depend on {bad}")


def _as_vector(chart: MaxwellChart, vals, what: str) -> Dict[int, Poly]:
    vals = list(vals)
    if len(vals) != chart.n:
        raise ValueError(f"{what} needs {chart.n} components")
    return {m: Poly.coerce(v) for m, v in zip(chart.idx, vals)}


def _as_antisym(chart: MaxwellChart, psi) -> Dict[Tuple[int, int], Poly]:
    out = {}
    for i, m in enumerate(chart.idx):
        for j, n in enumerate(chart.idx):
            out[(m, n)] = Poly.coerce(psi[i][j])
    for m, n in chart.pairs():
        if not (out[(m, n)] + out[(n, m)]).is_zero():
            raise ValueError("psi must be antisymmetric")
    return out


def P_phi_form(chart: MaxwellChart, phi) -> Form:
    phi = _as_vector(chart, phi, "phi")
    out = Form.zero(chart, chart.n - 1)
    for m, n in chart.pairs():
        out = out + dy1(chart, n) * (phi[m] * Poly.var(piname(m, n)))
    return out


def make_P_phi(phi, chart: Optional[MaxwellChart] = None) -> ObservableForm:
    """phi_mu(x) Pi^{mu nu} dy_nu with its solved symplectomorphism."""
    chart = chart or build_chart("ddw")
    vec = _as_vector(chart, phi, "phi")
    _check_base_only(chart, vec.values(), "phi")
    return observable(P_phi_form(chart, phi), "P_phi", {"phi": [vec[m] for m in chart.idx]})


def Q_psi_form(chart: MaxwellChart, psi) -> Form:
    ps = _as_antisym(chart, psi)
    out = Form.zero(chart, chart.n - 1)
    for m, n in chart.pairs():
        if not ps[(m, n)].is_zero():
            out = out + dy1(chart, n) * (ps[(m, n)] * Poly.var(aname(m)))
    return out


def make_Q_psi(psi, chart: Optional[MaxwellChart] = None) -> ObservableForm:
    """psi^{mu nu}(x) A_mu dy_nu, psi antisymmetric."""
    chart = chart or build_chart("ddw")
    ps = _as_antisym(chart, psi)
    _check_base_only(chart, ps.values(), "psi")
    return observable(Q_psi_form(chart, psi), "Q_psi",
                      {"psi": [[ps[(m, n)] for n in chart.idx] for m in chart.idx]})


def lift_zeta(X, Theta, chart: Optional[MaxwellChart] = None) -> Tuple[Multivector, ObservableForm]:
    """Generalized momentum P_zeta = zeta -| theta and its lifted field zeta-bar."""
    chart = chart or build_chart("ddw")
    Xv = _as_vector(chart, X, "X")
    Tv = _as_vector(chart, Theta, "Theta")
    _check_base_only(chart, Xv.values(), "X")
    _check_base_only(chart, Tv.values(), "Theta", allowed=[aname(m) for m in chart.idx])
    comps = {}
    for m in chart.idx:
        comps[xname(m)] = Xv[m]
        comps[aname(m)] = Tv[m]
    zeta = Multivector.from_components(chart, comps)
    form = contract(zeta, theta(chart))
    o = observable(form, "P_zeta", {"X": [Xv[m] for m in chart.idx], "Theta": [Tv[m] for m in chart.idx]})
    if o.xi is None:
        raise NotAlgebraicError("generalized momentum did not admit a lift")
    return o.xi, o


def zeta_bar_closed_form(chart: MaxwellChart, X, Theta) -> Multivector:
    """Closed form of the lifted field, used as an independent oracle.

    e-component:      -(e div X + Pi^{mu nu} d_nu Theta_mu)
    Pi^{b s}-comp.:   -Pi^{mu s} dTheta_mu/dA_b - Pi^{b s} div X + Pi^{b nu} d_nu X^s
    """
    Xv = _as_vector(chart, X, "X")
    Tv = _as_vector(chart, Theta, "Theta")
    div = ZERO
    for m in chart.idx:
        div = div + Xv[m].diff(xname(m))
    comps = {}
    for m in chart.idx:
        comps[xname(m)] = Xv[m]
        comps[aname(m)] = Tv[m]
    ec = -(Poly.var(ENERGY) * div)
    for m, n in chart.pairs():
        ec = ec - Poly.var(piname(m, n)) * Tv[m].diff(xname(n))
    comps[ENERGY] = ec
    for b, s in chart.pairs():
        c = -(Poly.var(piname(b, s)) * div)
        for m in chart.idx:
            c = c - Poly.var(piname(m, s)) * Tv[m].diff(aname(b))
        for n in chart.idx:
            c = c + Poly.var(piname(b, n)) * Xv[s].diff(xname(n))
        comps[piname(b, s)] = c
    return Multivector.from_components(chart, comps)


# -- algebraic and dynamical tests ------------------------------------------

def _tangent_to_constraints(xi: Multivector) -> bool:
    chart = xi.chart
    if not chart.constrained:
        return True
    comps = xi.components()
    for m, n in chart.pairs():
        s = comps.get(piname(m, n), ZERO) + comps.get(piname(n, m), ZERO)
        if not reduce_dirac(s, chart).is_zero():
            return False
    return True


def is_algebraic(xi: Multivector) -> bool:
    """d(Xi -| Omega) = 0, and Xi tangent to the constraint set on constrained charts."""
    chart = xi.chart
    if not _tangent_to_constraints(xi):
        return False
    return _reduce(dext(contract(xi, omega(chart))), chart).is_zero()


def dynamical_residual(o: ObservableForm, H: HamiltonianFn) -> Poly:
    """dH(Xi) on the antisymmetric momentum surface."""
    if o.xi is None:
        raise NotAlgebraicError("observable has no symplectomorphism")
    chart = o.chart
    dH = dext(Form.scalar(chart, H.poly))
    return contract(o.xi, dH).scalar_part().subs(dirac_substitution(chart))


def is_dynamical(o: ObservableForm, H: HamiltonianFn) -> bool:
    res = dynamical_residual(o, H).is_zero()
    o.dynamical = res and o.algebraic
    return o.dynamical


def combine(a: ObservableForm, b: ObservableForm, family: str = "sum") -> ObservableForm:
    xi = None if a.xi is None or b.xi is None else a.xi + b.xi
    o = ObservableForm(a.form + b.form, xi, family, {"parts": [a.family, b.family]})
    o.algebraic = o.verify()
    return o


def poincare_observable(X, Theta, chart: Optional[MaxwellChart] = None) -> ObservableForm:
    """P_zeta + Q^psi with psi_{mu nu} = d_nu Theta_mu - d_mu Theta_nu (indices lowered)."""
    chart = chart or build_chart("ddw")
    _, pz = lift_zeta(X, Theta, chart)
    Tv = _as_vector(chart, Theta, "Theta")
    psi = []
    for m in chart.idx:
        row = []
        for n in chart.idx:
            low = Tv[m].diff(xname(n)) - Tv[n].diff(xname(m))
            row.append(low * (chart.eta(m) * chart.eta(n)))
        psi.append(row)
    q = make_Q_psi(psi, chart)
    o = combine(pz, q, "poincare")
    o.params = {"X": pz.params["X"], "Theta": pz.params["Theta"], "psi": q.params["psi"]}
    return o


def is_killing(chart: MaxwellChart, X) -> bool:
    """X^mu(x) is a Killing field of the flat metric: d_mu X_nu + d_nu X_mu = 0."""
    Xv = _as_vector(chart, X, "X")
    for m, n in chart.pairs():
        s = Xv[n].diff(xname(m)) * chart.eta(n) + Xv[m].diff(xname(n)) * chart.eta(m)
        if not s.is_zero():
            return False
    return True



def dH_of_lift(X, Theta, ups=ZERO, ups_pi=None, chart: Optional[MaxwellChart] = None) -> Poly:
    """dH(zeta-bar + chi) on the antisymmetric surface, with chi = ups d/de + ups_pi^{mn} d/dPi^{mn}.

    zeta-bar is the solved lift of (X, Theta); H is the Maxwell DDW Hamiltonian.
    """
    from .legendre import hamiltonian

    chart = chart or build_chart("ddw")
    xi, _ = lift_zeta(X, Theta, chart)
    comps = {ENERGY: Poly.coerce(ups)}
    if ups_pi is not None:
        for i, m in enumerate(chart.idx):
            for j, n in enumerate(chart.idx):
                comps[piname(m, n)] = Poly.coerce(ups_pi[i][j])
    chi = Multivector.from_components(chart, comps)
    H = hamiltonian(chart)
    dH = dext(Form.scalar(chart, H.poly))
    return contract(xi + chi, dH).scalar_part().subs(dirac_substitution(chart))


def curl_theta(chart: MaxwellChart, Theta) -> List[List[Poly]]:
    """Upper-index d_mu Theta_nu - d_nu Theta_mu, the momentum shift that cancels the Theta terms of dH."""
    Tv = _as_vector(chart, Theta, "Theta")
    return [[(Tv[n].diff(xname(m)) - Tv[m].diff(xname(n))) * (chart.eta(m) * chart.eta(n))
             for n in chart.idx] for m in chart.idx]


# -- brackets ---------------------------------------------------------------

def _need_xi(*obs):
    for o in obs:
        if o.xi is None:
            raise NotAlgebraicError(f"{o.family} observable has no symplectomorphism")


def bracket_paths(a: ObservableForm, b: ObservableForm) -> Tuple[Form, Form, Form]:
    _need_xi(a, b)
    ch = a.chart
    Om = omega(ch)
    p1 = _reduce(contract_seq([a.xi, b.xi], Om), ch)
    p2 = _reduce(-contract(b.xi, dext(a.form)), ch)
    p3 = _reduce(contract(a.xi, dext(b.form)), ch)
    return p1, p2, p3


def poisson(a: ObservableForm, b: ObservableForm) -> Form:
    """{a, b} = Omega(Xi_a, Xi_b, ...) = -Xi_b -| da = Xi_a -| db."""
    p1, p2, p3 = bracket_paths(a, b)
    if not (p1 == p2 and p2 == p3):
        raise AssertionError("bracket computation paths disagree")
    return p1


def poisson_observable(a: ObservableForm, b: ObservableForm) -> ObservableForm:
    return observable(poisson(a, b), "bracket")


def jacobi_defect(a: ObservableForm, b: ObservableForm, c: ObservableForm) -> Tuple[Form, Form]:
    """Cyclic sum of nested brackets and d(Omega(Xi_a, Xi_b, Xi_c, ...))."""
    _need_xi(a, b, c)
    lhs = None
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        inner = poisson_observable(x, y)
        if not inner.algebraic:
            raise NotAlgebraicError("inner bracket is not an algebraic observable")
        term = poisson(inner, z)
        lhs = term if lhs is None else lhs + term
    ch = a.chart
    rhs = _reduce(dext(contract_seq([a.xi, b.xi, c.xi], omega(ch))), ch)
    return lhs, rhs


def external_bracket(H: HamiltonianFn, o: ObservableForm) -> Form:
    """{H dy, o} = -Xi(o) -| (dH ^ dy)."""
    _need_xi(o)
    ch = o.chart
    dH = dext(Form.scalar(ch, H.poly))
    return -contract(o.xi, wedge(dH, dy(ch)))


# -- dynamics through the external bracket ----------------------------------

def F_up(m: int, n: int) -> Poly:
    """Antisymmetric field-strength symbol F^{mn}."""
    if m == n:
        return ZERO
    if m < n:
        return Poly.var(f"F[{m},{n}]")
    return -Poly.var(f"F[{n},{m}]")


def dF_up(m: int, n: int, r: int) -> Poly:
    if m == n:
        return ZERO
    if m < n:
        return Poly.var(jet(f"F[{m},{n}]", r))
    return -Poly.var(jet(f"F[{n},{m}]", r))


def current(m: int) -> Poly:
    return Poly.var(f"J[{m}]")


def legendre_jets(chart: MaxwellChart):
    """Graph data: A jets as symbols, Pi = F^{mn} with its derivatives."""
    jets = {}
    for m in chart.idx:
        jets[aname(m)] = {xname(r): Poly.var(jet(aname(m), r)) for r in chart.idx}
    for m, n in chart.pairs():
        jets[piname(m, n)] = {xname(r): dF_up(m, n, r) for r in chart.idx}
    values = {piname(m, n): F_up(m, n) for m, n in chart.pairs()}
    return jets, values


def generic_phi(chart: MaxwellChart) -> List[Poly]:
    return [Poly.var(f"phi[{m}]") for m in chart.idx]


def generic_psi(chart: MaxwellChart) -> List[List[Poly]]:
    out = []
    for m in chart.idx:
        row = []
        for n in chart.idx:
            if m == n:
                row.append(ZERO)
            elif m < n:
                row.append(Poly.var(f"psi[{m},{n}]"))
            else:
                row.append(-Poly.var(f"psi[{n},{m}]"))
        out.append(row)
    return out


def dynamical_check(o: ObservableForm, H: HamiltonianFn, jets=None) -> List[Relation]:
    """Relations equivalent to pullback(d o) = pullback({H dy, o}) on the graph.

    The coefficient symbols phi[m] / psi[m,n] are collected so that one relation
    per independent component is returned.
    """
    ch = o.chart
    if jets is None:
        jets, values = legendre_jets(ch)
    else:
        jets, values = jets
    lhs = graph_pullback(dext(o.form), jets, values)
    rhs = graph_pullback(external_bracket(H, o), jets, values)
    vol = next(iter(dy(ch).terms))
    res = lhs.terms.get(vol, ZERO) - rhs.terms.get(vol, ZERO)
    lres = lhs.terms.get(vol, ZERO)
    names = [v for v in res.variables() if v.startswith(("phi[", "psi["))]
    if not names:
        return [Relation(lres, rhs.terms.get(vol, ZERO), o.family)]
    rels = []
    lparts = lres.collect(names)
    rparts = rhs.terms.get(vol, ZERO).collect(names)
    for mono in sorted(set(lparts) | set(rparts)):
        l = lparts.get(mono, ZERO)
        r = rparts.get(mono, ZERO)
        if (l - r).is_zero():
            continue
        label = "*".join(v for v, _ in mono)
        rels.append(Relation(l, r, f"{o.family}:{label}"))
    return rels


def F_lower(chart: MaxwellChart, m: int, n: int) -> Poly:
    return F_up(m, n) * (chart.eta(m) * chart.eta(n))


# -- copolarization obstruction ---------------------------------------------

def faraday_form(chart: MaxwellChart) -> Form:
    """pi = (1/2) Pi^{mu nu} dy_{mu nu}."""
    out = Form.zero(chart, chart.n - 2)
    for m, n in chart.pairs():
        if m != n:
            out = out + dy2(chart, m, n) * (Poly.var(piname(m, n)) * Fraction(1, 2))
    return out


def rho_derivative(chart: MaxwellChart, mu: int) -> Form:
    """The evaluated 2-form -dA_mu ^ d(pi) of the candidate copolarization."""
    return -wedge(Form.basis(chart, aname(mu)), dext(faraday_form(chart)))


@dataclass
class ObstructionWitness:
    X: Dict[str, Fraction]
    Xbar: Dict[str, Fraction]
    contraction: Form
    drho_X: Fraction
    drho_Xbar: Fraction
    grid: Tuple[int, ...]
    formula: Poly

    def to_json(self) -> dict:
        fmt = lambda d: {k: str(v) for k, v in sorted(d.items())}
        return {
            "X": fmt(self.X),
            "Xbar": fmt(self.Xbar),
            "contraction": self.contraction.to_json(),
            "drho1_X": str(self.drho_X),
            "drho1_Xbar": str(self.drho_Xbar),
            "grid": list(self.grid),
            "drho1_formula": str(self.formula),
        }


def _compile(p: Poly, names: Sequence[str]):
    """Fast evaluator for a polynomial in the given symbols (integer grid points)."""
    pos = {n: i for i, n in enumerate(names)}
    terms = [(c, [(pos[v], e) for v, e in m]) for m, c in p.items()]

    def f(vals):
        out = 0
        for c, mono in terms:
            t = c
            for i, e in mono:
                t = t * vals[i] ** e
            out += t
        return out
    return f


def obstruction_setup(pin_energy: bool = False):
    """Symbolic contraction (on the Dirac surface) and d rho_1 for paired 2-vectors."""
    from .hamilton import general_vector_field, th, ups, ups_pi

    chart = build_chart("maxwell-dirac", 2)
    fixed = {ups_pi(a, m, m): 0 for a in chart.idx for m in chart.idx}
    if pin_energy:
        fixed.update({ups(a): 0 for a in chart.idx})
    X = general_vector_field(chart, paired=True, values=fixed)
    contr = reduce_dirac(contract_seq(X.vectors, omega(chart)), chart)
    drho = contract_seq(X.vectors, rho_derivative(chart, 1)).scalar_part()
    free = [th(a, m) for a in chart.idx for m in chart.idx]
    if not pin_energy:
        free += [ups(a) for a in chart.idx]
    free += [ups_pi(a, m, n) for a in chart.idx for m, n in chart.pairs() if m != n]
    return chart, fixed, contr, drho, free


def copolar_obstruction(grids=((-1, 0, 1), (-2, -1, 0, 1, 2)), pin_energy: bool = False):
    """Two 2-vectors with equal contraction into Omega but different d rho_1 values.

    Returns None when no witness exists on any grid.
    """
    chart, fixed, contr, drho, free = obstruction_setup(pin_energy)
    keys = sorted(contr.terms)
    for k in keys:
        extra = [v for v in contr.terms[k].variables() if v not in free]
        if extra:
            raise ValueError(f"contraction depends on chart point through {extra}")
    sig_fns = [_compile(contr.terms[k], free) for k in keys]
    rho_fn = _compile(drho, free)
    for grid in grids:
        seen: Dict[tuple, Tuple[tuple, Fraction]] = {}
        for vals in itertools.product(grid, repeat=len(free)):
            sig = tuple(f(vals) for f in sig_fns)
            val = rho_fn(vals)
            hit = seen.get(sig)
            if hit is None:
                seen[sig] = (vals, val)
            elif hit[1] != val:
                from .hamilton import general_vector_field
                a = {**{k: Fraction(v) for k, v in zip(free, hit[0])}, **{k: Fraction(v) for k, v in fixed.items()}}
                b = {**{k: Fraction(v) for k, v in zip(free, vals)}, **{k: Fraction(v) for k, v in fixed.items()}}
                cX = reduce_dirac(contract_seq(general_vector_field(chart, True, a).vectors, omega(chart)), chart)
                cXb = reduce_dirac(contract_seq(general_vector_field(chart, True, b).vectors, omega(chart)), chart)
                if not cX == cXb:
                    raise AssertionError("witness contractions differ")
                return ObstructionWitness(a, b, cX, Fraction(hit[1]), Fraction(val), tuple(grid), drho)
    return None
