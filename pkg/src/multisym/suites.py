"""Named verification suites behind `multisym verify`."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import fieldsim as fs
from .hamilton import ddw_failure_residuals, derive, maxwell_expected
from .legendre import Quotient, functional_det, hamiltonian
from .maxwell_space import ENERGY, SIGMA, build_chart, dy1, omega, piname
from .observables import (
    copolar_obstruction, curl_theta, dH_of_lift, generic_phi, generic_psi, is_algebraic,
    jacobi_defect, lift_zeta, make_P_phi, make_Q_psi, poisson,
)
from .sampling import random_antisym, random_killing, random_theta, random_vector
from .symalg import (
    MINKOWSKI4, ZERO, Form, Poly, contract, dext, eps_lower, eps_upper, hodge2, kron, wedge,
)


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class Report:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "checks": [c.to_json() for c in self.checks]}


def _run(name: str, fn: Callable[[], Tuple[bool, str]]) -> Check:
    try:
        ok, detail = fn()
    except Exception as exc:            # a crashing check is a failing check
        return Check(name, "fail", f"{type(exc).__name__}: {exc}")
    return Check(name, "pass" if ok else "fail", detail)


P = Poly.var


# -- symbolic ---------------------------------------------------------------

def _ddw_hamiltonian():
    ch = build_chart("ddw")
    ref = P(ENERGY)
    for (m, n), (r, s) in itertools.product(ch.pairs(), repeat=2):
        if m == r and n == s:
            ref = ref - P(piname(m, n)) * P(piname(r, s)) * Fraction(ch.eta(m) * ch.eta(n), 4)
    got = hamiltonian(ch).poly
    return got == ref, str(got)


def _ld2_reference():
    s = Quotient.of(P(SIGMA))
    two_minus = Quotient.of(2 - P(SIGMA))
    oo = P(piname(1, 2)) ** 2
    bb = P(piname(2, 1)) ** 2
    ob = P(piname(1, 2)) * P(piname(2, 1))
    bar = P(piname(1, 1)) * P(piname(2, 2))
    inv = lambda q: Quotient(q.den, q.num)
    return (inv(s) * Quotient.of(-bar)
            + inv(s * two_minus) * Quotient.of((oo + bb) * Fraction(1, 2))
            + inv(two_minus * two_minus) * Quotient.of((P(SIGMA) - 3) * ob)
            + inv(s * two_minus * two_minus) * Quotient.of(ob * 2))


def _ld2_hamiltonian():
    ch = build_chart("ld2")
    H = hamiltonian(ch)
    general = H.quotient - Quotient.of(P(ENERGY))
    at1 = H.at_sigma(1).poly
    direct = hamiltonian(ch, sigma=1).poly
    ref1 = _ld2_reference().subs({SIGMA: 1}).as_poly()
    ok = general.equals(_ld2_reference()) and at1 == direct and at1 - P(ENERGY) == ref1
    return ok, f"H(sigma=1) = {at1}"


def _maxwell_recovery():
    ch = build_chart("maxwell-dirac")
    got = sorted(str(r.normalized()) for r in derive(ch).relations)
    want = sorted(str(p.monic()) for p in maxwell_expected(ch))
    return got == want, f"{len(got)} relations"


def _ddw_failure():
    res = ddw_failure_residuals(derive(build_chart("ddw")))
    return bool(res) and all(not r.is_zero() for r in res), f"{len(res)} symmetric-part rows"


def _ld2_relations():
    sysm = derive(build_chart("ld2"), sigma=1)
    return len(sysm.relations) == 6, f"{len(sysm.relations)} rows"


def _bracket_table():
    ch = build_chart("ddw")
    phi = generic_phi(ch)
    psi = generic_psi(ch)
    Pp, Qq = make_P_phi(phi, ch), make_Q_psi(psi, ch)
    ref = Form.zero(ch, ch.n - 1)
    for m, n in ch.pairs():
        ref = ref - dy1(ch, n) * (psi[ch.idx.index(m)][ch.idx.index(n)] * phi[ch.idx.index(m)])
    ok = poisson(Pp, Pp).is_zero() and poisson(Qq, Qq).is_zero() and poisson(Qq, Pp) == ref
    return ok, "{Q,Q} = {P,P} = 0, {Q,P} = -psi phi dy"


def _determinant():
    s = P(SIGMA)
    return functional_det() == (2 - s) * s ** 3, str(functional_det())


def _epsilon():
    bad = 0
    for a, b, l, k in itertools.product(range(4), repeat=4):
        tot = sum(eps_lower((a, b, r, s), MINKOWSKI4) * eps_upper((l, k, r, s), MINKOWSKI4)
                  for r in range(4) for s in range(4))
        if tot != -2 * (kron(l, a) * kron(k, b) - kron(l, b) * kron(k, a)):
            bad += 1
    return bad == 0, f"{bad} failing index choices"


def _hodge():
    ch = build_chart("ddw")
    xs = [f"x[{m}]" for m in range(4)]
    F = Form.zero(ch, 2)
    sq = ZERO
    for m, n in itertools.combinations(range(4), 2):
        f = P(f"F[{m},{n}]")
        F = F + Form.basis(ch, xs[m], xs[n]) * f
        sq = sq + f * f * (2 * MINKOWSKI4.signature[m] * MINKOWSKI4.signature[n])
    lhs = wedge(F, hodge2(F))
    rhs = Form.basis(ch, *xs) * (sq * Fraction(-1, 2))
    return lhs == rhs, "F ^ *F = -(1/2) F F dy"


def _lift_samples(seed: int, count: int):
    rng = random.Random(seed)
    ch = build_chart("ddw")
    for _ in range(count):
        X = random_vector(rng, ch, degree=2, terms=2)
        T = random_theta(rng, ch, degree=2, terms=2)
        xi, o = lift_zeta(X, T, ch)
        if not (dext(o.form) == -contract(xi, omega(ch)) and is_algebraic(xi)):
            return False, f"X={X} Theta={T}"
    return True, f"{count} samples"


def _poincare(seed: int, count: int):
    rng = random.Random(seed)
    ch = build_chart("ddw")
    for _ in range(count):
        X = random_killing(rng, ch)
        T = random_theta(rng, ch, with_fields=False, degree=2, terms=2)
        r = dH_of_lift(X, T, 0, curl_theta(ch, T), ch)
        if not r.is_zero():
            return False, str(r)
    x = [P(f"x[{m}]") for m in range(4)]
    viol = dH_of_lift([x[1], ZERO, ZERO, ZERO], [ZERO] * 4, 0, None, ch)
    return not viol.is_zero(), f"{count} samples; violating X^0 = x^1 gives {viol}"


def _jacobi(seed: int, count: int):
    rng = random.Random(seed)
    ch = build_chart("ddw")
    for _ in range(count):
        a = make_Q_psi(random_antisym(rng, ch, degree=1, terms=2), ch)
        b = make_P_phi(random_vector(rng, ch, degree=1, terms=2), ch)
        c = make_P_phi(random_vector(rng, ch, degree=1, terms=2), ch)
        lhs, rhs = jacobi_defect(a, b, c)
        if not lhs == rhs:
            return False, "lhs != rhs"
    return True, f"{count} triples"


def symbolic_suite(seed: int = 0, quick: bool = False) -> Report:
    n = 5 if quick else 50
    checks = [
        ("ddw-hamiltonian", _ddw_hamiltonian),
        ("ld2-hamiltonian", _ld2_hamiltonian),
        ("maxwell-recovery", _maxwell_recovery),
        ("ddw-failure-residual", _ddw_failure),
        ("ld2-relations", _ld2_relations),
        ("bracket-table", _bracket_table),
        ("functional-determinant", _determinant),
        ("epsilon-identity", _epsilon),
        ("hodge-identity", _hodge),
        ("lift-zeta", lambda: _lift_samples(seed, n)),
        ("poincare-residual", lambda: _poincare(seed, min(n, 10))),
        ("jacobi", lambda: _jacobi(seed, 2 if quick else 10)),
    ]
    return Report("symbolic", [_run(k, f) for k, f in checks])


# -- numeric ----------------------------------------------------------------

def _convergence(ns, T=0.5):
    errs, cres = [], []
    for n in ns:
        g = fs.Grid.cube(n)
        steps = int(round(T / g.dt))
        traj = fs.trajectory(fs.plane_wave(g), steps)
        errs.append(fs.l2_error_plane_wave(traj[-1]))
        cres.append(fs.constraint_residual(traj[-4:]))
    er = [errs[i] / errs[i + 1] for i in range(len(ns) - 1)]
    cr = [cres[i] / cres[i + 1] for i in range(len(ns) - 1)]
    ok = all(3 <= r <= 5 for r in er + cr)
    return ok, "l2 ratios " + ", ".join(f"{r:.3f}" for r in er) + "; constraint ratios " + \
        ", ".join(f"{r:.3f}" for r in cr)


def _drift(n, steps=100):
    s = fs.plane_wave(fs.Grid.cube(n))
    e0 = fs.energy(s)
    e1 = fs.energy(fs.evolve(s, steps))
    d = abs(e1 - e0) / e0
    return d < 1e-6, f"relative drift {d:.2e}"


def _smeared(n):
    f1 = lambda x, y, z: np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y) + np.sin(2 * np.pi * z)
    f2 = lambda x, y, z: np.cos(2 * np.pi * x) * np.cos(2 * np.pi * y) + np.cos(2 * np.pi * z)
    got = fs.smeared_bracket(f1, f2, 3, 2, n)
    want = fs.smeared_kernel(f1, f2, 3, 2, n)
    ee = fs.smeared_bracket(f1, f2, 1, 2, n, "EE")
    bb = fs.smeared_bracket(f1, f2, 1, 2, n, "BB")
    rel = abs(got - want) / abs(want)
    return rel < 1e-6 and ee == 0 and bb == 0, f"relative {rel:.2e}"


def _slices(n):
    g = fs.Grid.cube(n)
    traj = fs.trajectory(fs.plane_wave(g, uniform_e=(0.3, 0.0, 0.0)), 20)
    e = fs.slice_invariance("energy", traj)
    p = fs.slice_invariance("P_phi", traj, phi=[0, 1, 2, -1])
    return e.delta < 1e-6 and p.delta < 1e-6, f"energy {e.delta:.2e}, P_phi {p.delta:.2e}"


def _flatness(n):
    x = np.arange(n) / n
    X, Y = np.meshgrid(x, x, indexing="ij")
    A1 = np.sin(2 * np.pi * Y) + 0.3 * np.cos(4 * np.pi * X)
    A2 = np.cos(2 * np.pi * X) * np.sin(2 * np.pi * Y)
    rep = fs.ld2_flatness(A1, A2, flux=0.5)
    return rep.final_deviation < 1e-10, f"history {[f'{h:.2e}' for h in rep.history]}"


def numeric_suite(seed: int = 0, quick: bool = False) -> Report:
    ns = (8, 16, 32) if quick else (16, 32, 64)
    ref = 16 if quick else 32
    checks = [
        ("plane-wave-convergence", lambda: _convergence(ns)),
        ("energy-drift", lambda: _drift(ref)),
        ("smeared-brackets", lambda: _smeared(ref)),
        ("slice-independence", lambda: _slices(ref)),
        ("ld2-flatness", lambda: _flatness(32 if quick else 128)),
    ]
    return Report("numeric", [_run(k, f) for k, f in checks])


# -- obstruction ------------------------------------------------------------

def obstruction_suite(seed: int = 0, quick: bool = False) -> Tuple[Report, dict]:
    w = copolar_obstruction(grids=((-1, 0, 1),))
    if w is None:
        return Report("obstruction", [Check("witness", "fail", "no witness on {-1,0,1}")]), {}
    ok = w.drho_X != w.drho_Xbar
    detail = f"d rho_1: {w.drho_X} vs {w.drho_Xbar} on grid {list(w.grid)}"
    return Report("obstruction", [Check("witness", "pass" if ok else "fail", detail)]), w.to_json()


SUITES = ("symbolic", "numeric", "obstruction")


def run_suite(name: str, seed: int = 0, quick: bool = False) -> Tuple[Report, Dict]:
    if name == "symbolic":
        return symbolic_suite(seed, quick), {}
    if name == "numeric":
        return numeric_suite(seed, quick), {}
    if name == "obstruction":
        return obstruction_suite(seed, quick)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
