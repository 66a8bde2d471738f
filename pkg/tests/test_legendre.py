import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from multisym.legendre import (
    DegeneracyError, Quotient, functional_det, hamiltonian, invert_ld2, ld2_dimensions,
    legendre_relations, pseudofiber_classify, maxwell_lagrangian,
)
from multisym.maxwell_space import build_chart, dirac_substitution, jet, aname, piname
from multisym.symalg import Poly

S = Poly.var("sigma")
Z = lambda m, n: Poly.var(jet(aname(m), n))        # d_n A_m


def det_oracle(m):
    """Fraction determinant by Gaussian elimination."""
    m = [row[:] for row in m]
    n, d = len(m), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return d


def test_ddw_multimomenta_are_F_up():
    ch = build_chart("ddw")
    for rel in legendre_relations(ch):
        name = rel.provenance.split()[-1]
        m, n = int(name[5]), int(name[1])             # d{n}(A[{m}])
        F = Z(n, m) - Z(m, n)                          # F_{mn} = d_m A_n - d_n A_m
        assert rel.lhs == F * (ch.eta(m) * ch.eta(n))
        assert rel.rhs == Poly.var(piname(m, n))


def test_ld2_relations_general_sigma():
    rels = {r.provenance.split()[-1]: r for r in legendre_relations(build_chart("ld2"))}
    r = rels[jet(aname(1), 1)]
    assert (r.rhs - r.lhs) == Poly.var(piname(1, 1)) + S * Z(2, 2)
    r = rels[jet(aname(2), 1)]
    assert r.lhs == Z(2, 1) - Z(1, 2) and r.rhs == Poly.var(piname(2, 1)) - S * Z(1, 2)


def test_ld2_relations_sigma_one():
    want = {
        piname(1, 1): -Z(2, 2), piname(2, 1): Z(2, 1), piname(1, 2): Z(1, 2), piname(2, 2): -Z(1, 1),
    }
    for r in legendre_relations(build_chart("ld2"), sigma=1):
        res = r.rhs - r.lhs
        (p,) = [v for v in res.variables() if v.startswith("Pi[")]
        assert res.subs({p: want[p]}).is_zero()


def test_functional_determinant():
    assert functional_det() == (2 - S) * S ** 3
    assert functional_det(1) == Poly.const(1)
    assert functional_det(0).is_zero() and functional_det(2).is_zero()


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_functional_determinant_against_numeric_oracle(s):
    rels = legendre_relations(build_chart("ld2"), sigma=s)
    zs = [jet(aname(b), a) for a in (1, 2) for b in (1, 2)]
    rows = []
    for r in rels:
        res = r.rhs - r.lhs           # = pi - f(Z)
        (p,) = [v for v in res.variables() if v.startswith("Pi[")]
        rows.append((p, [-res.diff(z).const_value() for z in zs]))
    rows.sort()
    assert det_oracle([r for _, r in rows]) == (2 - s) * s ** 3


def test_invert_ld2_round_trip():
    inv = invert_ld2()
    ch = build_chart("ld2")
    # pi in terms of velocities, then velocities back
    pis = {}
    for r in legendre_relations(ch):
        res = r.rhs - r.lhs
        (p,) = [v for v in res.variables() if v.startswith("Pi[")]
        pis[p] = Poly.var(p) - res
    for name, q in inv.items():
        back = q.subs(pis)
        assert back.equals(Quotient.of(Poly.var(name)))
    want = Quotient(Poly.var(piname(1, 2)) + (1 - S) * Poly.var(piname(2, 1)), S * (2 - S))
    assert inv[jet(aname(1), 2)].equals(want)
    assert inv[jet(aname(2), 2)].equals(Quotient(-Poly.var(piname(1, 1)), S))


@pytest.mark.parametrize("s", [0, 2])
def test_degenerate_sigma(s):
    with pytest.raises(DegeneracyError) as err:
        invert_ld2(s)
    assert f"sigma={s}" in str(err.value)
    with pytest.raises(DegeneracyError):
        hamiltonian(build_chart("ld2"), sigma=s)


def test_ddw_hamiltonian_antisymmetric_dependence():
    ch = build_chart("maxwell-dirac")
    H = hamiltonian(ch).poly
    red = H.subs(dirac_substitution(ch))
    ref = Poly.var("e")
    for m, n in itertools.combinations(range(4), 2):
        ref = ref - Poly.var(piname(m, n)) ** 2 * Fraction(ch.eta(m) * ch.eta(n), 2)
    assert red == ref


def test_hamiltonian_on_graph_equals_pairing_minus_lagrangian():
    """On Pi = F (antisymmetric), H = <p, v> - L with v the antisymmetric half of the jets."""
    ch = build_chart("ddw")
    H = hamiltonian(ch).poly
    half = {(m, n): (Z(m, n) - Z(n, m)) * Fraction(1, 2) for m in range(4) for n in range(4)}
    sub = {}
    for m, n in ch.pairs():
        sub[piname(m, n)] = (Z(n, m) - Z(m, n)) * (ch.eta(m) * ch.eta(n))
    L = maxwell_lagrangian(ch).subs({jet(aname(m), n): half[(m, n)] for m, n in ch.pairs()})
    pv = Poly.var("e")
    for m, n in ch.pairs():
        pv = pv + sub[piname(m, n)] * half[(m, n)]
    assert H.subs(sub) == pv - L


def test_ld2_hamiltonian_two_paths():
    ch = build_chart("ld2")
    for s in (1, Fraction(1, 2), 3, -1):
        assert hamiltonian(ch).at_sigma(s).poly == hamiltonian(ch, sigma=s).poly


def test_dimensions_and_strata():
    dims = ld2_dimensions()
    assert dims["Lambda^n T*_q Z"] == 6 and dims["Lambda^n T*Z"] == 10
    assert dims["P_q"] == 2 and dims["P_q^h"] == 1
    p = lambda **kw: {piname(int(k[1]), int(k[2])): v for k, v in kw.items() if k.startswith("p")} | \
        ({"sigma": kw["s"]} if "s" in kw else {}) | ({"e": kw["e"]} if "e" in kw else {})
    assert pseudofiber_classify(p(e=3, p11=4, p12=-1, s=1)).name == "regular"
    st0 = pseudofiber_classify(p(s=0, p11=0, p22=0, p12=5, p21=-5))
    assert st0.name == "sigma=0" and st0.member
    assert not pseudofiber_classify(p(s=0, p11=1)).member
    assert pseudofiber_classify(p(s=2, p12=1, p21=1)).name == "sigma=2"
    bad = pseudofiber_classify(p(s=2, p12=1, p21=0))
    assert bad.name == "not-in-Pq" and not bad.member
    assert bad.to_json()["dims"] == {"P_q": 2, "P_q^h": 1}
