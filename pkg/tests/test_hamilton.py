import itertools
from fractions import Fraction

import pytest

from multisym.hamilton import (
    GeneralVectorField, contract_general, ddw_failure_residuals, derive, derive_premulti,
    general_vector_field, ld2_flatness_symbolic, maxwell_expected, present, recovers_maxwell,
    reduce_jets_dirac,
)
from multisym.legendre import hamiltonian
from multisym.maxwell_space import (
    build_chart, dext, dy, jet, omega, aname, piname, xname, ENERGY,
)
from multisym.symalg import Form, Multivector, Poly, contract_seq

P = Poly.var


def test_maxwell_dirac_relations_exact():
    ch = build_chart("maxwell-dirac")
    sysm = derive(ch)
    got = sorted(str(r.normalized()) for r in sysm.relations)
    want = sorted(str(p.monic()) for p in maxwell_expected(ch))
    assert got == want and len(got) == 10
    assert recovers_maxwell(sysm)


def test_maxwell_expected_content():
    ch = build_chart("maxwell-dirac")
    exp = maxwell_expected(ch)
    # F_{01} = eta_0 eta_1 Pi^{01} = -Pi^{01}
    f01 = (-P(piname(0, 1)) - (P(jet(aname(1), 0)) - P(jet(aname(0), 1)))).monic()
    assert f01 in exp
    div1 = (P(jet(piname(1, 0), 0)) - P(jet(piname(0, 1), 0)) + P(jet(piname(1, 2), 2))
            - P(jet(piname(2, 1), 2)) + P(jet(piname(1, 3), 3)) - P(jet(piname(3, 1), 3))).monic()
    assert div1 in exp


def test_ddw_rows_and_failure():
    sysm = derive(build_chart("ddw"))
    rows = sysm.by_provenance("d(Pi[")
    assert len(rows) == 16
    for m, n in itertools.product(range(4), repeat=2):
        (r,) = [x for x in rows if x.provenance == f"d({piname(m, n)})"]
        sign = -1 if (m == 0) == (n == 0) else 1     # eta_m eta_n = -sign
        assert r.lhs == P(piname(m, n)) * Fraction(1, 2)
        assert r.rhs == P(jet(aname(m), n)) * sign
    res = ddw_failure_residuals(sysm)
    assert len(res) == 16 and all(not p.is_zero() for p in res)
    assert sysm.notes and "symmetric part" in sysm.notes[0]
    assert not recovers_maxwell_like(sysm)


def recovers_maxwell_like(sysm):
    ch = build_chart("maxwell-dirac")
    got = {reduce_jets_dirac(r.residual, ch).monic() for r in sysm.relations}
    return all(p in got for p in maxwell_expected(ch))


def test_ld2_rows():
    sysm = derive(build_chart("ld2"), sigma=1)
    assert len(sysm.relations) == 6
    assert len(sysm.by_provenance("d(A[")) == 2
    assert len(sysm.by_provenance("d(Pi[")) == 4
    want = {
        piname(1, 1): -P(jet(aname(2), 2)), piname(2, 2): -P(jet(aname(1), 1)),
        piname(1, 2): P(jet(aname(1), 2)), piname(2, 1): P(jet(aname(2), 1)),
    }
    for r in sysm.by_provenance("d(Pi["):
        (p,) = [v for v in r.residual.variables() if v.startswith("Pi[")]
        assert r.residual.subs({p: want[p]}).is_zero()


def test_ld2_flatness_symbolic_proportional():
    out = ld2_flatness_symbolic(derive(build_chart("ld2"), sigma=1))
    d1, d2 = out["dF12"]
    for row in out["div_rows"]:
        # each divergence row is a multiple of d_1 F_12 or d_2 F_12
        assert any((row * 1 + d * c).is_zero() for d in (d1, d2) for c in (1, -1))


def test_premulti_agrees_with_maxwell_dirac():
    pm = derive_premulti()
    assert pm.relations and recovers_maxwell(pm)
    with pytest.raises(ValueError):
        derive_premulti(build_chart("ddw"))


def test_base_frame_gives_de():
    ch = build_chart("ddw")
    X = GeneralVectorField(ch, tuple(Multivector.basis(ch, xname(m)) for m in ch.idx), False)
    assert contract_general(X, omega(ch)) == Form.basis(ch, ENERGY)


def test_general_vector_field_contraction_matches_sequence():
    ch = build_chart("ld2")
    X = general_vector_field(ch)
    assert contract_general(X, omega(ch)) == contract_seq(X.vectors, omega(ch))


def test_present_orientation():
    r = present(P(piname(0, 1)) - P(jet(aname(1), 0)), "t")
    assert r.lhs == P(piname(0, 1)) and r.rhs == P(jet(aname(1), 0))
    r = present(-P(piname(0, 1)) + P(jet(aname(1), 0)), "t")
    assert r.lhs == P(piname(0, 1))


def test_derive_uses_given_hamiltonian():
    ch = build_chart("maxwell-dirac")
    sysm = derive(ch, hamiltonian(ch))
    assert sysm.hamiltonian.startswith("e")
    assert dext(omega(ch)).is_zero() and dy(ch).degree == 4
