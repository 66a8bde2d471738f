from fractions import Fraction

import pytest

from multisym.legendre import pairing
from multisym.maxwell_space import (
    FLAVORS, admissible_vectorfield_basis, build_chart, dext, in_degenerate_set, omega,
    premulti_energy, reduce_dirac, theta, aname, dy, dy1, piname, xname,
)
from multisym.symalg import Form, Multivector, Poly, contract, wedge


def test_chart_sizes():
    assert len(build_chart("ddw")) == 25
    assert len(build_chart("ld2")) == 10
    assert len(build_chart("premulti")) == 24
    md = build_chart("maxwell-dirac")
    assert len(md.constraints) == 10
    assert len(build_chart("ddw", 2)) == 9


def test_chart_validation_and_json():
    with pytest.raises(ValueError):
        build_chart("nope")
    with pytest.raises(ValueError):
        build_chart("ld2", 4)
    js = build_chart("maxwell-dirac").to_json()
    assert js["flavor"] == "maxwell-dirac" and js["n"] == 4
    assert js["coords"][0] == {"name": "x[0]", "role": "base", "indices": [0]}
    assert len(js["constraints"]) == 10


def test_theta_ddw_has_17_monomials():
    ch = build_chart("ddw")
    th = theta(ch)
    assert len(th.terms) == 17
    ref = dy(ch) * Poly.var("e")
    for m, n in ch.pairs():
        ref = ref + wedge(Form.basis(ch, aname(m)), dy1(ch, n)) * Poly.var(piname(m, n))
    assert th == ref


def test_theta_ld2_and_premulti():
    ch = build_chart("ld2")
    extra = theta(ch) - (dy(ch) * Poly.var("e"))
    assert extra.coeff(aname(1), aname(2)) == Poly.var("sigma")
    pm = build_chart("premulti")
    # (1/4) Pi_{mu nu} Pi^{mu nu}: 0i components carry -1/4, spatial ones +1/4
    e = premulti_energy(pm)
    assert e.coeff([(piname(0, 1), 2)]) == Fraction(-1, 4)
    assert e.coeff([(piname(1, 2), 2)]) == Fraction(1, 4)
    assert theta(pm).coeff(*[xname(m) for m in range(4)]) == e


@pytest.mark.parametrize("flavor", FLAVORS)
def test_omega_closed(flavor):
    assert dext(omega(build_chart(flavor))).is_zero()


def test_omega_ld2_sigma_term():
    ch = build_chart("ld2")
    assert omega(ch).coeff("sigma", aname(1), aname(2)) == Poly.const(1)


def test_admissible_basis():
    ch = build_chart("maxwell-dirac")
    basis = admissible_vectorfield_basis(ch)
    mom = [v for k, v in basis if k.startswith("D(Pi")]
    assert len(mom) == 6
    d12 = dict(basis)["D(Pi[A1,2])-D(Pi[A2,1])"]
    assert d12 == Multivector.basis(ch, piname(1, 2)) - Multivector.basis(ch, piname(2, 1))
    assert not any("Pi[A1,1]" in k for k, _ in basis)
    with pytest.raises(ValueError):
        admissible_vectorfield_basis(build_chart("ddw"))


def test_admissible_contraction_avoids_diagonal_momenta():
    ch = build_chart("maxwell-dirac")
    for _, v in admissible_vectorfield_basis(ch):
        f = reduce_dirac(contract(v, omega(ch)), ch)
        for key in f.terms:
            names = {ch.names[q] for q in key}
            assert not any(piname(m, m) in names for m in range(4))


def test_frame_contraction_matches_pairing():
    ch = build_chart("ld2")
    p = pairing(ch)
    Z = lambda m, n: Poly.var(f"d{n}(A[{m}])")
    ref = Poly.var("e") + Poly.var("sigma") * (Z(1, 1) * Z(2, 2) - Z(2, 1) * Z(1, 2))
    for m, n in ch.pairs():
        ref = ref + Poly.var(piname(m, n)) * Z(m, n)
    assert p == ref


def test_degenerate_set_membership():
    ch = build_chart("maxwell-dirac")
    assert in_degenerate_set({piname(0, 1): 2, piname(1, 0): -2}, ch)
    assert not in_degenerate_set({piname(0, 1): 2}, ch)
    assert not in_degenerate_set({piname(1, 1): 1}, ch)
