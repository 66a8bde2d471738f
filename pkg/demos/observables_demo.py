"""Poisson brackets of the P and Q families, a lifted generalized momentum and the copolar witness."""
from multisym import build_chart, copolar_obstruction, lift_zeta, make_P_phi, make_Q_psi, poisson
from multisym.observables import generic_phi, generic_psi
from multisym.symalg import Poly

ch = build_chart("ddw")
Pp = make_P_phi(generic_phi(ch), ch)
Qq = make_Q_psi(generic_psi(ch), ch)
print("{P,P} =", poisson(Pp, Pp))
print("{Q,Q} =", poisson(Qq, Qq))
print("{Q,P} =", poisson(Qq, Pp))

x = [Poly.var(f"x[{m}]") for m in range(4)]
A = [Poly.var(f"A[{m}]") for m in range(4)]
# boost generator along x^1 with a field-dependent Theta
X = [x[1], x[0], 0, 0]
Theta = [0, A[0], 0, x[2] * x[2]]
xi, o = lift_zeta(X, Theta, ch)
print("P_zeta =", o.form)
print("zeta-bar =", xi)

w = copolar_obstruction(grids=((-1, 0, 1),))
print("equal contractions, d rho_1:", w.drho_X, "vs", w.drho_Xbar)
