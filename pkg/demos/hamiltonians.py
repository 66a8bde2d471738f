"""Hamiltonian functions and field equations on the three charts."""
from fractions import Fraction

from multisym import build_chart, derive, functional_det, hamiltonian
from multisym.hamilton import recovers_maxwell
from multisym.legendre import DegeneracyError, invert_ld2

print("ddw:", hamiltonian(build_chart("ddw")))
print("ld2, general sigma:", hamiltonian(build_chart("ld2")))
print("ld2, sigma = 1:", hamiltonian(build_chart("ld2"), sigma=1))
print("functional determinant:", functional_det())

for s in (Fraction(1, 2), 2):
    try:
        inv = invert_ld2(s)
        print(f"sigma={s}: d2 A1 =", inv["d2(A[1])"])
    except DegeneracyError as exc:
        print(f"sigma={s}: {exc}")

sysm = derive(build_chart("maxwell-dirac"))
print(sysm.render())
print("Maxwell recovered:", recovers_maxwell(sysm))
print(derive(build_chart("ddw")).notes[0])
