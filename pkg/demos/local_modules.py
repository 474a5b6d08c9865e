"""Build a quasi-free module, hide its shape, and recover it from the filtrations."""

from multicurves import (
    GF,
    detect_qf_type,
    dual_module,
    first_filtration,
    is_reflexive,
    make_quasi_free,
    quotient_module,
    random_twist,
    second_filtration,
    torsion_submodule,
)
from multicurves.truncated import RingElement

F = GF(101)
M = random_twist(make_quasi_free((2, 0, 1), F), seed=1)
print("presentation after twisting:", M.presentation)
print("G_i ranks:", first_filtration(M).ranks)
print("G^(i) ranks:", second_filtration(M).ranks)
print("detected type:", detect_qf_type(M))
print("dual has the same type:", detect_qf_type(dual_module(M)))
print("reflexive:", is_reflexive(M))

# A_2 / (x z) carries x-torsion
n = 2
xz = RingElement([F.x_power(1)], n, F) * RingElement.z_power(1, n, F)
T = quotient_module(n, [[xz]], 1, F)
print("A_2/(xz): G_i =", first_filtration(T).graded)
print("detected:", detect_qf_type(T))
torsion, torsion_free = torsion_submodule(T)
print("torsion part:", torsion.d_invariants, "torsion free:", torsion_free, "reflexive:", is_reflexive(T))
