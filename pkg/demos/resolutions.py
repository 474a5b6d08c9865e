"""Ext periodicity, the Tor identity and kernels of bundle covers."""

from multicurves import (
    GF,
    LocalModule,
    bundle_cover_kernel,
    detect_qf_type,
    ext_module,
    make_quasi_free,
    random_twist,
    resolution,
    tor_over_ambient,
)

F = GF(101)
O1 = make_quasi_free((1, 0, 0), F)
print("resolution of O_1 over A_3:", [d[0, 0] for d in resolution(O1, 4)])
print("Ext^j(O_1, O_1):", [ext_module(O1, O1, j) for j in range(5)])
print("Ext^j(O_1, A_3):", [ext_module(O1, LocalModule.free(1, 3, F), j) for j in range(4)])

M = random_twist(make_quasi_free((1, 1, 0), F), seed=4)
print("Tor^1 over A_6:", tor_over_ambient(M, 6), "vs M:", M.d_invariants)
for r in (2, 3, 4):
    kernel = bundle_cover_kernel(M, r).kernel
    print(f"cover of rank {r}: kernel type {detect_qf_type(kernel)}, D-rank {kernel.d_rank}")
