"""Closed-form invariants of a complete type, numerically and with a formal degL."""

from multicurves import (
    DEG_L,
    CompleteType,
    CurveContext,
    RigidParams,
    dual_type,
    end_invariants,
    moduli_dim,
    rank_deg_slope,
    rigid_from_params,
    second_invariants,
)

ctx = CurveContext(n=2, g=2, degL=-1)
ct = CompleteType(r=(2, 1), d=(0, 0))
print("R, Deg, slope:", rank_deg_slope(ct))
print("second filtration:", second_invariants(ct, ctx))
print("dual type:", dual_type(ct, ctx))
print("End:", end_invariants(ct, ctx))

# the same formulas as polynomials in degL
sym = CurveContext.symbolic(n=3)
rigid = rigid_from_params(RigidParams(a=1, k=1, epsilon=0, delta=0), sym)
print("rigid type in degL:", rigid)
print("its second filtration:", second_invariants(rigid, sym).e)
print("dual of the dual is the type itself:", dual_type(dual_type(rigid, sym), sym).same_as(rigid))

# moduli dimension for a few genera
for g in range(4):
    print(f"g={g}: dim =", moduli_dim(1, 1, CurveContext(3, g, -2)))
print("symbolic:", moduli_dim(1, 1, CurveContext(3, 2, DEG_L)))
