from __future__ import annotations

import random

from hypothesis import given, strategies as st

from multicurves.dvr import QQ, GF, Lattice, Scalar
from multicurves.modules import random_ring_element
from multicurves.truncated import AMatrix, RingElement, flat_rows, kernel_over_A


def z(k, n, field=QQ):
    return RingElement.z_power(k, n, field)


def test_ring_truncation():
    a = RingElement([1, 1], 2)
    assert (a * a).coeffs == RingElement([1, 2], 2).coeffs  # (1+z)^2 = 1+2z mod z^2
    assert not (z(1, 2) * z(1, 2))
    assert z(1, 3).z_order() == 1


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_unit_inverse(seed, n):
    u = random_ring_element(random.Random(seed), n, QQ, "unit")
    assert u.is_unit()
    assert u * u.inverse() == RingElement.one(n)


def _kernel_dimension(M: AMatrix) -> int:
    K = kernel_over_A(M, minimal=False)
    n = M.n
    flat = [w for c in K.columns() for k in range(n) for w in [_shifted(c, k, n)]]
    return Lattice(flat, n * M.cols, M.field).rank


def _shifted(col, k, n):
    from multicurves.truncated import flatten_vector, shift

    return shift(flatten_vector(col, n, col[0].field), n, len(col), k)


def test_kernel_of_multiplication_by_z():
    M = AMatrix([[z(1, 2)]], 2)
    K = kernel_over_A(M)
    assert K.shape == (1, 1)
    assert K[0, 0].z_order() == 1 and K[0, 0].coeffs[1].is_unit()


def test_kernel_of_identity_is_zero():
    assert kernel_over_A(AMatrix.identity(1, 3)).cols == 0


def test_kernel_of_row_z_x():
    x = RingElement([Scalar([0, 1])], 2)
    M = AMatrix([[z(1, 2), x]], 2)
    K = kernel_over_A(M)
    assert (M @ K) == AMatrix.zeros(1, K.cols, 2)
    # contains (x, -z) and (z, 0)
    assert _kernel_dimension(M) == 2
    lat = Lattice([_shifted(c, k, 2) for c in K.columns() for k in range(2)], 4, QQ)
    from multicurves.truncated import flatten_vector

    assert lat.contains(flatten_vector([x, -z(1, 2)], 2, QQ))
    assert lat.contains(flatten_vector([z(1, 2), RingElement.zero(2)], 2, QQ))


@given(st.integers(0, 10**6), st.sampled_from([QQ, GF(101)]))
def test_kernel_rank_nullity(seed, field):
    rng = random.Random(seed)
    n, p, q = rng.randint(1, 3), rng.randint(1, 2), rng.randint(1, 3)
    M = AMatrix(
        [[random_ring_element(rng, n, field, rng.choice(["unit", "maximal", "any"])) for _ in range(q)] for _ in range(p)],
        n,
        field,
        q,
    )
    K = kernel_over_A(M)
    assert M @ K == AMatrix.zeros(p, K.cols, n, field)
    image_rank = Lattice([[r[j] for r in flat_rows(M)] for j in range(n * q)], n * p, field).rank
    assert _kernel_dimension(M) + image_rank == n * q
