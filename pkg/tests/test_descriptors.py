from __future__ import annotations

import warnings
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from multicurves.descriptors import (
    DEG_L,
    CompleteType,
    CurveContext,
    QFType,
    RigidParams,
    dual_type,
    end_invariants,
    euler_char,
    generalized_rank,
    kernel_descriptor,
    moduli_dim,
    qf_from_ranks,
    rank_deg_slope,
    ranks_from_qf,
    rigid_from_params,
    rigid_params_from,
    rigid_total_degree,
    same_degree,
    second_invariants,
    validate,
)
from multicurves.errors import NotMonotone, NotRigid, RankTooSmall, ZeroRank
from multicurves.campaigns import enumerate_types

L = DEG_L


@st.composite
def complete_types(draw, n_max=6, r_max=4):
    n = draw(st.integers(1, n_max))
    r = sorted(draw(st.lists(st.integers(0, r_max), min_size=n, max_size=n)), reverse=True)
    d = draw(st.lists(st.integers(-8, 8), min_size=n, max_size=n))
    return CompleteType(tuple(r), tuple(d))


# -- ranks and types -----------------------------------------------------------------


def test_generalized_rank_examples():
    assert generalized_rank((0, 0, 1)) == 3
    assert generalized_rank((1, 1, 0)) == 3
    assert generalized_rank((2, 0, 1)) == 5


def test_rank_conversions():
    assert ranks_from_qf((1, 1, 0)) == (2, 1, 0)
    assert qf_from_ranks((2, 1, 1)) == QFType((1, 0, 1))
    with pytest.raises(NotMonotone):
        qf_from_ranks((1, 2))


@pytest.mark.parametrize("n", range(1, 6))
def test_rank_round_trip(n):
    for t in enumerate_types(n, 8):
        assert qf_from_ranks(ranks_from_qf(t)) == QFType(t)
        assert sum(ranks_from_qf(t)) == generalized_rank(t)


def test_rank_deg_slope():
    assert rank_deg_slope(CompleteType((2, 1), (0, 0))) == (3, 0, Fraction(0))
    assert rank_deg_slope(CompleteType((1, 1, 1), (0, -1, -2))) == (3, -3, Fraction(-1))
    with pytest.raises(ZeroRank):
        rank_deg_slope(CompleteType((0, 0), (0, 0)))
    R, Deg, slope = rank_deg_slope(CompleteType((2, 1), (L, 0)))
    assert R == 3 and same_degree(slope, L / 3)


# -- second invariants ------------------------------------------------------------


def test_second_invariants_example():
    si = second_invariants(CompleteType((2, 1), (0, 0)), CurveContext(2, 2, -1))
    assert si.s == (2, 1) and si.e == (-1, 1)


def test_second_invariants_trivial_line_bundle():
    ct = CompleteType((1, 1, 1), (0, -1, -2))
    assert second_invariants(ct, CurveContext(3, 0, 0)).e == ct.d


def test_second_invariants_locally_free_reverse():
    # for a bundle, G^{(i+1)} = G_{n-1-i}
    n, a = 4, 2
    ct = CompleteType((a,) * n, tuple(3 + i * a * L for i in range(n)))
    e = second_invariants(ct, CurveContext.symbolic(n)).e
    assert all(same_degree(e[i], ct.d[n - 1 - i]) for i in range(n))


@given(complete_types(n_max=8))
def test_second_invariants_identities(ct):
    si = second_invariants(ct, CurveContext.symbolic(ct.n))
    assert same_degree(sum(si.e), sum(ct.d))
    for j in range(ct.n - 1):
        lhs = si.e[j + 1] - si.e[j] - (ct.d[j + 1] - ct.d[j])
        assert same_degree(lhs, (j * ct.r[j] - (j + 2) * ct.r[j + 1]) * L)


# -- duality ---------------------------------------------------------------------


def test_dual_examples():
    line = CompleteType((1, 1, 1), (0, -1, -2))
    du = dual_type(line, CurveContext(3, 0, -1))
    assert du.d == (2, 1, 0) and sum(du.d) == 3
    assert dual_type(CompleteType((2, 1), (0, 0)), CurveContext(2, 0, -1)).d == (1, -1)


@given(complete_types())
def test_dual_involution_and_negation(ct):
    ctx = CurveContext.symbolic(ct.n)
    du = dual_type(ct, ctx)
    assert dual_type(du, ctx).same_as(ct)
    assert same_degree(sum(du.d), -sum(ct.d))
    assert all(same_degree(a, -b) for a, b in zip(second_invariants(du, ctx).e, ct.d))


def test_dual_with_twist_line_bundle():
    # for a line bundle on C_n the true dual is again a line bundle with G_j(E^v) = G_0(E)^* L^j
    n = 3
    ct = CompleteType((1,) * n, tuple(5 + i * L for i in range(n)))
    du = dual_type(ct, CurveContext.symbolic(n), include_twist=True)
    assert all(same_degree(du.d[j], -5 + j * L) for j in range(n))


# -- End, chi, moduli ----------------------------------------------------------------


def test_end_invariants():
    assert end_invariants(CompleteType((2, 1), (0, 0)), CurveContext(2, 0, -1)) == (5, -2)
    assert end_invariants(CompleteType((2, 1, 1), (0, 0, 0)), CurveContext(3, 0, -1)) == (6, -5)
    R, Deg = end_invariants(CompleteType((1,) * 4, (0,) * 4), CurveContext.symbolic(4))
    assert R == 4 and same_degree(Deg, 6 * L)


def test_euler_char():
    assert euler_char(CompleteType((2, 1), (0, 0)), CurveContext(2, 2, -1)) == -3
    ct = CompleteType((3, 1), (4, -2))
    assert euler_char(ct, CurveContext(2, 1, -1)) == 2


@given(complete_types(), st.integers(0, 5))
def test_euler_char_of_dual(ct, g):
    ctx = CurveContext(ct.n, g, -1)
    du = dual_type(ct, ctx)
    assert euler_char(du, ctx) == sum(d + r * (1 - g) for r, d in zip(du.r, du.d))


def test_moduli_dim_examples():
    assert moduli_dim(1, 1, CurveContext(2, 2, -1)) == 8
    assert moduli_dim(1, 1, CurveContext(3, 3, -2)) == 23
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert moduli_dim(1, 1, CurveContext(2, 1, 0)) == 1
    assert caught


@given(st.integers(2, 8), st.integers(1, 4), st.integers(0, 5), st.integers(-5, -1), st.data())
def test_moduli_dim_matches_end_euler_characteristic(n, a, g, degL, data):
    k = data.draw(st.integers(1, n - 1))
    ctx = CurveContext(n, g, degL)
    ct = rigid_from_params(RigidParams(a, k, 0, 0), ctx)
    R, Deg = end_invariants(ct, ctx)
    assert moduli_dim(a, k, ctx) == 1 - (Deg + R * (1 - g))


# -- rigid types -----------------------------------------------------------------------


def test_rigid_example():
    ct = rigid_from_params(RigidParams(1, 1, 0, 0), CurveContext(3, 0, -1))
    assert ct.r == (2, 1, 1) and ct.d == (0, -1, -2)
    assert validate(ct, CurveContext(3, 0, -1)) == []


@given(st.integers(2, 8), st.integers(1, 4), st.integers(-9, 9), st.integers(-9, 9), st.data())
def test_rigid_round_trip_and_degree(n, a, eps, delta, data):
    k = data.draw(st.integers(1, n - 1))
    ctx = CurveContext.symbolic(n)
    p = RigidParams(a, k, eps, delta)
    ct = rigid_from_params(p, ctx)
    assert rigid_params_from(ct, ctx) == p
    assert same_degree(sum(ct.d), rigid_total_degree(p, ctx))


def test_not_rigid_reports_index():
    ctx = CurveContext(3, 0, -1)
    with pytest.raises(NotRigid) as err:
        rigid_params_from(CompleteType((2, 1, 1), (0, 0, 0)), ctx)
    assert err.value.index == 2
    with pytest.raises(NotRigid) as err:
        rigid_params_from(CompleteType((3, 1, 1), (0, 0, 0)), ctx)
    assert err.value.index == 0


# -- kernel descriptor -------------------------------------------------------------------


def test_kernel_descriptor_examples():
    kd = kernel_descriptor(QFType((1, 1, 0)), 3, CurveContext(3))
    assert kd.qftype == QFType((1, 1, 1))
    kd = kernel_descriptor(QFType((1, 1)), 2, CurveContext(2))
    assert kd.qftype == QFType((1, 0)) and kd.ranks == (1, 0)
    with pytest.raises(RankTooSmall):
        kernel_descriptor(QFType((1, 1)), 1, CurveContext(2))


@given(st.integers(2, 6), st.data())
def test_kernel_degree_recurrence(n, data):
    m = tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
    if not any(m):
        m = m[:-1] + (1,)
    t = QFType(m)
    d = tuple(data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n)))
    ctx = CurveContext.symbolic(n)
    kd = kernel_descriptor(t, t.generators, ctx, degrees=d)
    si = second_invariants(CompleteType(ranks_from_qf(t), d), ctx)
    s, e, rho, delta = si.s, si.e, kd.ranks, kd.degrees
    assert rho[n - 1] == 0 and same_degree(delta[n - 1], 0)
    for q in range(2, n + 1):
        rhs = e[q - 2] - e[q - 1] + (n * s[q - 2] - (n + 1) * s[q - 1] - rho[n - q]) * L
        assert same_degree(delta[n - q] - delta[n - q + 1], rhs)
    assert sum(kd.ranks) == n * t.generators - generalized_rank(t)


# -- validation -------------------------------------------------------------------------


def test_validate_messages():
    issues = validate(CompleteType((1, 2), (0, 0)), CurveContext(2, 0, -1))
    assert issues[0].code == "NotMonotone" and issues[0].severity == "error"
    issues = validate(CompleteType((1, 1), (0, 0)), CurveContext(2, 0, -1))
    assert [i.code for i in issues] == ["EqualRankDegree"] and "-1" in issues[0].message
    issues = validate(CompleteType((2, 1), (0, 0)), CurveContext(2, 0, 1))
    assert [i.severity for i in issues] == ["info"]


def test_symbolic_specialization():
    ct = CompleteType((3, 2, 2, 1), (1, L, 2 * L - 1, 4))
    ctx = CurveContext.symbolic(4)
    for v in (-3, -1, 0, 2):
        a = second_invariants(ct, ctx).e
        b = second_invariants(ct.substitute(v), ctx.specialize(v)).e
        assert all(sympy.sympify(x).subs(L, v) == y for x, y in zip(a, b))
