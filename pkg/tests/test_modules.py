from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from multicurves.campaigns import enumerate_types
from multicurves.descriptors import QFType, generalized_rank
from multicurves.dvr import QQ, GF, InvariantFactors
from multicurves.errors import EmptyType
from multicurves.modules import (
    LocalModule,
    ModuleMap,
    NotQuasiFree,
    detect_qf_type,
    dual_module,
    first_filtration,
    is_reflexive,
    is_surjective,
    make_quasi_free,
    quotient_module,
    random_twist,
    reflexivity_report,
    second_filtration,
    surjectivity_check,
    torsion_submodule,
)
from multicurves.truncated import AMatrix, RingElement

F101 = GF(101)


def x_el(n, field=QQ, k=1):
    return RingElement([field.x_power(k)], n, field)


def z_el(k, n, field=QQ):
    return RingElement.z_power(k, n, field)


def skyscraper(n, field=QQ):
    return quotient_module(n, [[x_el(n, field)], [z_el(1, n, field)]], 1, field)


def xz_module(field=QQ):
    return quotient_module(2, [[x_el(2, field) * z_el(1, 2, field)]], 1, field)


# -- construction --------------------------------------------------------------


def test_free_line_bundle_type():
    assert make_quasi_free((0, 0, 1)).d_rank == 3


def test_direct_sum_type():
    M = make_quasi_free((1, 1))
    assert M.d_rank == 3 and M.d_invariants.is_free


def test_generalized_rank_matches_dimension():
    assert make_quasi_free((1, 0, 1)).d_rank == 4 == generalized_rank((1, 0, 1))
    assert make_quasi_free((2, 0, 1)).d_rank == 5


def test_empty_type_rejected():
    with pytest.raises(EmptyType):
        make_quasi_free((0, 0))


def test_twist_is_deterministic():
    M = make_quasi_free((1, 1, 0))
    assert random_twist(M, 11).presentation == random_twist(M, 11).presentation
    assert random_twist(M, 11).presentation != random_twist(M, 12).presentation


def test_twist_preserves_invariants():
    M = make_quasi_free((2, 1, 1))
    T = random_twist(M, 3)
    assert T.d_invariants == M.d_invariants
    assert detect_qf_type(random_twist(make_quasi_free((1, 1)), 5)) == QFType((1, 1))


# -- filtrations ------------------------------------------------------------------


def test_free_module_filtration():
    rep = first_filtration(make_quasi_free((0, 0, 1)))
    assert rep.ranks == (1, 1, 1) and rep.all_free


def test_o1_plus_o2_filtrations():
    M = make_quasi_free((1, 1))
    assert first_filtration(M).ranks == (2, 1)
    assert second_filtration(M).ranks == (2, 1)


def test_filtration_endpoints_and_inclusions():
    M = random_twist(make_quasi_free((1, 0, 2)), 2).direct_sum(skyscraper(3))
    first, second = first_filtration(M), second_filtration(M)
    assert first.submodules[0] == M.d_invariants and first.submodules[-1].is_zero
    assert second.submodules[0].is_zero and second.submodules[-1] == M.d_invariants
    assert all(first.inclusions)


def test_locally_free_inclusions_are_equalities():
    rep = first_filtration(random_twist(make_quasi_free((0, 0, 2)), 1))
    assert all(rep.equalities)
    assert not all(first_filtration(make_quasi_free((1, 1))).equalities)


def test_xz_module_has_torsion_in_level_one():
    rep = first_filtration(xz_module())
    assert rep.graded[1] == InvariantFactors(0, (1,))


# -- quasi-free detection -------------------------------------------------------


def test_detect_round_trip():
    assert detect_qf_type(make_quasi_free((2, 0, 1))) == QFType((2, 0, 1))
    assert detect_qf_type(random_twist(make_quasi_free((1, 1, 0)), 9)) == QFType((1, 1, 0))


def test_detect_skyscraper():
    res = detect_qf_type(skyscraper(2))
    assert isinstance(res, NotQuasiFree) and res.level == 0 and res.torsion == (1,)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_detect_round_trip_exhaustive_small(n):
    for i, t in enumerate(enumerate_types(n, 5)):
        assert detect_qf_type(random_twist(make_quasi_free(t, F101), i)) == QFType(t)


# -- torsion, duals, reflexivity ------------------------------------------------------


def test_quasi_free_is_torsion_free():
    T, flag = torsion_submodule(random_twist(make_quasi_free((1, 2, 1)), 4))
    assert flag and T.is_zero()


def test_torsion_of_explicit_summand():
    M = make_quasi_free((1, 1)).direct_sum(skyscraper(2))
    T, flag = torsion_submodule(M)
    assert not flag and T.d_invariants == InvariantFactors(0, (1,))


def test_torsion_of_xz_module():
    M = xz_module()
    T, flag = torsion_submodule(M)
    assert not flag and not T.is_zero()
    assert not second_filtration(M).graded[0].is_free


@given(st.integers(0, 10**6))
def test_torsion_flag_matches_first_annihilator(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    t = rng.choice(enumerate_types(n, 4))
    M = make_quasi_free(t, F101)
    if rng.random() < 0.5:
        M = M.direct_sum(quotient_module(n, [[x_el(n, F101) * z_el(rng.randint(0, n - 1), n, F101)]], 1, F101))
    M = random_twist(M, seed)
    flag = torsion_submodule(M)[1]
    assert flag == second_filtration(M).graded[0].is_free


@pytest.mark.parametrize("t", [(1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 0, 1)])
def test_dual_preserves_type(t):
    M = random_twist(make_quasi_free(t), 7)
    assert detect_qf_type(dual_module(M)) == QFType(t)
    assert is_reflexive(M)


def test_skyscraper_not_reflexive():
    rep = reflexivity_report(skyscraper(2))
    assert not rep.is_isomorphism and rep.kernel == InvariantFactors(0, (1,))


def test_dual_of_o1_in_a3():
    O1 = make_quasi_free((1, 0, 0))
    assert dual_module(O1).d_rank == 1


# -- maps -----------------------------------------------------------------------------------


def test_identity_map_is_surjective():
    M = random_twist(make_quasi_free((1, 1)), 1)
    phi = ModuleMap.build(M, M, AMatrix.identity(M.num_generators, 2))
    rep = surjectivity_check(phi)
    assert phi.check() and rep.direct and rep.via_restriction


def test_multiplication_by_z_not_surjective():
    A = LocalModule.free(1, 2)
    phi = ModuleMap.build(A, A, AMatrix([[z_el(1, 2)]], 2))
    rep = surjectivity_check(phi)
    assert not rep.direct and not rep.via_restriction
    assert rep.cokernel == InvariantFactors(1, ())
    assert not is_surjective(phi)


def test_ill_defined_map_rejected():
    O1 = make_quasi_free((1, 0))
    A = LocalModule.free(1, 2)
    with pytest.raises(ValueError):
        ModuleMap.build(O1, A, AMatrix.identity(1, 2))
