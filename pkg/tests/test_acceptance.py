"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

from __future__ import annotations

import random
import time

import pytest

from multicurves.campaigns import CampaignConfig, enumerate_types, run_all, run_rank_crosschecks, run_symbolic_identities
from multicurves.descriptors import (
    DEG_L,
    CompleteType,
    CurveContext,
    QFType,
    RigidParams,
    dual_type,
    end_invariants,
    generalized_rank,
    kernel_descriptor,
    moduli_dim,
    ranks_from_qf,
    rigid_from_params,
    rigid_total_degree,
    same_degree,
    second_invariants,
)
from multicurves.dvr import GF, InvariantFactors
from multicurves.homological import bundle_cover_kernel, ext_module, tor_module
from multicurves.modules import (
    LocalModule,
    detect_qf_type,
    first_filtration,
    is_reflexive,
    make_quasi_free,
    quotient_module,
    random_ring_element,
    random_twist,
    torsion_submodule,
)
from multicurves.truncated import RingElement
from mutations import DROPPED_INDEX_TERM, FLIPPED_DUAL_SIGN

F = GF(101)
L = DEG_L


def _O(m, n):
    t = [0] * n
    t[m - 1] = 1
    return make_quasi_free(t, F)


def _types(rng, n_max=5, size=8, gens=None):
    n = rng.randint(2, n_max)
    pool = enumerate_types(n, size)
    if gens is not None:
        pool = [t for t in pool if sum(t) <= gens]
    return QFType(rng.choice(pool))


def _torsion_piece(rng, n):
    xa = RingElement([F.x_power(rng.randint(1, 2))], n, F)
    if rng.random() < 0.5:
        return quotient_module(n, [[xa * RingElement.z_power(rng.randint(0, n - 1), n, F)]], 1, F)
    return quotient_module(n, [[xa], [RingElement.z_power(rng.randint(1, n - 1), n, F)]], 1, F)


# ---------------------------------------------------------------------------
# criteria


def criterion_1():
    start, failures, count = time.perf_counter(), 0, 0
    for n in range(2, 6):
        for t in enumerate_types(n, 8):
            for seed in range(3):
                count += 1
                failures += detect_qf_type(random_twist(make_quasi_free(t, F), seed)) != QFType(t)
    elapsed = time.perf_counter() - start
    return failures == 0 and elapsed < 60, f"{count} twisted types, {failures} failures, {elapsed:.1f} s"


def criterion_2():
    failures = 0
    for case in range(100):
        rng = random.Random(f"kernel:{case}")
        t = _types(rng, size=7)
        r = t.generators + rng.randint(0, 3)
        M = random_twist(make_quasi_free(t, F), case)
        N = bundle_cover_kernel(M, r).kernel
        expected = QFType(tuple(t.m[t.n - 2 :: -1]) + (r - t.generators,))
        ok = detect_qf_type(N) == expected == kernel_descriptor(t, r, CurveContext(t.n)).qftype
        ok &= N.d_rank == t.n * r - generalized_rank(t)
        failures += not ok
    return failures == 0, f"100 covers, {failures} failures"


def criterion_3():
    failures = 0
    for case in range(100):
        rng = random.Random(f"ext_dual:{case}")
        t = _types(rng, size=5, gens=3)
        n = t.n
        M = make_quasi_free(t, F)
        torsion = case >= 50
        if torsion:
            M = M.direct_sum(_torsion_piece(rng, n))
        M = random_twist(M, case)
        A = LocalModule.free(1, n, F)
        refl = is_reflexive(M)
        free = torsion_submodule(M)[1]
        ext1 = ext_module(M, A, 1).is_zero
        ok = refl == free == ext1 == (not torsion)
        if not torsion:
            ok &= all(ext_module(M, A, i).is_zero for i in (2, 3))
        failures += not ok
    return failures == 0, f"50 torsion-free + 50 torsion-bearing, {failures} failures"


def criterion_4():
    failures = 0
    for case in range(50):
        rng = random.Random(f"periodic:{case}")
        t = _types(rng, size=5, gens=2)
        M = random_twist(make_quasi_free(t, F), case)
        if rng.random() < 0.5:
            N = quotient_module(t.n, [[random_ring_element(rng, t.n, F, "maximal")]], 1, F)
        else:
            N = _torsion_piece(rng, t.n)
        ext = [ext_module(M, N, i) for i in range(1, 5)]
        failures += not (ext[0] == ext[2] and ext[1] == ext[3])
    return failures == 0, f"50 pairs, {failures} failures"


def criterion_5():
    failures, count = 0, 0
    one = InvariantFactors(1, ())
    for n in range(2, 6):
        for m in range(1, n):
            for j in range(5):
                count += 1
                failures += ext_module(_O(m, n), _O(1, n), j) != one
    return failures == 0, f"{count} Ext groups, {failures} failures"


def criterion_6():
    failures = 0
    for case in range(20):
        rng = random.Random(f"tor:{case}")
        t = _types(rng, size=6)
        M = random_twist(make_quasi_free(t, F), case)
        T = tor_module(M, 2 * t.n)
        graded = first_filtration(T).graded
        ok = T.d_invariants == M.d_invariants and graded[: t.n] == first_filtration(M).graded
        ok &= all(g.is_zero for g in graded[t.n :])
        failures += not ok
    return failures == 0, f"20 modules, {failures} failures"


def _complete_type(rng):
    n = rng.randint(2, 6)
    r = sorted((rng.randint(0, 4) for _ in range(n)), reverse=True)
    r[0] = max(r[0], 1)
    return CompleteType(tuple(r), tuple(rng.randint(-6, 6) for _ in range(n)))


def criterion_7():
    fails = {"second_degree": 0, "dual": 0, "rigid": 0, "kernel": 0}
    for case in range(200):
        rng = random.Random(f"symbolic:{case}")
        ct = _complete_type(rng)
        n = ct.n
        ctx = CurveContext.symbolic(n)
        si = second_invariants(ct, ctx)
        ok = same_degree(sum(si.e), sum(ct.d))
        for j in range(n - 1):
            lhs = si.e[j + 1] - si.e[j] - (ct.d[j + 1] - ct.d[j])
            ok &= same_degree(lhs, (j * ct.r[j] - (j + 2) * ct.r[j + 1]) * L)
        fails["second_degree"] += not ok
        du = dual_type(ct, ctx)
        fails["dual"] += not (dual_type(du, ctx).same_as(ct) and same_degree(sum(du.d), -sum(ct.d)))
        p = RigidParams(rng.randint(1, 3), rng.randint(1, n - 1), rng.randint(-6, 6), rng.randint(-6, 6))
        fails["rigid"] += not same_degree(sum(rigid_from_params(p, ctx).d), rigid_total_degree(p, ctx))
        t = QFType(tuple(ct.r[i - 1] - (ct.r[i] if i < n else 0) for i in range(1, n + 1)))
        kd = kernel_descriptor(t, t.generators, ctx, degrees=ct.d)
        s, e, rho, delta = si.s, si.e, kd.ranks, kd.degrees
        ok = rho[n - 1] == 0 and same_degree(delta[n - 1], 0) and ranks_from_qf(t) == ct.r
        for q in range(2, n + 1):
            rhs = e[q - 2] - e[q - 1] + (n * s[q - 2] - (n + 1) * s[q - 1] - rho[n - q]) * L
            ok &= same_degree(delta[n - q] - delta[n - q + 1], rhs)
        fails["kernel"] += not ok
    detail = ", ".join(f"{k} {v} failures" for k, v in fails.items())
    return not any(fails.values()), f"200 complete types each: {detail}"


def criterion_8():
    a = moduli_dim(1, 1, CurveContext(2, 2, -1))
    b = moduli_dim(1, 1, CurveContext(3, 3, -2))
    c = end_invariants(CompleteType((2, 1), (0, 0)), CurveContext(2, 0, -1))
    return (a, b, c) == (8, 23, (5, -2)), f"moduli_dim = {a}, {b}; end_invariants = {c}"


def criterion_9():
    cfg = CampaignConfig(seed=42, budget=50)
    dropped = run_rank_crosschecks(cfg, DROPPED_INDEX_TERM).failures
    flipped = run_symbolic_identities(cfg, FLIPPED_DUAL_SIGN).families["dual_involution_negation"].failed
    return dropped >= 1 and flipped >= 1, f"dropped -i*r_i term: {dropped} failures; flipped dual sign: {flipped} failures"


def criterion_10():
    start = time.perf_counter()
    fp = run_all(CampaignConfig(seed=42, budget=50, field="101"))
    q = run_all(CampaignConfig(seed=42, budget=50, field="q"))
    again = run_all(CampaignConfig(seed=42, budget=50, field="101"))
    elapsed = time.perf_counter() - start
    ok = fp.ok and q.ok and fp.verdicts() == q.verdicts() and fp.dumps() == again.dumps() and elapsed < 300
    return ok, f"3 full runs in {elapsed:.1f} s, failures F101={fp.failures} Q={q.failures}, verdicts equal={fp.verdicts() == q.verdicts()}"


CRITERIA = [
    (1, "type round-trip under twists", criterion_1),
    (2, "cover kernel type and rank", criterion_2),
    (3, "reflexive / torsion-free / Ext^1 equivalence", criterion_3),
    (4, "Ext 2-periodicity", criterion_4),
    (5, "Ext^j(O_m, O_1) free of rank one", criterion_5),
    (6, "Tor^1 over A_2n recovers the module", criterion_6),
    (7, "symbolic identities in formal degL", criterion_7),
    (8, "closed-form values", criterion_8),
    (9, "mutation sensitivity", criterion_9),
    (10, "full verify run: time, determinism, field independence", criterion_10),
]


def _line(num, title, ok, detail):
    return f"criterion {num:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})"


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    import sys

    results = []
    for num, title, check in CRITERIA:
        ok, detail = check()
        results.append(ok)
        print(_line(num, title, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
