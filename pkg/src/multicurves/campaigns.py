"""Seeded randomized campaigns checking formulas against module computations.

Every case draws from its own ``random.Random`` seeded by
``(seed, family, index)``, so a failing case is replayable on its own and
reports are identical across runs.  Failures never abort a campaign.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import sympy

from . import descriptors as desc
from .canonical import canonical_morphism_report, filt1_identities
from .descriptors import DEG_L, CompleteType, CurveContext, QFType, RigidParams, same_degree
from .dvr import QQ, GF, BaseField, InvariantFactors
from .errors import ConfigError
from .homological import bundle_cover_kernel, ext_module, tor_module
from .modules import (
    LocalModule,
    ModuleMap,
    detect_qf_type,
    dual_module,
    first_filtration,
    is_reflexive,
    make_quasi_free,
    quotient_module,
    random_ring_element,
    random_twist,
    second_filtration,
    surjectivity_check,
    torsion_submodule,
)
from .truncated import AMatrix, RingElement

__all__ = [
    "CampaignConfig",
    "FamilyResult",
    "VerificationReport",
    "Formulas",
    "run_rank_crosschecks",
    "run_symbolic_identities",
    "run_module_theorems",
    "run_all",
    "field_from_tag",
    "enumerate_types",
]


def field_from_tag(tag) -> BaseField:
    if isinstance(tag, BaseField):
        return tag
    tag = str(tag).lower()
    if tag in ("q", "qq", "0"):
        return QQ
    try:
        p = int(tag)
    except ValueError:
        raise ConfigError(f"unknown base field {tag!r}") from None
    return GF(p)


@dataclass(frozen=True)
class CampaignConfig:
    """Campaign parameters; ``max_size`` caps the generalized rank of sampled types."""

    seed: int = 0
    budget: int = 50
    n_min: int = 2
    n_max: int = 4
    max_size: int = 8
    field: str = "101"
    depth: int = 4

    def __post_init__(self):
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")
        if not (2 <= self.n_min <= self.n_max <= 8):
            raise ConfigError(f"n range [{self.n_min}, {self.n_max}] must lie within [2, 8]")
        if self.max_size < 1:
            raise ConfigError("max_size must be >= 1")
        if not (0 <= self.depth <= 6):
            raise ConfigError("resolution depth must lie in 0..6")
        base = field_from_tag(self.field)
        if base.p and base.p <= self.n_max:
            raise ConfigError(f"prime {base.p} must exceed the multiplicity")

    @property
    def base_field(self) -> BaseField:
        return field_from_tag(self.field)


@dataclass
class FamilyResult:
    passed: int = 0
    failed: int = 0
    counterexample: dict | None = None
    seconds: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {"pass": self.passed, "fail": self.failed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class VerificationReport:
    families: dict = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(f.failed for f in self.families.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def verdicts(self) -> dict:
        return {k: (v.passed, v.failed) for k, v in self.families.items()}

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        out = VerificationReport(dict(self.families))
        for k, v in other.families.items():
            if k in out.families:
                a = out.families[k]
                out.families[k] = FamilyResult(
                    a.passed + v.passed, a.failed + v.failed, a.counterexample or v.counterexample, a.seconds + v.seconds
                )
            else:
                out.families[k] = v
        return out

    def to_json(self, timing: bool = False) -> dict:
        return {k: v.to_json(timing) for k, v in self.families.items()}

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True)


@dataclass(frozen=True)
class Formulas:
    """The descriptor formulas under test; mutation fixtures replace entries."""

    second_invariants: Callable = desc.second_invariants
    dual_type: Callable = desc.dual_type
    kernel_descriptor: Callable = desc.kernel_descriptor
    rigid_from_params: Callable = desc.rigid_from_params


# ---------------------------------------------------------------------------
# machinery


def _case_rng(cfg: CampaignConfig, family: str, index: int) -> random.Random:
    return random.Random(f"{cfg.seed}:{family}:{index}")


def _jsonable(value):
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, InvariantFactors):
        return value.to_json()
    if isinstance(value, QFType):
        return list(value.m)
    return str(value)


def _run_family(report: VerificationReport, cfg: CampaignConfig, name: str, case: Callable) -> None:
    """``case(rng, ctx)`` records inputs in ``ctx`` and returns True on success."""
    res = FamilyResult()
    start = time.perf_counter()
    for index in range(cfg.budget):
        ctx: dict = {}
        try:
            ok = bool(case(_case_rng(cfg, name, index), ctx))
        except Exception as exc:  # failures are data here, never fatal
            ok = False
            ctx["error"] = f"{type(exc).__name__}: {exc}"
        if ok:
            res.passed += 1
        else:
            res.failed += 1
            if res.counterexample is None:
                res.counterexample = {"seed": cfg.seed, "family": name, "case": index, **_jsonable(ctx)}
    res.seconds = time.perf_counter() - start
    report.families[name] = res


@lru_cache(maxsize=None)
def enumerate_types(n: int, max_size: int) -> tuple:
    """All nonzero types (m_1..m_n) with sum of i * m_i at most ``max_size``."""
    out = []

    def rec(i, left, acc):
        if i > n:
            if any(acc):
                out.append(tuple(acc))
            return
        for m in range(left // i + 1):
            rec(i + 1, left - i * m, acc + [m])

    rec(1, max_size, [])
    return tuple(out)


def _sample_type(rng: random.Random, cfg: CampaignConfig, n_max: int | None = None, size: int | None = None) -> QFType:
    n = rng.randint(cfg.n_min, min(cfg.n_max, n_max or cfg.n_max))
    return QFType(rng.choice(enumerate_types(n, min(size or cfg.max_size, cfg.max_size))))


def _sample_ranks(rng: random.Random, n: int, top: int = 4) -> tuple:
    r = sorted((rng.randint(0, top) for _ in range(n)), reverse=True)
    if r[0] == 0:
        r[0] = 1
    return tuple(r)


def _sample_complete_type(rng: random.Random, n: int, top: int = 4) -> CompleteType:
    r = _sample_ranks(rng, n, top)
    return CompleteType(r, tuple(rng.randint(-6, 6) for _ in range(n)))


def _split_model(t: QFType, restricted: tuple, L):
    """Graded degrees of ⊕ F_k, F_k locally free on C_k of rank m_k, deg F_k|_C = b_k.

    Returns (d, e, kernel_degrees) where ``kernel_degrees`` are those of the
    kernel of the minimal cover restricting to ⊕ F_k|_C.
    """
    n = t.n
    m = t.m
    restricted = tuple(b if mk else 0 for b, mk in zip(restricted, m))
    d = [sum(restricted[k - 1] + i * m[k - 1] * L for k in range(i + 1, n + 1)) for i in range(n)]
    e = [sum(restricted[k - 1] + (k - 1 - i) * m[k - 1] * L for k in range(i + 1, n + 1)) for i in range(n)]
    ker = [sum(restricted[k - 1] + (k + i) * m[k - 1] * L for k in range(1, n - i)) for i in range(n)]
    return d, e, ker


# ---------------------------------------------------------------------------
# rank cross-checks


def run_rank_crosschecks(cfg: CampaignConfig, formulas: Formulas = Formulas()) -> VerificationReport:
    report = VerificationReport()
    F = cfg.base_field

    def qf_ranks(rng, ctx):
        t = _sample_type(rng, cfg)
        seed = rng.randrange(2**31)
        ctx.update(type=t, twist_seed=seed)
        M = random_twist(make_quasi_free(t, F), seed)
        ctx["presentation"] = repr(M.presentation)
        first, second = first_filtration(M), second_filtration(M)
        r = desc.ranks_from_qf(t)
        ct = CompleteType(r, (0,) * t.n)
        s = formulas.second_invariants(ct, CurveContext.symbolic(t.n)).s
        return (
            first.all_free
            and first.ranks == r
            and second.ranks == tuple(s)
            and detect_qf_type(M) == t
            and M.d_rank == desc.generalized_rank(t)
        )

    def kernel_ranks(rng, ctx):
        t = _sample_type(rng, cfg, size=min(cfg.max_size, 6))
        r = t.generators + rng.randint(0, 2)
        seed = rng.randrange(2**31)
        ctx.update(type=t, cover_rank=r, twist_seed=seed)
        M = random_twist(make_quasi_free(t, F), seed)
        ck = bundle_cover_kernel(M, r)
        kd = formulas.kernel_descriptor(t, r, CurveContext(t.n))
        N = ck.kernel
        return (
            detect_qf_type(N) == kd.qftype
            and first_filtration(N).ranks == kd.ranks
            and N.d_rank + M.d_rank == t.n * r
        )

    def second_degree_split_model(rng, ctx):
        t = _sample_type(rng, cfg)
        b = tuple(rng.randint(-5, 5) for _ in range(t.n))
        ctx.update(type=t, restricted_degrees=b)
        d, e, _ = _split_model(t, b, DEG_L)
        ct = CompleteType(desc.ranks_from_qf(t), tuple(d))
        si = formulas.second_invariants(ct, CurveContext.symbolic(t.n))
        return all(same_degree(a, c) for a, c in zip(si.e, e))

    _run_family(report, cfg, "qf_filtration_ranks", qf_ranks)
    _run_family(report, cfg, "kernel_ranks", kernel_ranks)
    _run_family(report, cfg, "second_degree_split_model", second_degree_split_model)
    return report


# ---------------------------------------------------------------------------
# symbolic identities


def run_symbolic_identities(cfg: CampaignConfig, formulas: Formulas = Formulas()) -> VerificationReport:
    report = VerificationReport()
    L = DEG_L
    n_top = max(cfg.n_max, 6)

    def sample_ct(rng, ctx):
        n = rng.randint(cfg.n_min, n_top)
        ct = _sample_complete_type(rng, n)
        ctx.update(r=ct.r, d=ct.d)
        return ct, CurveContext.symbolic(n)

    def second_degree_recurrence(rng, ctx):
        ct, cc = sample_ct(rng, ctx)
        si = formulas.second_invariants(ct, cc)
        r, d, e = ct.r, ct.d, si.e
        ok = tuple(si.s) == r and same_degree(sum(e), sum(d))
        for j in range(ct.n - 1):
            lhs = e[j + 1] - e[j] - (d[j + 1] - d[j])
            ok &= same_degree(lhs, (j * r[j] - (j + 2) * r[j + 1]) * L)
        return ok

    def dual(rng, ctx):
        ct, cc = sample_ct(rng, ctx)
        du = formulas.dual_type(ct, cc)
        back = formulas.dual_type(du, cc)
        ok = back.same_as(ct) and same_degree(sum(du.d), -sum(ct.d))
        # graded pieces of the second filtration of the dual are the duals of G_i
        e_dual = formulas.second_invariants(du, cc).e
        return ok and all(same_degree(a, -b) for a, b in zip(e_dual, ct.d))

    def rigid(rng, ctx):
        n = rng.randint(cfg.n_min, n_top)
        p = RigidParams(rng.randint(1, 3), rng.randint(1, n - 1), rng.randint(-6, 6), rng.randint(-6, 6))
        ctx.update(n=n, params=[p.a, p.k, p.epsilon, p.delta])
        cc = CurveContext.symbolic(n)
        ct = formulas.rigid_from_params(p, cc)
        return (
            same_degree(sum(ct.d), desc.rigid_total_degree(p, cc))
            and desc.rigid_params_from(ct, cc) == p
            and not desc.validate(ct, cc)
        )

    def kernel_recurrence(rng, ctx):
        n = rng.randint(cfg.n_min, n_top)
        t = QFType(tuple(rng.randint(0, 2) for _ in range(n)))
        if not t.generators:
            t = QFType(t.m[:-1] + (1,))
        extra = rng.randint(0, 2)
        r = t.generators + extra
        cc = CurveContext.symbolic(n)
        rk = desc.ranks_from_qf(t)
        d = tuple(rng.randint(-6, 6) for _ in range(n))
        extra_deg = rng.randint(-3, 3)
        ctx.update(type=t, cover_rank=r, d=d, extra_degree=extra_deg)
        si = formulas.second_invariants(CompleteType(rk, d), cc)
        s, e = si.s, si.e
        kd = formulas.kernel_descriptor(t, t.generators, cc, degrees=d)
        delta, rho = kd.degrees, kd.ranks
        ok = same_degree(delta[n - 1], 0) and rho[n - 1] == 0
        for q in range(2, n + 1):
            lhs = delta[n - q] - delta[n - q + 1]
            rhs = e[q - 2] - e[q - 1] + (n * s[q - 2] - (n + 1) * s[q - 1] - rho[n - q]) * L
            ok &= same_degree(lhs, rhs)
        # additivity: Deg(kernel) + Deg(E) = Deg(cover)
        kx = formulas.kernel_descriptor(t, r, cc, degrees=d, extra_degree=extra_deg)
        cover_deg = n * (d[0] + extra_deg) + r * (n * (n - 1) // 2) * L
        ok &= same_degree(sum(kx.degrees) + sum(d), cover_deg)
        ok &= sum(kx.ranks) == n * r - desc.generalized_rank(t)
        return ok

    def kernel_split_model(rng, ctx):
        n = rng.randint(cfg.n_min, n_top)
        t = QFType(tuple(rng.randint(0, 2) for _ in range(n)))
        if not t.generators:
            t = QFType(t.m[:-1] + (1,))
        b = tuple(rng.randint(-5, 5) for _ in range(n))
        ctx.update(type=t, restricted_degrees=b)
        d, _, ker = _split_model(t, b, L)
        kd = formulas.kernel_descriptor(t, t.generators, CurveContext.symbolic(n), degrees=d)
        return all(same_degree(a, c) for a, c in zip(kd.degrees, ker))

    def specialization(rng, ctx):
        ct, cc = sample_ct(rng, ctx)
        v = rng.randint(-4, 4)
        ctx["degL"] = v
        num = cc.specialize(v)
        a = formulas.second_invariants(ct, cc)
        b = formulas.second_invariants(ct, num)
        ok = all(same_degree(sympy.sympify(x).subs(L, v), y) for x, y in zip(a.e, b.e))
        ok &= formulas.dual_type(ct, cc).substitute(v).same_as(formulas.dual_type(ct, num))
        return ok

    _run_family(report, cfg, "second_degree_recurrence_sum", second_degree_recurrence)
    _run_family(report, cfg, "dual_involution_negation", dual)
    _run_family(report, cfg, "rigid_closed_form", rigid)
    _run_family(report, cfg, "kernel_degree_recurrence", kernel_recurrence)
    _run_family(report, cfg, "kernel_split_model", kernel_split_model)
    _run_family(report, cfg, "symbolic_specialization", specialization)
    return report


# ---------------------------------------------------------------------------
# module theorems


def _torsion_piece(rng: random.Random, n: int, F: BaseField) -> LocalModule:
    """A cyclic module with nonzero x-torsion: A_n/(x^a z^b) or A_n/(x^a, z^b)."""
    a = rng.randint(1, 2)
    xa = RingElement([F.x_power(a)], n, F)
    if rng.random() < 0.5:
        b = rng.randint(0, n - 1)
        return quotient_module(n, [[xa * RingElement.z_power(b, n, F)]], 1, F)
    b = rng.randint(1, n - 1)
    return quotient_module(n, [[xa], [RingElement.z_power(b, n, F)]], 1, F)


def _cyclic_module(rng: random.Random, n: int, F: BaseField) -> LocalModule:
    f = random_ring_element(rng, n, F, "maximal")
    return quotient_module(n, [[f]], 1, F)


def _small_type(rng: random.Random, cfg: CampaignConfig, size: int, gens: int = 3) -> QFType:
    n = rng.randint(cfg.n_min, min(cfg.n_max, 5))
    pool = [t for t in enumerate_types(n, min(size, cfg.max_size)) if sum(t) <= gens]
    return QFType(rng.choice(pool))


def _O(m: int, n: int, F: BaseField) -> LocalModule:
    t = [0] * n
    t[m - 1] = 1
    return make_quasi_free(t, F)


def _ext_zero_range(M, N, degrees) -> bool:
    return all(ext_module(M, N, i).is_zero for i in degrees)


def run_module_theorems(cfg: CampaignConfig) -> VerificationReport:
    report = VerificationReport()
    F = cfg.base_field
    depth = cfg.depth

    def twisted(rng, ctx, size=6, gens=3):
        t = _small_type(rng, cfg, size, gens)
        seed = rng.randrange(2**31)
        ctx.update(type=t, twist_seed=seed)
        return t, random_twist(make_quasi_free(t, F), seed)

    def ext_dual_vanishes_torsion_free(rng, ctx):
        t, M = twisted(rng, ctx)
        A = LocalModule.free(1, t.n, F)
        free_flag = torsion_submodule(M)[1]
        return (
            free_flag
            and is_reflexive(M)
            and _ext_zero_range(M, A, range(1, min(depth, 3) + 1))
            and detect_qf_type(dual_module(M)) == t
        )

    def ext_dual_nonzero_torsion(rng, ctx):
        t, M0 = twisted(rng, ctx, size=4, gens=2)
        T = _torsion_piece(rng, t.n, F)
        seed = rng.randrange(2**31)
        M = random_twist(M0.direct_sum(T), seed)
        ctx.update(torsion_presentation=repr(T.presentation), presentation=repr(M.presentation))
        A = LocalModule.free(1, t.n, F)
        T_sub, flag = torsion_submodule(M)
        return (
            not flag
            and not T_sub.is_zero()
            and not is_reflexive(M)
            and not ext_module(M, A, 1).is_zero
        )

    def ext_periodicity(rng, ctx):
        t, M = twisted(rng, ctx, size=5, gens=2)
        N = _cyclic_module(rng, t.n, F) if rng.random() < 0.5 else _torsion_piece(rng, t.n, F)
        ctx["target"] = repr(N.presentation)
        ext = [ext_module(M, N, i) for i in range(1, 5)]
        return ext[0] == ext[2] and ext[1] == ext[3]

    def ext_values(rng, ctx):
        n = rng.randint(max(2, cfg.n_min), min(cfg.n_max, 5))
        m = rng.randint(1, n - 1)
        ctx.update(n=n, m=m)
        Om, O1 = _O(m, n, F), _O(1, n, F)
        return all(ext_module(Om, O1, j) == InvariantFactors(1, ()) for j in range(depth + 1))

    def tor_identity(rng, ctx):
        t, M = twisted(rng, ctx)
        T = tor_module(M, 2 * t.n)
        first = first_filtration(T)
        return (
            T.d_invariants == M.d_invariants
            and first.graded[: t.n] == first_filtration(M).graded
            and all(g.is_zero for g in first.graded[t.n:])
        )

    def filtration_identities(rng, ctx):
        t, M0 = twisted(rng, ctx, size=5, gens=2)
        M = M0 if rng.random() < 0.5 else random_twist(M0.direct_sum(_torsion_piece(rng, t.n, F)), rng.randrange(2**31))
        i, j = rng.randint(0, t.n), rng.randint(0, t.n)
        ctx.update(i=i, j=j, presentation=repr(M.presentation))
        return all(filt1_identities(M, i, j).values())

    def canonical_maps(rng, ctx):
        t, M = twisted(rng, ctx)
        return canonical_morphism_report(M).all_hold

    def surjectivity(rng, ctx):
        t, M = twisted(rng, ctx)
        n, g = t.n, M.num_generators
        if rng.random() < 0.4:
            ck = bundle_cover_kernel(M, t.generators + rng.randint(0, 2))
            rep = surjectivity_check(ck.cover)
            return rep.agree and rep.direct
        s = rng.randint(1, g + 1)
        kind = ["unit", "maximal", "any"]
        entries = [[random_ring_element(rng, n, F, rng.choice(kind)) for _ in range(s)] for _ in range(g)]
        phi = ModuleMap.build(LocalModule.free(s, n, F), M, AMatrix(entries, n, F, s))
        return phi.check() and surjectivity_check(phi).agree

    def locally_free(rng, ctx):
        t, M = twisted(rng, ctx)
        n = t.n
        is_free = M.minimal.presentation.cols == 0
        lf_type = all(v == 0 for v in t.m[:-1])
        e_a = ext_module(M, LocalModule.free(1, n, F), 1).is_zero
        e_o = ext_module(M, _O(1, n, F), 1).is_zero
        return is_free == lf_type == (e_a and e_o)

    def cover_kernel(rng, ctx):
        t, M = twisted(rng, ctx)
        ck = bundle_cover_kernel(M, t.generators)
        N = ck.kernel
        s = second_filtration(M).ranks
        n = t.n
        expected = tuple(s[0] - s[n - 1 - i] for i in range(n))
        return first_filtration(N).ranks == expected and N.d_rank + M.d_rank == n * t.generators

    _run_family(report, cfg, "ext_dual_vanishes_torsion_free", ext_dual_vanishes_torsion_free)
    _run_family(report, cfg, "ext_dual_nonzero_torsion", ext_dual_nonzero_torsion)
    _run_family(report, cfg, "ext_periodicity", ext_periodicity)
    _run_family(report, cfg, "ext_Om_O1", ext_values)
    _run_family(report, cfg, "tor_identity", tor_identity)
    _run_family(report, cfg, "filtration_identities", filtration_identities)
    _run_family(report, cfg, "canonical_morphisms", canonical_maps)
    _run_family(report, cfg, "surjectivity_restriction", surjectivity)
    _run_family(report, cfg, "locally_free_detection", locally_free)
    _run_family(report, cfg, "cover_kernel_ranks", cover_kernel)
    return report


def run_all(cfg: CampaignConfig, formulas: Formulas = Formulas()) -> VerificationReport:
    return (
        run_rank_crosschecks(cfg, formulas)
        .merge(run_symbolic_identities(cfg, formulas))
        .merge(run_module_theorems(cfg))
    )
