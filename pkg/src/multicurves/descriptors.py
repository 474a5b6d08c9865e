"""Closed-form invariants of quasi locally free sheaves on a ribbon C_n.

Degrees are carried either as integers or, with ``degL = DEG_L``, as
degree-one polynomials in a formal ``degL`` so that every identity between
formulas can be checked as a polynomial identity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import sympy

from .errors import NotMonotone, NotRigid, RankTooSmall, ZeroRank

DEG_L = sympy.Symbol("degL")

Degree = Union[int, sympy.Expr]

__all__ = [
    "DEG_L",
    "CurveContext",
    "QFType",
    "CompleteType",
    "SecondInvariants",
    "RigidParams",
    "KernelDescriptor",
    "Issue",
    "generalized_rank",
    "ranks_from_qf",
    "qf_from_ranks",
    "rank_deg_slope",
    "second_invariants",
    "dual_type",
    "end_invariants",
    "kernel_descriptor",
    "rigid_from_params",
    "rigid_params_from",
    "rigid_total_degree",
    "moduli_dim",
    "euler_char",
    "validate",
    "is_symbolic",
    "same_degree",
]


def _clean(value):
    """Expand symbolic values; collapse constant expressions back to int."""
    if isinstance(value, sympy.Basic):
        value = sympy.expand(value)
        if value.is_Integer:
            return int(value)
    return value


def is_symbolic(value) -> bool:
    return isinstance(value, sympy.Basic) and bool(value.free_symbols)


def same_degree(a, b) -> bool:
    """Exact equality of two degrees (as polynomials in degL when symbolic)."""
    return sympy.expand(sympy.sympify(a) - sympy.sympify(b)) == 0


@dataclass(frozen=True)
class CurveContext:
    n: int
    g: int = 0
    degL: Degree = -1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("multiplicity n must be >= 1")
        if self.g < 0:
            raise ValueError("genus must be >= 0")

    @classmethod
    def symbolic(cls, n: int, g: int = 0) -> "CurveContext":
        return cls(n, g, DEG_L)

    def specialize(self, value: int) -> "CurveContext":
        return CurveContext(self.n, self.g, value)


@dataclass(frozen=True)
class QFType:
    """Local type (m_1, ..., m_n): the module is ⊕ m_i O_i."""

    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        if not self.m:
            raise ValueError("empty type")
        if any(v < 0 for v in self.m):
            raise ValueError("negative multiplicity in type")

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def generators(self) -> int:
        return sum(self.m)

    def __iter__(self):
        return iter(self.m)

    def __len__(self):
        return len(self.m)

    def __getitem__(self, i):
        return self.m[i]


@dataclass(frozen=True)
class CompleteType:
    """Ranks and degrees of the graded pieces G_0, ..., G_{n-1}."""

    r: tuple
    d: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(v) for v in self.r))
        object.__setattr__(self, "d", tuple(_clean(v) for v in self.d))
        if len(self.r) != len(self.d):
            raise ValueError("rank and degree lists differ in length")

    @property
    def n(self) -> int:
        return len(self.r)

    def substitute(self, value: int) -> "CompleteType":
        return CompleteType(self.r, tuple(_clean(sympy.sympify(v).subs(DEG_L, value)) for v in self.d))

    def same_as(self, other: "CompleteType") -> bool:
        return self.r == other.r and all(same_degree(a, b) for a, b in zip(self.d, other.d))


@dataclass(frozen=True)
class SecondInvariants:
    """Ranks ``s[i]`` and degrees ``e[i]`` of G^{(i+1)}."""

    s: tuple
    e: tuple


@dataclass(frozen=True)
class RigidParams:
    a: int
    k: int
    epsilon: Degree
    delta: Degree


@dataclass(frozen=True)
class KernelDescriptor:
    qftype: QFType
    ranks: tuple
    degrees: tuple | None


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning" | "info"
    code: str
    message: str
    index: int | None = None


# ---------------------------------------------------------------------------


def generalized_rank(t: QFType | Sequence[int]) -> int:
    """Sum of i * m_i over the type."""
    return sum(i * m for i, m in enumerate(t, start=1))


def ranks_from_qf(t: QFType | Sequence[int]) -> tuple:
    """r_j = rank G_j = sum of m_i over i > j."""
    m = tuple(t)
    return tuple(sum(m[j:]) for j in range(len(m)))


def qf_from_ranks(r: Sequence[int]) -> QFType:
    r = tuple(r)
    _check_monotone(r)
    ext = r + (0,)
    return QFType(tuple(ext[i - 1] - ext[i] for i in range(1, len(r) + 1)))


def _check_monotone(r):
    if any(v < 0 for v in r):
        raise NotMonotone(f"negative rank in {list(r)}")
    for i in range(len(r) - 1):
        if r[i] < r[i + 1]:
            raise NotMonotone(f"ranks must be weakly decreasing: r_{i}={r[i]} < r_{i + 1}={r[i + 1]}")


def _slope(deg, rank):
    if isinstance(deg, int):
        return Fraction(deg, rank)
    return sympy.expand(deg / rank)


def rank_deg_slope(ct: CompleteType):
    """(R, Deg, slope) with the slope an exact rational."""
    R = sum(ct.r)
    Deg = _clean(sum(ct.d, 0))
    if R == 0:
        raise ZeroRank("slope undefined for generalized rank 0")
    return R, Deg, _slope(Deg, R)


def _second_degree_coefficient(r: Sequence[int], i: int) -> int:
    """r_{i+1} + ... + r_{n-1} - i * r_i."""
    return sum(r[i + 1:]) - i * r[i]


def second_invariants(ct: CompleteType, ctx: CurveContext) -> SecondInvariants:
    L = ctx.degL
    e = tuple(_clean(ct.d[i] + _second_degree_coefficient(ct.r, i) * L) for i in range(ct.n))
    return SecondInvariants(tuple(ct.r), e)


def dual_type(ct: CompleteType, ctx: CurveContext, include_twist: bool = False) -> CompleteType:
    """Complete type of the dual, from G^{(i+1)}(E^∨) ≅ G_i(E)^*.

    The default drops the L^{n-1} twist carried by Hom(-, O_n) on graded
    pieces, which makes the operation degree-negating and an involution.
    ``include_twist=True`` keeps it: the result is then the complete type of
    E^∨ itself, with Deg(E^∨) = -Deg(E) + (n-1) R degL.
    """
    L = ctx.degL
    n = ct.n
    d = []
    for i in range(n):
        v = -ct.d[i] - _second_degree_coefficient(ct.r, i) * L
        if include_twist:
            v = v + (n - 1) * ct.r[i] * L
        d.append(_clean(v))
    return CompleteType(ct.r, tuple(d))


def end_invariants(ct: CompleteType, ctx: CurveContext):
    """(R, Deg) of the endomorphism sheaf."""
    r = ct.r
    R = sum(v * v for v in r)
    cross = sum(r[i] * r[j] for i in range(len(r)) for j in range(i + 1, len(r)))
    return R, _clean(cross * ctx.degL)


def kernel_descriptor(
    t: QFType,
    r: int,
    ctx: CurveContext,
    degrees: Sequence[Degree] | None = None,
    extra_degree: Degree = 0,
) -> KernelDescriptor:
    """Type, graded ranks and (optionally) graded degrees of ker(cover -> E).

    The cover is a rank-r bundle whose restriction to C matches E|_C on the
    first sum(m) generators; the remaining r - sum(m) summands form a
    bundle with restricted degree ``extra_degree`` mapping to zero.
    ``degrees`` are the graded degrees d_0..d_{n-1} of E.

    The minimal-cover kernel N has
        rank G_i(N) = s_0 - s_{n-1-i}
        deg  G_i(N) = e_0 - e_{n-1-i} + ((i+1) s_0 - n s_{n-1-i}) degL
    with (s, e) the second invariants of E.
    """
    n = t.n
    if ctx.n != n:
        raise ValueError("type length differs from the multiplicity")
    g = t.generators
    if r < g:
        raise RankTooSmall(f"cover rank {r} < number of generators {g}")
    extra = r - g
    ktype = QFType(tuple(t.m[n - 2::-1]) + (extra,) if n > 1 else (extra,))
    rk = ranks_from_qf(t)
    s0 = rk[0]
    ranks = tuple(s0 - rk[n - 1 - i] + extra for i in range(n))
    degs = None
    if degrees is not None:
        ct = CompleteType(rk, tuple(degrees))
        si = second_invariants(ct, ctx)
        L = ctx.degL
        degs = tuple(
            _clean(si.e[0] - si.e[n - 1 - i] + ((i + 1) * s0 - n * si.s[n - 1 - i]) * L + extra_degree + i * extra * L)
            for i in range(n)
        )
    return KernelDescriptor(ktype, ranks, degs)


def rigid_from_params(p: RigidParams, ctx: CurveContext) -> CompleteType:
    n, a, k = ctx.n, p.a, p.k
    if not (1 <= k < n) or a < 1:
        raise ValueError("rigid parameters need a >= 1 and 1 <= k < n")
    L = ctx.degL
    r, d = [], []
    for i in range(n):
        if i < k:
            r.append(a + 1)
            d.append(_clean(p.epsilon + i * (a + 1) * L))
        else:
            r.append(a)
            d.append(_clean(p.delta + i * a * L))
    return CompleteType(tuple(r), tuple(d))


def rigid_params_from(ct: CompleteType, ctx: CurveContext) -> RigidParams:
    """Recover (a, k, epsilon, delta); raises :class:`NotRigid` at the first bad index."""
    n, L = ct.n, ctx.degL
    if n < 2:
        raise NotRigid("rigid types need n >= 2", 0)
    a = ct.r[-1]
    if a < 1:
        raise NotRigid("last graded rank must be >= 1", n - 1)
    k = 0
    while k < n and ct.r[k] == a + 1:
        k += 1
    if k == 0:
        raise NotRigid(f"r_0 = {ct.r[0]} but a rigid type needs r_0 = a + 1 = {a + 1}", 0)
    for i in range(k, n):
        if ct.r[i] != a:
            raise NotRigid(f"r_{i} = {ct.r[i]}, expected {a}", i)
    eps = ct.d[0]
    delta = _clean(ct.d[k] - k * a * L)
    for i in range(n):
        expected = eps + i * (a + 1) * L if i < k else delta + i * a * L
        if not same_degree(ct.d[i], expected):
            raise NotRigid(f"d_{i} = {ct.d[i]}, expected {_clean(expected)}", i)
    return RigidParams(a, k, eps, delta)


def rigid_total_degree(p: RigidParams, ctx: CurveContext) -> Degree:
    """k*eps + (n-k)*delta + (n(n-1)a + k(k-1)) degL / 2."""
    n, a, k = ctx.n, p.a, p.k
    return _clean(k * p.epsilon + (n - k) * p.delta + sympy.Rational(n * (n - 1) * a + k * (k - 1), 2) * ctx.degL)


def moduli_dim(a: int, k: int, ctx: CurveContext) -> Degree:
    n, g, L = ctx.n, ctx.g, ctx.degL
    if not (1 <= k < n) or a < 1:
        raise ValueError("need a >= 1 and 1 <= k < n")
    if not is_symbolic(L) and L >= 0:
        warnings.warn("the moduli dimension formula assumes deg L < 0", stacklevel=2)
    quad = (n * (n - 1) // 2) * a * a + k * (n - 1) * a + k * (k - 1) // 2
    return _clean(1 - quad * L + (g - 1) * (n * a * a + k * (2 * a + 1)))


def euler_char(ct: CompleteType, ctx: CurveContext) -> Degree:
    return _clean(sum(d + r * (1 - ctx.g) for r, d in zip(ct.r, ct.d)))


def validate(ct: CompleteType, ctx: CurveContext) -> list:
    """Input hygiene for a complete type; errors, warnings and notes as :class:`Issue`."""
    issues = []
    if ct.n != ctx.n:
        issues.append(Issue("error", "LengthMismatch", f"expected {ctx.n} graded pieces, got {ct.n}"))
        return issues
    for i, v in enumerate(ct.r):
        if v < 0:
            issues.append(Issue("error", "NegativeRank", f"r_{i} = {v} < 0", i))
    for i in range(ct.n - 1):
        if ct.r[i] < ct.r[i + 1]:
            issues.append(
                Issue("error", "NotMonotone", f"ranks must be weakly decreasing: r_{i}={ct.r[i]} < r_{i + 1}={ct.r[i + 1]}", i)
            )
    if any(i.severity == "error" for i in issues):
        return issues
    for i in range(ct.n - 1):
        if ct.r[i] == ct.r[i + 1]:
            expected = _clean(ct.d[i] + ct.r[i] * ctx.degL)
            if not same_degree(ct.d[i + 1], expected):
                issues.append(
                    Issue(
                        "warning",
                        "EqualRankDegree",
                        f"r_{i} = r_{i + 1} so expected d_{i + 1} = d_{i} + r_{i}*degL = {expected}, got {ct.d[i + 1]}",
                        i + 1,
                    )
                )
    if not is_symbolic(ctx.degL) and ctx.degL >= 0:
        issues.append(Issue("info", "NonNegativeDegL", f"deg L = {ctx.degL} >= 0; stability formulas assume deg L < 0"))
    return issues
