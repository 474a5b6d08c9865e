"""Finitely presented modules over A_n = D[z]/(z^n).

A :class:`LocalModule` is the cokernel of a presentation matrix over A_n.
Flattened, it is ``F / K`` with ``F = D^{np}`` and ``K`` the D-span of the
columns ``z^k P[:, c]``; every submodule appearing below is a z-stable
lattice between ``K`` and ``F``, so all predicates reduce to Smith normal
forms over D.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .descriptors import QFType
from .dvr import QQ, BaseField, InvariantFactors, Lattice, Scalar, kernel_basis, preimage, solve
from .errors import EmptyType
from .truncated import (
    AMatrix,
    RingElement,
    flat_columns,
    flat_rows,
    flatten_vector,
    minimal_generators,
    shift,
    unflatten_vector,
)

__all__ = [
    "LocalModule",
    "FiltrationReport",
    "NotQuasiFree",
    "ModuleMap",
    "SurjectivityReport",
    "make_quasi_free",
    "quotient_module",
    "random_twist",
    "first_filtration",
    "first_graded",
    "second_graded",
    "second_filtration",
    "detect_qf_type",
    "torsion_submodule",
    "dual_module",
    "reflexivity_report",
    "is_reflexive",
    "is_surjective",
    "surjectivity_check",
    "subquotient_module",
]


def shift_rows(dim_p: int, n: int, k: int, field: BaseField) -> list:
    """Row-list of multiplication by z^k on the flattening of A_n^p."""
    N = n * dim_p
    zero, one = field.zero, field.one
    rows = [[zero] * N for _ in range(N)]
    for m in range(N - k * dim_p):
        rows[m + k * dim_p][m] = one
    return rows


class LocalModule:
    """coker(P) for a p x q presentation matrix P over A_n."""

    def __init__(self, presentation: AMatrix):
        self.presentation = presentation

    @classmethod
    def free(cls, rank: int, n: int, field: BaseField = QQ) -> "LocalModule":
        return cls(AMatrix([[] for _ in range(rank)], n, field, 0))

    @classmethod
    def zero(cls, n: int, field: BaseField = QQ) -> "LocalModule":
        return cls(AMatrix([], n, field, 0))

    @property
    def n(self) -> int:
        return self.presentation.n

    @property
    def field(self) -> BaseField:
        return self.presentation.field

    @property
    def num_generators(self) -> int:
        return self.presentation.rows

    @property
    def flat_dim(self) -> int:
        return self.n * self.num_generators

    def __repr__(self):
        p = self.presentation
        return f"LocalModule(n={p.n}, generators={p.rows}, relations={p.cols}, field={p.field!r})"

    def __eq__(self, other):
        return isinstance(other, LocalModule) and self.presentation == other.presentation

    def __hash__(self):
        return hash(self.presentation)

    # -- lattices in F = D^{np} ------------------------------------------
    @cached_property
    def relations(self) -> Lattice:
        return Lattice(flat_columns(self.presentation), self.flat_dim, self.field)

    @cached_property
    def ambient(self) -> Lattice:
        return Lattice.full(self.flat_dim, self.field)

    def shift(self, w, k: int = 1) -> list:
        return shift(w, self.n, self.num_generators, k)

    def level(self, i: int) -> Lattice:
        """``z^i F + K``: the preimage of M_i = z^i M."""
        return self._levels(i)

    def annihilated(self, i: int) -> Lattice:
        """``{u : z^i u in K}``: the preimage of M^{(i)}."""
        return self._annihilated(i)

    def _levels(self, i):
        cache = self.__dict__.setdefault("_level_cache", {})
        if i not in cache:
            n, p, f = self.n, self.num_generators, self.field
            if i <= 0:
                cache[i] = self.ambient
            elif i >= n:
                cache[i] = self.relations
            else:
                one, zero = f.one, f.zero
                gens = [[one if m == idx else zero for m in range(n * p)] for idx in range(i * p, n * p)]
                cache[i] = Lattice(gens + self.relations.basis, n * p, f)
        return cache[i]

    def _annihilated(self, i):
        cache = self.__dict__.setdefault("_ann_cache", {})
        if i not in cache:
            n, p, f = self.n, self.num_generators, self.field
            if i <= 0:
                cache[i] = self.relations
            elif i >= n:
                cache[i] = self.ambient
            else:
                pre = preimage(shift_rows(p, n, i, f), n * p, self.relations)
                cache[i] = pre + self.relations
        return cache[i]

    # -- D-structure -----------------------------------------------------
    @cached_property
    def d_invariants(self) -> InvariantFactors:
        """Invariant factors of M as a D-module."""
        return self.ambient.quotient(self.relations)

    @property
    def d_rank(self) -> int:
        return self.d_invariants.free_rank

    def is_zero(self) -> bool:
        return self.d_invariants.is_zero

    def direct_sum(self, other: "LocalModule") -> "LocalModule":
        return LocalModule(self.presentation.block_diag(other.presentation))

    __add__ = direct_sum

    @cached_property
    def minimal(self) -> "LocalModule":
        """An isomorphic module with a minimal presentation."""
        return subquotient_module(self.n, self.num_generators, self.ambient, self.relations, self.field)

    def subquotient(self, upper: Lattice, lower: Lattice | None = None) -> "LocalModule":
        return subquotient_module(self.n, self.num_generators, upper, lower if lower is not None else self.relations, self.field)

    def signature(self) -> tuple:
        """Isomorphism invariants: D-invariants plus graded pieces of both filtrations."""
        return (self.d_invariants, first_graded(self), second_graded(self))


def subquotient_module(n: int, p: int, upper: Lattice, lower: Lattice | None, field: BaseField) -> LocalModule:
    """Minimal presentation of ``upper / lower`` (z-stable lattices in D^{np})."""
    low_basis = lower.basis if lower is not None else []
    gens = minimal_generators(upper, n, p, relations=low_basis)
    g = len(gens)
    if g == 0:
        return LocalModule.zero(n, field)
    # flat map D^{ng} -> D^{np}: column k*g + t is z^k gens[t]
    cols = [None] * (n * g)
    for t, v in enumerate(gens):
        for k in range(n):
            cols[k * g + t] = shift(v, n, p, k)
    rows = [[c[i] for c in cols] for i in range(n * p)]
    target = lower if lower is not None else Lattice([], n * p, field)
    rel = preimage(rows, n * g, target)
    rel_gens = minimal_generators(rel, n, g) if rel.rank else []
    columns = [unflatten_vector(w, n, g, field) for w in rel_gens]
    return LocalModule(AMatrix.from_columns(columns, g, n, field))


def quotient_module(n: int, relations: Sequence[Sequence[RingElement]], p: int, field: BaseField = QQ) -> LocalModule:
    """A_n^p modulo the given relation columns (lists of p ring elements)."""
    return LocalModule(AMatrix.from_columns([list(c) for c in relations], p, n, field))


# ---------------------------------------------------------------------------
# constructors


def make_quasi_free(t: QFType | Sequence[int], field: BaseField = QQ) -> LocalModule:
    """The standard model of ⊕ m_i O_i with presentation diag(z^i)."""
    t = t if isinstance(t, QFType) else QFType(tuple(t))
    n = t.n
    if t.generators == 0:
        raise EmptyType("all multiplicities are zero")
    orders = [i for i, m in enumerate(t.m, start=1) for _ in range(m)]
    p = len(orders)
    cols = []
    for j, i in enumerate(orders):
        if i < n:
            col = [RingElement.zero(n, field)] * p
            col[j] = RingElement.z_power(i, n, field)
            cols.append(col)
    return LocalModule(AMatrix.from_columns(cols, p, n, field) if cols else AMatrix([[] for _ in range(p)], n, field, 0))


def _random_scalar(rng: random.Random, field: BaseField, unit: bool = False, x_divisible: bool = False) -> Scalar:
    c0 = rng.choice([1, -1, 2, -2, 3]) if unit else (0 if x_divisible else rng.randint(-2, 2))
    c1 = rng.randint(-2, 2)
    num = [c0, c1]
    den = [1]
    if rng.random() < 0.15:
        den = [1, rng.choice([1, -1, 2])]
    return Scalar(num, den, field)


def random_ring_element(rng: random.Random, n: int, field: BaseField, kind: str = "any") -> RingElement:
    """kind: 'unit', 'maximal' (in (x, z)) or 'any'."""
    coeffs = []
    for k in range(n):
        if k == 0:
            if kind == "unit":
                coeffs.append(_random_scalar(rng, field, unit=True))
            elif kind == "maximal":
                coeffs.append(_random_scalar(rng, field, x_divisible=True))
            else:
                coeffs.append(_random_scalar(rng, field))
        elif k <= 2 and rng.random() < 0.5:
            coeffs.append(_random_scalar(rng, field))
        else:
            coeffs.append(field.zero)
    return RingElement(coeffs, n, field)


def random_invertible(rng: random.Random, p: int, n: int, field: BaseField, density: float = 0.5) -> AMatrix:
    """Unit diagonal, arbitrary strictly upper part, (x, z)-valued lower part."""
    rows = []
    for i in range(p):
        row = []
        for j in range(p):
            if i == j:
                row.append(random_ring_element(rng, n, field, "unit"))
            elif rng.random() < density:
                row.append(random_ring_element(rng, n, field, "any" if j > i else "maximal"))
            else:
                row.append(RingElement.zero(n, field))
        rows.append(row)
    return AMatrix(rows, n, field, p)


def random_twist(M: LocalModule, seed) -> LocalModule:
    """An isomorphic module: the presentation becomes U @ P @ V with U, V invertible."""
    rng = random.Random(seed)
    P = M.presentation
    U = random_invertible(rng, P.rows, P.n, P.field)
    V = random_invertible(rng, P.cols, P.n, P.field)
    return LocalModule(U @ P @ V)


# ---------------------------------------------------------------------------
# filtrations


@dataclass(frozen=True)
class FiltrationReport:
    """Invariant factors along one canonical filtration.

    ``kind == "first"``: ``submodules[i]`` is M_i = z^i M (i = 0..n) and
    ``graded[i]`` is G_i = M_i / M_{i+1} (i = 0..n-1).
    ``kind == "second"``: ``submodules[i]`` is M^{(i)} (i = 0..n) and
    ``graded[i]`` is G^{(i+1)} (i = 0..n-1).
    ``inclusions[i]`` records M_i ⊆ M^{(n-i)} and ``equalities[i]`` whether
    the two coincide.
    """

    kind: str
    submodules: tuple
    graded: tuple
    inclusions: tuple
    equalities: tuple

    @property
    def ranks(self) -> tuple:
        return tuple(g.free_rank for g in self.graded)

    @property
    def all_free(self) -> bool:
        return all(g.is_free for g in self.graded)


def _cached(M: LocalModule, key: str, compute):
    cache = M.__dict__
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def _inclusion_flags(M: LocalModule):
    def compute():
        inc, eq = [], []
        for i in range(M.n + 1):
            a, b = M.level(i), M.annihilated(M.n - i)
            inside = b.contains_lattice(a)
            inc.append(inside)
            eq.append(inside and a.contains_lattice(b))
        return tuple(inc), tuple(eq)

    return _cached(M, "_flags", compute)


def first_graded(M: LocalModule) -> tuple:
    """Invariant factors of G_0(M), ..., G_{n-1}(M)."""
    return _cached(M, "_first_graded", lambda: tuple(M.level(i).quotient(M.level(i + 1)) for i in range(M.n)))


def second_graded(M: LocalModule) -> tuple:
    """Invariant factors of G^{(1)}(M), ..., G^{(n)}(M)."""
    return _cached(
        M, "_second_graded", lambda: tuple(M.annihilated(i + 1).quotient(M.annihilated(i)) for i in range(M.n))
    )


def first_filtration(M: LocalModule) -> FiltrationReport:
    def compute():
        subs = tuple(M.level(i).quotient(M.relations) for i in range(M.n + 1))
        return FiltrationReport("first", subs, first_graded(M), *_inclusion_flags(M))

    return _cached(M, "_first", compute)


def second_filtration(M: LocalModule) -> FiltrationReport:
    def compute():
        subs = tuple(M.annihilated(i).quotient(M.relations) for i in range(M.n + 1))
        return FiltrationReport("second", subs, second_graded(M), *_inclusion_flags(M))

    return _cached(M, "_second", compute)


@dataclass(frozen=True)
class NotQuasiFree:
    """First graded piece G_level carrying x-torsion, with its torsion exponents."""

    level: int
    torsion: tuple

    def __bool__(self):
        return False


def detect_qf_type(M: LocalModule) -> QFType | NotQuasiFree:
    """The type (m_1..m_n) if every G_i(M) is free over D, else the first torsion level."""
    graded = first_graded(M)
    for i, g in enumerate(graded):
        if not g.is_free:
            return NotQuasiFree(i, g.torsion)
    r = [g.free_rank for g in graded] + [0]
    return QFType(tuple(r[i - 1] - r[i] for i in range(1, M.n + 1)))


def torsion_submodule(M: LocalModule) -> tuple:
    """(T(M), M is torsion free): T is the x-power torsion submodule."""
    K = M.relations
    sat = K.saturation()
    T = M.subquotient(sat, K)
    return T, sat.rank == K.rank and K.contains_lattice(sat)


# ---------------------------------------------------------------------------
# duality


def _flat_kernel_lattice(P: AMatrix) -> Lattice:
    """ker(P: A_n^q -> A_n^p) as a lattice in D^{nq}."""
    n, f = P.n, P.field
    if P.cols == 0:
        return Lattice([], 0, f)
    if P.rows == 0:
        return Lattice.full(n * P.cols, f)
    return Lattice(kernel_basis(flat_rows(P), n * P.rows, n * P.cols, f), n * P.cols, f)


def _dual_generators(M: LocalModule) -> AMatrix:
    """Columns generate M^∨ = ker(P^T) inside A_n^p (minimal)."""
    P = M.presentation
    n, p, f = M.n, M.num_generators, M.field
    if P.cols == 0:
        lat = Lattice.full(n * p, f)
    else:
        lat = _flat_kernel_lattice(P.transpose())
    gens = minimal_generators(lat, n, p)
    return AMatrix.from_columns([unflatten_vector(w, n, p, f) for w in gens], p, n, f) if gens else AMatrix([[] for _ in range(p)], n, f, 0)


def dual_module(M: LocalModule) -> LocalModule:
    """Hom(M, A_n), computed as ker(P^T) and re-presented minimally."""
    P = M.presentation
    n, p, f = M.n, M.num_generators, M.field
    if p == 0:
        return LocalModule.zero(n, f)
    lat = Lattice.full(n * p, f) if P.cols == 0 else _flat_kernel_lattice(P.transpose())
    return subquotient_module(n, p, lat, None, f)


@dataclass(frozen=True)
class ReflexivityReport:
    kernel: InvariantFactors
    cokernel: InvariantFactors

    @property
    def is_isomorphism(self) -> bool:
        return self.kernel.is_zero and self.cokernel.is_zero


def reflexivity_report(M: LocalModule) -> ReflexivityReport:
    """Kernel and cokernel of the evaluation map M -> M^∨∨."""
    n, p, f = M.n, M.num_generators, M.field
    if p == 0:
        z = InvariantFactors(0, ())
        return ReflexivityReport(z, z)
    Y = _dual_generators(M)
    s = Y.cols
    if s == 0:
        return ReflexivityReport(M.d_invariants, InvariantFactors(0, ()))
    from .truncated import kernel_over_A

    Q = kernel_over_A(Y)
    Yt = Y.transpose()  # ev: A^p -> A^s
    ev_rows = flat_rows(Yt)
    ker_ev = Lattice(kernel_basis(ev_rows, n * s, n * p, f), n * p, f) + M.relations
    kernel = ker_ev.quotient(M.relations)
    image = Lattice(flat_columns(Yt), n * s, f)
    dd = Lattice.full(n * s, f) if Q.cols == 0 else _flat_kernel_lattice(Q.transpose())
    cokernel = dd.quotient(image)
    return ReflexivityReport(kernel, cokernel)


def is_reflexive(M: LocalModule) -> bool:
    return reflexivity_report(M).is_isomorphism


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class ModuleMap:
    """A_n-linear map source -> target given on generators.

    ``matrix`` is (target generators) x (source generators); ``witness`` W
    satisfies ``matrix @ P_source == P_target @ W``.
    """

    source: LocalModule
    target: LocalModule
    matrix: AMatrix
    witness: AMatrix

    @classmethod
    def build(cls, source: LocalModule, target: LocalModule, matrix: AMatrix) -> "ModuleMap":
        n, f = target.n, target.field
        PS, PT = source.presentation, target.presentation
        if matrix.shape != (target.num_generators, source.num_generators):
            raise ValueError("matrix shape does not match the generators")
        image = matrix @ PS
        trows = flat_rows(PT)
        cols = []
        for c in range(image.cols):
            rhs = flatten_vector(image.column(c), n, f)
            sol = solve(trows, n * PT.cols, rhs, f) if PT.cols else ([] if not any(rhs) else None)
            if sol is None:
                raise ValueError(f"map is not well defined: relation {c} is not sent into the target relations")
            cols.append(unflatten_vector(sol, n, PT.cols, f))
        W = AMatrix.from_columns(cols, PT.cols, n, f) if cols else AMatrix([[] for _ in range(PT.cols)], n, f, 0)
        return cls(source, target, matrix, W)

    def check(self) -> bool:
        lhs = self.matrix @ self.source.presentation
        rhs = self.target.presentation @ self.witness
        return lhs == rhs

    def image_lattice(self) -> Lattice:
        T = self.target
        return Lattice(flat_columns(self.matrix) + T.relations.basis, T.flat_dim, T.field)


@dataclass(frozen=True)
class SurjectivityReport:
    direct: bool
    via_restriction: bool
    cokernel: InvariantFactors
    restricted_cokernel: InvariantFactors

    @property
    def agree(self) -> bool:
        return self.direct == self.via_restriction


def surjectivity_check(phi: ModuleMap) -> SurjectivityReport:
    """Surjectivity of φ directly and through G_0(φ): G_0(source) -> G_0(target)."""
    T = phi.target
    coker = T.ambient.quotient(phi.image_lattice())
    level0 = [c for c in flat_columns(phi.matrix)[: phi.matrix.cols]]
    restricted = Lattice(level0 + T.level(1).basis, T.flat_dim, T.field)
    rcoker = T.ambient.quotient(restricted)
    return SurjectivityReport(coker.is_zero, rcoker.is_zero, coker, rcoker)


def is_surjective(phi: ModuleMap) -> bool:
    return surjectivity_check(phi).direct
