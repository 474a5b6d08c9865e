"""Maps between the graded pieces of the two canonical filtrations.

With ``L_i`` the preimage of ``z^i M`` and ``Pre_i`` that of ``ker z^i``:

* ``mu(j, m): G_j -> G_{j+m}`` is multiplication by z^m,
* ``lam(i, k): G^{(i+1)} -> G^{(i+1-k)}`` is multiplication by z^k,
* ``Gamma_i = ker mu(i, 1)`` and ``Gamma^{(i)} = coker lam(i+1, 1)``,
* the natural map ``Gamma^{(i)} -> Gamma_i`` is multiplication by z^i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .dvr import InvariantFactors, Lattice, preimage
from .errors import IndexOutOfRange
from .modules import LocalModule

__all__ = [
    "LambdaCheck",
    "MuCheck",
    "GammaCheck",
    "CanonicalReport",
    "canonical_morphism_report",
    "lambda_check",
    "mu_check",
    "gamma_check",
    "filt1_identities",
]


def _restricted_preimage(M: LocalModule, source: Lattice, k: int, target: Lattice) -> Lattice:
    """``{u in source : z^k u in target}``."""
    basis = source.basis
    if not basis:
        return source
    images = [M.shift(b, k) for b in basis]
    rows = [[img[r] for img in images] for r in range(M.flat_dim)]
    coeffs = preimage(rows, len(basis), target)
    vectors = []
    for c in coeffs.basis:
        v = [M.field.zero] * M.flat_dim
        for a, b in zip(c, basis):
            if a:
                v = [vi + a * bi if bi else vi for vi, bi in zip(v, b)]
        vectors.append(v)
    return Lattice(vectors, M.flat_dim, M.field)


def _image(M: LocalModule, source: Lattice, k: int, extra: Lattice) -> Lattice:
    return Lattice([M.shift(b, k) for b in source.basis] + extra.basis, M.flat_dim, M.field)


@dataclass(frozen=True)
class LambdaCheck:
    i: int
    k: int
    kernel: InvariantFactors

    @property
    def injective(self) -> bool:
        return self.kernel.is_zero


@dataclass(frozen=True)
class MuCheck:
    j: int
    m: int
    kernel: InvariantFactors
    cokernel: InvariantFactors

    @property
    def surjective(self) -> bool:
        return self.cokernel.is_zero


@dataclass(frozen=True)
class GammaCheck:
    """Gamma_i, Gamma^{(i)} and the kernel/cokernel of the natural map between them."""

    i: int
    lower: InvariantFactors
    upper: InvariantFactors
    map_kernel: InvariantFactors
    map_cokernel: InvariantFactors

    @property
    def isomorphic(self) -> bool:
        return self.map_kernel.is_zero and self.map_cokernel.is_zero


@dataclass(frozen=True)
class CanonicalReport:
    lambdas: tuple = field(default_factory=tuple)
    mus: tuple = field(default_factory=tuple)
    gammas: tuple = field(default_factory=tuple)

    @property
    def all_hold(self) -> bool:
        return (
            all(c.injective for c in self.lambdas)
            and all(c.surjective for c in self.mus)
            and all(c.isomorphic for c in self.gammas)
        )


def lambda_check(M: LocalModule, i: int, k: int) -> LambdaCheck:
    n = M.n
    if not (0 < i < n and 0 < k <= i + 1):
        raise IndexOutOfRange(f"lambda({i}, {k}) needs 0 < i < {n} and 0 < k <= i + 1")
    src = M.annihilated(i + 1)
    ker = _restricted_preimage(M, src, k, M.annihilated(i - k)) + M.annihilated(i)
    return LambdaCheck(i, k, ker.quotient(M.annihilated(i)))


def mu_check(M: LocalModule, j: int, m: int) -> MuCheck:
    n = M.n
    if not (0 <= j and 0 < m and j + m <= n):
        raise IndexOutOfRange(f"mu({j}, {m}) needs j >= 0, m > 0 and j + m <= {n}")
    src, tgt_next = M.level(j), M.level(j + m + 1)
    ker = _restricted_preimage(M, src, m, tgt_next) + M.level(j + 1)
    coker = M.level(j + m).quotient(_image(M, src, m, tgt_next))
    return MuCheck(j, m, ker.quotient(M.level(j + 1)), coker)


def gamma_check(M: LocalModule, i: int) -> GammaCheck:
    n = M.n
    if not (0 <= i < n):
        raise IndexOutOfRange(f"Gamma index {i} outside 0..{n - 1}")
    # Gamma_i = {w in L_i : z w in L_{i+2}} / L_{i+1}
    low_top = _restricted_preimage(M, M.level(i), 1, M.level(i + 2)) + M.level(i + 1)
    lower = low_top.quotient(M.level(i + 1))
    # Gamma^{(i)} = Pre_{i+1} / (Pre_i + z Pre_{i+2})
    up_bottom = _image(M, M.annihilated(i + 2), 1, M.annihilated(i))
    upper = M.annihilated(i + 1).quotient(up_bottom)
    # natural map u -> z^i u
    image = _image(M, M.annihilated(i + 1), i, M.level(i + 1))
    map_cokernel = low_top.quotient(image)
    kernel = _restricted_preimage(M, M.annihilated(i + 1), i, M.level(i + 1)) + up_bottom
    map_kernel = kernel.quotient(up_bottom)
    return GammaCheck(i, lower, upper, map_kernel, map_cokernel)


def canonical_morphism_report(
    M: LocalModule,
    lambdas: Iterable[tuple] | None = None,
    mus: Iterable[tuple] | None = None,
    gammas: Iterable[int] | None = None,
) -> CanonicalReport:
    """Checks lambda injectivity, mu surjectivity and Gamma isomorphisms.

    Default index sets: lambda(i, k) for 0 < k <= i < n (the k = i + 1 map
    lands in G^{(0)} = 0), mu(j, m) for j >= 0, m > 0, j + m < n, and every
    Gamma index.
    """
    n = M.n
    if lambdas is None:
        lambdas = [(i, k) for i in range(1, n) for k in range(1, i + 1)]
    if mus is None:
        mus = [(j, m) for j in range(n) for m in range(1, n - j)]
    if gammas is None:
        gammas = range(n)
    return CanonicalReport(
        tuple(lambda_check(M, i, k) for i, k in lambdas),
        tuple(mu_check(M, j, m) for j, m in mus),
        tuple(gamma_check(M, i) for i in gammas),
    )


def _sub(M: LocalModule, upper: Lattice, lower: Lattice | None = None) -> LocalModule:
    return M.subquotient(upper, lower)


def _same(a: LocalModule, b: LocalModule) -> bool:
    return a.signature() == b.signature()


def filt1_identities(M: LocalModule, i: int, j: int) -> dict:
    """Pass/fail of the five filtration identities at (i, j), sides built independently."""
    n = M.n
    if not (0 <= i <= n and 0 <= j <= n):
        raise IndexOutOfRange(f"indices ({i}, {j}) outside 0..{n}")
    Mi = _sub(M, M.level(i))
    Mup_i = _sub(M, M.annihilated(i))
    out = {}
    out["i"] = _same(Mi, _sub(M, M.ambient, M.annihilated(i)))
    out["ii"] = _same(Mup_i.subquotient(Mup_i.annihilated(j)), _sub(M, M.annihilated(min(i, j))))
    out["iii"] = _same(Mi.subquotient(Mi.level(j)), _sub(M, M.level(min(i + j, n))))
    out["iv"] = _same(Mi.subquotient(Mi.annihilated(j)), _sub(M, M.annihilated(i + j), M.annihilated(i)))
    lhs = Mup_i.subquotient(Mup_i.level(j))
    if i <= j:
        out["v"] = lhs.is_zero()
    else:
        Mj = _sub(M, M.level(j))
        out["v"] = _same(lhs, Mj.subquotient(Mj.annihilated(i - j)))
    return out

