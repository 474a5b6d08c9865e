"""Free resolutions, Ext, Tor and bundle covers for modules over A_n."""

from __future__ import annotations

from dataclasses import dataclass

from .dvr import InvariantFactors, Lattice, preimage
from .errors import AmbientTooSmall, RankTooSmall, ResolutionBudgetExceeded
from .modules import LocalModule, ModuleMap, subquotient_module
from .truncated import AMatrix, RingElement, flat_columns, flat_rows, kernel_over_A

__all__ = [
    "DEFAULT_MAX_STEPS",
    "DEFAULT_MAX_GENERATORS",
    "resolution",
    "ext_module",
    "tor_over_ambient",
    "tor_module",
    "CoverKernel",
    "bundle_cover_kernel",
]

DEFAULT_MAX_STEPS = 8
DEFAULT_MAX_GENERATORS = 64


def resolution(M: LocalModule, length: int, max_steps: int = DEFAULT_MAX_STEPS,
               max_generators: int = DEFAULT_MAX_GENERATORS) -> list:
    """Differentials ``[d_1, ..., d_length]`` of a minimal free resolution of M.

    ``d_k`` is an ``f_{k-1} x f_k`` matrix over A_n; a zero-column ``d_k``
    means the resolution has stopped.
    """
    if length > max_steps:
        raise ResolutionBudgetExceeded(f"requested {length} steps, budget is {max_steps}")
    P = M.minimal.presentation
    diffs = [P]
    while len(diffs) < length:
        prev = diffs[-1]
        nxt = kernel_over_A(prev) if prev.cols else AMatrix([], prev.n, prev.field, 0)
        if nxt.cols > max_generators:
            raise ResolutionBudgetExceeded(
                f"step {len(diffs) + 1} needs {nxt.cols} generators, cap is {max_generators}")
        diffs.append(nxt)
    return diffs


def _hom_differential(d: AMatrix, pN: int) -> AMatrix:
    """Precomposition with d: N^{f_{k-1}} -> N^{f_k}, lifted to A_n^{pN}-blocks."""
    n, f = d.n, d.field
    rows_out, cols_in = d.cols * pN, d.rows * pN
    zero = RingElement.zero(n, f)
    entries = [[zero] * cols_in for _ in range(rows_out)]
    for t in range(d.rows):
        for c in range(d.cols):
            e = d.entries[t][c]
            if e:
                for s in range(pN):
                    entries[c * pN + s][t * pN + s] = e
    return AMatrix(entries, n, f, cols_in)


def _relations_power(N: LocalModule, copies: int) -> Lattice:
    """K_N^{copies} inside (A_n^{pN})^{copies}, flattened as one lattice."""
    pres = AMatrix([[] for _ in range(0)], N.n, N.field, 0)
    for _ in range(copies):
        pres = pres.block_diag(N.presentation)
    dim = N.n * N.num_generators * copies
    return Lattice(flat_columns(pres) if pres.cols else [], dim, N.field)


def ext_module(M: LocalModule, N: LocalModule, i: int, max_steps: int = DEFAULT_MAX_STEPS,
               max_generators: int = DEFAULT_MAX_GENERATORS) -> InvariantFactors:
    """Invariant factors over D of Ext^i_{A_n}(M, N)."""
    if i < 0:
        raise ValueError("Ext degree must be non-negative")
    if M.n != N.n:
        raise ValueError("modules live over different rings")
    n, f = M.n, M.field
    N = N.minimal
    pN = N.num_generators
    diffs = resolution(M, i + 1, max_steps, max_generators)
    ranks = [diffs[0].rows] + [d.cols for d in diffs]
    fi = ranks[i]
    if fi == 0 or pN == 0:
        return InvariantFactors(0, ())
    dim_i = n * pN * fi
    # cocycles: delta^i(phi) lands in K_N^{f_{i+1}}
    d_next = diffs[i]
    if d_next.cols:
        delta = _hom_differential(d_next, pN)
        cycles = preimage(flat_rows(delta), dim_i, _relations_power(N, d_next.cols))
    else:
        cycles = Lattice.full(dim_i, f)
    bounds = _relations_power(N, fi).basis
    if i > 0:
        bounds = bounds + flat_columns(_hom_differential(diffs[i - 1], pN))
    return cycles.quotient(Lattice(bounds, dim_i, f))


def _lift_presentation(M: LocalModule, big_n: int) -> AMatrix:
    """Presentation of M as an A_{big_n}-module: [P lifted | z^n I]."""
    n, f, p = M.n, M.field, M.num_generators
    P = M.presentation
    zero = RingElement.zero(big_n, f)
    rows = []
    for j in range(p):
        row = [RingElement(list(e.coeffs) + [f.zero] * (big_n - n), big_n, f) for e in P.entries[j]]
        row += [RingElement.z_power(n, big_n, f) if c == j else zero for c in range(p)]
        rows.append(row)
    return AMatrix(rows, big_n, f, P.cols + p)


def _tor_lattices(M: LocalModule, big_n: int):
    if big_n < 2 * M.n:
        raise AmbientTooSmall(f"ambient multiplicity {big_n} is below 2n = {2 * M.n}")
    lifted = LocalModule(_lift_presentation(M, big_n))
    # Tor^1 = ker(z^n) / im(z^{N-n}) on the lifted module
    return lifted, lifted.annihilated(M.n), lifted.level(big_n - M.n)


def tor_over_ambient(M: LocalModule, big_n: int) -> InvariantFactors:
    """Invariant factors of Tor^1_{A_N}(M, A_n) for M over A_n, N = ``big_n``."""
    _, upper, lower = _tor_lattices(M, big_n)
    return upper.quotient(lower)


def tor_module(M: LocalModule, big_n: int) -> LocalModule:
    """Tor^1_{A_N}(M, A_n) as a module over A_N."""
    lifted, upper, lower = _tor_lattices(M, big_n)
    return lifted.subquotient(upper, lower)


@dataclass(frozen=True)
class CoverKernel:
    cover: ModuleMap
    kernel: LocalModule


def bundle_cover_kernel(M: LocalModule, r: int) -> CoverKernel:
    """Cover A_n^r -> M on minimal generators (extra generators map to 0) and its kernel."""
    Mm = M.minimal
    n, f, g = Mm.n, Mm.field, Mm.num_generators
    if r < g:
        raise RankTooSmall(f"cover rank {r} is below the {g} minimal generators")
    one, zero = RingElement.one(n, f), RingElement.zero(n, f)
    matrix = AMatrix([[one if c == j else zero for c in range(r)] for j in range(g)], n, f, r)
    source = LocalModule.free(r, n, f)
    cover = ModuleMap.build(source, Mm, matrix)
    kernel_lattice = preimage(flat_rows(matrix), n * r, Mm.relations) if g else Lattice.full(n * r, f)
    kernel = subquotient_module(n, r, kernel_lattice, None, f)
    return CoverKernel(cover, kernel)
