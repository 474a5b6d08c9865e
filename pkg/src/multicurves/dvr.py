"""Exact arithmetic in the local ring D = F[x]_(x) and Smith normal form over it.

Elements of D are reduced fractions ``num/den`` of polynomials over a base
field F (the rationals or a prime field), normalised so that ``den(0) == 1``.
Since D is a discrete valuation ring with uniformiser ``x``, every invariant
factor of a matrix over D is a power of ``x``; :func:`smith_normal_form`
returns the exponents.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import flint

from .errors import NotInLocalRing

INFINITY = math.inf

__all__ = [
    "BaseField",
    "QQ",
    "GF",
    "Scalar",
    "normalize",
    "valuation",
    "MatrixOverD",
    "SNFResult",
    "smith_normal_form",
    "InvariantFactors",
    "Lattice",
    "INFINITY",
]


@dataclass(frozen=True)
class BaseField:
    """Coefficient field of D: ``p == 0`` means the rationals, else F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p and (self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p**0.5) + 1))):
            raise ValueError(f"{self.p} is not prime")

    @property
    def tag(self) -> str:
        return "q" if self.p == 0 else str(self.p)

    def constant(self, c):
        if self.p:
            if isinstance(c, Fraction):
                return flint.nmod(c.numerator, self.p) / flint.nmod(c.denominator, self.p)
            return flint.nmod(int(c) % self.p, self.p) if isinstance(c, int) else flint.nmod(c, self.p)
        if isinstance(c, Fraction):
            return flint.fmpq(c.numerator, c.denominator)
        return flint.fmpq(c)

    def poly(self, coeffs):
        if self.p:
            return flint.nmod_poly([self.constant(c) for c in coeffs], self.p)
        return flint.fmpq_poly([self.constant(c) for c in coeffs])

    @property
    def zero(self) -> "Scalar":
        z = _ZEROS.get(self)
        if z is None:
            z = _ZEROS[self] = Scalar._raw(self.poly([]), self.poly([1]), self)
        return z

    @property
    def one(self) -> "Scalar":
        o = _ONES.get(self)
        if o is None:
            o = _ONES[self] = Scalar._raw(self.poly([1]), self.poly([1]), self, 0)
        return o

    def x_power(self, k: int) -> "Scalar":
        return Scalar._raw(self.poly([0] * k + [1]), self.poly([1]), self, k)

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar(value, 1, self)

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"


_ZEROS: dict = {}
_ONES: dict = {}

QQ = BaseField(0)


def GF(p: int) -> BaseField:
    return BaseField(p)


def _lowest_degree(poly) -> int:
    for i, c in enumerate(poly.coeffs()):
        if c != 0:
            return i
    return -1


class Scalar:
    """An element ``num/den`` of D with ``gcd(num, den) = 1`` and ``den(0) = 1``."""

    __slots__ = ("num", "den", "field", "_val")

    def __init__(self, num=0, den=1, field: BaseField = QQ):
        n = _as_poly(num, field)
        d = _as_poly(den, field)
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        s = _reduce(n, d, field)
        self.num, self.den, self.field, self._val = s.num, s.den, field, s._val

    @classmethod
    def _raw(cls, num, den, field, val=None):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj.field = field
        obj._val = val
        return obj

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def valuation(self):
        if self._val is None:
            v = _lowest_degree(self.num)
            self._val = INFINITY if v < 0 else v
        return self._val

    def at_zero(self):
        """Image in the residue field F = D/(x)."""
        return self.num(0) if not self.num.is_zero() else self.field.constant(0)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, int):
            return Scalar._raw(self.field.poly([other]), self.field.poly([1]), self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        f = self.field
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num + other.num, self.den, f)
        if self.den == other.den:
            return _reduce(self.num + other.num, self.den, f)
        return _reduce(self.num * other.den + other.num * self.den, self.den * other.den, f)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den, self.field, self._val)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        if self.num.is_zero() or other.num.is_zero():
            return f.zero
        val = None
        if self._val is not None and other._val is not None:
            val = self._val + other._val
        if self.den.is_one() and other.den.is_one():
            return Scalar._raw(self.num * other.num, self.den, f, val)
        return _reduce(self.num * other.num, self.den * other.den, f, val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Exact division inside D; raises :class:`NotInLocalRing` otherwise."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero in D")
        if self.num.is_zero():
            return self
        return _reduce(self.num * other.den, self.den * other.num, self.field)

    def inverse(self) -> "Scalar":
        return self.field.one / self

    def div_x_power(self, k: int) -> "Scalar":
        """Divide by x**k; requires valuation >= k."""
        if k == 0 or self.num.is_zero():
            return self
        if self.valuation() < k:
            raise NotInLocalRing(f"{self} is not divisible by x^{k}")
        return Scalar._raw(self.num.right_shift(k), self.den, self.field, self._val - k)

    def __pow__(self, k: int):
        out = self.field.one
        for _ in range(k):
            out = out * self
        return out

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(int(c) if self.field.p else (int(c.p), int(c.q)) for c in self.num.coeffs()),
                     tuple(int(c) if self.field.p else (int(c.p), int(c.q)) for c in self.den.coeffs())))

    def __repr__(self):
        num = str(self.num)
        if self.den.is_one():
            return num
        return f"({num})/({self.den})"


def _as_poly(value, field: BaseField):
    if isinstance(value, (flint.fmpq_poly, flint.nmod_poly)):
        return value
    if isinstance(value, (list, tuple)):
        return field.poly(list(value))
    return field.poly([value])


def _reduce(num, den, field: BaseField, val=None) -> Scalar:
    if num.is_zero():
        return field.zero
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_one():
            num = num // g
            den = den // g
    c0 = den(0) if not den.is_zero() else 0
    if c0 == 0:
        raise NotInLocalRing(f"({num})/({den}) has a pole at x = 0")
    if c0 != 1:
        inv = 1 / c0
        num = num * inv
        den = den * inv
    return Scalar._raw(num, den, field, val)


def normalize(num, den, field: BaseField = QQ) -> Scalar:
    """Build the reduced element ``num/den`` of D.

    >>> normalize([0, 1, 1], [1, 1])
    x
    """
    d = _as_poly(den, field)
    if d.is_zero():
        raise ZeroDivisionError("zero denominator")
    return _reduce(_as_poly(num, field), d, field)


def valuation(s: Scalar):
    """Order of vanishing at x = 0 (``math.inf`` for zero)."""
    return s.valuation()


# ---------------------------------------------------------------------------
# matrices


class MatrixOverD:
    """Immutable rectangular matrix with entries in D."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, entries: Sequence[Sequence], field: BaseField = QQ, cols: int | None = None):
        rows = [tuple(field(e) if not isinstance(e, Scalar) else e for e in row) for row in entries]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)
        self.field = field

    @classmethod
    def identity(cls, k: int, field: BaseField = QQ) -> "MatrixOverD":
        z, o = field.zero, field.one
        return cls([[o if i == j else z for j in range(k)] for i in range(k)], field, k)

    @classmethod
    def zeros(cls, r: int, c: int, field: BaseField = QQ) -> "MatrixOverD":
        z = field.zero
        return cls([[z] * c for _ in range(r)], field, c)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], nrows: int, field: BaseField) -> "MatrixOverD":
        return cls([[col[i] for col in columns] for i in range(nrows)], field, len(columns))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list:
        return [row[j] for row in self.entries]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "MatrixOverD":
        return MatrixOverD([self.column(j) for j in range(self.cols)], self.field, self.rows)

    def __matmul__(self, other: "MatrixOverD") -> "MatrixOverD":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        z = self.field.zero
        out = []
        ocols = other.columns()
        for row in self.entries:
            new = []
            for col in ocols:
                acc = z
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return MatrixOverD(out, self.field, other.cols)

    def __eq__(self, other):
        return isinstance(other, MatrixOverD) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def determinant(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.entries]
        k = self.rows
        det = self.field.one
        for t in range(k):
            piv = min((i for i in range(t, k) if a[i][t]), key=lambda i: a[i][t].valuation(), default=None)
            if piv is None:
                return self.field.zero
            if piv != t:
                a[t], a[piv] = a[piv], a[t]
                det = -det
            p = a[t][t]
            det = det * p
            for i in range(t + 1, k):
                if a[i][t]:
                    f = a[i][t] / p
                    a[i] = [a[i][j] - f * a[t][j] if j >= t else a[i][j] for j in range(k)]
        return det

    def is_diagonal(self) -> bool:
        return all(not self.entries[i][j] for i in range(self.rows) for j in range(self.cols) if i != j)

    def __repr__(self):
        return "MatrixOverD([" + ", ".join("[" + ", ".join(map(repr, r)) + "]" for r in self.entries) + "])"


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V`` is diagonal with entries ``x**a`` for ``a`` in ``exponents``."""

    U: MatrixOverD
    V: MatrixOverD
    exponents: tuple
    rank: int
    U_inv: MatrixOverD | None = dc_field(default=None, compare=False)

    @property
    def invariant_factors(self) -> "InvariantFactors":
        rows = self.U.rows
        return InvariantFactors(rows - self.rank, tuple(a for a in self.exponents if a > 0))


def _snf_core(a: list, nrows: int, ncols: int, field: BaseField, want_u=True, want_v=True, want_uinv=False):
    """In-place Smith reduction of the row-list ``a``.

    Pivot = entry of minimal valuation, ties broken by lowest row then column.
    Returns (exponents, U rows, V rows, Uinv rows); transforms are ``None`` when
    not requested.
    """
    zero, one = field.zero, field.one
    U = [[one if i == j else zero for j in range(nrows)] for i in range(nrows)] if want_u else None
    Uinv = [[one if i == j else zero for j in range(nrows)] for i in range(nrows)] if want_uinv else None
    V = [[one if i == j else zero for j in range(ncols)] for i in range(ncols)] if want_v else None
    exps = []
    t = 0
    while t < nrows and t < ncols:
        best = None
        bv = INFINITY
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                e = row[j]
                if e:
                    v = e.valuation()
                    if v < bv:
                        bv, best = v, (i, j)
                        if v == 0:
                            break
            if bv == 0:
                break
        if best is None:
            break
        pi, pj = best
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            if U is not None:
                U[t], U[pi] = U[pi], U[t]
            if Uinv is not None:
                for row in Uinv:
                    row[t], row[pi] = row[pi], row[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            if V is not None:
                for row in V:
                    row[t], row[pj] = row[pj], row[t]
        v = int(bv)
        piv = a[t][t]
        if not (piv.den.is_one() and piv.num.length() == v + 1 and piv.num[v] == 1):
            # scale the pivot row by the unit x^v / piv so the pivot is exactly x^v
            c = field.x_power(v) / piv
            rowt = a[t]
            for j in range(t, ncols):
                if rowt[j]:
                    rowt[j] = rowt[j] * c
            if U is not None:
                U[t] = [u * c if u else u for u in U[t]]
            if Uinv is not None:
                ci = piv.div_x_power(v)
                for row in Uinv:
                    if row[t]:
                        row[t] = row[t] * ci
        rowt = a[t]
        nz = [j for j in range(t + 1, ncols) if rowt[j]]
        for i in range(t + 1, nrows):
            e = a[i][t]
            if not e:
                continue
            f = e.div_x_power(v)
            row = a[i]
            for j in nz:
                row[j] = row[j] - f * rowt[j]
            row[t] = zero
            if U is not None:
                Ut, Ui = U[t], U[i]
                U[i] = [ui - f * ut if ut else ui for ui, ut in zip(Ui, Ut)]
            if Uinv is not None:
                for row2 in Uinv:
                    if row2[i]:
                        row2[t] = row2[t] + f * row2[i]
        for j in nz:
            g = rowt[j].div_x_power(v)
            rowt[j] = zero
            if V is not None:
                for row in V:
                    if row[t]:
                        row[j] = row[j] - g * row[t]
        exps.append(v)
        t += 1
    return exps, U, V, Uinv


def smith_normal_form(M: MatrixOverD, inverse: bool = False) -> SNFResult:
    """Smith normal form of ``M`` over D.

    Returns U, V invertible over D with ``U @ M @ V = diag(x**a_1, ..., x**a_r, 0, ...)``
    and ``a_1 <= ... <= a_r``.  Pass ``inverse=True`` to also get ``U^{-1}``.
    """
    f = M.field
    a = [list(r) for r in M.entries]
    exps, U, V, Uinv = _snf_core(a, M.rows, M.cols, f, True, True, inverse)
    return SNFResult(
        MatrixOverD(U, f, M.rows),
        MatrixOverD(V, f, M.cols),
        tuple(exps),
        len(exps),
        MatrixOverD(Uinv, f, M.rows) if inverse else None,
    )


@dataclass(frozen=True, order=True)
class InvariantFactors:
    """Isomorphism class of a finitely generated D-module: ``D^free ⊕ ⊕ D/(x^a)``."""

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def length(self) -> int:
        """Length of the torsion part (sum of exponents)."""
        return sum(self.torsion)

    def __add__(self, other: "InvariantFactors") -> "InvariantFactors":
        return InvariantFactors(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __repr__(self):
        return f"InvariantFactors(free={self.free_rank}, torsion={list(self.torsion)})"


ZERO_MODULE = InvariantFactors(0, ())


class Lattice:
    """A D-submodule of D^dim, stored through an adapted basis.

    With ``U @ G @ V = diag(x**a)`` for the generator matrix G, the columns
    ``x**a_j * U^{-1} e_j`` form a basis and ``U`` gives coordinates.
    """

    __slots__ = ("dim", "field", "rank", "exponents", "_U", "_Uinv", "_basis", "_Usparse")

    def __init__(self, generators: Iterable[Sequence[Scalar]], dim: int, field: BaseField):
        gens = [list(g) for g in generators if any(g)]
        self.dim = dim
        self.field = field
        if not gens:
            self.rank = 0
            self.exponents = ()
            self._U = None
            self._Uinv = None
            self._basis = []
            self._Usparse = None
            return
        a = [[g[i] for g in gens] for i in range(dim)]
        exps, U, _, Uinv = _snf_core(a, dim, len(gens), field, True, False, True)
        self.rank = len(exps)
        self.exponents = tuple(exps)
        self._U = U
        self._Uinv = Uinv
        self._basis = None
        self._Usparse = None

    @classmethod
    def full(cls, dim: int, field: BaseField) -> "Lattice":
        one, zero = field.one, field.zero
        return cls([[one if i == j else zero for i in range(dim)] for j in range(dim)], dim, field)

    @property
    def basis(self) -> list:
        if self._basis is None:
            out = []
            for j, a in enumerate(self.exponents):
                xa = self.field.x_power(a)
                out.append([row[j] * xa if row[j] else row[j] for row in self._Uinv])
            self._basis = out
        return self._basis

    def _apply_u(self, w):
        if self._Usparse is None:
            self._Usparse = [[(j, u) for j, u in enumerate(row) if u] for row in self._U]
        zero = self.field.zero
        out = []
        for row in self._Usparse:
            acc = zero
            for j, u in row:
                c = w[j]
                if c:
                    acc = acc + u * c
            out.append(acc)
        return out

    def coords(self, w: Sequence[Scalar]) -> list | None:
        """Coordinates of ``w`` in :attr:`basis`, or ``None`` if ``w`` is not in the lattice."""
        if self.rank == 0:
            return [] if not any(w) else None
        c = self._apply_u(w)
        if any(c[self.rank:]):
            return None
        out = []
        for cj, a in zip(c, self.exponents):
            if cj and cj.valuation() < a:
                return None
            out.append(cj.div_x_power(a))
        return out

    def contains(self, w) -> bool:
        return self.coords(w) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.rank == other.rank and self.contains_lattice(other) and other.contains_lattice(self)

    __hash__ = None

    def quotient(self, sub: "Lattice | Iterable") -> InvariantFactors:
        """Invariant factors of ``self / sub``; ``sub`` must lie in ``self``."""
        gens = sub.basis if isinstance(sub, Lattice) else list(sub)
        cols = []
        for g in gens:
            c = self.coords(g)
            if c is None:
                raise ValueError("quotient: submodule is not contained in the lattice")
            if any(c):
                cols.append(c)
        if not cols:
            return InvariantFactors(self.rank, ())
        a = [[c[i] for c in cols] for i in range(self.rank)]
        exps, _, _, _ = _snf_core(a, self.rank, len(cols), self.field, False, False, False)
        return InvariantFactors(self.rank - len(exps), tuple(e for e in exps if e > 0))

    def saturation(self) -> "Lattice":
        """Smallest saturated lattice containing this one (drop the x-powers)."""
        if self.rank == 0:
            return self
        return Lattice([[row[j] for row in self._Uinv] for j in range(self.rank)], self.dim, self.field)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice(self.basis + other.basis, self.dim, self.field)

    def __repr__(self):
        return f"Lattice(rank={self.rank}, dim={self.dim}, exponents={self.exponents})"


def kernel_basis(columns_matrix: list, nrows: int, ncols: int, field: BaseField) -> list:
    """D-basis of the kernel of the D-linear map with the given row-list matrix."""
    if ncols == 0:
        return []
    a = [list(r) for r in columns_matrix]
    exps, _, V, _ = _snf_core(a, nrows, ncols, field, False, True, False)
    r = len(exps)
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def preimage(rows: list, src_dim: int, target: Lattice) -> Lattice:
    """``{u in D^src_dim : A u in target}`` for the row-list matrix A."""
    f = target.field
    tb = target.basis
    if not rows:
        return Lattice.full(src_dim, f)
    aug = [list(r) + [-b[i] for b in tb] for i, r in enumerate(rows)]
    ker = kernel_basis(aug, len(rows), src_dim + len(tb), f)
    return Lattice([k[:src_dim] for k in ker], src_dim, f)


def solve(rows: list, ncols: int, b: Sequence[Scalar], field: BaseField) -> list | None:
    """A solution over D of ``A y = b``, or ``None`` if there is none."""
    nrows = len(rows)
    if ncols == 0:
        return [] if not any(b) else None
    a = [list(r) for r in rows]
    exps, U, V, _ = _snf_core(a, nrows, ncols, field, True, True, False)
    ub = []
    for row in U:
        acc = field.zero
        for u, c in zip(row, b):
            if u and c:
                acc = acc + u * c
        ub.append(acc)
    r = len(exps)
    if any(ub[r:]):
        return None
    y = []
    for j in range(ncols):
        if j < r:
            if ub[j] and ub[j].valuation() < exps[j]:
                return None
            y.append(ub[j].div_x_power(exps[j]))
        else:
            y.append(field.zero)
    out = []
    for row in V:
        acc = field.zero
        for v, c in zip(row, y):
            if v and c:
                acc = acc + v * c
        out.append(acc)
    return out
