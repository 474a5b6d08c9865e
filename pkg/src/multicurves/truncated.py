"""The ring A_n = D[z]/(z^n) and matrices over it.

Every A_n-module computation is pushed down to D through the flattening
``A_n^p ≅ D^{np}``: the coordinate ``k*p + j`` holds the z^k coefficient of
the j-th component, and multiplication by z is the nilpotent shift
``k*p + j -> (k+1)*p + j``.
"""

from __future__ import annotations

from typing import Sequence

from .dvr import QQ, BaseField, Lattice, MatrixOverD, Scalar, kernel_basis

__all__ = ["RingElement", "AMatrix", "kernel_over_A", "shift", "flat_multiplication"]


class RingElement:
    """``sum_k coeffs[k] z^k`` in A_n; the tuple has exactly n entries."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence, n: int | None = None, field: BaseField = QQ):
        cs = [field(c) if not isinstance(c, Scalar) else c for c in coeffs]
        if n is not None:
            if len(cs) > n:
                if any(cs[n:]):
                    raise ValueError("coefficient of z^k with k >= n")
                cs = cs[:n]
            cs += [field.zero] * (n - len(cs))
        self.coeffs = tuple(cs)
        self.field = field

    @classmethod
    def _raw(cls, coeffs: tuple, field: BaseField) -> "RingElement":
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.field = field
        return obj

    @classmethod
    def zero(cls, n: int, field: BaseField = QQ) -> "RingElement":
        return cls._raw((field.zero,) * n, field)

    @classmethod
    def one(cls, n: int, field: BaseField = QQ) -> "RingElement":
        return cls.z_power(0, n, field)

    @classmethod
    def z_power(cls, k: int, n: int, field: BaseField = QQ, scalar: Scalar | None = None) -> "RingElement":
        cs = [field.zero] * n
        if k < n:
            cs[k] = field.one if scalar is None else scalar
        return cls._raw(tuple(cs), field)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def z_order(self) -> int:
        """Largest k with the element in z^k A_n (n for zero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return self.n

    def is_unit(self) -> bool:
        return self.coeffs[0].is_unit()

    def __add__(self, other: "RingElement") -> "RingElement":
        return RingElement._raw(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.field)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return RingElement._raw(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.field)

    def __neg__(self):
        return RingElement._raw(tuple(-a for a in self.coeffs), self.field)

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return RingElement._raw(tuple(a * other for a in self.coeffs), self.field)
        n = self.n
        out = [self.field.zero] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return RingElement._raw(tuple(out), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "RingElement":
        """Inverse of a unit: solve ``self * y = 1`` coefficientwise."""
        if not self.is_unit():
            raise ArithmeticError("not a unit of A_n")
        a = self.coeffs
        inv0 = a[0].inverse()
        y = [inv0]
        for k in range(1, self.n):
            acc = self.field.zero
            for i in range(1, k + 1):
                if a[i]:
                    acc = acc + a[i] * y[k - i]
            y.append(-(acc * inv0))
        return RingElement._raw(tuple(y), self.field)

    def truncate(self, m: int) -> "RingElement":
        """Image in A_m (m <= n) or lift to A_m (m > n) by zero padding."""
        if m <= self.n:
            return RingElement._raw(self.coeffs[:m], self.field)
        return RingElement._raw(self.coeffs + (self.field.zero,) * (m - self.n), self.field)

    def __eq__(self, other):
        return isinstance(other, RingElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            zk = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            cs = repr(c)
            if not zk:
                terms.append(cs)
            elif cs == "1":
                terms.append(zk)
            else:
                terms.append(f"({cs})*{zk}")
        return " + ".join(terms) if terms else "0"


class AMatrix:
    """Immutable p x q matrix over A_n."""

    __slots__ = ("n", "rows", "cols", "entries", "field")

    def __init__(self, entries: Sequence[Sequence[RingElement]], n: int, field: BaseField = QQ, cols: int | None = None):
        rows = tuple(tuple(e if isinstance(e, RingElement) else RingElement([e], n, field) for e in r) for r in entries)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.n = n
        self.rows = len(rows)
        self.cols = cols
        self.entries = rows
        self.field = field

    @classmethod
    def zeros(cls, p: int, q: int, n: int, field: BaseField = QQ) -> "AMatrix":
        z = RingElement.zero(n, field)
        return cls([[z] * q for _ in range(p)], n, field, q)

    @classmethod
    def identity(cls, p: int, n: int, field: BaseField = QQ) -> "AMatrix":
        z, o = RingElement.zero(n, field), RingElement.one(n, field)
        return cls([[o if i == j else z for j in range(p)] for i in range(p)], n, field, p)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RingElement]], p: int, n: int, field: BaseField) -> "AMatrix":
        return cls([[c[i] for c in columns] for i in range(p)], n, field, len(columns))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def column(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "AMatrix":
        return AMatrix(self.columns(), self.n, self.field, self.rows)

    def __matmul__(self, other: "AMatrix") -> "AMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = RingElement.zero(self.n, self.field)
        ocols = other.columns()
        out = []
        for row in self.entries:
            new = []
            for col in ocols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return AMatrix(out, self.n, self.field, other.cols)

    def hstack(self, other: "AMatrix") -> "AMatrix":
        return AMatrix([a + b for a, b in zip(self.entries, other.entries)], self.n, self.field, self.cols + other.cols)

    def block_diag(self, other: "AMatrix") -> "AMatrix":
        z = RingElement.zero(self.n, self.field)
        top = [list(r) + [z] * other.cols for r in self.entries]
        bottom = [[z] * self.cols + list(r) for r in other.entries]
        return AMatrix(top + bottom, self.n, self.field, self.cols + other.cols)

    def truncate(self, m: int) -> "AMatrix":
        return AMatrix([[e.truncate(m) for e in r] for r in self.entries], m, self.field, self.cols)

    def residue(self):
        """Image modulo (x, z) as a list of rows over the base field."""
        return [[e.coeffs[0].at_zero() for e in r] for r in self.entries]

    def flatten(self) -> MatrixOverD:
        """The D-matrix of this map on flattened coordinates (np x nq)."""
        return MatrixOverD(flat_rows(self), self.field, self.n * self.cols)

    def __eq__(self, other):
        return isinstance(other, AMatrix) and self.n == other.n and self.entries == other.entries and self.cols == other.cols

    def __hash__(self):
        return hash((self.n, self.entries))

    def __repr__(self):
        return f"AMatrix(n={self.n}, {self.rows}x{self.cols}, " + repr([[repr(e) for e in r] for r in self.entries]) + ")"


# ---------------------------------------------------------------------------
# flattening helpers


def flat_rows(P: AMatrix) -> list:
    """Row-list of the flattened np x nq matrix of ``P``."""
    n, p, q, f = P.n, P.rows, P.cols, P.field
    zero = f.zero
    out = [[zero] * (n * q) for _ in range(n * p)]
    for j in range(p):
        for c in range(q):
            e = P.entries[j][c]
            if not e:
                continue
            for l, a in enumerate(e.coeffs):
                if not a:
                    continue
                for k in range(n - l):
                    out[(k + l) * p + j][k * q + c] = a
    return out


def flat_columns(P: AMatrix) -> list:
    """Columns ``z^k P[:, c]`` of the flattened matrix, as flat vectors."""
    rows = flat_rows(P)
    return [[r[j] for r in rows] for j in range(P.n * P.cols)]


def flatten_vector(v: Sequence[RingElement], n: int, field: BaseField) -> list:
    p = len(v)
    out = [field.zero] * (n * p)
    for j, e in enumerate(v):
        for k, a in enumerate(e.coeffs):
            out[k * p + j] = a
    return out


def unflatten_vector(w: Sequence[Scalar], n: int, p: int, field: BaseField) -> list:
    return [RingElement._raw(tuple(w[k * p + j] for k in range(n)), field) for j in range(p)]


def shift(w: Sequence[Scalar], n: int, p: int, k: int = 1) -> list:
    """Multiply a flat vector of A_n^p by z^k."""
    zero = w[0].field.zero if w else None
    if k >= n:
        return [zero] * len(w)
    return [zero] * (k * p) + list(w[: (n - k) * p])


def flat_multiplication(a: RingElement, p: int) -> list:
    """Row-list of multiplication by ``a`` on A_n^p, flattened (np x np)."""
    n, f = a.n, a.field
    zero = f.zero
    out = [[zero] * (n * p) for _ in range(n * p)]
    for l, c in enumerate(a.coeffs):
        if not c:
            continue
        for k in range(n - l):
            for j in range(p):
                out[(k + l) * p + j][k * p + j] = c
    return out


def kernel_over_A(M: AMatrix, minimal: bool = True) -> AMatrix:
    """Generators of ker(M: A_n^q -> A_n^p), as the columns of a q x g matrix.

    The kernel is solved over D on the flattening; with ``minimal=True`` a
    minimal A_n-generating subset is extracted (Nakayama over the maximal
    ideal (x, z)).
    """
    n, f, q = M.n, M.field, M.cols
    if q == 0:
        return AMatrix([], n, f, 0)
    if M.rows == 0:
        return AMatrix.identity(q, n, f)
    ker = kernel_basis(flat_rows(M), n * M.rows, n * q, f)
    if minimal and ker:
        lat = Lattice(ker, n * q, f)
        ker = minimal_generators(lat, n, q)
    cols = [unflatten_vector(w, n, q, f) for w in ker]
    return AMatrix.from_columns(cols, q, n, f)


def z_action(lat: Lattice, n: int, p: int) -> list:
    """Coordinates (in ``lat.basis``) of z times each basis vector; columns."""
    out = []
    for b in lat.basis:
        c = lat.coords(shift(b, n, p))
        if c is None:
            raise ValueError("lattice is not stable under z")
        out.append(c)
    return out


def minimal_generators(lat: Lattice, n: int, p: int, relations: Sequence[Sequence[Scalar]] = ()) -> list:
    """Minimal A_n-generators of the z-stable lattice ``lat`` modulo ``relations``.

    The chosen basis vectors are those whose images span
    ``lat / ((x, z) lat + relations)`` over the residue field.
    """
    from .residue import residue_pivots

    if lat.rank == 0:
        return []
    zcols = z_action(lat, n, p)
    rcols = []
    for r in relations:
        c = lat.coords(r)
        if c is None:
            raise ValueError("relation outside the lattice")
        rcols.append(c)
    chosen = residue_pivots(zcols + rcols, lat.rank, lat.field)
    return [lat.basis[j] for j in chosen]
