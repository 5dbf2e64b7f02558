# modules/ratlin.py
"""
Exact rational linear algebra.

Every rank, kernel, image and quotient in the engine is computed here.
Matrices carry fractions.Fraction entries; elimination, null spaces,
determinants and inverses are delegated to sympy.Matrix over the rationals.
Matrices are dense and immutable; subspaces are stored in canonical form
(nonzero rows of their reduced row echelon form), so two Subspace values are
equal exactly when their canonical rows coincide.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from utils import SymplHodgeError

Vector = Tuple[Fraction, ...]


class RatlinError(SymplHodgeError, ValueError):
    """Dimension mismatch between matrices, vectors or subspaces."""


class SingularMatrixError(RatlinError):
    pass


def _vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class Matrix:
    rows: Tuple[Vector, ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise RatlinError(f"Row of length {len(row)} in a matrix with {self.ncols} columns")

    # ---------------- CONSTRUCTORS ----------------
    @classmethod
    def build(cls, rows: Sequence[Sequence], ncols: Optional[int] = None) -> "Matrix":
        rows = tuple(_vec(r) for r in rows)
        if ncols is None:
            if not rows:
                raise RatlinError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        zero = Fraction(0)
        return cls(tuple((zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        columns = [_vec(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise RatlinError(f"Column of length {len(c)} in a matrix with {nrows} rows")
        return cls(tuple(tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    # ---------------- SHAPE / ACCESS ----------------
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def rank(self) -> int:
        return len(rref(self)[1])

    # ---------------- ARITHMETIC ----------------
    def transpose(self) -> "Matrix":
        return Matrix.from_columns(self.rows, self.ncols)

    def apply(self, vector: Sequence) -> Vector:
        if len(vector) != self.ncols:
            raise RatlinError(f"Vector of length {len(vector)} for a matrix with {self.ncols} columns")
        vector = _vec(vector)
        return tuple(sum((a * b for a, b in zip(row, vector) if a and b), Fraction(0)) for row in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise RatlinError(f"Cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return Matrix(tuple(tuple(sum((a * b for a, b in zip(row, c) if a and b), Fraction(0))
                                  for c in cols) for row in self.rows), other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise RatlinError(f"Cannot add {self.shape} and {other.shape}")
        return Matrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                      self.ncols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, factor) -> "Matrix":
        factor = Fraction(factor)
        return Matrix(tuple(tuple(factor * x for x in row) for row in self.rows), self.ncols)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise RatlinError(f"Cannot place {self.shape} beside {other.shape}")
        return Matrix(tuple(r + s for r, s in zip(self.rows, other.rows)), self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise RatlinError(f"Cannot stack {self.shape} over {other.shape}")
        return Matrix(self.rows + other.rows, self.ncols)

    def select_rows(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(tuple(self.rows[i] for i in indices), self.ncols)


# ---------------- ELIMINATION ----------------
def to_sympy_matrix(m: Matrix) -> sympy.Matrix:
    entries = [sympy.Rational(x.numerator, x.denominator) for row in m.rows for x in row]
    return sympy.Matrix(m.nrows, m.ncols, entries)


def _from_sympy_entry(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def from_sympy_matrix(sm: sympy.Matrix) -> Matrix:
    return Matrix(tuple(tuple(_from_sympy_entry(sm[i, j]) for j in range(sm.cols)) for i in range(sm.rows)),
                  sm.cols)


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns; rank is len(pivots)."""
    if m.nrows == 0 or m.ncols == 0:
        return m, []
    reduced, pivots = to_sympy_matrix(m).rref()
    return from_sympy_matrix(reduced), list(pivots)


# ---------------- SUBSPACES ----------------
@dataclass(frozen=True)
class Subspace:
    """
    A subspace of Q^ambient_dim held as the nonzero rows of its RREF.
    Leading entries are 1, so equality of values is equality of subspaces.
    """
    ambient_dim: int
    rows: Tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vectors = [list(_vec(v)) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise RatlinError(f"Vector of length {len(v)} in ambient dimension {ambient_dim}")
        if not vectors:
            return cls.zero(ambient_dim)
        reduced, pivots = rref(Matrix(tuple(tuple(v) for v in vectors), ambient_dim))
        return cls(ambient_dim, reduced.rows[:len(pivots)])

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim).rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Matrix:
        """The canonical basis as the columns of an ambient_dim x dim matrix."""
        return Matrix.from_columns(self.rows, self.ambient_dim)

    @property
    def pivots(self) -> List[int]:
        return [next(j for j, x in enumerate(row) if x != 0) for row in self.rows]

    def contains_vector(self, vector: Sequence) -> bool:
        vector = _vec(vector)
        if len(vector) != self.ambient_dim:
            raise RatlinError(f"Vector of length {len(vector)} in ambient dimension {self.ambient_dim}")
        residue = list(vector)
        for p, row in zip(self.pivots, self.rows):
            f = residue[p]
            if f:
                residue = [x - f * y for x, y in zip(residue, row)]
        return not any(residue)

    def is_zero(self) -> bool:
        return not self.rows


def kernel(m: Matrix) -> Subspace:
    """Null space of m inside Q^ncols; dim = ncols - rank."""
    if m.nrows == 0:
        return Subspace.full(m.ncols)
    if m.ncols == 0:
        return Subspace.zero(0)
    vectors = [[_from_sympy_entry(x) for x in v] for v in to_sympy_matrix(m).nullspace()]
    return Subspace.span(vectors, m.ncols)


def image(m: Matrix) -> Subspace:
    """Column span of m inside Q^nrows."""
    return Subspace.span(m.columns(), m.nrows)


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise RatlinError(f"Ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.ambient_dim)
    # x = A u = B v  <=>  [A | -B] (u, v) = 0
    stacked = a.basis.hstack(-b.basis)
    k = kernel(stacked)
    vectors = [a.basis.apply(v[:a.dim]) for v in k.rows]
    return Subspace.span(vectors, a.ambient_dim)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(a.rows + b.rows, a.ambient_dim)


def contains(a: Subspace, b: Subspace) -> bool:
    """True when b is a subspace of a."""
    _check_ambient(a, b)
    return all(a.contains_vector(v) for v in b.rows)


def equal(a: Subspace, b: Subspace) -> bool:
    _check_ambient(a, b)
    return a.rows == b.rows


def solve(m: Matrix, rhs: Sequence) -> Optional[Vector]:
    """One exact solution of m x = rhs (free variables set to 0), or None."""
    rhs = _vec(rhs)
    if len(rhs) != m.nrows:
        raise RatlinError(f"Right-hand side of length {len(rhs)} for {m.nrows} equations")
    if m.nrows == 0:
        return tuple(Fraction(0) for _ in range(m.ncols))
    augmented = Matrix(tuple(r + (b,) for r, b in zip(m.rows, rhs)), m.ncols + 1)
    reduced, pivots = rref(augmented)
    if m.ncols in pivots:
        return None
    x = [Fraction(0)] * m.ncols
    for row, p in zip(reduced.rows, pivots):
        x[p] = row[-1]
    return tuple(x)


def complement_coordinates(sub: Subspace) -> List[int]:
    """Coordinates outside the pivot set of the subspace's RREF."""
    pivots = set(sub.pivots)
    return [j for j in range(sub.ambient_dim) if j not in pivots]


def quotient_map(sub: Subspace, ambient_dim: Optional[int] = None) -> Matrix:
    """
    Square projection onto the span of the non-pivot coordinates of sub,
    along sub. Its kernel is exactly sub.
    """
    n = sub.ambient_dim if ambient_dim is None else ambient_dim
    if n != sub.ambient_dim:
        raise RatlinError(f"Subspace of ambient dimension {sub.ambient_dim} used in dimension {n}")
    columns = []
    for j in range(n):
        v = [Fraction(int(i == j)) for i in range(n)]
        for p, row in zip(sub.pivots, sub.rows):
            f = v[p]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        columns.append(v)
    return Matrix.from_columns(columns, n)


def quotient_coordinates(sub: Subspace) -> Matrix:
    """quotient_map restricted to the complement coordinates: Q^n -> Q^(n - dim sub)."""
    return quotient_map(sub).select_rows(complement_coordinates(sub))


# ---------------- SQUARE MATRICES ----------------
def determinant(m: Matrix) -> Fraction:
    if m.nrows != m.ncols:
        raise RatlinError(f"Determinant of a non-square {m.shape} matrix")
    if m.nrows == 0:
        return Fraction(1)
    return _from_sympy_entry(to_sympy_matrix(m).det())


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise RatlinError(f"Inverse of a non-square {m.shape} matrix")
    if m.nrows == 0:
        return m
    try:
        return from_sympy_matrix(to_sympy_matrix(m).inv())
    except ValueError as exc:
        raise SingularMatrixError(f"Matrix of shape {m.shape} is singular (rank {m.rank()})") from exc
