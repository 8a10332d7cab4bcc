"""Exact rational linear algebra: rank, nullspace, determinant and LDLᵀ.

Scalars are ``fractions.Fraction`` (always reduced, positive denominator).
Vectors are tuples of fractions, matrices are immutable row-major grids.
Elimination is fraction-free on rows cleared of their denominators; the pivot
is always the first nonzero entry of a column, so every result is
reproducible bit for bit.
"""
import re
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pdelaunay.core.errors import IndefiniteFormError, UsageError

Rational = Fraction
Vector = Tuple[Fraction, ...]
Scalar = Union[int, str, Fraction]

_RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


def to_rational(value: Scalar) -> Fraction:
    """Coerce an int, Fraction or rational string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise UsageError(f"Unsupported scalar type: {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Canonical string: "p/q" with q > 0, or "p" when q = 1."""
    value = to_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" (optional leading minus on p only)."""
    stripped = text.strip()
    if not _RATIONAL_PATTERN.match(stripped):
        raise UsageError(f"Not a rational literal: {text!r}")
    numerator, _, denominator = stripped.partition("/")
    if denominator and int(denominator) == 0:
        raise UsageError(f"Zero denominator in rational literal: {text!r}")
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def vector(values: Iterable[Scalar]) -> Vector:
    """Build a RationalVector from ints, fractions or rational strings."""
    return tuple(to_rational(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise UsageError(f"Dimension mismatch in dot product: {len(u)} != {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise UsageError(f"Dimension mismatch in addition: {len(u)} != {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise UsageError(f"Dimension mismatch in subtraction: {len(u)} != {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale(u: Sequence[Fraction], c: Scalar) -> Vector:
    c = to_rational(c)
    return tuple(a * c for a in u)


def neg(u: Sequence[Fraction]) -> Vector:
    return tuple(-a for a in u)


def zero_vector(dim: int) -> Vector:
    return (Fraction(0),) * dim


def unit_vector(dim: int, index: int) -> Vector:
    return tuple(Fraction(1) if i == index else Fraction(0) for i in range(dim))


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common denominator of a collection of fractions (1 if empty)."""
    den = 1
    for value in values:
        den = lcm(den, value.denominator)
    return den


def clear_denominators(row: Sequence[Fraction]) -> List[int]:
    """Scale a rational row by its least common denominator to integers."""
    den = common_denominator(row)
    return [int(v * den) for v in row]


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of fractions, stored row-major."""

    rows: int
    cols: int
    entries: Tuple[Vector, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise UsageError(f"Matrix shape must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise UsageError(f"Matrix entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> "RationalMatrix":
        entries = tuple(vector(r) for r in rows)
        if not entries:
            raise UsageError("Matrix must have at least one row")
        return cls(len(entries), len(entries[0]), entries)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([unit_vector(n, i) for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls.from_rows([zero_vector(cols) for _ in range(rows)])

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def mat_vec(self, v: Sequence[Fraction]) -> Vector:
        return tuple(dot(r, v) for r in self.entries)

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise UsageError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = [other.column(j) for j in range(other.cols)]
        return RationalMatrix.from_rows([[dot(r, c) for c in columns] for r in self.entries])

    def scaled(self, c: Scalar) -> "RationalMatrix":
        return RationalMatrix.from_rows([scale(r, c) for r in self.entries])

    def submatrix(self, size: int) -> "RationalMatrix":
        """Leading principal submatrix of the given size."""
        return RationalMatrix.from_rows([r[:size] for r in self.entries[:size]])

    def to_strings(self) -> List[List[str]]:
        return [[format_rational(v) for v in r] for r in self.entries]


def _primitive(row: List[int]) -> List[int]:
    """Divide an integer row by the gcd of its entries."""
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            return row
    if g <= 1:
        return row
    return [v // g for v in row]


class IncrementalEchelon:
    """Integer row echelon form, built one row at a time.

    Rows are kept primitive with a positive pivot and sorted by pivot column.
    Adding a row costs O(rank * cols); callers may stop adding rows once a
    target rank is reached.
    """

    def __init__(self, cols: int):
        """
        Args:
            cols: Number of columns of every row added
        """
        self.cols = cols
        self._rows: List[List[int]] = []
        self._pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(self._pivots)

    def reduce(self, row: Sequence[int]) -> List[int]:
        """Eliminate every known pivot from an integer row."""
        if len(row) != self.cols:
            raise UsageError(f"Row has {len(row)} entries, expected {self.cols}")
        vec = list(row)
        for basis_row, pivot in zip(self._rows, self._pivots):
            a = vec[pivot]
            if a == 0:
                continue
            b = basis_row[pivot]
            g = gcd(a, b)
            keep, take = b // g, a // g
            vec = _primitive([keep * x - take * y for x, y in zip(vec, basis_row)])
        return vec

    def add(self, row: Sequence[int]) -> bool:
        """Add a row; returns True if it increased the rank."""
        vec = self.reduce(row)
        pivot = next((j for j, v in enumerate(vec) if v != 0), None)
        if pivot is None:
            return False
        if vec[pivot] < 0:
            vec = [-v for v in vec]
        vec = _primitive(vec)
        where = bisect_left(self._pivots, pivot)
        self._rows.insert(where, vec)
        self._pivots.insert(where, pivot)
        return True

    def add_rational(self, row: Sequence[Fraction]) -> bool:
        return self.add(clear_denominators(row))

    def reduced_rows(self) -> List[List[int]]:
        """Fraction-free reduced echelon form: zeros above and below every pivot."""
        rows = [list(r) for r in self._rows]
        for i in range(len(rows) - 1, -1, -1):
            pivot = self._pivots[i]
            for h in range(i):
                a = rows[h][pivot]
                if a == 0:
                    continue
                b = rows[i][pivot]
                g = gcd(a, b)
                keep, take = b // g, a // g
                rows[h] = [keep * x - take * y for x, y in zip(rows[h], rows[i])]
                if rows[h][self._pivots[h]] < 0:
                    rows[h] = [-v for v in rows[h]]
                rows[h] = _primitive(rows[h])
        return rows

    def nullspace(self) -> List[Vector]:
        """Basis of the right nullspace of the rows added so far.

        One vector per free column, in ascending column order, with a 1 in its
        free column.
        """
        reduced = self.reduced_rows()
        pivot_set = set(self._pivots)
        basis: List[Vector] = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            entries = [Fraction(0)] * self.cols
            entries[free] = Fraction(1)
            for row, pivot in zip(reduced, self._pivots):
                if row[free]:
                    entries[pivot] = Fraction(-row[free], row[pivot])
            basis.append(tuple(entries))
        return basis


def rank_and_nullspace(m: RationalMatrix) -> Tuple[int, List[Vector]]:
    """Exact rank and nullspace basis of a rational matrix."""
    echelon = IncrementalEchelon(m.cols)
    for r in m.entries:
        echelon.add_rational(r)
    return echelon.rank, echelon.nullspace()


def rank(m: RationalMatrix) -> int:
    echelon = IncrementalEchelon(m.cols)
    for r in m.entries:
        echelon.add_rational(r)
    return echelon.rank


def determinant(m: RationalMatrix) -> Fraction:
    """Exact determinant by Gaussian elimination (first nonzero pivot)."""
    if not m.is_square:
        raise UsageError(f"Determinant of a non-square {m.rows}x{m.cols} matrix")
    work = [list(r) for r in m.entries]
    n = m.rows
    det = Fraction(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            det = -det
        pivot = work[col][col]
        det *= pivot
        for r in range(col + 1, n):
            factor = work[r][col] / pivot
            if factor == 0:
                continue
            for c in range(col, n):
                work[r][c] -= factor * work[col][c]
    return det


@dataclass(frozen=True)
class LDLT:
    """Result of an exact LDLᵀ decomposition: m = lower · diag(diag) · lowerᵀ."""

    lower: RationalMatrix
    diag: Tuple[Fraction, ...]

    @property
    def is_positive_definite(self) -> bool:
        return all(p > 0 for p in self.diag)

    @property
    def rank(self) -> int:
        return sum(1 for p in self.diag if p != 0)


def ldlt(m: RationalMatrix) -> LDLT:
    """Exact LDLᵀ decomposition of a symmetric matrix.

    Zero pivots are accepted only when the remaining column vanishes
    (semidefinite input); otherwise, and on any negative pivot,
    IndefiniteFormError is raised.
    """
    if not m.is_symmetric():
        raise UsageError("LDLT requires a symmetric matrix")
    n = m.rows
    lower = [[Fraction(0)] * n for _ in range(n)]
    diag = [Fraction(0)] * n
    for j in range(n):
        lower[j][j] = Fraction(1)
        pivot = m[j, j] - sum((lower[j][t] ** 2 * diag[t] for t in range(j)), Fraction(0))
        column = [
            m[i, j] - sum((lower[i][t] * lower[j][t] * diag[t] for t in range(j)), Fraction(0))
            for i in range(j + 1, n)
        ]
        if pivot < 0:
            raise IndefiniteFormError(f"Negative pivot {pivot} at index {j}", index=j, pivot=pivot)
        if pivot == 0:
            if any(c != 0 for c in column):
                raise IndefiniteFormError(
                    f"Zero pivot with non-vanishing column at index {j}", index=j
                )
            continue
        diag[j] = pivot
        for offset, c in enumerate(column):
            lower[j + 1 + offset][j] = c / pivot
    return LDLT(RationalMatrix.from_rows(lower), tuple(diag))


def is_positive_definite(m: RationalMatrix) -> bool:
    try:
        return ldlt(m).is_positive_definite
    except IndefiniteFormError:
        return False


def leading_principal_minors(m: RationalMatrix) -> List[Fraction]:
    if not m.is_square:
        raise UsageError("Leading principal minors need a square matrix")
    return [determinant(m.submatrix(size)) for size in range(1, m.rows + 1)]


def solve_ldlt(decomposition: LDLT, rhs: Sequence[Fraction]) -> Optional[Vector]:
    """Solve m·x = rhs for a positive definite m given its LDLᵀ factors."""
    if not decomposition.is_positive_definite:
        return None
    lower = decomposition.lower
    n = lower.rows
    y = [Fraction(0)] * n
    for i in range(n):
        y[i] = rhs[i] - sum((lower[i, t] * y[t] for t in range(i)), Fraction(0))
    z = [y[i] / decomposition.diag[i] for i in range(n)]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        x[i] = z[i] - sum((lower[t, i] * x[t] for t in range(i + 1, n)), Fraction(0))
    return tuple(x)
