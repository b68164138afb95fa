"""Dense square matrices over the rationals and exact determinants."""

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
import numpy.typing as npt
from typing_extensions import override

from .common import FormatError, format_rational, parse_rational
from .polynomial import EpsPolynomial

Entry = Union[int, Fraction]


@dataclass(frozen=True)
class DenseMatrix:
    """Square matrix of exact rationals.

    Rows are stored as tuples of Fractions; the matrix is immutable and every
    arithmetic operation returns a new instance.
    """

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        """Normalise entries and check the shape.

        Raises
        ------
        ValueError
            If the matrix is empty or not square.
        """
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        n = len(rows)
        if n < 1 or any(len(row) != n for row in rows):
            msg = "matrix must be square with order >= 1"
            raise ValueError(msg)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Entry]]) -> "DenseMatrix":
        """Build a matrix from nested iterables of ints or Fractions."""
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "DenseMatrix":
        """Identity matrix I_n."""
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def ones(cls, n: int) -> "DenseMatrix":
        """All-ones matrix J_n."""
        return cls.from_rows([[1] * n for _ in range(n)])

    @classmethod
    def upper_ones(cls, n: int) -> "DenseMatrix":
        """Strictly upper triangular all-ones matrix U_n."""
        return cls.from_rows([[int(i < j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence[Entry]) -> "DenseMatrix":
        """Diagonal matrix with the given diagonal."""
        n = len(values)
        return cls.from_rows(
            [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def order(self) -> int:
        """Number of rows (and columns)."""
        return len(self.rows)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.rows[i][j]

    def __iter__(self) -> Iterator[tuple[Fraction, ...]]:
        return iter(self.rows)

    def entries(self) -> Iterator[tuple[int, int, Fraction]]:
        """Yield ``(i, j, value)`` in row-major order."""
        for i, row in enumerate(self.rows):
            for j, value in enumerate(row):
                yield i, j, value

    def transpose(self) -> "DenseMatrix":
        """Transpose."""
        return DenseMatrix(tuple(zip(*self.rows)))

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        return DenseMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        return DenseMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "DenseMatrix":
        return self.scale(-1)

    def scale(self, factor: Entry) -> "DenseMatrix":
        """Multiply every entry by ``factor``."""
        return DenseMatrix(tuple(tuple(x * factor for x in row) for row in self.rows))

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        cols = list(zip(*other.rows))
        zero = Fraction(0)
        return DenseMatrix(
            tuple(
                tuple(sum((a * b for a, b in zip(row, col)), zero) for col in cols)
                for row in self.rows
            )
        )

    def trace(self) -> Fraction:
        """Sum of the diagonal."""
        return sum((self.rows[i][i] for i in range(self.order)), Fraction(0))

    def diagonal_entries(self) -> tuple[Fraction, ...]:
        """The diagonal as a tuple."""
        return tuple(self.rows[i][i] for i in range(self.order))

    def absolute(self) -> "DenseMatrix":
        """Entrywise absolute value."""
        return DenseMatrix(tuple(tuple(abs(x) for x in row) for row in self.rows))

    def row_sums(self) -> tuple[Fraction, ...]:
        """Row sums (signed)."""
        return tuple(sum(row, Fraction(0)) for row in self.rows)

    def is_nonnegative(self) -> bool:
        """Whether all entries are >= 0."""
        return all(x >= 0 for row in self.rows for x in row)

    def principal_submatrix(self, indices: Sequence[int]) -> "DenseMatrix":
        """Rows and columns restricted to ``indices``."""
        rows = tuple(tuple(self.rows[i][j] for j in indices) for i in indices)
        return DenseMatrix(rows)

    def to_numpy(self) -> npt.NDArray[np.float64]:
        """Binary64 mirror of the entries."""
        values = [[float(x) for x in row] for row in self.rows]
        return np.array(values, dtype=np.float64)

    @override
    def __str__(self) -> str:
        return format_matrix(self)


def _bareiss_integer(rows: list[list[int]]) -> int:
    """Fraction-free elimination on an integer matrix, modified in place."""
    n = len(rows)
    sign = 1
    previous = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot_row = rows[k]
        pivot = pivot_row[k]
        for i in range(k + 1, n):
            row = rows[i]
            factor = row[k]
            for j in range(k + 1, n):
                # Exact by Sylvester's identity.
                row[j] = (row[j] * pivot - factor * pivot_row[j]) // previous
            row[k] = 0
        previous = pivot
    return sign * rows[n - 1][n - 1]


def det_rational(matrix: DenseMatrix) -> Fraction:
    """Exact determinant of a rational matrix.

    Each row is scaled to integers by the lcm of its denominators, the
    integer matrix is reduced with Bareiss elimination and the scaling is
    divided out again. Singular matrices give 0.

    Parameters
    ----------
    matrix : DenseMatrix
        Square rational matrix.

    Returns
    -------
    Fraction
        ``det(matrix)``.
    """
    scale = 1
    ints: list[list[int]] = []
    for row in matrix.rows:
        lcm = math.lcm(*(x.denominator for x in row))
        scale *= lcm
        ints.append([x.numerator * (lcm // x.denominator) for x in row])
    return Fraction(_bareiss_integer(ints), scale)


def det_symbolic(rows: Sequence[Sequence[EpsPolynomial]]) -> EpsPolynomial:
    """Exact determinant of a matrix whose entries are polynomials in eps.

    Parameters
    ----------
    rows : Sequence[Sequence[EpsPolynomial]]
        Square matrix of polynomials.

    Returns
    -------
    EpsPolynomial
        The determinant, computed by Bareiss elimination over Q[eps].
    """
    work = [list(row) for row in rows]
    n = len(work)
    if n == 0:
        return EpsPolynomial.constant(1)
    negate = False
    previous = EpsPolynomial.constant(1)
    for k in range(n - 1):
        if work[k][k].is_zero():
            for i in range(k + 1, n):
                if not work[i][k].is_zero():
                    work[k], work[i] = work[i], work[k]
                    negate = not negate
                    break
            else:
                return EpsPolynomial()
        pivot_row = work[k]
        pivot = pivot_row[k]
        for i in range(k + 1, n):
            row = work[i]
            factor = row[k]
            for j in range(k + 1, n):
                row[j] = (row[j] * pivot - factor * pivot_row[j]).exact_div(previous)
            row[k] = EpsPolynomial()
        previous = pivot
    result = work[n - 1][n - 1]
    return -result if negate else result


def poly_matmul(
    left: Sequence[Sequence[EpsPolynomial]], right: Sequence[Sequence[EpsPolynomial]]
) -> list[list[EpsPolynomial]]:
    """Product of two square polynomial matrices."""
    n = len(left)
    out: list[list[EpsPolynomial]] = []
    for i in range(n):
        out_row: list[EpsPolynomial] = []
        for j in range(n):
            acc = EpsPolynomial()
            for k in range(n):
                if left[i][k].is_zero() or right[k][j].is_zero():
                    continue
                acc = acc + left[i][k] * right[k][j]
            out_row.append(acc)
        out.append(out_row)
    return out


def linear_pencil(
    constant: DenseMatrix, slope: DenseMatrix
) -> list[list[EpsPolynomial]]:
    """Polynomial matrix ``constant + eps * slope``."""
    return [
        [EpsPolynomial.linear(a, b) for a, b in zip(row_a, row_b)]
        for row_a, row_b in zip(constant.rows, slope.rows)
    ]


def parse_matrix(text: str) -> DenseMatrix:
    """Parse the matrix text format.

    The first non-empty line holds the order ``n``; the next ``n`` lines hold
    whitespace separated rationals ("p/q" or integers).

    Parameters
    ----------
    text : str
        Matrix in text format.

    Returns
    -------
    DenseMatrix
        Parsed matrix.

    Raises
    ------
    FormatError
        If the header or any row is malformed.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        msg = "empty matrix text"
        raise FormatError(msg)
    try:
        n = int(lines[0])
    except ValueError:
        msg = f"first line must be the order, got {lines[0]!r}"
        raise FormatError(msg) from None
    if n < 1 or len(lines) != n + 1:
        msg = f"expected {n} rows after the order line, got {len(lines) - 1}"
        raise FormatError(msg)
    rows = [[parse_rational(tok) for tok in line.split()] for line in lines[1:]]
    if any(len(row) != n for row in rows):
        msg = f"every row must have {n} entries"
        raise FormatError(msg)
    return DenseMatrix.from_rows(rows)


def format_matrix(matrix: DenseMatrix) -> str:
    """Render a matrix in the text format (order line, then rows)."""
    cells = [[format_rational(x) for x in row] for row in matrix.rows]
    width = max(len(c) for row in cells for c in row)
    body = "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)
    return f"{matrix.order}\n{body}"
