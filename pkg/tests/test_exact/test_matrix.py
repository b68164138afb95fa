"""Unit tests for detbound.exact.matrix."""

from fractions import Fraction

import pytest

from detbound.exact import (
    DenseMatrix,
    EpsPolynomial,
    FormatError,
    det_rational,
    det_symbolic,
    format_matrix,
    linear_pencil,
    parse_matrix,
    poly_matmul,
)

F = Fraction


class TestDenseMatrix:
    """Test construction and elementwise operations."""

    @pytest.mark.parametrize("rows", [[], [[1, 2]], [[1, 2], [3]]])
    def test_rejects_non_square(self, rows: list[list[int]]) -> None:
        """Empty and ragged inputs are refused."""
        with pytest.raises(ValueError, match="square"):
            DenseMatrix.from_rows(rows)

    def test_constructors(self) -> None:
        """Identity, ones and strict upper ones."""
        assert DenseMatrix.identity(2).rows == ((1, 0), (0, 1))
        assert DenseMatrix.ones(2).rows == ((1, 1), (1, 1))
        assert DenseMatrix.upper_ones(3).rows == ((0, 1, 1), (0, 0, 1), (0, 0, 0))

    def test_arithmetic(self) -> None:
        """Sums, products, transpose and trace stay exact."""
        a = DenseMatrix.from_rows([[1, F(1, 2)], [0, 2]])
        assert (a @ DenseMatrix.identity(2)) == a
        assert a.transpose()[0, 1] == 0
        assert (a - a) == DenseMatrix.from_rows([[0, 0], [0, 0]])
        assert a.scale(2)[0, 1] == 1
        assert a.trace() == 3

    def test_summaries(self) -> None:
        """Row sums, absolute values and the nonnegativity test."""
        a = DenseMatrix.from_rows([[1, -2], [F(1, 3), 0]])
        assert a.row_sums() == (-1, F(1, 3))
        assert a.absolute().row_sums() == (3, F(1, 3))
        assert not a.is_nonnegative()
        assert a.absolute().is_nonnegative()

    def test_principal_submatrix(self) -> None:
        """Rows and columns are picked together."""
        a = DenseMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert a.principal_submatrix([0, 2]).rows == ((1, 3), (7, 9))


class TestDetRational:
    """Test the Bareiss determinant on rationals."""

    @pytest.mark.parametrize(
        ("rows", "expected"),
        [
            ([[1, 2], [3, 4]], F(-2)),
            ([[F(1, 2), F(1, 3)], [F(1, 4), 1]], F(5, 12)),
            ([[0, 1], [1, 0]], F(-1)),
            ([[1, 2], [2, 4]], F(0)),
            ([[0, 0], [0, 1]], F(0)),
            ([[7]], F(7)),
            ([[2, 0, 0], [0, 3, 0], [0, 0, F(1, 6)]], F(1)),
        ],
    )
    def test_values(self, rows: list[list[Fraction]], expected: Fraction) -> None:
        """Known determinants, pivoting and singular cases included."""
        assert det_rational(DenseMatrix.from_rows(rows)) == expected

    def test_toeplitz_closed_form(self) -> None:
        """det(I - F) of the constant Toeplitz matrix matches its closed form."""
        n, eps = 3, F(1, 4)
        f = DenseMatrix.from_rows(
            [[0 if i == j else eps for j in range(n)] for i in range(n)]
        )
        assert det_rational(DenseMatrix.identity(n) - f) == F(25, 32)


class TestDetSymbolic:
    """Test the Bareiss determinant over Q[eps]."""

    def test_pencil(self) -> None:
        """det(I + eps (J - I)) at n = 2 is 1 - eps^2."""
        rows = linear_pencil(
            DenseMatrix.identity(2), DenseMatrix.ones(2) - DenseMatrix.identity(2)
        )
        assert det_symbolic(rows) == EpsPolynomial.of([1, 0, -1])

    def test_zero_pivot(self) -> None:
        """A zero leading entry forces a row swap."""
        eps = EpsPolynomial.monomial(1)
        zero = EpsPolynomial()
        one = EpsPolynomial.constant(1)
        assert det_symbolic([[zero, eps], [one, zero]]) == -eps

    def test_agrees_with_rational(self) -> None:
        """Evaluating the symbolic determinant equals the rational one."""
        constant = DenseMatrix.from_rows([[1, 2, 0], [0, 1, 3], [4, 0, 1]])
        slope = DenseMatrix.from_rows([[0, 1, -1], [1, 0, 1], [-1, 1, 0]])
        det = det_symbolic(linear_pencil(constant, slope))
        for x in (F(0), F(1, 3), F(-2)):
            assert det(x) == det_rational(constant + slope.scale(x))

    def test_orthogonal_columns(self) -> None:
        """(I + eps S)^T (I + eps S) = (1 + eps^2) I for S = [[0, 1], [-1, 0]]."""
        skew = DenseMatrix.from_rows([[0, 1], [-1, 0]])
        a = linear_pencil(DenseMatrix.identity(2), skew)
        at = linear_pencil(DenseMatrix.identity(2), skew.transpose())
        gram = poly_matmul(at, a)
        diag = EpsPolynomial.of([1, 0, 1])
        assert gram == [[diag, EpsPolynomial()], [EpsPolynomial(), diag]]


class TestText:
    """Test the matrix text format."""

    def test_parse(self) -> None:
        """Order line then rows; blank lines are ignored."""
        matrix = parse_matrix("2\n\n1 1/2\n0 -3\n")
        assert matrix.rows == ((1, F(1, 2)), (0, -3))

    def test_format(self) -> None:
        """Cells are right aligned to a common width."""
        matrix = DenseMatrix.from_rows([[1, F(1, 2)], [0, -3]])
        assert format_matrix(matrix) == "2\n  1 1/2\n  0  -3"
        assert parse_matrix(format_matrix(matrix)) == matrix

    @pytest.mark.parametrize(
        "text",
        ["", "x\n1\n", "2\n1 2\n", "2\n1 2\n3\n", "1\n1/0\n", "0\n"],
    )
    def test_parse_invalid(self, text: str) -> None:
        """Malformed headers and rows are format errors."""
        with pytest.raises(FormatError):
            parse_matrix(text)
