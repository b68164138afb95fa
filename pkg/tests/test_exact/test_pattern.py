"""Unit tests for detbound.exact.pattern."""

from fractions import Fraction

import numpy as np
import pytest

from detbound.exact import (
    EpsPolynomial,
    FormatError,
    SignPattern,
    det_poly,
    det_rational,
    det_symbolic,
    format_pattern,
    parse_pattern,
)
from detbound.exact.pattern import all_patterns, batch_det_coefficients, bit_index


@pytest.mark.parametrize(
    ("i", "j", "expected"),
    [(0, 1, 0), (0, 2, 1), (1, 0, 2), (1, 2, 3), (2, 0, 4), (2, 1, 5)],
)
def test_bit_index(i: int, j: int, expected: int) -> None:
    """Off-diagonal entries are packed row-major."""
    assert bit_index(3, i, j) == expected


def test_bit_index_diagonal() -> None:
    """The diagonal has no bit."""
    with pytest.raises(ValueError, match="diagonal"):
        bit_index(3, 1, 1)


class TestSignPattern:
    """Test the packed pattern type."""

    def test_bits_out_of_range(self) -> None:
        """Bits must fit into n(n-1) positions."""
        with pytest.raises(ValueError, match="out of range"):
            SignPattern(2, 4)

    def test_from_signs(self) -> None:
        """A set bit means a minus sign."""
        pattern = SignPattern.from_signs([[1, 1], [-1, 1]])
        assert pattern.bits == 0b10
        assert pattern.sign(1, 0) == -1
        assert pattern.sign(0, 1) == 1
        assert pattern.sign(1, 1) == 1

    def test_from_signs_rejects_zero(self) -> None:
        """Off-diagonal entries have to be +-1."""
        with pytest.raises(ValueError, match="not"):
            SignPattern.from_signs([[1, 0], [1, 1]])

    def test_lex_key(self) -> None:
        """A minus in the first position outranks all later minus signs."""
        first = SignPattern(3, 0b000001)
        rest = SignPattern(3, 0b111110)
        assert first.lex_key() == 1 << 5
        assert first.lex_key() > rest.lex_key()
        assert SignPattern(3).lex_key() == 0

    def test_to_matrix(self) -> None:
        """Signs times eps off the diagonal, ones on it."""
        matrix = SignPattern.from_signs([[1, 1], [-1, 1]]).to_matrix(Fraction(1, 3))
        assert matrix.rows == ((1, Fraction(1, 3)), (Fraction(-1, 3), 1))


class TestText:
    """Test the pattern text format."""

    def test_round_trip(self) -> None:
        """Rows with '.' on the diagonal."""
        text = ".+-\n-.+\n+-."
        pattern = parse_pattern(text)
        assert format_pattern(pattern) == text
        assert pattern.sign(0, 2) == -1

    @pytest.mark.parametrize("text", ["", ".+\n-", "++\n-.", ".x\n-.", ".+\n-+"])
    def test_invalid(self, text: str) -> None:
        """Ragged rows, wrong diagonals and stray characters are refused."""
        with pytest.raises(FormatError):
            parse_pattern(text)


class TestDetPoly:
    """Test the determinant polynomial of a pattern."""

    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            (".+\n-.", [1, 0, 1]),
            (".+\n+.", [1, 0, -1]),
            (".++\n-.+\n--.", [1, 0, 3]),
            (".", [1]),
        ],
    )
    def test_known(self, text: str, expected: list[int]) -> None:
        """Skew patterns add eps^2 terms, symmetric ones subtract them."""
        assert det_poly(parse_pattern(text)) == EpsPolynomial.of(expected)

    def test_matches_bareiss(self) -> None:
        """Permutation expansion and elimination agree on every order 3 pattern."""
        for pattern in all_patterns(3):
            assert det_poly(pattern) == det_symbolic(pattern.symbolic_rows())

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_random_points(self, n: int) -> None:
        """Evaluated at a random rational eps, det_poly equals Bareiss."""
        rng = np.random.default_rng(n)
        for _ in range(200):
            pattern = SignPattern(n, int(rng.integers(0, 1 << (n * (n - 1)))))
            eps = Fraction(int(rng.integers(-64, 65)), int(rng.integers(1, 65)))
            assert det_poly(pattern)(eps) == det_rational(pattern.to_matrix(eps))

    def test_with_diagonal(self) -> None:
        """A (1 + eps) diagonal goes through elimination."""
        pattern = parse_pattern(".+-\n-.+\n+-.")
        diag = [EpsPolynomial.linear(1, 1)] * 3
        det = det_poly(pattern, diag)
        eps = Fraction(1, 5)
        matrix = pattern.to_matrix(eps)
        inflated = [
            [matrix[i, j] + (eps if i == j else 0) for j in range(3)] for i in range(3)
        ]
        assert det == det_symbolic(pattern.symbolic_rows(diag))
        assert det(eps) == det_rational(type(matrix).from_rows(inflated))

    def test_diagonal_length(self) -> None:
        """The diagonal must match the order."""
        with pytest.raises(ValueError, match="diagonal"):
            det_poly(SignPattern(3), [EpsPolynomial.constant(1)] * 2)

    def test_batch(self) -> None:
        """Vectorised coefficients equal the scalar ones."""
        patterns = list(all_patterns(3))
        bits = np.array([p.bits for p in patterns], dtype=np.uint64)
        coeffs = batch_det_coefficients(bits, 3)
        assert coeffs.shape == (len(patterns), 4)
        for row, pattern in zip(coeffs.tolist(), patterns):
            assert EpsPolynomial.of(row) == det_poly(pattern)

    def test_all_patterns_count(self) -> None:
        """Every packed word appears once."""
        assert sum(1 for _ in all_patterns(3)) == 64
