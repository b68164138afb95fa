"""Unit tests for detbound.constructors."""

from fractions import Fraction

import pytest

from detbound.constructors import (
    SkewHadamard,
    perturb_identity,
    skew_hadamard,
    skew_tri,
    skew_tri_diagonal,
    skew_tri_pattern,
    toeplitz_F,
    verify_skew_hadamard,
)
from detbound.exact import (
    DenseMatrix,
    EpsPolynomial,
    HypothesisViolated,
    InvalidOrder,
    Unconstructible,
    det_rational,
    det_symbolic,
)

F = Fraction
P = EpsPolynomial.of


class TestToeplitz:
    """Test the constant Toeplitz witness."""

    def test_entries(self) -> None:
        """delta on the diagonal, eps elsewhere."""
        matrix = toeplitz_F(3, F(1, 5), F(1, 8))
        assert matrix.diagonal_entries() == (F(1, 5),) * 3
        assert matrix[0, 2] == matrix[2, 1] == F(1, 8)

    @pytest.mark.parametrize(
        ("n", "delta", "eps", "expected"),
        [
            (3, F(0), F(1, 4), F(25, 32)),
            (5, F(0), F(1, 8), F(6561, 8192)),
            (5, F(1, 5), F(1, 5), F(0)),
            (1, F(1, 3), F(1, 2), F(2, 3)),
        ],
    )
    def test_check(
        self, n: int, delta: Fraction, eps: Fraction, expected: Fraction
    ) -> None:
        """det(I - F) equals the one-sided lower bound."""
        matrix = toeplitz_F(n, delta, eps, check=True)
        assert det_rational(DenseMatrix.identity(n) - matrix) == expected


class TestSkewTri:
    """Test the skew-triangular witnesses."""

    def test_shape(self) -> None:
        """Plus eps above the diagonal, minus eps below."""
        matrix = skew_tri(3, F(1, 2))
        assert matrix.rows == (
            (1, F(1, 2), F(1, 2)),
            (F(-1, 2), 1, F(1, 2)),
            (F(-1, 2), F(-1, 2), 1),
        )

    @pytest.mark.parametrize(("n", "eps"), [(3, F(1, 2)), (4, F(1, 3)), (6, F(1))])
    def test_determinants(self, n: int, eps: Fraction) -> None:
        """Closed forms of both variants."""
        plain = det_rational(skew_tri(n, eps))
        inflated = det_rational(skew_tri(n, eps, inflate=True))
        assert plain == ((1 + eps) ** n + (1 - eps) ** n) / 2
        assert inflated == ((1 + 2 * eps) ** n + 1) / 2

    @pytest.mark.parametrize("n", range(1, 13))
    def test_closed_forms(self, n: int) -> None:
        """Both determinants are the binomial closed forms as polynomials."""
        plus, minus = P([1, 1]), P([1, -1])
        plain = det_symbolic(skew_tri_pattern(n).symbolic_rows())
        assert plain == (plus**n + minus**n).scale(F(1, 2))
        diag = skew_tri_diagonal(n, inflate=True)
        inflated = det_symbolic(skew_tri_pattern(n).symbolic_rows(diag))
        assert inflated == (P([1, 2]) ** n + P([1])).scale(F(1, 2))
        eps = F(2, 7)
        assert det_rational(skew_tri(n, eps)) == plain(eps)


class TestSkewHadamard:
    """Test skew-Hadamard construction."""

    @pytest.mark.parametrize(
        ("n", "rule"),
        [
            (1, "base"),
            (2, "base"),
            (4, "paley(q=3)"),
            (8, "paley(q=7)"),
            (12, "paley(q=11)"),
            (16, "doubling(paley(q=7))"),
            (20, "paley(q=19)"),
        ],
    )
    def test_constructible(self, n: int, rule: str) -> None:
        """Every constructed matrix satisfies both identities."""
        h = skew_hadamard(n)
        assert h.order == n
        assert h.rule == rule
        assert verify_skew_hadamard(h.to_dense())

    def test_every_order_to_64(self) -> None:
        """Admissible orders up to 64 are built, or need a prime power."""
        missing: list[int] = []
        for n in [1, 2, *range(4, 65, 4)]:
            try:
                h = skew_hadamard(n)
            except Unconstructible:
                missing.append(n)
                continue
            assert h.order == n
            assert verify_skew_hadamard(h.to_dense())
        assert missing == [28, 36, 52, 56]

    def test_deterministic(self) -> None:
        """The same order always gives the same matrix."""
        assert skew_hadamard(12) == skew_hadamard(12)

    @pytest.mark.parametrize("n", [0, 3, 6, 10])
    def test_invalid_order(self, n: int) -> None:
        """Orders above 2 must be multiples of 4."""
        with pytest.raises(InvalidOrder):
            skew_hadamard(n)

    def test_unconstructible(self) -> None:
        """28 needs a prime power field, which is not implemented."""
        with pytest.raises(Unconstructible) as info:
            skew_hadamard(28)
        assert info.value.tried == ["base", "paley(q=27)", "doubling(n=14)"]

    def test_rejects_symmetric(self) -> None:
        """A symmetric Hadamard matrix is not skew."""
        with pytest.raises(HypothesisViolated):
            SkewHadamard(((1, 1), (1, -1)))

    def test_compact_rows(self) -> None:
        """Rows print as +/- strings."""
        assert skew_hadamard(2).compact_rows() == ["++", "-+"]

    @pytest.mark.parametrize("n", [4, 8])
    def test_orthogonal_columns(self, n: int) -> None:
        """(1 - eps) I + eps H has Gram matrix (1 + (n-1) eps^2) I."""
        eps = F(1, 3)
        a = perturb_identity(skew_hadamard(n), eps)
        gram = a.transpose() @ a
        assert gram == DenseMatrix.identity(n).scale(1 + (n - 1) * eps**2)
        assert det_rational(a) ** 2 == (1 + (n - 1) * eps**2) ** n
