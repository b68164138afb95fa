"""Unit tests for detbound.exact.polynomial."""

from fractions import Fraction

import pytest

from detbound.exact import EpsPolynomial, FormatError, ZeroPolynomial, parse_polynomial

P = EpsPolynomial.of


class TestCanonicalForm:
    """Test normalisation of the coefficient tuple."""

    def test_trailing_zeros_dropped(self) -> None:
        """Trailing zeros do not change the polynomial."""
        assert P([1, 0, 0]) == P([1])
        assert P([1, 0, 0]).degree == 0

    def test_zero(self) -> None:
        """The zero polynomial has degree -1 and an empty tuple."""
        zero = P([0, 0])
        assert zero == EpsPolynomial()
        assert zero.degree == -1
        assert zero.is_zero()

    def test_hashable(self) -> None:
        """Equal polynomials collapse in sets."""
        assert len({P([1, 2]), P([1, 2, 0]), P([2, 1])}) == 2


class TestArithmetic:
    """Test ring operations and evaluation."""

    def test_power(self) -> None:
        """(1 + eps)^3 has binomial coefficients."""
        assert EpsPolynomial.linear(1, 1) ** 3 == P([1, 3, 3, 1])

    def test_mixed_scalars(self) -> None:
        """Scalars are coerced to constants."""
        eps = EpsPolynomial.monomial(1)
        assert 1 - eps == P([1, -1])
        assert eps * 2 + 1 == P([1, 2])

    def test_call_is_exact(self) -> None:
        """Evaluation at a rational returns a Fraction."""
        assert P([1, 0, 3])(Fraction(1, 2)) == Fraction(7, 4)

    def test_divmod(self) -> None:
        """(eps^2 - 1) / (eps - 1) = eps + 1 without remainder."""
        quot, rem = P([-1, 0, 1]).divmod(P([-1, 1]))
        assert quot == P([1, 1])
        assert rem.is_zero()

    def test_divmod_by_zero(self) -> None:
        """Division by the zero polynomial is refused."""
        with pytest.raises(ZeroDivisionError):
            P([1]).divmod(EpsPolynomial())

    def test_exact_div_remainder(self) -> None:
        """A non-zero remainder is an arithmetic error."""
        with pytest.raises(ArithmeticError):
            P([1, 0, 1]).exact_div(P([-1, 1]))


class TestFactoring:
    """Test gcd, square-free part and primitive part."""

    def test_gcd_monic(self) -> None:
        """gcd(eps^2 - 1, (eps - 1)^2) is the monic eps - 1."""
        assert P([-1, 0, 1]).gcd(P([1, -2, 1]).scale(3)) == P([-1, 1])

    def test_squarefree_part(self) -> None:
        """Repeated factors are reduced to one copy."""
        poly = P([1, -2, 1]) * P([2, 1])
        assert poly.squarefree_part() == P([-2, 1, 1])

    def test_squarefree_of_zero(self) -> None:
        """The zero polynomial has no square-free part."""
        with pytest.raises(ZeroPolynomial):
            EpsPolynomial().squarefree_part()

    @pytest.mark.parametrize(
        ("poly", "expected"),
        [
            (P([Fraction(1, 2), Fraction(1, 3)]), P([3, 2])),
            (P([-2, -4]), P([1, 2])),
            (P([4, 6]), P([2, 3])),
        ],
    )
    def test_primitive(self, poly: EpsPolynomial, expected: EpsPolynomial) -> None:
        """Integer content 1 with a positive leading coefficient."""
        assert poly.primitive() == expected


class TestLocalSign:
    """Test signs just right of a rational point."""

    def test_taylor_shift(self) -> None:
        """eps^2 around 1 is 1 + 2t + t^2."""
        assert P([0, 0, 1]).taylor_shift(1) == P([1, 2, 1])

    @pytest.mark.parametrize(
        ("poly", "point", "expected"),
        [
            (P([-1, 1]), 1, 1),
            (P([1, -2, 1]).scale(-1), 1, -1),
            (P([1, -2, 1]), 1, 1),
            (P([2]), 0, 1),
            (EpsPolynomial(), 0, 0),
        ],
    )
    def test_sign_after(self, poly: EpsPolynomial, point: int, expected: int) -> None:
        """The first non-zero shifted coefficient decides the sign."""
        assert poly.sign_after(point) == expected

    def test_compare_right_of(self) -> None:
        """Past their crossing at 1, 1 + eps^2 + 2 eps^3 beats 1 + 3 eps^2."""
        low = P([1, 0, 3])
        high = P([1, 0, 1, 2])
        assert high(1) == low(1)
        assert high.compare_right_of(low, 1) == 1
        assert high.compare_right_of(low, 0) == -1


class TestText:
    """Test rendering and parsing."""

    def test_str(self) -> None:
        """Terms are printed lowest degree first."""
        assert str(P([1, 0, 3])) == "1 + 3*eps^2"
        assert str(P([-1, 1])) == "-1 + eps"
        assert str(EpsPolynomial()) == "0"

    def test_to_json(self) -> None:
        """Integers stay ints, other rationals become strings."""
        assert P([1, Fraction(1, 2)]).to_json() == [1, "1/2"]
        assert EpsPolynomial().to_json() == [0]

    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("[1, 0, 10, 0, 21]", P([1, 0, 10, 0, 21])),
            ('[1, "1/2"]', P([1, Fraction(1, 2)])),
            ("[]", EpsPolynomial()),
        ],
    )
    def test_parse(self, text: str, expected: EpsPolynomial) -> None:
        """Bracketed coefficient lists parse exactly."""
        assert parse_polynomial(text) == expected

    @pytest.mark.parametrize("text", ["1, 2", "[1, x]"])
    def test_parse_invalid(self, text: str) -> None:
        """Malformed lists are format errors."""
        with pytest.raises(FormatError):
            parse_polynomial(text)
