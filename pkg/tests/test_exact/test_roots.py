"""Unit tests for detbound.exact.roots."""

from fractions import Fraction

import numpy as np
import pytest

from detbound.exact import (
    EpsPolynomial,
    RootBracket,
    ZeroPolynomial,
    compare_roots,
    count_roots,
    isolate_roots,
)
from detbound.exact.roots import (
    DEFAULT_ISOLATION_WIDTH,
    rational_roots,
    sign_after,
    sign_at_point,
)

P = EpsPolynomial.of
F = Fraction
SQRT2 = P([-2, 0, 1])


def sqrt2_bracket() -> RootBracket:
    """Isolate the positive root of eps^2 - 2."""
    (bracket,) = isolate_roots(SQRT2, F(0), F(2))
    return bracket


class TestCountRoots:
    """Test Sturm counting on open intervals."""

    @pytest.mark.parametrize(
        ("poly", "lo", "hi", "expected"),
        [
            (SQRT2, F(0), F(2), 1),
            (SQRT2, F(-2), F(2), 2),
            (P([-1, 1]), F(0), F(1), 0),
            (P([-1, 1]), F(1), F(2), 0),
            (P([1, -2, 1]), F(0), F(2), 1),
            (P([1, 0, 1]), F(-5), F(5), 0),
            (P([3]), F(0), F(1), 0),
        ],
    )
    def test_open_interval(
        self, poly: EpsPolynomial, lo: Fraction, hi: Fraction, expected: int
    ) -> None:
        """Endpoints are excluded and repeated roots count once."""
        assert count_roots(poly, lo, hi) == expected


def test_rational_roots() -> None:
    """(eps - 1)(eps + 2)(2 eps - 1) has three rational roots."""
    poly = P([-1, 1]) * P([2, 1]) * P([-1, 2])
    assert rational_roots(poly) == [F(-2), F(1, 2), F(1)]
    assert rational_roots(SQRT2) == []


class TestIsolateRoots:
    """Test exact root isolation."""

    def test_irrational(self) -> None:
        """sqrt(2) is bracketed to the default width."""
        bracket = sqrt2_bracket()
        assert not bracket.is_exact
        assert bracket.width <= DEFAULT_ISOLATION_WIDTH
        assert bracket.lo**2 < 2 < bracket.hi**2

    def test_width(self) -> None:
        """A coarser width is honoured."""
        (bracket,) = isolate_roots(SQRT2, F(0), F(2), width=F(1, 1024))
        assert 0 < bracket.width <= F(1, 1024)

    def test_mixed(self) -> None:
        """Rational roots come back exact and brackets are ordered."""
        brackets = isolate_roots(P([-1, 2]) * SQRT2, F(0), F(2))
        assert [b.is_exact for b in brackets] == [True, False]
        assert brackets[0].exact_root == F(1, 2)

    def test_endpoints_excluded(self) -> None:
        """Roots on either end are not reported."""
        assert isolate_roots(P([0, -1, 1]), F(0), F(1)) == []

    def test_search_cubic(self) -> None:
        """The order 6 breakpoint cubic has one irrational root in (0, 1)."""
        cubic = P([-3, 5, 5, 17])
        assert rational_roots(cubic) == []
        (bracket,) = isolate_roots(cubic, F(0), F(1))
        assert F(3, 10) < bracket.lo < bracket.hi < F(2, 5)

    def test_random_cubics(self) -> None:
        """Brackets separate every sign change seen on a fine grid."""
        rng = np.random.default_rng(17)
        lo, hi = F(-4), F(4)
        # 127 in every grid denominator keeps grid points off rational roots.
        grid = [lo + F(127 * k + 1, 64 * 127) for k in range(8 * 64)]
        for _ in range(50):
            coeffs = rng.integers(-9, 10, size=3).tolist()
            coeffs.append(int(rng.choice([-9, -5, -3, -2, -1, 1, 2, 3, 5, 9])))
            cubic = P(coeffs)
            brackets = isolate_roots(cubic, lo, hi)
            assert len(brackets) == count_roots(cubic, lo, hi) <= 3
            for bracket in brackets:
                if bracket.is_exact:
                    assert cubic(bracket.lo) == 0
                else:
                    poly = bracket.polynomial
                    assert poly.sign_at(bracket.lo) * poly.sign_at(bracket.hi) < 0
                    assert cubic.divmod(poly)[1].is_zero()
            for left, right in zip(grid, grid[1:]):
                if cubic.sign_at(left) * cubic.sign_at(right) < 0:
                    assert any(b.lo < right and b.hi > left for b in brackets)

    def test_zero(self) -> None:
        """The zero polynomial has no isolated roots."""
        with pytest.raises(ZeroPolynomial):
            isolate_roots(EpsPolynomial(), F(0), F(1))

    def test_empty_interval(self) -> None:
        """lo must be below hi."""
        with pytest.raises(ValueError, match="empty interval"):
            isolate_roots(SQRT2, F(1), F(1))

    def test_constant(self) -> None:
        """Non-zero constants have no roots."""
        assert isolate_roots(P([5]), F(0), F(1)) == []


class TestRootBracket:
    """Test algebraic points."""

    def test_exact_json(self) -> None:
        """Rational points carry their primitive linear polynomial."""
        point = RootBracket.exact(F(1, 2))
        assert point.to_json() == {
            "cubic_or_poly": [-1, 2],
            "bracket": ["1/2", "1/2"],
            "exact": "1/2",
        }
        assert str(point) == "1/2"
        assert point.width == 0

    def test_bisect_keeps_root(self) -> None:
        """Bisection halves the width and keeps the root inside."""
        bracket = RootBracket(SQRT2, F(1), F(2))
        half = bracket.bisect()
        assert half.width == F(1, 2)
        assert (half.lo, half.hi) == (F(1), F(3, 2))

    def test_bisect_hits_root(self) -> None:
        """A midpoint root turns the bracket exact."""
        bracket = RootBracket(P([-1, 1]), F(0), F(2))
        assert bracket.bisect().exact_root == 1

    @pytest.mark.parametrize(
        ("other", "expected"),
        [(F(7, 5), 1), (F(3, 2), -1), (F(1), 1)],
    )
    def test_compare_with_rational(self, other: Fraction, expected: int) -> None:
        """sqrt(2) sits between 7/5 and 3/2."""
        point = sqrt2_bracket()
        assert compare_roots(point, RootBracket.exact(other)) == expected
        assert compare_roots(RootBracket.exact(other), point) == -expected

    def test_compare_equal_roots(self) -> None:
        """The same number from two different polynomials compares equal."""
        (other,) = isolate_roots(P([-4, 0, 0, 0, 1]), F(0), F(2), width=F(1, 8))
        assert compare_roots(sqrt2_bracket(), other) == 0

    def test_compare_distinct(self) -> None:
        """sqrt(2) < sqrt(3)."""
        (sqrt3,) = isolate_roots(P([-3, 0, 1]), F(0), F(2))
        assert compare_roots(sqrt2_bracket(), sqrt3) == -1


class TestSigns:
    """Test signs of polynomials at and after algebraic points."""

    @pytest.mark.parametrize(
        ("poly", "expected"),
        [(SQRT2, 1), (-SQRT2, -1), (P([0, 1]), 1), (SQRT2 * SQRT2, 1)],
    )
    def test_sign_after(self, poly: EpsPolynomial, expected: int) -> None:
        """Sign on a right neighbourhood of sqrt(2)."""
        assert sign_after(poly, sqrt2_bracket()) == expected

    @pytest.mark.parametrize(
        ("poly", "expected"),
        [(SQRT2, 0), (P([0, 1]), 1), (P([-3, 0, 1]), -1)],
    )
    def test_sign_at_point(self, poly: EpsPolynomial, expected: int) -> None:
        """Sign exactly at sqrt(2)."""
        assert sign_at_point(poly, sqrt2_bracket()) == expected
