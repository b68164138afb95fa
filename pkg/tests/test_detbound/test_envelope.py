"""Unit tests for detbound.envelope."""

from fractions import Fraction

import numpy as np
import pytest

from detbound.envelope import envelope_of, format_point, pareto_mask
from detbound.exact import EpsPolynomial, RootBracket, SignPattern

P = EpsPolynomial.of
F = Fraction


class TestEnvelopeOf:
    """Test the exact upper envelope."""

    def test_crossing_at_one(self) -> None:
        """1 + 3eps^2 leads up to 1, then 1 + eps^2 + 2eps^3 takes over."""
        quadratic, cubic = P([1, 0, 3]), P([1, 0, 1, 2])
        envelope = envelope_of([(quadratic, None), (cubic, None)], (F(0), F(2)))
        assert envelope.polys == (quadratic, cubic)
        assert [b.exact_root for b in envelope.breakpoints] == [F(1)]
        assert envelope.value_at(F(2)) == 21
        assert envelope.leading_coefficient == 2

    def test_single(self) -> None:
        """One polynomial covers the whole domain."""
        envelope = envelope_of([(P([1, 0, 1]), None)], (F(0), F(2)))
        assert len(envelope.pieces) == 1
        assert envelope.breakpoints == ()

    def test_dominated_dropped(self) -> None:
        """Coefficientwise smaller polynomials never appear."""
        envelope = envelope_of(
            [(P([1, 0, 1]), None), (P([1, 0, 2]), None)], (F(0), F(1))
        )
        assert envelope.polys == (P([1, 0, 2]),)

    def test_negative_domain(self) -> None:
        """Without the Pareto filter, -eps wins left of zero."""
        eps = P([0, 1])
        envelope = envelope_of([(eps, None), (-eps, None)], (F(-1), F(1)))
        assert envelope.polys == (-eps, eps)
        assert envelope.breakpoints[0].exact_root == 0

    def test_irrational_breakpoint(self) -> None:
        """eps^2 overtakes 2 at sqrt(2)."""
        envelope = envelope_of([(P([2]), None), (P([0, 0, 1]), None)], (F(0), F(2)))
        (point,) = envelope.breakpoints
        assert not point.is_exact
        assert point.lo**2 < 2 < point.hi**2
        assert format_point(point).startswith("~1.414213562")
        data = envelope.to_json()
        assert data["domain"] == ["0", "2"]
        assert data["breakpoints"] == [point.to_json()]
        assert point.to_json()["cubic_or_poly"] == [-2, 0, 1]

    def test_isolation_width(self) -> None:
        """Breakpoint brackets honour the requested width."""
        envelope = envelope_of(
            [(P([2]), None), (P([0, 0, 1]), None)],
            (F(0), F(2)),
            isolation_width=F(1, 64),
        )
        assert envelope.breakpoints[0].width <= F(1, 64)

    def test_narrow_bump(self) -> None:
        """A winner missed by the float grid is still found."""
        base = P([1])
        bump = P([F(19, 25), 1, -1])
        envelope = envelope_of(
            [(base, None), (bump, None)], (F(0), F(2)), grid_points=2
        )
        assert envelope.polys == (base, bump, base)
        assert [b.exact_root for b in envelope.breakpoints] == [F(2, 5), F(3, 5)]

    def test_witness_tie_break(self) -> None:
        """Equal polynomials keep the witness with the smallest key."""
        small = SignPattern(2, 0b10)
        large = SignPattern(2, 0b01)
        poly = P([1, 0, 1])
        envelope = envelope_of([(poly, large), (poly, small)], (F(0), F(1)))
        assert envelope.pieces[0].witness == small

    def test_queries(self) -> None:
        """Pieces are closed on the right."""
        quadratic, cubic = P([1, 0, 3]), P([1, 0, 1, 2])
        envelope = envelope_of([(quadratic, None), (cubic, None)], (F(0), F(2)))
        assert envelope.piece_at(F(1)).poly == quadratic
        assert envelope.piece_at(F(3, 2)).poly == cubic
        assert envelope.pieces[0].to_json() == {
            "interval": ["0", "1"],
            "poly": [1, 0, 3],
            "witness": None,
        }
        with pytest.raises(ValueError, match="outside"):
            envelope.value_at(F(0))

    def test_empty_family(self) -> None:
        """The envelope of nothing is undefined."""
        with pytest.raises(ValueError, match="empty family"):
            envelope_of([], (F(0), F(1)))

    def test_empty_domain(self) -> None:
        """lo must be below hi."""
        with pytest.raises(ValueError, match="empty domain"):
            envelope_of([(P([1]), None)], (F(1), F(1)))


def test_pareto_mask() -> None:
    """Rows dominated in every column by another row are dropped."""
    coeffs = np.array([[1, 0, 1], [1, 0, 3], [1, 1, 0]], dtype=np.int64)
    assert pareto_mask(coeffs).tolist() == [False, True, True]


def test_format_point_exact() -> None:
    """Rational points print exactly."""
    assert format_point(RootBracket.exact(F(3, 5))) == "3/5"
