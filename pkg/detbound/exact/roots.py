"""Real root isolation with exact sign evaluation.

Rational roots are found by screening the candidates ``±r/s`` (r divides the
constant term, s the leading coefficient) and reported exactly. The rest is
isolated with a Sturm sequence and bisected to the requested width.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from typing_extensions import override

from .common import ZeroPolynomial, format_rational
from .polynomial import EpsPolynomial

DEFAULT_ISOLATION_WIDTH = Fraction(1, 1 << 32)
# Constant/leading coefficients above this are not factored for screening.
DIVISOR_SCREEN_LIMIT = 10**12


@dataclass(frozen=True)
class RootBracket:
    """A real algebraic point.

    Either ``exact_root`` is set (and ``lo == hi == exact_root``) or the
    polynomial has exactly one root in the open interval ``(lo, hi)``, is
    square-free and has opposite, non-zero signs at ``lo`` and ``hi``.
    """

    polynomial: EpsPolynomial
    lo: Fraction
    hi: Fraction
    exact_root: Optional[Fraction] = None

    @classmethod
    def exact(cls, value: Fraction) -> "RootBracket":
        """Point bracket for a rational value."""
        value = Fraction(value)
        poly = EpsPolynomial.linear(-value, 1).primitive()
        return cls(poly, value, value, value)

    @property
    def is_exact(self) -> bool:
        """Whether the point is rational and known exactly."""
        return self.exact_root is not None

    @property
    def width(self) -> Fraction:
        """Length of the isolating interval, zero for exact points."""
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        """Rational midpoint of the bracket."""
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())

    def bisect(self) -> "RootBracket":
        """Halve the isolating interval, keeping the root.

        Returns
        -------
        RootBracket
            Bracket of half the width, or an exact point if the midpoint
            happens to be the root.
        """
        if self.is_exact:
            return self
        mid = self.midpoint()
        s_mid = self.polynomial.sign_at(mid)
        if s_mid == 0:
            return replace(self, lo=mid, hi=mid, exact_root=mid)
        if s_mid == self.polynomial.sign_at(self.lo):
            return replace(self, lo=mid)
        return replace(self, hi=mid)

    def refine(self, width: Fraction) -> "RootBracket":
        """Bisect until the bracket is no wider than ``width``."""
        bracket = self
        while not bracket.is_exact and bracket.width > width:
            bracket = bracket.bisect()
        return bracket

    def to_json(self) -> dict[str, object]:
        """Machine readable form used in search output."""
        return {
            "cubic_or_poly": self.polynomial.to_json(),
            "bracket": [format_rational(self.lo), format_rational(self.hi)],
            "exact": (
                None if self.exact_root is None else format_rational(self.exact_root)
            ),
        }

    @override
    def __str__(self) -> str:
        if self.exact_root is not None:
            return format_rational(self.exact_root)
        return (
            f"root of {self.polynomial} in "
            f"({format_rational(self.lo)}, {format_rational(self.hi)})"
            f" ~ {float(self):.10g}"
        )


def sturm_sequence(poly: EpsPolynomial) -> list[EpsPolynomial]:
    """Sturm sequence p, p', -rem(p, p'), ... of a non-constant polynomial."""
    seq = [poly, poly.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        seq.append(-seq[-2].divmod(seq[-1])[1])
    if seq[-1].is_zero():
        seq.pop()
    return seq


def sign_variations(seq: Sequence[EpsPolynomial], x: Fraction) -> int:
    """Number of sign changes in the sequence evaluated at ``x`` (zeros skipped)."""
    changes = 0
    previous = 0
    for poly in seq:
        s = poly.sign_at(x)
        if s == 0:
            continue
        if previous and s != previous:
            changes += 1
        previous = s
    return changes


def count_roots(poly: EpsPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in the open interval ``(lo, hi)``.

    Parameters
    ----------
    poly : EpsPolynomial
        Non-zero polynomial.
    lo : Fraction
        Left end.
    hi : Fraction
        Right end.

    Returns
    -------
    int
        Number of distinct roots strictly inside.
    """
    if poly.degree < 1 or lo >= hi:
        return 0
    sf = poly.squarefree_part()
    seq = sturm_sequence(sf)
    count = sign_variations(seq, lo) - sign_variations(seq, hi)
    # Sturm counts (lo, hi]; drop a root sitting on hi.
    if sf.sign_at(hi) == 0:
        count -= 1
    return count


def _divisors(m: int) -> list[int]:
    m = abs(m)
    small: list[int] = []
    large: list[int] = []
    for d in range(1, math.isqrt(m) + 1):
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
    return small + large[::-1]


def rational_roots(poly: EpsPolynomial) -> list[Fraction]:
    """All rational roots of a non-zero polynomial, ascending.

    Parameters
    ----------
    poly : EpsPolynomial
        Polynomial to screen.

    Returns
    -------
    list[Fraction]
        Distinct rational roots. Empty if the coefficients are too large to
        screen; callers then still isolate every root by bisection.
    """
    if poly.degree < 1:
        return []
    prim = poly.squarefree_part().primitive()
    roots: list[Fraction] = []
    if prim.coefficient(0) == 0:
        roots.append(Fraction(0))
        prim = prim.exact_div(EpsPolynomial.monomial(1))
    constant = int(prim.coefficient(0))
    leading = int(prim.leading)
    if prim.degree < 1 or max(abs(constant), abs(leading)) > DIVISOR_SCREEN_LIMIT:
        return sorted(roots)
    candidates = {
        Fraction(sign * r, s)
        for r in _divisors(constant)
        for s in _divisors(leading)
        for sign in (1, -1)
    }
    roots.extend(c for c in candidates if prim(c) == 0)
    return sorted(roots)


def _isolate_irrational(
    poly: EpsPolynomial, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[list[RootBracket], list[Fraction]]:
    """Bisect the roots of a square-free polynomial in ``(lo, hi)``.

    Returns the brackets plus any rational roots met on the way (only
    possible when screening was skipped).
    """
    exact: list[Fraction] = []
    work = poly
    while True:
        for end in (lo, hi):
            if work.degree >= 1 and work(end) == 0:
                work = work.exact_div(EpsPolynomial.linear(-end, 1))
        if work.degree < 1:
            return [], exact
        seq = sturm_sequence(work)
        brackets: list[RootBracket] = []
        stack = [(lo, hi, sign_variations(seq, lo) - sign_variations(seq, hi))]
        hit: Optional[Fraction] = None
        while stack and hit is None:
            a, b, count = stack.pop()
            if count == 0:
                continue
            if count == 1:
                bracket = RootBracket(work.primitive(), a, b).refine(width)
                if bracket.is_exact:
                    hit = bracket.lo
                else:
                    brackets.append(bracket)
                continue
            mid = (a + b) / 2
            if work(mid) == 0:
                hit = mid
                continue
            left = sign_variations(seq, a) - sign_variations(seq, mid)
            stack.append((mid, b, count - left))
            stack.append((a, mid, left))
        if hit is None:
            return sorted(brackets, key=lambda br: br.lo), exact
        exact.append(hit)
        work = work.exact_div(EpsPolynomial.linear(-hit, 1))


def isolate_roots(
    poly: EpsPolynomial,
    lo: Fraction,
    hi: Fraction,
    *,
    width: Fraction = DEFAULT_ISOLATION_WIDTH,
) -> list[RootBracket]:
    """Isolate every real root of ``poly`` in the open interval ``(lo, hi)``.

    Parameters
    ----------
    poly : EpsPolynomial
        Polynomial whose roots are wanted.
    lo : Fraction
        Left end (excluded).
    hi : Fraction
        Right end (excluded).
    width : Fraction
        Largest width of an irrational root's bracket.
        (Default value = DEFAULT_ISOLATION_WIDTH)

    Returns
    -------
    list[RootBracket]
        One bracket per distinct root, ascending. Rational roots are exact;
        irrational brackets carry the square-free factor left after the
        rational roots were divided out.

    Raises
    ------
    ZeroPolynomial
        If ``poly`` is identically zero.
    ValueError
        If ``lo >= hi``.
    """
    if poly.is_zero():
        msg = "cannot isolate the roots of the zero polynomial"
        raise ZeroPolynomial(msg)
    if lo >= hi:
        msg = f"empty interval ({format_rational(lo)}, {format_rational(hi)})"
        raise ValueError(msg)
    if poly.degree < 1:
        return []
    rest = poly.squarefree_part()
    found = rational_roots(rest)
    for root in found:
        rest = rest.exact_div(EpsPolynomial.linear(-root, 1))
    brackets = [RootBracket.exact(r) for r in found if lo < r < hi]
    irrational, stray = _isolate_irrational(rest, lo, hi, width)
    brackets.extend(RootBracket.exact(r) for r in stray)
    brackets.extend(irrational)
    return sorted(brackets, key=lambda br: (br.lo, br.hi))


def _has_common_root(
    a: RootBracket, b: RootBracket, lo: Fraction, hi: Fraction
) -> bool:
    common = a.polynomial.gcd(b.polynomial)
    return common.degree >= 1 and count_roots(common, lo, hi) > 0


def _compare_exact_with(x: Fraction, bracket: RootBracket) -> int:
    if x <= bracket.lo:
        return -1
    if x >= bracket.hi:
        return 1
    s_x = bracket.polynomial.sign_at(x)
    if s_x == 0:
        return 0
    return 1 if s_x != bracket.polynomial.sign_at(bracket.lo) else -1


def compare_roots(a: RootBracket, b: RootBracket) -> int:
    """Exact order of two algebraic points.

    Parameters
    ----------
    a : RootBracket
        First point.
    b : RootBracket
        Second point.

    Returns
    -------
    int
        -1, 0 or 1 as ``a`` is below, equal to or above ``b``.
    """
    if a.exact_root is not None and b.exact_root is not None:
        return (a.exact_root > b.exact_root) - (a.exact_root < b.exact_root)
    if a.exact_root is not None:
        return _compare_exact_with(a.exact_root, b)
    if b.exact_root is not None:
        return -_compare_exact_with(b.exact_root, a)
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if _has_common_root(a, b, lo, hi):
            return 0
        a, b = a.bisect(), b.bisect()
        if a.is_exact or b.is_exact:
            return compare_roots(a, b)


def sign_after(poly: EpsPolynomial, point: RootBracket) -> int:
    """Sign of ``poly`` on a small right neighbourhood of an algebraic point.

    Parameters
    ----------
    poly : EpsPolynomial
        Polynomial to inspect.
    point : RootBracket
        The point.

    Returns
    -------
    int
        1, -1, or 0 for the zero polynomial.
    """
    if poly.is_zero():
        return 0
    if point.exact_root is not None:
        return poly.sign_after(point.exact_root)
    bracket = point
    while True:
        if bracket.exact_root is not None:
            return poly.sign_after(bracket.exact_root)
        vanishes = _has_common_root(
            bracket, RootBracket(poly, bracket.lo, bracket.hi), bracket.lo, bracket.hi
        )
        ends_clear = poly.sign_at(bracket.lo) != 0 and poly.sign_at(bracket.hi) != 0
        if ends_clear and count_roots(poly, bracket.lo, bracket.hi) == int(vanishes):
            return poly.sign_at(bracket.hi)
        bracket = bracket.bisect()


def sign_at_point(poly: EpsPolynomial, point: RootBracket) -> int:
    """Exact sign of ``poly`` at an algebraic point."""
    if point.exact_root is not None:
        return poly.sign_at(point.exact_root)
    bracket = point
    while True:
        if bracket.exact_root is not None:
            return poly.sign_at(bracket.exact_root)
        if _has_common_root(
            bracket, RootBracket(poly, bracket.lo, bracket.hi), bracket.lo, bracket.hi
        ):
            return 0
        if count_roots(poly, bracket.lo, bracket.hi) == 0 and poly.sign_at(bracket.lo):
            return poly.sign_at(bracket.lo)
        bracket = bracket.bisect()
