"""Exact upper envelope of polynomials in eps over a half-open interval.

The envelope is built in three stages. Candidates that are dominated
coefficientwise by another candidate are dropped (sound for eps >= 0). A
float grid then picks the few candidates that look maximal somewhere, and an
exact sweep over their difference polynomials builds the pieces. Finally
every remaining candidate is checked exactly against each piece; any
candidate that rises above the envelope joins the sweep set and the sweep is
repeated.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import numpy.typing as npt

from .exact import (
    EpsPolynomial,
    RootBracket,
    SignPattern,
    compare_roots,
    format_rational,
)
from .exact.roots import DEFAULT_ISOLATION_WIDTH, isolate_roots, sign_after

DEFAULT_GRID_POINTS = 512


@dataclass(frozen=True)
class Candidate:
    """A polynomial together with the pattern that produced it."""

    poly: EpsPolynomial
    witness: Optional[SignPattern] = None

    @property
    def key(self) -> int:
        """Tie-break key, the witness' lexicographic rank."""
        return -1 if self.witness is None else self.witness.lex_key()


@dataclass(frozen=True)
class Piece:
    """Maximal polynomial on the interval ``(start, end]``."""

    start: RootBracket
    end: RootBracket
    poly: EpsPolynomial
    witness: Optional[SignPattern] = None

    def to_json(self) -> dict[str, object]:
        """Piece in the search report format."""
        return {
            "interval": [format_point(self.start), format_point(self.end)],
            "poly": self.poly.to_json(),
            "witness": None if self.witness is None else str(self.witness),
        }


def format_point(point: RootBracket) -> str:
    """Rational text for exact points, ``~decimal`` for irrational ones."""
    if point.exact_root is not None:
        return format_rational(point.exact_root)
    return f"~{float(point):.12g}"


@dataclass(frozen=True)
class Envelope:
    """Piecewise maximum of a polynomial family over ``(lo, hi]``."""

    lo: Fraction
    hi: Fraction
    pieces: tuple[Piece, ...]
    # Every witness per piece, filled in only on request.
    all_witnesses: tuple[tuple[SignPattern, ...], ...] = field(default=())

    @property
    def breakpoints(self) -> tuple[RootBracket, ...]:
        """Points where the maximal polynomial changes."""
        return tuple(piece.start for piece in self.pieces[1:])

    @property
    def polys(self) -> tuple[EpsPolynomial, ...]:
        """Piece polynomials from left to right."""
        return tuple(piece.poly for piece in self.pieces)

    @property
    def leading_coefficient(self) -> Fraction:
        """Leading coefficient of the last piece, which decides large eps."""
        return self.pieces[-1].poly.leading

    def value_at(self, x: Fraction) -> Fraction:
        """Exact envelope value at a rational point of the domain.

        Raises
        ------
        ValueError
            If ``x`` lies outside ``(lo, hi]``.
        """
        x = Fraction(x)
        if not self.lo < x <= self.hi:
            msg = f"{format_rational(x)} is outside the envelope domain"
            raise ValueError(msg)
        return max(piece.poly(x) for piece in self.pieces)

    def piece_at(self, x: Fraction) -> Piece:
        """Piece whose interval contains the rational ``x``."""
        point = RootBracket.exact(Fraction(x))
        for piece in self.pieces:
            if compare_roots(point, piece.end) <= 0:
                return piece
        return self.pieces[-1]

    def to_json(self) -> dict[str, object]:
        """Pieces and breakpoints in the search report format."""
        data: dict[str, object] = {
            "domain": [format_rational(self.lo), format_rational(self.hi)],
            "pieces": [piece.to_json() for piece in self.pieces],
            "breakpoints": [point.to_json() for point in self.breakpoints],
        }
        if self.all_witnesses:
            data["all_witnesses"] = [
                [str(w) for w in group] for group in self.all_witnesses
            ]
        return data


def deduplicate(candidates: Iterable[Candidate]) -> list[Candidate]:
    """One candidate per polynomial, keeping the smallest witness key."""
    best: dict[EpsPolynomial, Candidate] = {}
    for cand in candidates:
        held = best.get(cand.poly)
        if held is None or cand.key < held.key:
            best[cand.poly] = cand
    return list(best.values())


def coefficient_matrix(polys: Sequence[EpsPolynomial]) -> npt.NDArray[np.float64]:
    """Coefficients as rows of a float matrix padded to a common degree."""
    width = max(p.degree for p in polys) + 1
    width = max(width, 1)
    matrix = np.zeros((len(polys), width), dtype=np.float64)
    for r, poly in enumerate(polys):
        for k in range(poly.degree + 1):
            matrix[r, k] = float(poly.coefficient(k))
    return matrix


def pareto_mask(coeffs: npt.NDArray[np.int64]) -> npt.NDArray[np.bool_]:
    """Rows not dominated coefficientwise by a different row.

    Row q dominates row p when ``q >= p`` in every column and the rows
    differ, so ``q(eps) >= p(eps)`` for every ``eps >= 0``. Rows must be
    distinct.

    Parameters
    ----------
    coeffs : npt.NDArray[np.int64]
        One polynomial per row.

    Returns
    -------
    npt.NDArray[np.bool_]
        True for the survivors.
    """
    keep = np.ones(len(coeffs), dtype=bool)
    for i in range(len(coeffs)):
        geq = np.all(coeffs >= coeffs[i], axis=1)
        gt = np.any(coeffs > coeffs[i], axis=1)
        if np.any(geq & gt):
            keep[i] = False
    return keep


def _pareto(candidates: list[Candidate]) -> list[Candidate]:
    if len(candidates) < 2:  # noqa: PLR2004
        return candidates
    if all(c.poly.is_integral() for c in candidates):
        width = max(c.poly.degree for c in candidates) + 1
        coeffs = np.array(
            [[int(c.poly.coefficient(k)) for k in range(width)] for c in candidates],
            dtype=np.int64,
        )
        mask = pareto_mask(coeffs)
        return [c for c, keep in zip(candidates, mask) if keep]
    width = max(c.poly.degree for c in candidates) + 1
    rows = [[c.poly.coefficient(k) for k in range(width)] for c in candidates]
    return [
        cand
        for cand, row in zip(candidates, rows)
        if not any(
            other != row and all(o >= r for o, r in zip(other, row)) for other in rows
        )
    ]


def _float_preselect(
    candidates: list[Candidate], lo: Fraction, hi: Fraction, points: int
) -> list[Candidate]:
    coeffs = coefficient_matrix([c.poly for c in candidates])
    grid = np.linspace(float(lo), float(hi), points + 1)[1:]
    powers = grid[:, None] ** np.arange(coeffs.shape[1])[None, :]
    values = coeffs @ powers.T
    chosen = sorted(set(np.argmax(values, axis=0).tolist()))
    return [candidates[i] for i in chosen]


def _beats_after(a: EpsPolynomial, b: EpsPolynomial, point: RootBracket) -> bool:
    """Whether ``a > b`` just to the right of ``point``."""
    return sign_after(a - b, point) > 0


def _best_after(candidates: Sequence[Candidate], point: RootBracket) -> Candidate:
    best = candidates[0]
    for cand in candidates[1:]:
        if _beats_after(cand.poly, best.poly, point):
            best = cand
    return best


def _roots_between(
    poly: EpsPolynomial,
    start: RootBracket,
    end: RootBracket,
    width: Fraction = DEFAULT_ISOLATION_WIDTH,
) -> list[RootBracket]:
    """Roots of ``poly`` strictly between two points, ascending."""
    if poly.degree < 1:
        return []
    outer_lo, outer_hi = start.lo, end.hi
    if outer_lo >= outer_hi:
        return []
    return [
        r
        for r in isolate_roots(poly, outer_lo, outer_hi, width=width)
        if compare_roots(r, start) > 0 and compare_roots(r, end) < 0
    ]


def _sweep(
    candidates: Sequence[Candidate], lo: Fraction, hi: Fraction, width: Fraction
) -> list[Piece]:
    end = RootBracket.exact(hi)
    point = RootBracket.exact(lo)
    pieces: list[Piece] = []
    while True:
        current = _best_after(candidates, point)
        next_point: Optional[RootBracket] = None
        for cand in candidates:
            if cand is current:
                continue
            diff = cand.poly - current.poly
            for root in _roots_between(diff, point, end, width):
                if next_point is not None and compare_roots(root, next_point) >= 0:
                    break
                if sign_after(diff, root) > 0:
                    next_point = root
                    break
        stop = end if next_point is None else next_point
        pieces.append(Piece(point, stop, current.poly, current.witness))
        if next_point is None:
            return pieces
        point = next_point


def _exceeds(cand: Candidate, piece: Piece, width: Fraction) -> bool:
    """Whether the candidate rises above the piece polynomial on its interval."""
    diff = cand.poly - piece.poly
    if diff.is_zero():
        return False
    coeffs = (diff.coefficient(k) for k in range(diff.degree + 1))
    if piece.start.lo >= 0 and all(c <= 0 for c in coeffs):
        return False
    if sign_after(diff, piece.start) > 0:
        return True
    roots = _roots_between(diff, piece.start, piece.end, width)
    return any(sign_after(diff, r) > 0 for r in roots)


def envelope_of(
    candidates: Iterable[tuple[EpsPolynomial, Optional[SignPattern]]],
    domain: tuple[Fraction, Fraction],
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    isolation_width: Fraction = DEFAULT_ISOLATION_WIDTH,
) -> Envelope:
    """Exact upper envelope of a polynomial family on ``(lo, hi]``.

    Parameters
    ----------
    candidates : Iterable[tuple[EpsPolynomial, Optional[SignPattern]]]
        Polynomials and their witnesses. Equal polynomials keep the witness
        with the smallest lexicographic key.
    domain : tuple[Fraction, Fraction]
        ``(lo, hi)`` with ``lo < hi``.
    grid_points : int
        Size of the float preselection grid. (Default value = 512)
    isolation_width : Fraction
        Largest width of an irrational breakpoint bracket.
        (Default value = 2**-32)

    Returns
    -------
    Envelope
        Pieces tiling the domain; adjacent pieces carry distinct
        polynomials and every breakpoint is a root of their difference.

    Raises
    ------
    ValueError
        If there are no candidates or the domain is empty.
    """
    lo, hi = Fraction(domain[0]), Fraction(domain[1])
    if lo >= hi:
        msg = f"empty domain ({format_rational(lo)}, {format_rational(hi)}]"
        raise ValueError(msg)
    pool = deduplicate(Candidate(p, w) for p, w in candidates)
    if not pool:
        msg = "the envelope of an empty family is undefined"
        raise ValueError(msg)
    if lo >= 0:
        pool = _pareto(pool)
    pool.sort(key=lambda c: (c.key, c.poly.coeffs))
    active = _float_preselect(pool, lo, hi, grid_points)
    while True:
        pieces = _sweep(active, lo, hi, isolation_width)
        missing = [
            cand
            for cand in pool
            if cand not in active
            and any(_exceeds(cand, piece, isolation_width) for piece in pieces)
        ]
        if not missing:
            return Envelope(lo, hi, tuple(pieces))
        active = sorted([*active, *missing], key=lambda c: (c.key, c.poly.coeffs))
