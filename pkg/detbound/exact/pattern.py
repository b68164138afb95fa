"""Bit-packed sign patterns and their symbolic determinants.

A pattern of order n stands for the matrix with unit diagonal and entry
``s_ij * eps`` at position (i, j), i != j. The n(n-1) signs are packed
row-major with the diagonal skipped; bit value 1 means a minus sign.
"""

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
import numpy.typing as npt
from typing_extensions import override

from .common import FormatError
from .matrix import DenseMatrix, det_symbolic
from .polynomial import EpsPolynomial

# Largest order for which the permutation table is used.
PERMUTATION_EXPANSION_MAX = 7

_PARITY16 = np.array([bin(i).count("1") & 1 for i in range(1 << 16)], dtype=np.uint8)
_LOW16 = np.uint64(0xFFFF)


def bit_index(n: int, i: int, j: int) -> int:
    """Position of the off-diagonal entry (i, j) in the packed sign word.

    Parameters
    ----------
    n : int
        Order of the pattern.
    i : int
        Row.
    j : int
        Column, different from ``i``.

    Returns
    -------
    int
        Bit position.

    Raises
    ------
    ValueError
        If ``i == j``.
    """
    if i == j:
        msg = "the diagonal carries no sign bit"
        raise ValueError(msg)
    return i * (n - 1) + (j if j < i else j - 1)


@dataclass(frozen=True, order=False)
class SignPattern:
    """Unit-diagonal pattern of off-diagonal signs."""

    order: int
    bits: int = 0

    def __post_init__(self) -> None:
        """Validate order and bit range.

        Raises
        ------
        ValueError
            If the order is below one or bits do not fit.
        """
        if self.order < 1:
            msg = "pattern order must be >= 1"
            raise ValueError(msg)
        if not 0 <= self.bits < (1 << self.width):
            msg = f"bits out of range for order {self.order}"
            raise ValueError(msg)

    @property
    def width(self) -> int:
        """Number of sign bits, n(n-1)."""
        return self.order * (self.order - 1)

    @classmethod
    def from_signs(cls, signs: Sequence[Sequence[int]]) -> "SignPattern":
        """Build a pattern from a matrix of +-1 values (diagonal ignored).

        Parameters
        ----------
        signs : Sequence[Sequence[int]]
            Square matrix with off-diagonal entries in {+1, -1}.

        Returns
        -------
        SignPattern
            Packed pattern.

        Raises
        ------
        ValueError
            If an off-diagonal entry is not +-1.
        """
        n = len(signs)
        bits = 0
        for i, j in itertools.permutations(range(n), 2):
            value = signs[i][j]
            if value not in (1, -1):
                msg = f"entry ({i}, {j}) = {value} is not +-1"
                raise ValueError(msg)
            if value == -1:
                bits |= 1 << bit_index(n, i, j)
        return cls(n, bits)

    def sign(self, i: int, j: int) -> int:
        """Sign at (i, j); the diagonal counts as +1."""
        if i == j:
            return 1
        return -1 if (self.bits >> bit_index(self.order, i, j)) & 1 else 1

    def signs(self) -> list[list[int]]:
        """Full +-1 matrix with unit diagonal."""
        n = self.order
        return [[self.sign(i, j) for j in range(n)] for i in range(n)]

    def lex_key(self) -> int:
        """Integer whose order is the row-major lexicographic order, '+' < '-'."""
        width = self.width
        key = 0
        for idx in range(width):
            if (self.bits >> idx) & 1:
                key |= 1 << (width - 1 - idx)
        return key

    def rows(self) -> list[str]:
        """Rows in the pattern text format, '.' on the diagonal."""
        return [
            "".join(
                "." if i == j else ("+" if self.sign(i, j) > 0 else "-")
                for j in range(self.order)
            )
            for i in range(self.order)
        ]

    def to_matrix(self, eps: Fraction) -> DenseMatrix:
        """Instantiate at a rational eps."""
        return DenseMatrix.from_rows(
            [
                [
                    Fraction(1) if i == j else self.sign(i, j) * eps
                    for j in range(self.order)
                ]
                for i in range(self.order)
            ]
        )

    def symbolic_rows(
        self, diag: Optional[Sequence[EpsPolynomial]] = None
    ) -> list[list[EpsPolynomial]]:
        """Polynomial matrix with the given diagonal (unit by default)."""
        one = EpsPolynomial.constant(1)
        plus = EpsPolynomial.monomial(1)
        minus = -plus
        return [
            [
                (diag[i] if diag is not None else one)
                if i == j
                else (plus if self.sign(i, j) > 0 else minus)
                for j in range(self.order)
            ]
            for i in range(self.order)
        ]

    @override
    def __str__(self) -> str:
        return "\n".join(self.rows())


def parse_pattern(text: str) -> SignPattern:
    """Parse rows of '+'/'-' with '.' on the diagonal.

    Parameters
    ----------
    text : str
        One row per line.

    Returns
    -------
    SignPattern
        Parsed pattern.

    Raises
    ------
    FormatError
        If the rows are not square or contain other characters.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    n = len(lines)
    if n == 0 or any(len(line) != n for line in lines):
        msg = "sign pattern must be n rows of n characters"
        raise FormatError(msg)
    signs: list[list[int]] = []
    for i, line in enumerate(lines):
        row: list[int] = []
        for j, char in enumerate(line):
            if i == j:
                if char != ".":
                    msg = f"diagonal entry ({i}, {j}) must be '.'"
                    raise FormatError(msg)
                row.append(1)
            elif char in "+-":
                row.append(1 if char == "+" else -1)
            else:
                msg = f"unexpected character {char!r} at ({i}, {j})"
                raise FormatError(msg)
        signs.append(row)
    return SignPattern.from_signs(signs)


def format_pattern(pattern: SignPattern) -> str:
    """Render a pattern in the text format."""
    return str(pattern)


@dataclass(frozen=True)
class PermutationTable:
    """Precomputed permutation data for one order.

    ``masks[p]`` holds the sign bits touched by the non-fixed points of
    permutation ``p``; ``weights[p, k]`` is the permutation's sign when it
    moves exactly ``k`` points and 0 otherwise.
    """

    order: int
    masks: npt.NDArray[np.uint64]
    signs: tuple[int, ...]
    moved: tuple[int, ...]
    weights: npt.NDArray[np.float64]


def _permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
    return -1 if (len(perm) - cycles) % 2 else 1


@lru_cache(maxsize=None)
def permutation_table(n: int) -> PermutationTable:
    """Permutation table for order ``n`` (cached).

    Parameters
    ----------
    n : int
        Order, at most ``PERMUTATION_EXPANSION_MAX``.

    Returns
    -------
    PermutationTable
        Masks, signs and moved-point counts of all n! permutations.

    Raises
    ------
    ValueError
        If the order is outside the supported range.
    """
    if not 1 <= n <= PERMUTATION_EXPANSION_MAX:
        msg = f"permutation tables exist for 1 <= n <= {PERMUTATION_EXPANSION_MAX}"
        raise ValueError(msg)
    masks: list[int] = []
    signs: list[int] = []
    moved: list[int] = []
    for perm in itertools.permutations(range(n)):
        mask = 0
        count = 0
        for i, target in enumerate(perm):
            if i != target:
                mask |= 1 << bit_index(n, i, target)
                count += 1
        masks.append(mask)
        signs.append(_permutation_sign(perm))
        moved.append(count)
    weights = np.zeros((len(masks), n + 1), dtype=np.float64)
    for p, (sign, count) in enumerate(zip(signs, moved)):
        weights[p, count] = sign
    return PermutationTable(
        order=n,
        masks=np.array(masks, dtype=np.uint64),
        signs=tuple(signs),
        moved=tuple(moved),
        weights=weights,
    )


def _unit_diagonal_coefficients(pattern: SignPattern) -> list[int]:
    table = permutation_table(pattern.order)
    coeffs = [0] * (pattern.order + 1)
    for mask, sign, count in zip(table.masks.tolist(), table.signs, table.moved):
        flips = bin(pattern.bits & mask).count("1")
        coeffs[count] += -sign if flips & 1 else sign
    return coeffs


def det_poly(
    pattern: SignPattern, diag: Optional[Sequence[EpsPolynomial]] = None
) -> EpsPolynomial:
    """Symbolic determinant of the pattern's eps-matrix.

    With a unit diagonal and ``n <= 7`` every permutation contributes
    ``sign * (product of its off-diagonal signs) * eps**moved``, evaluated
    with integers only. Other diagonals and larger orders use Bareiss
    elimination over Q[eps].

    Parameters
    ----------
    pattern : SignPattern
        Off-diagonal signs.
    diag : Optional[Sequence[EpsPolynomial]]
        Diagonal entries; unit diagonal when omitted. (Default value = None)

    Returns
    -------
    EpsPolynomial
        Exact determinant.

    Raises
    ------
    ValueError
        If the diagonal has the wrong length.
    """
    one = EpsPolynomial.constant(1)
    if diag is not None and len(diag) != pattern.order:
        msg = f"diagonal has {len(diag)} entries, pattern order is {pattern.order}"
        raise ValueError(msg)
    unit = diag is None or all(d == one for d in diag)
    if unit and pattern.order <= PERMUTATION_EXPANSION_MAX:
        return EpsPolynomial.of(_unit_diagonal_coefficients(pattern))
    return det_symbolic(pattern.symbolic_rows(diag))


def _parity(words: npt.NDArray[np.uint64], width: int) -> npt.NDArray[np.uint8]:
    parity = _PARITY16[(words & _LOW16).astype(np.intp)]
    shift = 16
    while shift < width:
        parity ^= _PARITY16[((words >> np.uint64(shift)) & _LOW16).astype(np.intp)]
        shift += 16
    return parity


def batch_det_coefficients(
    bits: npt.NDArray[np.uint64], n: int
) -> npt.NDArray[np.int64]:
    """Unit-diagonal determinant coefficients for many patterns at once.

    Parameters
    ----------
    bits : npt.NDArray[np.uint64]
        Packed sign words, one per pattern.
    n : int
        Common order.

    Returns
    -------
    npt.NDArray[np.int64]
        Array of shape ``(len(bits), n + 1)``; row r holds the coefficients
        of pattern r, lowest degree first.
    """
    table = permutation_table(n)
    flips = _parity(bits[:, None] & table.masks[None, :], n * (n - 1))
    signs = 1.0 - 2.0 * flips.astype(np.float64)
    # Entries are bounded by n!, far below 2**53, so the float product is exact.
    return np.rint(signs @ table.weights).astype(np.int64)


def all_patterns(n: int) -> Iterator[SignPattern]:
    """Every one of the 2**(n(n-1)) patterns of order ``n``, by packed value."""
    for bits in range(1 << (n * (n - 1))):
        yield SignPattern(n, bits)
