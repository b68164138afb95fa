"""Witness and extremal matrices: Toeplitz, skew-triangular and skew-Hadamard."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .exact import (
    DenseMatrix,
    EpsPolynomial,
    HypothesisViolated,
    InvalidOrder,
    SignPattern,
    Unconstructible,
    det_rational,
)

IntRows = tuple[tuple[int, ...], ...]


def toeplitz_F(  # noqa: N802
    n: int, delta: Fraction, eps: Fraction, *, check: bool = False
) -> DenseMatrix:
    """Return ``F = (delta - eps) I + eps J``: delta on, eps off the diagonal.

    Parameters
    ----------
    n : int
        Order.
    delta : Fraction
        Diagonal entry.
    eps : Fraction
        Off-diagonal entry.
    check : bool
        Confirm ``det(I - F)`` against the closed form
        ``(1 - delta - (n-1) eps) (1 - delta + eps)**(n-1)``.
        (Default value = False)

    Returns
    -------
    DenseMatrix
        The matrix F.

    Raises
    ------
    ArithmeticError
        If ``check`` is set and the determinant disagrees.
    """
    matrix = DenseMatrix.from_rows(
        [[delta if i == j else eps for j in range(n)] for i in range(n)]
    )
    if check:
        expected = (1 - delta - (n - 1) * eps) * (1 - delta + eps) ** (n - 1)
        actual = det_rational(DenseMatrix.identity(n) - matrix)
        if actual != expected:
            msg = f"det(I - F) = {actual}, closed form gives {expected}"
            raise ArithmeticError(msg)
    return matrix


def skew_tri(n: int, eps: Fraction, *, inflate: bool = False) -> DenseMatrix:
    """Return ``I + eps (U - U^T)``, or ``(1 + eps) I + eps (U - U^T)`` if inflated.

    Parameters
    ----------
    n : int
        Order.
    eps : Fraction
        Perturbation size.
    inflate : bool
        Use ``1 + eps`` on the diagonal. (Default value = False)

    Returns
    -------
    DenseMatrix
        The skew-triangular perturbation of the identity.
    """
    diag = 1 + eps if inflate else Fraction(1)
    upper = DenseMatrix.upper_ones(n)
    skew = (upper - upper.transpose()).scale(eps)
    return DenseMatrix.identity(n).scale(diag) + skew


def skew_tri_pattern(n: int) -> SignPattern:
    """Sign pattern of ``skew_tri``: plus above the diagonal, minus below."""
    return SignPattern.from_signs(
        [[1 if i <= j else -1 for j in range(n)] for i in range(n)]
    )


def skew_tri_diagonal(n: int, *, inflate: bool) -> list[EpsPolynomial]:
    """Symbolic diagonal of ``skew_tri``."""
    entry = EpsPolynomial.linear(1, 1) if inflate else EpsPolynomial.constant(1)
    return [entry] * n


def verify_skew_hadamard(matrix: DenseMatrix) -> bool:
    """Whether ``H + H^T = 2I`` and ``H H^T = nI`` hold exactly.

    Parameters
    ----------
    matrix : DenseMatrix
        Candidate H.

    Returns
    -------
    bool
        False as well for entries other than +-1.
    """
    n = matrix.order
    if any(abs(x) != 1 for _, _, x in matrix.entries()):
        return False
    identity = DenseMatrix.identity(n)
    if matrix + matrix.transpose() != identity.scale(2):
        return False
    return matrix @ matrix.transpose() == identity.scale(n)


@dataclass(frozen=True)
class SkewHadamard:
    """A skew-Hadamard matrix, verified on construction.

    Attributes
    ----------
    rows : IntRows
        The +-1 entries.
    rule : str
        Construction that produced it.
    """

    rows: IntRows
    rule: str = "given"

    def __post_init__(self) -> None:
        """Check both defining identities.

        Raises
        ------
        HypothesisViolated
            If H + H^T != 2I or H H^T != nI.
        """
        if not verify_skew_hadamard(self.to_dense()):
            msg = "H + H^T = 2I and H H^T = nI"
            raise HypothesisViolated(msg)

    @property
    def order(self) -> int:
        """Order n."""
        return len(self.rows)

    def to_dense(self) -> DenseMatrix:
        """Rational copy."""
        return DenseMatrix.from_rows(self.rows)

    def pattern(self) -> SignPattern:
        """Sign pattern of ``(1 - eps) I + eps H`` (H has unit diagonal)."""
        return SignPattern.from_signs(self.rows)

    def compact_rows(self) -> list[str]:
        """Rows as strings of '+' and '-'."""
        return ["".join("+" if x > 0 else "-" for x in row) for row in self.rows]


def _is_prime(q: int) -> bool:
    if q < 2:  # noqa: PLR2004
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def _paley(q: int) -> IntRows:
    """Paley type I over GF(q), q prime with q = 3 mod 4.

    With the Jacobsthal matrix ``Q[i][j] = chi(j - i)`` (skew because -1 is
    a non-residue) and ``S = [[0, e^T], [-e, Q]]``, ``H = I + S``.
    """
    residues = {(x * x) % q for x in range(1, q)}

    def chi(a: int) -> int:
        a %= q
        if a == 0:
            return 0
        return 1 if a in residues else -1

    n = q + 1
    rows = [[0] * n for _ in range(n)]
    for j in range(1, n):
        rows[0][j] = 1
        rows[j][0] = -1
    for i in range(q):
        for j in range(q):
            rows[i + 1][j + 1] = chi(j - i)
    for i in range(n):
        rows[i][i] = 1
    return tuple(tuple(row) for row in rows)


def _double(h: IntRows) -> IntRows:
    """Order-doubling block matrix ``[[H, H], [-H^T, H^T]]``."""
    m = len(h)
    ht = [[h[j][i] for j in range(m)] for i in range(m)]
    top = [list(h[i]) + list(h[i]) for i in range(m)]
    bottom = [[-x for x in ht[i]] + list(ht[i]) for i in range(m)]
    return tuple(tuple(row) for row in top + bottom)


@lru_cache(maxsize=None)
def _build(n: int) -> Optional[tuple[IntRows, str]]:
    if n == 1:
        return ((1,),), "base"
    if n == 2:  # noqa: PLR2004
        return ((1, 1), (-1, 1)), "base"
    if n % 4:
        return None
    q = n - 1
    if _is_prime(q) and q % 4 == 3:  # noqa: PLR2004
        return _paley(q), f"paley(q={q})"
    half = _build(n // 2)
    if half is not None:
        return _double(half[0]), f"doubling({half[1]})"
    return None


def skew_hadamard(n: int) -> SkewHadamard:
    """Construct a skew-Hadamard matrix of order ``n``.

    Rules are tried in the order base (n <= 2), Paley type I over a prime
    field, then doubling of a constructible order n/2. Prime-power fields
    are not implemented, so some valid orders are reported unconstructible.

    Parameters
    ----------
    n : int
        Requested order.

    Returns
    -------
    SkewHadamard
        Verified matrix; the same matrix for the same n on every call.

    Raises
    ------
    InvalidOrder
        If ``n > 2`` is not a multiple of 4, or ``n < 1``.
    Unconstructible
        If no rule applies.
    """
    if n < 1 or (n > 2 and n % 4):  # noqa: PLR2004
        msg = f"skew-Hadamard matrices need n in {{1, 2}} or 4 | n, got {n}"
        raise InvalidOrder(msg)
    built = _build(n)
    if built is None:
        tried = ["base", f"paley(q={n - 1})"]
        if n % 2 == 0:
            tried.append(f"doubling(n={n // 2})")
        raise Unconstructible(n, tried)
    rows, rule = built
    return SkewHadamard(rows, rule)


def perturb_identity(h: SkewHadamard, eps: Fraction) -> DenseMatrix:
    """Return ``A(eps) = (1 - eps) I + eps H``; its columns are orthogonal."""
    n = h.order
    return DenseMatrix.identity(n).scale(1 - eps) + h.to_dense().scale(eps)
