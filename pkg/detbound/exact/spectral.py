"""Spectral radius estimates, M-matrix certificates and the Fredholm series."""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .common import CertificateStatus, NonConvergent, NotNonnegative, OrderTooLarge
from .matrix import DenseMatrix, det_rational

DEFAULT_POWER_TOLERANCE = 1e-12
DEFAULT_POWER_MAX_ITERATIONS = 100_000
DEFAULT_MINOR_LIMIT = 12
DEFAULT_FREDHOLM_MAX_TERMS = 10_000


@dataclass(frozen=True)
class SpectralEstimate:
    """Power-iteration estimate of the Perron root with exact row-sum brackets."""

    estimate: float
    lower: float
    upper: float
    row_sum_min: Fraction
    row_sum_max: Fraction
    iterations: int
    converged: bool


@dataclass(frozen=True)
class CertificateResult:
    """Outcome of ``certify_rho_le_one``.

    ``violating_minor`` lists the (0-based) indices of a principal minor of
    ``I - F`` that is negative; ``method`` names the test that decided.
    """

    status: CertificateStatus
    method: str
    row_sum_max: Fraction
    violating_minor: Optional[tuple[int, ...]] = None
    minor_value: Optional[Fraction] = None
    estimate: Optional[SpectralEstimate] = None
    note: str = ""

    @property
    def certified(self) -> bool:
        """Whether rho(F) <= 1 was proven."""
        return self.status is CertificateStatus.CERTIFIED_TRUE


def _check_nonnegative(matrix: DenseMatrix) -> None:
    for i, j, value in matrix.entries():
        if value < 0:
            raise NotNonnegative(i, j, value)


def spectral_radius_estimate(
    matrix: DenseMatrix,
    tol: float = DEFAULT_POWER_TOLERANCE,
    *,
    max_iterations: int = DEFAULT_POWER_MAX_ITERATIONS,
) -> SpectralEstimate:
    """Estimate the Perron root of an entrywise nonnegative matrix.

    Iterates on ``F + I`` from the all-ones vector; the shift keeps periodic
    matrices from oscillating and moves every eigenvalue by exactly one.
    For a positive iterate x the Collatz-Wielandt ratios ``min (Ax)_i/x_i``
    and ``max (Ax)_i/x_i`` bracket the Perron root; iteration stops once the
    bracket is narrower than ``tol`` relative to its upper end.

    Parameters
    ----------
    matrix : DenseMatrix
        Nonnegative matrix F.
    tol : float
        Relative width at which to stop. (Default value = 1e-12)
    max_iterations : int
        Iteration cap. (Default value = 100_000)

    Returns
    -------
    SpectralEstimate
        Estimate, float bracket and the exact min/max row sums.
    """
    _check_nonnegative(matrix)
    sums = matrix.row_sums()
    row_min, row_max = min(sums), max(sums)
    if row_max == 0:
        return SpectralEstimate(0.0, 0.0, 0.0, row_min, row_max, 0, converged=True)
    shifted = matrix.to_numpy() + np.eye(matrix.order)
    x = np.ones(matrix.order)
    lower, upper = float(row_min), float(row_max)
    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):  # noqa: B007
        y = shifted @ x
        ratios = y / x
        lower = max(lower, float(ratios.min()) - 1.0)
        upper = min(upper, float(ratios.max()) - 1.0)
        x = y / np.linalg.norm(y, ord=np.inf)
        if upper - lower <= tol * max(upper, 1.0):
            converged = True
            break
    return SpectralEstimate(
        estimate=(lower + upper) / 2,
        lower=lower,
        upper=upper,
        row_sum_min=row_min,
        row_sum_max=row_max,
        iterations=iterations,
        converged=converged,
    )


def certify_rho_le_one(
    matrix: DenseMatrix,
    *,
    minor_limit: int = DEFAULT_MINOR_LIMIT,
    strict: bool = False,
) -> CertificateResult:
    """Decide ``rho(F) <= 1`` exactly for a nonnegative matrix F.

    ``I - F`` is a Z-matrix, and it is a (possibly singular) M-matrix, which
    is equivalent to ``rho(F) <= 1``, iff all its principal minors are
    nonnegative. The row-sum test ``max_i sum_j f_ij <= 1`` is tried first
    since it is sufficient on its own.

    Parameters
    ----------
    matrix : DenseMatrix
        Nonnegative matrix F.
    minor_limit : int
        Largest order for the exhaustive minor test. (Default value = 12)
    strict : bool
        Raise instead of returning an uncertified result when the order is
        above ``minor_limit``. (Default value = False)

    Returns
    -------
    CertificateResult
        Certified true or false, or uncertified above the minor limit.

    Raises
    ------
    OrderTooLarge
        If ``strict`` and the order exceeds ``minor_limit`` and the row-sum
        test does not decide.
    """
    _check_nonnegative(matrix)
    n = matrix.order
    row_max = max(matrix.row_sums())
    if row_max <= 1:
        return CertificateResult(CertificateStatus.CERTIFIED_TRUE, "row-sum", row_max)
    if n > minor_limit:
        if strict:
            raise OrderTooLarge(n, minor_limit, "principal-minor certification")
        return CertificateResult(
            CertificateStatus.UNCERTIFIED,
            "power-iteration",
            row_max,
            estimate=spectral_radius_estimate(matrix),
            note=f"order {n} exceeds the exhaustive-minor limit {minor_limit}",
        )
    z_matrix = DenseMatrix.identity(n) - matrix
    for size in range(1, n + 1):
        for indices in itertools.combinations(range(n), size):
            minor = det_rational(z_matrix.principal_submatrix(indices))
            if minor < 0:
                return CertificateResult(
                    CertificateStatus.CERTIFIED_FALSE,
                    "principal-minor",
                    row_max,
                    violating_minor=indices,
                    minor_value=minor,
                )
    return CertificateResult(
        CertificateStatus.CERTIFIED_TRUE, "principal-minor", row_max
    )


def fredholm_log_det(
    matrix: DenseMatrix,
    tol: float,
    max_terms: int = DEFAULT_FREDHOLM_MAX_TERMS,
) -> float:
    """``log det(I - E)`` from the trace series ``-sum_k Tr(E^k)/k``.

    The truncation error after K terms is at most
    ``n * r**(K+1) / ((K+1) * (1-r))`` where ``r`` is the smaller of the
    maximal absolute row and column sums of E, an upper bound on rho(E).

    Parameters
    ----------
    matrix : DenseMatrix
        The perturbation E.
    tol : float
        Bound on the truncation error.
    max_terms : int
        Largest number of series terms. (Default value = 10_000)

    Returns
    -------
    float
        The logarithm of the determinant.

    Raises
    ------
    ValueError
        If ``tol`` is not positive.
    NonConvergent
        If the norm bound is not below one, or the tail bound does not
        reach ``tol`` within ``max_terms``.
    """
    if tol <= 0:
        msg = "tol must be positive"
        raise ValueError(msg)
    absolute = matrix.absolute()
    radius_bound = min(max(absolute.row_sums()), max(absolute.transpose().row_sums()))
    if radius_bound >= 1:
        msg = (
            f"norm bound {float(radius_bound):.6g} >= 1; the series cannot be"
            " certified to converge"
        )
        raise NonConvergent(msg)
    n = matrix.order
    r = float(radius_bound)
    e = matrix.to_numpy()
    power = np.eye(n)
    total = 0.0
    for k in range(1, max_terms + 1):
        power = power @ e
        total -= float(np.trace(power)) / k
        tail = n * r ** (k + 1) / ((k + 1) * (1 - r)) if r else 0.0
        if tail < tol:
            return total
    msg = f"tail bound did not reach {tol:g} within {max_terms} terms"
    raise NonConvergent(msg)


def fredholm_det(matrix: DenseMatrix, tol: float) -> float:
    """``det(I - E)`` from the trace series, ``exp`` of ``fredholm_log_det``."""
    return math.exp(fredholm_log_det(matrix, tol))
