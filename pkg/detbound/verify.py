"""Randomised and constructive checks of the determinant theorems.

Every check works on exact rationals. Random matrices are drawn on the grid
of step ``2**-16`` inside the allowed box, one generator per trial derived
from ``SeedSequence(seed, spawn_key=(trial,))``, so a report depends only on
the seed and the trial count.
"""

import enum
import hashlib
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .bounds import (
    LOWER,
    UPPER,
    BoundEntry,
    bound_table,
    lemma2_gap,
    upper_bound_table,
)
from .const import (
    DEFAULT_MINOR_LIMIT,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    SAMPLE_DENOMINATOR_BITS,
)
from .constructors import SkewHadamard, toeplitz_F, verify_skew_hadamard
from .exact import (
    CertificateStatus,
    DenseMatrix,
    EpsPolynomial,
    HypothesisViolated,
    NotPolynomial,
    certify_rho_le_one,
    det_poly,
    det_rational,
    det_symbolic,
    format_matrix,
    format_rational,
    linear_pencil,
    poly_matmul,
)

# Relative float margin beyond which a bound comparison needs no exact check.
_SCREEN_MARGIN = 1e-9
# Lower end of sampled diagonal entries under a one-sided constraint.
ONE_SIDED_DIAGONAL_FLOOR = Fraction(-1)

_COMPARISON = "det(I - E) >= det(I - F) for |E| <= F with rho(F) <= 1"
_COMPARISON_FAILS = "the comparison fails once rho(F) > 1"
_SKEW_HADAMARD = "(1 - eps) I + eps H attains the upper bound iff H is skew-Hadamard"


class Status(enum.Enum):
    """Outcome of a verification."""

    PASS = "pass"
    FAIL = "fail"
    INAPPLICABLE = "inapplicable"

    @property
    def exit_code(self) -> int:
        """Process exit status for this outcome."""
        return {Status.PASS: 0, Status.FAIL: 1, Status.INAPPLICABLE: 2}[self]


@dataclass(frozen=True)
class Failure:
    """One violated check."""

    digest: str
    observed: str
    bound: str
    note: str = ""

    def to_json(self) -> dict[str, str]:
        """Failure in the report format."""
        data = {"digest": self.digest, "observed": self.observed, "bound": self.bound}
        if self.note:
            data["note"] = self.note
        return data


@dataclass(frozen=True)
class VerificationReport:
    """Result of checking one claim.

    Attributes
    ----------
    claim : str
        Short name of the claim.
    reference : str
        The statement being checked.
    trials : int
        Number of checked instances.
    failures : tuple[Failure, ...]
        Every violation found.
    status : Status
        Pass, fail or inapplicable.
    seed : Optional[int]
        Seed of randomised checks.
    details : dict[str, object]
        Claim specific values such as the bound being tested.
    """

    claim: str
    reference: str
    trials: int
    failures: tuple[Failure, ...] = ()
    status: Status = Status.PASS
    seed: Optional[int] = None
    details: dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Tie the status to the failures.

        Raises
        ------
        ValueError
            If a passing report has failures or no trials.
        """
        if self.status is Status.PASS and (self.failures or self.trials <= 0):
            msg = "a passing report needs trials and no failures"
            raise ValueError(msg)

    @classmethod
    def from_failures(
        cls,
        claim: str,
        reference: str,
        trials: int,
        failures: Sequence[Failure],
        *,
        seed: Optional[int] = None,
        details: Optional[dict[str, object]] = None,
    ) -> "VerificationReport":
        """Report whose status follows from the failures."""
        status = Status.PASS if not failures and trials > 0 else Status.FAIL
        return cls(
            claim, reference, trials, tuple(failures), status, seed, details or {}
        )

    @property
    def passed(self) -> bool:
        """Whether the claim was confirmed."""
        return self.status is Status.PASS

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """Combine two reports on the same claim by concatenating failures."""
        failures = self.failures + other.failures
        trials = self.trials + other.trials
        if Status.INAPPLICABLE in (self.status, other.status):
            status = Status.INAPPLICABLE
        else:
            status = Status.PASS if not failures and trials > 0 else Status.FAIL
        return VerificationReport(
            self.claim,
            self.reference,
            trials,
            failures,
            status,
            self.seed,
            {**self.details, **other.details},
        )

    def to_json(self) -> dict[str, object]:
        """Report form."""
        return {
            "claim": self.claim,
            "reference": self.reference,
            "status": self.status.value,
            "trials": self.trials,
            "seed": self.seed,
            "failures": [f.to_json() for f in self.failures],
            "details": self.details,
        }


class LowerLegViolated(HypothesisViolated):
    """The lower-bound hypothesis fails; the upper leg ran anyway."""

    def __init__(self, hypothesis: str, report: VerificationReport) -> None:
        """Keep the report of the upper leg.

        Parameters
        ----------
        hypothesis : str
            The violated inequality.
        report : VerificationReport
            Result of the upper-bound checks.
        """
        super().__init__(hypothesis)
        self.report = report


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator of one trial."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def sample_uniform(
    rng: np.random.Generator,
    lo: Sequence[Fraction],
    hi: Sequence[Fraction],
    bits: int = SAMPLE_DENOMINATOR_BITS,
) -> list[Fraction]:
    """Draw ``lo + (hi - lo) * k / 2**bits`` with k uniform on ``0..2**bits``."""
    steps = rng.integers(0, (1 << bits) + 1, size=len(lo)).tolist()
    return [a + (b - a) * Fraction(k, 1 << bits) for a, b, k in zip(lo, hi, steps)]


def sample_perturbation(
    rng: np.random.Generator,
    n: int,
    eps: Fraction,
    delta: Fraction,
    *,
    zero_diag: bool,
    bits: int = SAMPLE_DENOMINATOR_BITS,
) -> DenseMatrix:
    """E with ``|e_ij| <= eps`` off the diagonal and ``e_ii`` in ``[-1, delta]`` or 0.

    Parameters
    ----------
    rng : np.random.Generator
        Source of randomness.
    n : int
        Order.
    eps : Fraction
        Off-diagonal bound.
    delta : Fraction
        One-sided diagonal bound.
    zero_diag : bool
        Force a zero diagonal.
    bits : int
        Grid resolution. (Default value = 16)

    Returns
    -------
    DenseMatrix
        The perturbation.
    """
    lo: list[Fraction] = []
    hi: list[Fraction] = []
    for i in range(n):
        for j in range(n):
            if i != j:
                lo.append(-eps)
                hi.append(eps)
            elif zero_diag:
                lo.append(Fraction(0))
                hi.append(Fraction(0))
            else:
                lo.append(ONE_SIDED_DIAGONAL_FLOOR)
                hi.append(delta)
    flat = sample_uniform(rng, lo, hi, bits)
    return DenseMatrix.from_rows([flat[i * n : (i + 1) * n] for i in range(n)])


def sample_bounded(
    rng: np.random.Generator, envelope: DenseMatrix, bits: int = SAMPLE_DENOMINATOR_BITS
) -> DenseMatrix:
    """E with ``|e_ij| <= f_ij`` for a nonnegative envelope F."""
    n = envelope.order
    values = [x for row in envelope.rows for x in row]
    flat = sample_uniform(rng, [-x for x in values], values, bits)
    return DenseMatrix.from_rows([flat[i * n : (i + 1) * n] for i in range(n)])


def digest(matrix: DenseMatrix) -> str:
    """Short stable fingerprint of a matrix."""
    return hashlib.sha256(format_matrix(matrix).encode()).hexdigest()[:16]


def _violates(entry: BoundEntry, det: Fraction) -> bool:
    """Whether ``det`` lies on the wrong side of the bound."""
    expr = entry.expression
    if expr is None:
        return False
    bound = float(expr)
    value = float(det)
    margin = _SCREEN_MARGIN * max(1.0, abs(value), abs(bound))
    if entry.kind == LOWER and bound < value - margin:
        return False
    if entry.kind == UPPER and bound > value + margin:
        return False
    sign = expr.compare(det)
    return sign > 0 if entry.kind == LOWER else sign < 0


def check_bounds(
    matrix_e: DenseMatrix, entries: Sequence[BoundEntry]
) -> list[Failure]:
    """Check ``det(I - E)`` against every given bound.

    Parameters
    ----------
    matrix_e : DenseMatrix
        The perturbation E.
    entries : Sequence[BoundEntry]
        Valid bounds whose hypotheses E satisfies.

    Returns
    -------
    list[Failure]
        One failure per violated bound.
    """
    det = det_rational(DenseMatrix.identity(matrix_e.order) - matrix_e)
    return [
        Failure(
            digest(matrix_e), format_rational(det), str(entry.expression), entry.name
        )
        for entry in entries
        if _violates(entry, det)
    ]


def sandwich_test(
    n: int,
    eps: Fraction,
    delta: Fraction = Fraction(0),
    *,
    zero_diag: bool = False,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    bits: int = SAMPLE_DENOMINATOR_BITS,
) -> VerificationReport:
    """Check lower and upper bounds on random perturbations.

    With a zero diagonal every valid entry of the bound table applies. With
    the one-sided diagonal ``-1 <= e_ii <= delta`` the lower leg uses the
    one-sided bound ``lemma1`` and the upper leg uses ``upper1`` at
    ``eps' = max(eps, max_i |e_ii|)``, the entry bound the sample realises.

    Parameters
    ----------
    n : int
        Order.
    eps : Fraction
        Off-diagonal bound.
    delta : Fraction
        One-sided diagonal bound. (Default value = 0)
    zero_diag : bool
        Sample with a zero diagonal. (Default value = False)
    trials : int
        Number of samples. (Default value = 10_000)
    seed : int
        Seed. (Default value = 0)
    bits : int
        Grid resolution. (Default value = 16)

    Returns
    -------
    VerificationReport
        Pass if no sample left the sandwich.

    Raises
    ------
    LowerLegViolated
        If ``delta + (n-1) eps > 1``; carries the upper-leg report.
    ValueError
        If ``trials < 1``.
    """
    if trials < 1:
        msg = "trials must be at least 1"
        raise ValueError(msg)
    eps, delta = Fraction(eps), Fraction(delta)
    table = bound_table(n, eps, delta)
    lower_ok = table["lemma1"].valid
    lower = [e for e in table.valid_entries(LOWER) if zero_diag or e.name == "lemma1"]
    if not lower_ok:
        lower = []
    upper = list(table.valid_entries(UPPER)) if zero_diag else []
    failures: list[Failure] = []
    for trial in range(trials):
        matrix_e = sample_perturbation(
            trial_rng(seed, trial), n, eps, delta, zero_diag=zero_diag, bits=bits
        )
        entries = list(lower) + upper
        if not zero_diag:
            realised = max([eps, *(abs(x) for x in matrix_e.diagonal_entries())])
            entries.append(upper_bound_table(n, realised)["upper1"])
        failures.extend(check_bounds(matrix_e, entries))
    report = VerificationReport.from_failures(
        "sandwich",
        "det(I - E) lies between the lower and upper bounds",
        trials,
        failures,
        seed=seed,
        details={
            "n": n,
            "eps": format_rational(eps),
            "delta": format_rational(delta),
            "zero_diag": zero_diag,
            "lower": [e.name for e in lower],
            "upper": [e.name for e in upper] or ["upper1(eps')"],
        },
    )
    if not lower_ok:
        raise LowerLegViolated("delta + (n-1)*eps <= 1", report)
    return report


def theorem1_test(
    envelope: DenseMatrix,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    *,
    bits: int = SAMPLE_DENOMINATOR_BITS,
    minor_limit: int = DEFAULT_MINOR_LIMIT,
) -> VerificationReport:
    """Check ``det(I - E) >= det(I - F)`` for random ``|e_ij| <= f_ij``.

    Parameters
    ----------
    envelope : DenseMatrix
        Nonnegative F.
    trials : int
        Number of samples. (Default value = 10_000)
    seed : int
        Seed. (Default value = 0)
    bits : int
        Grid resolution. (Default value = 16)
    minor_limit : int
        Largest order certified through principal minors. (Default value = 12)

    Returns
    -------
    VerificationReport
        Inapplicable unless ``rho(F) <= 1`` is certified.
    """
    certificate = certify_rho_le_one(envelope, minor_limit=minor_limit)
    bound = det_rational(DenseMatrix.identity(envelope.order) - envelope)
    details: dict[str, object] = {
        "n": envelope.order,
        "bound": format_rational(bound),
        "certificate": certificate.method,
    }
    if not certificate.certified:
        details["certificate_status"] = certificate.status.name.lower()
        if certificate.violating_minor is not None:
            details["violating_minor"] = list(certificate.violating_minor)
        return VerificationReport(
            "theorem1", _COMPARISON, 0, (), Status.INAPPLICABLE, seed, details
        )
    failures: list[Failure] = []
    identity = DenseMatrix.identity(envelope.order)
    for trial in range(trials):
        matrix_e = sample_bounded(trial_rng(seed, trial), envelope, bits)
        det = det_rational(identity - matrix_e)
        if det < bound:
            failures.append(
                Failure(digest(matrix_e), format_rational(det), format_rational(bound))
            )
    return VerificationReport.from_failures(
        "theorem1", _COMPARISON, trials, failures, seed=seed, details=details
    )


def remark1_counterexample(n: int, phi: Fraction = Fraction(2)) -> VerificationReport:
    """Show that the comparison fails once ``rho(F) > 1``.

    Even n uses ``E = I, F = phi I``; odd ``n > 1`` uses
    ``E = diag(1, 0, ..., 0)`` and ``F = diag(phi, phi, 0, ..., 0)``. In both
    cases ``|e_ij| <= f_ij`` while ``det(I - E) = 0 < det(I - F)``.

    Parameters
    ----------
    n : int
        Order.
    phi : Fraction
        Diagonal of F. (Default value = 2)

    Returns
    -------
    VerificationReport
        Pass means the violation was reproduced; inapplicable for
        ``phi <= 1`` or ``n = 1``.
    """
    phi = Fraction(phi)
    details: dict[str, object] = {"n": n, "phi": format_rational(phi)}
    if n < 2 or phi <= 1:  # noqa: PLR2004
        details["note"] = (
            "no counterexample: rho(F) <= 1"
            if phi <= 1
            else "no counterexample for n = 1"
        )
        return VerificationReport(
            "remark1", _COMPARISON_FAILS, 0, (), Status.INAPPLICABLE, None, details
        )
    if n % 2 == 0:
        matrix_e = DenseMatrix.identity(n)
        matrix_f = DenseMatrix.identity(n).scale(phi)
    else:
        matrix_e = DenseMatrix.diagonal([1] + [0] * (n - 1))
        matrix_f = DenseMatrix.diagonal([phi, phi] + [0] * (n - 2))
    identity = DenseMatrix.identity(n)
    det_e = det_rational(identity - matrix_e)
    det_f = det_rational(identity - matrix_f)
    certificate = certify_rho_le_one(matrix_f)
    details.update(
        {
            "det_I_minus_E": format_rational(det_e),
            "det_I_minus_F": format_rational(det_f),
            "rho_le_one": certificate.status is CertificateStatus.CERTIFIED_TRUE,
        }
    )
    failures: list[Failure] = []
    if not det_e < det_f:
        failures.append(
            Failure(
                digest(matrix_e),
                format_rational(det_e),
                format_rational(det_f),
                "violation not reproduced",
            )
        )
    return VerificationReport.from_failures(
        "remark1", _COMPARISON_FAILS, 1, failures, details=details
    )


def sharpness_check(
    n: int, eps: Fraction, delta: Fraction = Fraction(0)
) -> VerificationReport:
    """Check that ``I - toeplitz_F(n, delta, eps)`` attains the one-sided lower bound.

    Raises
    ------
    HypothesisViolated
        If ``delta + (n-1) eps > 1``.
    """
    eps, delta = Fraction(eps), Fraction(delta)
    if delta + (n - 1) * eps > 1:
        msg = "delta + (n-1)*eps <= 1"
        raise HypothesisViolated(msg)
    matrix_f = toeplitz_F(n, delta, eps)
    det = det_rational(DenseMatrix.identity(n) - matrix_f)
    expected = (1 - delta - (n - 1) * eps) * (1 - delta + eps) ** (n - 1)
    failures: list[Failure] = []
    if det != expected:
        failures.append(
            Failure(digest(matrix_f), format_rational(det), format_rational(expected))
        )
    return VerificationReport.from_failures(
        "sharpness",
        "the Toeplitz matrix attains the one-sided lower bound",
        1,
        failures,
        details={
            "n": n,
            "det": format_rational(det),
            "bound": format_rational(expected),
        },
    )


def orthogonal_det(n: int) -> EpsPolynomial:
    """``(1 + (n-1) eps^2)**(n/2)`` as a polynomial.

    Raises
    ------
    NotPolynomial
        If ``n`` is odd and greater than 1.
    """
    if n == 1:
        return EpsPolynomial.constant(1)
    if n % 2:
        msg = f"(1 + (n-1) eps^2)^(n/2) is not a polynomial for odd n = {n}"
        raise NotPolynomial(msg)
    return EpsPolynomial.of([1, 0, n - 1]) ** (n // 2)


def _step(
    failures: list[Failure],
    name: str,
    matrix: DenseMatrix,
    observed: object,
    expected: object,
) -> None:
    if observed != expected:
        failures.append(Failure(digest(matrix), str(observed), str(expected), name))


def _converse(h: SkewHadamard) -> VerificationReport:
    n = h.order
    expected = orthogonal_det(n)
    matrix = h.to_dense()
    failures: list[Failure] = []
    _step(failures, "determinant identity", matrix, det_poly(h.pattern()), expected)
    pencil = linear_pencil(DenseMatrix.identity(n), matrix - DenseMatrix.identity(n))
    transposed = [list(col) for col in zip(*pencil)]
    gram = poly_matmul(transposed, pencil)
    diagonal = EpsPolynomial.of([1, 0, n - 1])
    zero = EpsPolynomial.constant(0)
    orthogonal = all(
        gram[i][j] == (diagonal if i == j else zero) for i in range(n) for j in range(n)
    )
    _step(failures, "A^T A = (1 + (n-1) eps^2) I", matrix, orthogonal, expected=True)
    return VerificationReport.from_failures(
        "theorem4",
        _SKEW_HADAMARD + " (converse)",
        2,
        failures,
        details={"n": n, "rule": h.rule, "det": str(expected)},
    )


def _forward(matrix: DenseMatrix) -> VerificationReport:
    n = matrix.order
    for i, j, value in matrix.entries():
        if abs(value) > 1:
            msg = "|h_ij| <= 1"
            raise HypothesisViolated(msg, (i, j))
    expected = orthogonal_det(n)
    identity = DenseMatrix.identity(n)
    poly = det_symbolic(linear_pencil(identity, matrix - identity))
    failures: list[Failure] = []
    _step(failures, "determinant identity", matrix, poly, expected)
    _step(failures, "det(H) = n^(n/2)", matrix, det_rational(matrix), expected(1))
    linear = poly.coefficient(1)
    _step(failures, "eps^1 coefficient", matrix, linear, expected.coefficient(1))
    unit = (Fraction(1),) * n
    _step(failures, "diag(H) = I", matrix, matrix.diagonal_entries(), unit)
    k = sum(matrix[i, j] * matrix[j, i] for i in range(n) for j in range(i + 1, n))
    _step(failures, "eps^2 coefficient", matrix, k, Fraction(-n * (n - 1), 2))
    skew = verify_skew_hadamard(matrix)
    _step(failures, "skew-Hadamard", matrix, skew, expected=True)
    return VerificationReport.from_failures(
        "theorem4",
        _SKEW_HADAMARD + " (forward)",
        6,
        failures,
        details={"n": n, "det": str(poly), "k": format_rational(Fraction(k))},
    )


def theorem4_check(
    matrix: Union[DenseMatrix, SkewHadamard], direction: str = "converse"
) -> VerificationReport:
    """Check either direction of the skew-Hadamard sharpness theorem.

    The converse takes a skew-Hadamard H and confirms
    ``det((1 - eps) I + eps H) = (1 + (n-1) eps^2)**(n/2)`` and
    ``A^T A = (1 + (n-1) eps^2) I`` as polynomial identities. The forward
    direction takes any H with ``|h_ij| <= 1`` and replays the extraction
    steps: the identity itself, ``det(H) = n**(n/2)`` at eps = 1, the eps
    coefficient forcing ``diag(H) = I`` and the eps^2 coefficient forcing
    ``h_ij h_ji = -1``, then the final skew-Hadamard test. Every failing
    step is recorded.

    Parameters
    ----------
    matrix : Union[DenseMatrix, SkewHadamard]
        The matrix H.
    direction : str
        ``"forward"`` or ``"converse"``. (Default value = "converse")

    Returns
    -------
    VerificationReport
        Pass if every step holds.

    Raises
    ------
    NotPolynomial
        If ``n`` is odd and greater than 1.
    HypothesisViolated
        If a converse input is not skew-Hadamard or a forward input has an
        entry above 1 in absolute value.
    ValueError
        For an unknown direction.
    """
    if direction not in ("forward", "converse"):
        msg = f"direction must be 'forward' or 'converse', got {direction!r}"
        raise ValueError(msg)
    dense = matrix.to_dense() if isinstance(matrix, SkewHadamard) else matrix
    orthogonal_det(dense.order)
    if direction == "forward":
        return _forward(dense)
    if isinstance(matrix, SkewHadamard):
        return _converse(matrix)
    if any(x.denominator != 1 for _, _, x in dense.entries()):
        msg = "H + H^T = 2I and H H^T = nI"
        raise HypothesisViolated(msg)
    rows = tuple(tuple(int(x) for x in row) for row in dense.rows)
    return _converse(SkewHadamard(rows))


def lemma2_dominance_grid(
    n_max: int, points: int, seed: int = DEFAULT_SEED
) -> VerificationReport:
    """Check ``upper1 < 1/(1 - n eps)`` on random eps in ``(0, 1/n)`` for n up to n_max.

    Parameters
    ----------
    n_max : int
        Largest order.
    points : int
        Samples per order.
    seed : int
        Seed. (Default value = 0)

    Returns
    -------
    VerificationReport
        Pass if the strict inequality held everywhere.
    """
    failures: list[Failure] = []
    trials = 0
    top = 1 << SAMPLE_DENOMINATOR_BITS
    for n in range(1, n_max + 1):
        steps = trial_rng(seed, n).integers(1, top, size=points).tolist()
        for step in steps:
            eps = Fraction(step, n * top)
            gap = lemma2_gap(n, eps)
            trials += 1
            if not gap.holds:
                failures.append(
                    Failure(
                        f"n={n},eps={format_rational(eps)}",
                        repr(gap.lhs),
                        format_rational(gap.rhs),
                    )
                )
    return VerificationReport.from_failures(
        "lemma2",
        "upper1 < 1/(1 - n eps) on (0, 1/n)",
        trials,
        failures,
        seed=seed,
        details={"n_max": n_max, "points": points},
    )
