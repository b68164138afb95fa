"""Common types, errors and rational helpers for the exact core."""

import enum
import re
from fractions import Fraction
from typing import Optional, Union

from typing_extensions import TypeAlias

Rational: TypeAlias = Fraction
RationalLike: TypeAlias = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")
_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?\s*$")


class DetboundError(RuntimeError):
    """Base class for all detbound related errors."""


class FormatError(DetboundError, ValueError):
    """Text input could not be parsed."""


class NonConvergent(DetboundError):
    """A series or iteration could not reach the requested accuracy."""


class NotNonnegative(DetboundError):
    """A matrix that has to be entrywise nonnegative has a negative entry."""

    def __init__(self, row: int, col: int, value: Fraction) -> None:
        """Store the offending entry.

        Parameters
        ----------
        row : int
            Row of the negative entry.
        col : int
            Column of the negative entry.
        value : Fraction
            The negative value.
        """
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"entry ({row}, {col}) = {format_rational(value)} is negative")


class OrderTooLarge(DetboundError):
    """The requested order exceeds a configured limit."""

    def __init__(self, order: int, limit: int, what: str) -> None:
        """Store order and limit.

        Parameters
        ----------
        order : int
            Requested order.
        limit : int
            Largest supported order.
        what : str
            Operation that imposes the limit.
        """
        self.order = order
        self.limit = limit
        super().__init__(f"{what} supports n <= {limit}, got n = {order}")


class ZeroPolynomial(DetboundError):
    """The polynomial is identically zero."""


class NotDiagonallyDominant(DetboundError):
    """Some row has non-positive dominance margin h_i."""

    def __init__(self, row: int, margin: Fraction) -> None:
        """Store the offending row.

        Parameters
        ----------
        row : int
            Row with h_i <= 0.
        margin : Fraction
            The value of h_i.
        """
        self.row = row
        self.margin = margin
        super().__init__(f"row {row} has h_i = {format_rational(margin)} <= 0")


class HypothesisViolated(DetboundError):
    """The inputs do not satisfy the hypothesis of a claim."""

    def __init__(
        self, hypothesis: str, where: Optional[tuple[int, int]] = None
    ) -> None:
        """Store the violated hypothesis.

        Parameters
        ----------
        hypothesis : str
            Human readable form of the violated inequality.
        where : Optional[tuple[int, int]]
            Offending matrix position, if any. (Default value = None)
        """
        self.hypothesis = hypothesis
        self.where = where
        msg = f"hypothesis violated: {hypothesis}"
        if where is not None:
            msg += f" at {where}"
        super().__init__(msg)


class Unconstructible(DetboundError):
    """No available construction rule produces the requested object."""

    def __init__(self, order: int, tried: list[str]) -> None:
        """Store the rules that were tried.

        Parameters
        ----------
        order : int
            Requested order.
        tried : list[str]
            Names of construction rules that failed.
        """
        self.order = order
        self.tried = tried
        super().__init__(
            f"no skew-Hadamard construction for n = {order} (tried: {', '.join(tried)})"
        )


class InvalidOrder(DetboundError):
    """The requested order is impossible for the object."""


class NotPolynomial(DetboundError):
    """A closed form is not a polynomial for the given order."""


class SearchTimeout(DetboundError):
    """The search ran out of time. Partial results are not usable."""

    def __init__(self, seconds: float, done: int, total: int) -> None:
        """Store progress at the time of the timeout.

        Parameters
        ----------
        seconds : float
            Time budget that was exceeded.
        done : int
            Number of finished partitions.
        total : int
            Number of partitions.
        """
        self.seconds = seconds
        self.done = done
        self.total = total
        self.usable = False
        super().__init__(
            f"search exceeded {seconds:g}s after {done}/{total} partitions;"
            " partial results are unusable"
        )


class CertificateStatus(enum.Enum):
    """Outcome of an exact certificate."""

    CERTIFIED_TRUE = 1
    CERTIFIED_FALSE = 2
    UNCERTIFIED = 3


def as_rational(value: RationalLike) -> Fraction:
    """Convert ints, Fractions and strings to a Fraction.

    Parameters
    ----------
    value : RationalLike
        Value to convert.

    Returns
    -------
    Fraction
        The exact value.
    """
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer or finite decimal strings exactly.

    Parameters
    ----------
    text : str
        Text to parse.

    Returns
    -------
    Fraction
        Parsed value in lowest terms.

    Raises
    ------
    FormatError
        If the text is not a rational literal or has a zero denominator.
    """
    if _RATIONAL_RE.match(text):
        num, _, den = text.replace(" ", "").partition("/")
        if den and int(den) == 0:
            msg = f"zero denominator in {text!r}"
            raise FormatError(msg)
        return Fraction(int(num), int(den) if den else 1)
    if _DECIMAL_RE.match(text):
        return Fraction(text.strip())
    msg = f"not a rational number: {text!r}"
    raise FormatError(msg)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "p" for integers.

    Parameters
    ----------
    value : Fraction
        Value to render.

    Returns
    -------
    str
        Canonical text form.
    """
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
