"""Univariate polynomials in the perturbation parameter eps."""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from typing_extensions import override

from .common import FormatError, ZeroPolynomial, format_rational, parse_rational

Scalar = Union[int, Fraction]


def _superscript(power: int) -> str:
    return "" if power == 1 else f"^{power}"


@dataclass(frozen=True)
class EpsPolynomial:
    """Polynomial with exact rational coefficients, lowest degree first.

    The coefficient tuple is kept canonical: no trailing zeros, so the zero
    polynomial has an empty tuple and degree -1.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        """Normalise coefficients to Fractions and drop trailing zeros."""
        values = [Fraction(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def of(cls, coeffs: Iterable[Scalar]) -> "EpsPolynomial":
        """Build a polynomial from coefficients, lowest degree first.

        Parameters
        ----------
        coeffs : Iterable[Scalar]
            Coefficients indexed by degree.

        Returns
        -------
        EpsPolynomial
            The polynomial.
        """
        return cls(tuple(Fraction(c) for c in coeffs))

    @classmethod
    def constant(cls, value: Scalar) -> "EpsPolynomial":
        """Constant polynomial."""
        return cls((Fraction(value),))

    @classmethod
    def monomial(cls, degree: int, coefficient: Scalar = 1) -> "EpsPolynomial":
        """Return ``coefficient * eps**degree``.

        Parameters
        ----------
        degree : int
            Exponent of eps.
        coefficient : Scalar
            Coefficient of the single term. (Default value = 1)

        Returns
        -------
        EpsPolynomial
            The monomial.
        """
        return cls((Fraction(0),) * degree + (Fraction(coefficient),))

    @classmethod
    def linear(cls, constant: Scalar, slope: Scalar) -> "EpsPolynomial":
        """Return ``constant + slope * eps``."""
        return cls((Fraction(constant), Fraction(slope)))

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        """Leading coefficient, 0 for the zero polynomial."""
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        """Whether this is the zero polynomial."""
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        """Coefficient of eps**k (zero beyond the degree)."""
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x: Scalar) -> Fraction:
        """Evaluate exactly with Horner's rule.

        Parameters
        ----------
        x : Scalar
            Point of evaluation.

        Returns
        -------
        Fraction
            Exact value.
        """
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Scalar) -> int:
        """Exact sign of the value at ``x``."""
        value = self(x)
        return (value > 0) - (value < 0)

    def _coerce(self, other: object) -> "EpsPolynomial":
        if isinstance(other, EpsPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return EpsPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other: object) -> "EpsPolynomial":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        size = max(len(self.coeffs), len(rhs.coeffs))
        return EpsPolynomial(
            tuple(self.coefficient(k) + rhs.coefficient(k) for k in range(size))
        )

    __radd__ = __add__

    def __neg__(self) -> "EpsPolynomial":
        return EpsPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: object) -> "EpsPolynomial":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> "EpsPolynomial":
        lhs = self._coerce(other)
        if lhs is NotImplemented:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> "EpsPolynomial":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        if self.is_zero() or rhs.is_zero():
            return EpsPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(rhs.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(rhs.coeffs):
                out[i + j] += a * b
        return EpsPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "EpsPolynomial":
        if exponent < 0:
            msg = "negative powers are not polynomials"
            raise ValueError(msg)
        result = EpsPolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, factor: Scalar) -> "EpsPolynomial":
        """Multiply every coefficient by ``factor``."""
        return EpsPolynomial(tuple(c * factor for c in self.coeffs))

    def derivative(self) -> "EpsPolynomial":
        """Formal derivative."""
        return EpsPolynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def divmod(
        self, divisor: "EpsPolynomial"
    ) -> tuple["EpsPolynomial", "EpsPolynomial"]:
        """Euclidean division over the rationals.

        Parameters
        ----------
        divisor : EpsPolynomial
            Non-zero divisor.

        Returns
        -------
        quotient : EpsPolynomial
            Quotient.
        remainder : EpsPolynomial
            Remainder of degree below the divisor's.

        Raises
        ------
        ZeroDivisionError
            If the divisor is the zero polynomial.
        """
        if divisor.is_zero():
            msg = "polynomial division by zero"
            raise ZeroDivisionError(msg)
        rem = list(self.coeffs)
        shift = len(rem) - len(divisor.coeffs)
        if shift < 0:
            return EpsPolynomial(), self
        quot = [Fraction(0)] * (shift + 1)
        lead = divisor.leading
        for k in range(shift, -1, -1):
            factor = rem[k + divisor.degree] / lead
            quot[k] = factor
            if factor:
                for j, c in enumerate(divisor.coeffs):
                    rem[k + j] -= factor * c
        return EpsPolynomial(tuple(quot)), EpsPolynomial(tuple(rem[: divisor.degree]))

    def exact_div(self, divisor: "EpsPolynomial") -> "EpsPolynomial":
        """Division that must leave no remainder.

        Parameters
        ----------
        divisor : EpsPolynomial
            Divisor.

        Returns
        -------
        EpsPolynomial
            The exact quotient.

        Raises
        ------
        ArithmeticError
            If the division leaves a remainder.
        """
        quot, rem = self.divmod(divisor)
        if not rem.is_zero():
            msg = f"{divisor} does not divide {self}"
            raise ArithmeticError(msg)
        return quot

    def monic(self) -> "EpsPolynomial":
        """Scale to leading coefficient 1.

        Returns
        -------
        EpsPolynomial
            Monic associate.

        Raises
        ------
        ZeroPolynomial
            For the zero polynomial.
        """
        if self.is_zero():
            msg = "the zero polynomial has no monic associate"
            raise ZeroPolynomial(msg)
        return self.scale(1 / self.leading)

    def gcd(self, other: "EpsPolynomial") -> "EpsPolynomial":
        """Monic greatest common divisor (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a if a.is_zero() else a.monic()

    def squarefree_part(self) -> "EpsPolynomial":
        """Product of the distinct irreducible factors, made monic.

        Returns
        -------
        EpsPolynomial
            ``p / gcd(p, p')``.

        Raises
        ------
        ZeroPolynomial
            For the zero polynomial.
        """
        if self.is_zero():
            msg = "the zero polynomial has no square-free part"
            raise ZeroPolynomial(msg)
        if self.degree < 1:
            return EpsPolynomial.constant(1)
        return self.exact_div(self.gcd(self.derivative())).monic()

    def primitive(self) -> "EpsPolynomial":
        """Integer associate with content 1 and positive leading coefficient.

        Returns
        -------
        EpsPolynomial
            The primitive part.
        """
        if self.is_zero():
            return self
        denominators = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * denominators) for c in self.coeffs]
        content = math.gcd(*ints)
        if ints[-1] < 0:
            content = -content
        return EpsPolynomial(tuple(Fraction(c // content) for c in ints))

    def taylor_shift(self, x: Scalar) -> "EpsPolynomial":
        """Coefficients of ``p(x + t)`` as a polynomial in t."""
        coeffs = list(self.coeffs)
        n = len(coeffs)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                coeffs[j] += x * coeffs[j + 1]
        return EpsPolynomial(tuple(coeffs))

    def sign_after(self, x: Scalar) -> int:
        """Sign of ``p`` on a small right neighbourhood of the rational ``x``."""
        for c in self.taylor_shift(x).coeffs:
            if c:
                return 1 if c > 0 else -1
        return 0

    def compare_right_of(self, other: "EpsPolynomial", x: Scalar) -> int:
        """Order of two polynomials just to the right of ``x``.

        Parameters
        ----------
        other : EpsPolynomial
            Polynomial to compare with.
        x : Scalar
            Rational point.

        Returns
        -------
        int
            1 if self is larger on ``(x, x + h)`` for small h, -1 if smaller,
            0 if identical.
        """
        return (self - other).sign_after(x)

    def is_integral(self) -> bool:
        """Whether all coefficients are integers."""
        return all(c.denominator == 1 for c in self.coeffs)

    def to_json(self) -> list[Union[int, str]]:
        """Coefficient list low-to-high; integers stay ints, others become "p/q"."""
        return [
            c.numerator if c.denominator == 1 else format_rational(c)
            for c in self.coeffs
        ] or [0]

    @override
    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms: list[str] = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            text = format_rational(mag)
            if k == 0:
                body = text
            elif mag == 1:
                body = f"eps{_superscript(k)}"
            else:
                body = f"{text}*eps{_superscript(k)}"
            terms.append(f"{sign} {body}")
        first = terms[0]
        head = first[2:] if first.startswith("+") else "-" + first[2:]
        return " ".join([head, *terms[1:]])


def parse_polynomial(text: str) -> EpsPolynomial:
    """Parse a coefficient array such as ``"[1, 0, 10, 0, 21]"``.

    Parameters
    ----------
    text : str
        Bracketed, comma separated coefficients, lowest degree first.
        Entries may be quoted "p/q" strings.

    Returns
    -------
    EpsPolynomial
        Parsed polynomial.

    Raises
    ------
    FormatError
        If the text is not a bracketed list of rationals.
    """
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        msg = f"polynomial must be a bracketed coefficient list: {text!r}"
        raise FormatError(msg)
    inner = body[1:-1].strip()
    if not inner:
        return EpsPolynomial()
    parts: Sequence[str] = [p.strip().strip("\"'") for p in inner.split(",")]
    return EpsPolynomial.of(parse_rational(p) for p in parts)
