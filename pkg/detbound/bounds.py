"""Catalogue of closed-form determinant bounds for perturbed identities."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import mpmath
from typing_extensions import override

from .constructors import skew_tri_diagonal, skew_tri_pattern
from .exact import (
    DenseMatrix,
    EpsPolynomial,
    HypothesisViolated,
    NotDiagonallyDominant,
    det_poly,
    format_rational,
)

# Digits used when an exponential factor has to be compared numerically.
COMPARE_DPS = 60
# Orders up to which attainable closed forms are re-derived from the matrices.
ATTAINABLE_CERTIFY_MAX = 12

LOWER = "lower"
UPPER = "upper"


def _integer_root(m: int, k: int) -> int:
    """Floor of the ``k``-th root of a non-negative integer."""
    if m < 2:  # noqa: PLR2004
        return m
    x = 1 << -(-m.bit_length() // k)
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _mpf(value: Fraction) -> mpmath.mpf:
    """Rational at the working precision."""
    return mpmath.mpf(value.numerator) / value.denominator


def _exact_root(value: Fraction, root: int) -> Optional[Fraction]:
    """The exact ``root``-th root of a non-negative rational, if rational."""
    num = _integer_root(value.numerator, root)
    den = _integer_root(value.denominator, root)
    if num**root == value.numerator and den**root == value.denominator:
        return Fraction(num, den)
    return None


@dataclass(frozen=True)
class ExactExpression:
    """The real number ``coefficient * base**exponent * e**exp_arg``.

    All four parts are rational, so the value can be re-evaluated at any
    precision and compared exactly with rationals whenever ``exp_arg`` is 0.
    """

    coefficient: Fraction
    base: Fraction = Fraction(1)
    exponent: Fraction = Fraction(1)
    exp_arg: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        """Reject real powers of negative bases.

        Raises
        ------
        ValueError
            If the base is negative and the exponent not an integer, or the
            base is zero and the exponent negative.
        """
        if self.base < 0 and self.exponent.denominator != 1:
            msg = "fractional power of a negative base"
            raise ValueError(msg)
        if self.base == 0 and self.exponent < 0:
            msg = "negative power of zero"
            raise ValueError(msg)

    @classmethod
    def rational(cls, value: Fraction) -> "ExactExpression":
        """Wrap a rational."""
        return cls(Fraction(value))

    def rational_value(self) -> Optional[Fraction]:
        """Exact value if it is rational, else None."""
        if self.coefficient == 0:
            return Fraction(0)
        if self.exp_arg != 0:
            return None
        num, den = self.exponent.numerator, self.exponent.denominator
        if den == 1:
            return self.coefficient * self.base**num
        root = _exact_root(self.base, den)
        if root is None:
            return None
        return self.coefficient * root**num

    def evaluate(self, dps: int = COMPARE_DPS) -> mpmath.mpf:
        """Value at ``dps`` decimal digits."""
        with mpmath.workdps(dps):
            value = _mpf(self.coefficient)
            if self.exponent != 1 or self.base != 1:
                base = _mpf(self.base)
                value *= mpmath.power(base, _mpf(self.exponent))
            if self.exp_arg:
                value *= mpmath.exp(_mpf(self.exp_arg))
            return +value

    def __float__(self) -> float:
        value = self.rational_value()
        if value is not None:
            return float(value)
        return float(self.evaluate(30))

    def compare(self, other: Fraction) -> int:
        """Exact sign of ``self - other``.

        Parameters
        ----------
        other : Fraction
            Rational to compare with.

        Returns
        -------
        int
            -1, 0 or 1.
        """
        other = Fraction(other)
        exact = self.rational_value()
        if exact is not None:
            return (exact > other) - (exact < other)
        if self.exp_arg == 0:
            return self._compare_algebraic(other)
        # e**a is transcendental for rational a != 0, so equality is impossible
        # and more digits always separate the two numbers.
        dps = COMPARE_DPS
        while True:
            with mpmath.workdps(dps):
                diff = self.evaluate(dps) - _mpf(other)
                if abs(diff) > mpmath.mpf(10) ** (10 - dps):
                    return 1 if diff > 0 else -1
            dps *= 2

    def _compare_algebraic(self, other: Fraction) -> int:
        # coefficient != 0 and base > 0 here
        num, den = self.exponent.numerator, self.exponent.denominator
        sign = 1 if self.coefficient > 0 else -1
        if sign * other <= 0:
            return sign
        target = other / self.coefficient
        lhs = self.base**num
        rhs = target**den
        return sign * ((lhs > rhs) - (lhs < rhs))

    def to_json(self) -> Union[str, dict[str, str]]:
        """Rational text, or the four parts for irrational values."""
        exact = self.rational_value()
        if exact is not None:
            return format_rational(exact)
        return {
            "coefficient": format_rational(self.coefficient),
            "base": format_rational(self.base),
            "exponent": format_rational(self.exponent),
            "exp_arg": format_rational(self.exp_arg),
        }

    @override
    def __str__(self) -> str:
        exact = self.rational_value()
        if exact is not None:
            return format_rational(exact)
        parts: list[str] = []
        if self.coefficient != 1:
            parts.append(format_rational(self.coefficient))
        if self.exponent != 1 or self.base != 1:
            base, exponent = format_rational(self.base), format_rational(self.exponent)
            parts.append(f"({base})^({exponent})")
        if self.exp_arg:
            parts.append(f"e^({format_rational(self.exp_arg)})")
        return " * ".join(parts)


@dataclass(frozen=True)
class BoundEntry:
    """One named bound evaluated at a given (n, eps, delta).

    Attributes
    ----------
    name : str
        Catalogue key.
    kind : str
        ``"lower"`` or ``"upper"``.
    expression : Optional[ExactExpression]
        Exact value; None where the closed form is undefined.
    valid : bool
        Whether the hypothesis of the bound holds.
    hypothesis : str
        The hypothesis, as an inequality.
    note : str
        Extra metadata such as additional structural assumptions.
    """

    name: str
    kind: str
    expression: Optional[ExactExpression]
    valid: bool
    hypothesis: str
    note: str = ""

    @property
    def exact(self) -> Union[Fraction, ExactExpression, None]:
        """Rational value where possible, else the expression."""
        if self.expression is None:
            return None
        value = self.expression.rational_value()
        return self.expression if value is None else value

    @property
    def approx(self) -> Optional[float]:
        """Binary64 value, None if undefined."""
        return None if self.expression is None else float(self.expression)

    def to_json(self) -> dict[str, object]:
        """Entry in the report format."""
        data: dict[str, object] = {
            "exact": None if self.expression is None else self.expression.to_json(),
            "float": self.approx,
            "kind": self.kind,
            "valid": self.valid,
            "hypothesis": self.hypothesis,
        }
        if self.note:
            data["note"] = self.note
        return data


@dataclass(frozen=True)
class BoundTable:
    """Named bounds at one parameter point."""

    n: int
    eps: Fraction
    delta: Fraction = Fraction(0)
    entries: dict[str, BoundEntry] = field(default_factory=dict)

    def __getitem__(self, name: str) -> BoundEntry:
        return self.entries[name]

    def __contains__(self, name: object) -> bool:
        return name in self.entries

    def valid_entries(self, kind: Optional[str] = None) -> list[BoundEntry]:
        """Entries with a satisfied hypothesis, optionally of one kind."""
        return [
            e
            for e in self.entries.values()
            if e.valid and e.expression is not None and (kind is None or e.kind == kind)
        ]

    def merged(self, other: "BoundTable") -> "BoundTable":
        """Union of two tables at the same point."""
        entries = {**self.entries, **other.entries}
        return BoundTable(self.n, self.eps, self.delta, entries)

    def order_violations(self) -> list[tuple[str, str]]:
        """Pairs (lower, upper) of valid entries with lower > upper."""
        found: list[tuple[str, str]] = []
        for low in self.valid_entries(LOWER):
            for high in self.valid_entries(UPPER):
                if _greater(low.expression, high.expression):
                    found.append((low.name, high.name))
        return found

    def to_json(self) -> dict[str, object]:
        """Report form."""
        return {
            "n": self.n,
            "eps": format_rational(self.eps),
            "delta": format_rational(self.delta),
            "entries": {name: e.to_json() for name, e in self.entries.items()},
        }


def _greater(a: Optional[ExactExpression], b: Optional[ExactExpression]) -> bool:
    if a is None or b is None:
        return False
    b_exact = b.rational_value()
    if b_exact is not None:
        return a.compare(b_exact) > 0
    a_exact = a.rational_value()
    if a_exact is not None:
        return b.compare(a_exact) < 0
    with mpmath.workdps(COMPARE_DPS):
        return bool(a.evaluate() > b.evaluate())


def _entry(
    name: str,
    kind: str,
    expression: Optional[ExactExpression],
    *,
    valid: bool,
    hypothesis: str,
    note: str = "",
) -> BoundEntry:
    return BoundEntry(name, kind, expression, valid, hypothesis, note)


def lower_bound_table(
    n: int, eps: Fraction, delta: Fraction = Fraction(0)
) -> BoundTable:
    """Every lower bound of the catalogue at ``(n, eps, delta)``.

    Entries whose hypothesis fails stay in the table, flagged invalid with
    the hypothesis text. The delta parameter only enters ``lemma1``.

    Parameters
    ----------
    n : int
        Order, at least 1.
    eps : Fraction
        Off-diagonal bound, non-negative.
    delta : Fraction
        One-sided diagonal bound, non-negative. (Default value = 0)

    Returns
    -------
    BoundTable
        The lower entries.

    Raises
    ------
    ValueError
        If ``n < 1`` or a parameter is negative.
    """
    _check_parameters(n, eps, delta)
    m = n - 1
    spread = m * eps
    gersh = ExactExpression(Fraction(1), 1 - spread, Fraction(n))
    satz6 = ExactExpression(Fraction(1), 1 - spread * spread, Fraction(n // 2))
    koch = ExactExpression(Fraction(1), 1 - spread, Fraction(n), n * spread)
    cor3 = ExactExpression.rational((1 - spread) * (1 + eps) ** m)
    lemma1 = ExactExpression.rational((1 - delta - spread) * (1 - delta + eps) ** m)
    entries = [
        _entry(
            "gerschgorin_ostrowski",
            LOWER,
            gersh,
            valid=spread < 1,
            hypothesis="(n-1)*eps < 1",
        ),
        _entry(
            "ostrowski_satz6_lower",
            LOWER,
            satz6,
            valid=spread < 1,
            hypothesis="(n-1)*eps < 1",
        ),
        _entry("von_koch", LOWER, koch, valid=spread < 1, hypothesis="(n-1)*eps < 1"),
        _entry(
            "ostrowski55_lower",
            LOWER,
            ExactExpression.rational(1 - n * eps),
            valid=n * eps <= 1,
            hypothesis="n*eps <= 1",
            note="diagonal perturbations |e_ii| <= eps allowed",
        ),
        _entry(
            "lemma1",
            LOWER,
            lemma1,
            valid=delta + spread <= 1,
            hypothesis="delta + (n-1)*eps <= 1",
            note="one-sided diagonal e_ii <= delta",
        ),
        _entry("cor3", LOWER, cor3, valid=spread <= 1, hypothesis="(n-1)*eps <= 1"),
        _entry(
            "remark2_quadratic",
            LOWER,
            ExactExpression.rational(1 - spread * spread),
            valid=spread <= 1,
            hypothesis="(n-1)*eps <= 1",
        ),
    ]
    return BoundTable(n, eps, delta, {e.name: e for e in entries})


def upper_bound_table(n: int, eps: Fraction) -> BoundTable:
    """Every upper bound of the catalogue at ``(n, eps)``.

    Parameters
    ----------
    n : int
        Order, at least 1.
    eps : Fraction
        Entry bound, non-negative.

    Returns
    -------
    BoundTable
        The upper entries. ``ostrowski55_upper`` has no value at ``n*eps = 1``.
    """
    _check_parameters(n, eps, Fraction(0))
    spread = (n - 1) * eps
    half = Fraction(n, 2)
    o55: Optional[ExactExpression] = None
    if n * eps != 1:
        o55 = ExactExpression(Fraction(1), 1 - n * eps, Fraction(-1))
    entries = [
        _entry(
            "ostrowski_satz6_upper",
            UPPER,
            ExactExpression(Fraction(1), 1 + spread * spread, Fraction(n // 2)),
            valid=spread <= 1,
            hypothesis="(n-1)*eps <= 1",
        ),
        _entry(
            "ostrowski55_upper", UPPER, o55, valid=n * eps < 1, hypothesis="n*eps < 1"
        ),
        _entry(
            "upper1",
            UPPER,
            ExactExpression(Fraction(1), 1 + 2 * eps + n * eps * eps, half),
            valid=True,
            hypothesis="none",
        ),
        _entry(
            "upper2",
            UPPER,
            ExactExpression(Fraction(1), 1 + (n - 1) * eps * eps, half),
            valid=True,
            hypothesis="none",
            note="requires a zero diagonal, e_ii = 0",
        ),
    ]
    return BoundTable(n, eps, Fraction(0), {e.name: e for e in entries})


def bound_table(n: int, eps: Fraction, delta: Fraction = Fraction(0)) -> BoundTable:
    """Lower and upper tables merged."""
    return lower_bound_table(n, eps, delta).merged(upper_bound_table(n, eps))


def _check_parameters(n: int, eps: Fraction, delta: Fraction) -> None:
    if n < 1:
        msg = f"order must be >= 1, got {n}"
        raise ValueError(msg)
    if eps < 0 or delta < 0:
        msg = "eps and delta must be non-negative"
        raise ValueError(msg)


class GridRow(NamedTuple):
    """Float values of all bounds at one eps, None where invalid."""

    eps: Fraction
    values: dict[str, Optional[float]]


def bound_grid(
    n: int, eps_hi: Fraction, points: int, delta: Fraction = Fraction(0)
) -> list[GridRow]:
    """Sample every bound on ``points`` equally spaced eps in ``[0, eps_hi]``.

    Parameters
    ----------
    n : int
        Order.
    eps_hi : Fraction
        Right end of the range.
    points : int
        Number of samples, at least 2.
    delta : Fraction
        Diagonal bound for ``lemma1``. (Default value = 0)

    Returns
    -------
    list[GridRow]
        One row per sample, ascending in eps.

    Raises
    ------
    ValueError
        If fewer than two points are requested.
    """
    if points < 2:  # noqa: PLR2004
        msg = "a grid needs at least two points"
        raise ValueError(msg)
    rows: list[GridRow] = []
    for k in range(points):
        eps = Fraction(eps_hi) * k / (points - 1)
        table = bound_table(n, eps, delta)
        rows.append(
            GridRow(
                eps,
                {
                    name: entry.approx if entry.valid else None
                    for name, entry in table.entries.items()
                },
            )
        )
    return rows


def ostrowski_product_bound(matrix: DenseMatrix) -> Fraction:
    """Product of the row dominance margins, a lower bound on ``|det A|``.

    Parameters
    ----------
    matrix : DenseMatrix
        Strictly diagonally dominant matrix.

    Returns
    -------
    Fraction
        ``prod_i (|a_ii| - sum_{j != i} |a_ij|)``.

    Raises
    ------
    NotDiagonallyDominant
        If some margin is not positive.
    """
    product = Fraction(1)
    absolute = matrix.absolute()
    for i, row in enumerate(absolute):
        margin = 2 * row[i] - sum(row)
        if margin <= 0:
            raise NotDiagonallyDominant(i, margin)
        product *= margin
    return product


def theorem3_lower_bound(matrix: DenseMatrix, eps: Fraction) -> Fraction:
    """Lower bound on ``|det A|`` when ``|a_ij| <= eps |a_ii|`` off the diagonal.

    Parameters
    ----------
    matrix : DenseMatrix
        The matrix A.
    eps : Fraction
        Relative off-diagonal bound.

    Returns
    -------
    Fraction
        ``prod_i |a_ii| * (1 - (n-1) eps) * (1 + eps)**(n-1)``.

    Raises
    ------
    HypothesisViolated
        With the first offending position.
    """
    n = matrix.order
    for i, j, value in matrix.entries():
        if i != j and abs(value) > eps * abs(matrix[i, i]):
            msg = "|a_ij| <= eps * |a_ii|"
            raise HypothesisViolated(msg, (i, j))
    product = Fraction(1)
    for d in matrix.diagonal_entries():
        product *= abs(d)
    return product * (1 - (n - 1) * eps) * (1 + eps) ** (n - 1)


class Lemma2Gap(NamedTuple):
    """Both sides of ``(1 + 2eps + n eps^2)^(n/2) < 1/(1 - n eps)``."""

    lhs: float
    rhs: Fraction
    holds: bool


def lemma2_gap(n: int, eps: Fraction) -> Lemma2Gap:
    """Compare the first upper bound with Ostrowski's ``1/(1 - n eps)``.

    ``holds`` is decided exactly by squaring both sides:
    ``(1 + 2eps + n eps^2)**n * (1 - n eps)**2 < 1``. ``lhs`` is computed
    at 200 bits before rounding.

    Parameters
    ----------
    n : int
        Order.
    eps : Fraction
        Non-negative with ``n * eps < 1``.

    Returns
    -------
    Lemma2Gap
        Left side, right side and the strict comparison. At ``eps = 0`` both
        sides are 1 and ``holds`` is False.

    Raises
    ------
    HypothesisViolated
        If ``n * eps >= 1``.
    """
    eps = Fraction(eps)
    if n * eps >= 1:
        msg = "n*eps < 1"
        raise HypothesisViolated(msg)
    base = 1 + 2 * eps + n * eps * eps
    with mpmath.workprec(200):
        lhs = mpmath.power(_mpf(base), mpmath.mpf(n) / 2)
        lhs_float = float(lhs)
    holds = base**n * (1 - n * eps) ** 2 < 1
    return Lemma2Gap(lhs_float, 1 / (1 - n * eps), holds)


class AttainableDets(NamedTuple):
    """Closed forms attained by the skew-triangular constructions."""

    u1: EpsPolynomial
    u2: EpsPolynomial


def _binomial_form(n: int, plus: EpsPolynomial, minus: EpsPolynomial) -> EpsPolynomial:
    return (plus**n + minus**n).scale(Fraction(1, 2))


def transform_to_inflated(det: EpsPolynomial, n: int) -> EpsPolynomial:
    """Rescale a unit-diagonal determinant to the ``(1 + eps)`` diagonal.

    ``(1 + eps) I + eps S = (1 + eps) (I + eps/(1 + eps) S)``, so the new
    determinant is ``(1 + eps)**n * d(eps / (1 + eps))``.

    Parameters
    ----------
    det : EpsPolynomial
        Determinant d of ``I + eps S``, degree at most n.
    n : int
        Order.

    Returns
    -------
    EpsPolynomial
        Determinant of ``(1 + eps) I + eps S``.
    """
    one_plus = EpsPolynomial.linear(1, 1)
    eps = EpsPolynomial.monomial(1)
    total = EpsPolynomial.constant(0)
    for k in range(det.degree + 1):
        total = total + eps**k * one_plus ** (n - k) * det.coefficient(k)
    return total


def attainable_upper_dets(n: int, *, certify: bool = True) -> AttainableDets:
    """Determinants of the skew-triangular matrices as polynomials in eps.

    ``u1 = ((1 + 2eps)**n + 1) / 2`` for ``(1 + eps) I + eps (U - U^T)`` and
    ``u2 = ((1 + eps)**n + (1 - eps)**n) / 2`` for ``I + eps (U - U^T)``.

    Parameters
    ----------
    n : int
        Order, at least 1.
    certify : bool
        Re-derive both from the matrices for ``n <= 12``. (Default value = True)

    Returns
    -------
    AttainableDets
        Both polynomials.

    Raises
    ------
    ArithmeticError
        If certification disagrees with the closed forms.
    """
    u1 = _binomial_form(n, EpsPolynomial.linear(1, 2), EpsPolynomial.constant(1))
    u2 = _binomial_form(n, EpsPolynomial.linear(1, 1), EpsPolynomial.linear(1, -1))
    if certify and n <= ATTAINABLE_CERTIFY_MAX:
        pattern = skew_tri_pattern(n)
        if det_poly(pattern) != u2:
            msg = f"skew-triangular determinant differs from the closed form at n = {n}"
            raise ArithmeticError(msg)
        if det_poly(pattern, skew_tri_diagonal(n, inflate=True)) != u1:
            msg = f"inflated skew-triangular determinant disagrees at n = {n}"
            raise ArithmeticError(msg)
    return AttainableDets(u1, u2)
