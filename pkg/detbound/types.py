"""Module for defining commonly used types."""

from dataclasses import dataclass
from fractions import Fraction

from .const import (
    DEFAULT_CHUNK_BITS,
    DEFAULT_FREDHOLM_MAX_TERMS,
    DEFAULT_ISOLATION_WIDTH,
    DEFAULT_MINOR_LIMIT,
    DEFAULT_POWER_MAX_ITERATIONS,
    DEFAULT_POWER_TOLERANCE,
    DEFAULT_SEARCH_MAX_ORDER,
    SAMPLE_DENOMINATOR_BITS,
)


@dataclass(frozen=True)
class DetboundSettings:
    """Numerical tunables shared by the library entry points and the CLI."""

    isolation_width: Fraction = DEFAULT_ISOLATION_WIDTH
    minor_limit: int = DEFAULT_MINOR_LIMIT
    power_tolerance: float = DEFAULT_POWER_TOLERANCE
    power_max_iterations: int = DEFAULT_POWER_MAX_ITERATIONS
    fredholm_max_terms: int = DEFAULT_FREDHOLM_MAX_TERMS
    search_max_order: int = DEFAULT_SEARCH_MAX_ORDER
    sample_denominator_bits: int = SAMPLE_DENOMINATOR_BITS
    chunk_bits: int = DEFAULT_CHUNK_BITS

    def __post_init__(self) -> None:
        """Reject settings no computation could honour.

        Raises
        ------
        ValueError
            If a limit or tolerance is not positive, or the search order is
            above what the permutation tables support.
        """
        if self.isolation_width <= 0 or self.power_tolerance <= 0:
            msg = "isolation width and power tolerance must be positive"
            raise ValueError(msg)
        limits = (self.minor_limit, self.power_max_iterations, self.fredholm_max_terms)
        if min(limits) < 1:
            msg = "iteration and size limits must be at least 1"
            raise ValueError(msg)
        if not 1 <= self.search_max_order <= DEFAULT_SEARCH_MAX_ORDER:
            msg = f"search_max_order must lie in [1, {DEFAULT_SEARCH_MAX_ORDER}]"
            raise ValueError(msg)
        if self.sample_denominator_bits < 1 or self.chunk_bits < 1:
            msg = "sample_denominator_bits and chunk_bits must be at least 1"
            raise ValueError(msg)
