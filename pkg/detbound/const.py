"""Constant values used across detbound."""

from fractions import Fraction

from .exact.roots import DEFAULT_ISOLATION_WIDTH as DEFAULT_ISOLATION_WIDTH
from .exact.spectral import DEFAULT_FREDHOLM_MAX_TERMS as DEFAULT_FREDHOLM_MAX_TERMS
from .exact.spectral import DEFAULT_MINOR_LIMIT as DEFAULT_MINOR_LIMIT
from .exact.spectral import DEFAULT_POWER_MAX_ITERATIONS as DEFAULT_POWER_MAX_ITERATIONS
from .exact.spectral import DEFAULT_POWER_TOLERANCE as DEFAULT_POWER_TOLERANCE

DEFAULT_SEARCH_MAX_ORDER = 7
# Largest order searched without a resource warning.
SEARCH_COMFORT_ORDER = 6
# Orders up to which every canonical witness of a piece can be listed.
ALL_WITNESSES_MAX_ORDER = 4
DEFAULT_DOMAIN_HI = Fraction(2)
# Random samples are rationals with denominator 2**SAMPLE_DENOMINATOR_BITS.
SAMPLE_DENOMINATOR_BITS = 16
DEFAULT_TRIALS = 10_000
DEFAULT_SEED = 0
# Patterns per scan partition, as a power of two.
DEFAULT_CHUNK_BITS = 12
# Exit status for command line usage errors (BSD sysexits EX_USAGE).
EXIT_USAGE = 64
