"""Exhaustive maximal-determinant search over unit-diagonal sign patterns.

Row and column sign changes and simultaneous permutations preserve the
maximal determinant, so the first row may be taken all plus and the first
column as k plus signs (the diagonal included) followed by minus signs,
k = 1..n. The remaining ``(n-1)(n-2)`` signs are free. The scan is split
into partitions by k and by the high free bits; each partition reduces its
patterns to the Pareto front of their distinct determinant polynomials and
the fronts are merged before the exact envelope is computed.
"""

import time
import warnings
from collections.abc import Iterator
from concurrent.futures import FIRST_COMPLETED, Future, ProcessPoolExecutor, wait
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt

from .const import (
    ALL_WITNESSES_MAX_ORDER,
    DEFAULT_CHUNK_BITS,
    DEFAULT_DOMAIN_HI,
    DEFAULT_SEARCH_MAX_ORDER,
    SEARCH_COMFORT_ORDER,
)
from .envelope import Envelope, envelope_of, pareto_mask
from .exact import EpsPolynomial, OrderTooLarge, SearchTimeout, SignPattern, det_poly
from .exact.pattern import batch_det_coefficients, bit_index
from .types import DetboundSettings

ProgressCallback = Callable[[int, int], None]
# Coefficients, lexicographic key and packed bits of one surviving pattern.
ScanRow = tuple[tuple[int, ...], int, int]

# Largest order for the search over all 2**(n(n-1)) patterns.
EXHAUSTIVE_MAX_ORDER = 5
# maxdet_at_one is restricted to the orders the search is meant for.
MAXDET_AT_ONE_MAX_ORDER = 6

_ONE = np.uint64(1)


def free_positions(n: int) -> list[int]:
    """Bit indices of the free signs, row-major (rows and columns 1..n-1)."""
    return [bit_index(n, i, j) for i in range(1, n) for j in range(1, n) if i != j]


def first_column_bits(n: int, k: int) -> int:
    """Packed minus signs of the first column with k plus signs."""
    bits = 0
    for i in range(k, n):
        bits |= 1 << bit_index(n, i, 0)
    return bits


def scatter_free_bits(
    values: npt.NDArray[np.uint64], positions: list[int]
) -> npt.NDArray[np.uint64]:
    """Spread counter values onto the free positions, most significant first."""
    out = np.zeros_like(values)
    width = len(positions)
    for t, pos in enumerate(positions):
        out |= ((values >> np.uint64(width - 1 - t)) & _ONE) << np.uint64(pos)
    return out


def lex_keys(bits: npt.NDArray[np.uint64], width: int) -> npt.NDArray[np.uint64]:
    """Vectorised ``SignPattern.lex_key``."""
    keys = np.zeros_like(bits)
    for idx in range(width):
        keys |= ((bits >> np.uint64(idx)) & _ONE) << np.uint64(width - 1 - idx)
    return keys


class CanonicalPatterns:
    """The symmetry-reduced patterns of one order, sized and re-iterable.

    Enumeration order is k ascending, then the free bits as a binary
    counter whose most significant bit is the first free position.
    """

    def __init__(self, n: int) -> None:
        """Prepare the free positions.

        Parameters
        ----------
        n : int
            Order.
        """
        self.order = n
        self.free = free_positions(n)

    def __len__(self) -> int:
        return self.order * (1 << len(self.free))

    def __iter__(self) -> Iterator[SignPattern]:
        n = self.order
        for k in range(1, n + 1):
            base = first_column_bits(n, k)
            total = 1 << len(self.free)
            for start in range(0, total, 1 << DEFAULT_CHUNK_BITS):
                stop = min(start + (1 << DEFAULT_CHUNK_BITS), total)
                for bits in self.bits(k, start, stop).tolist():
                    yield SignPattern(n, base | int(bits))

    def bits(self, k: int, start: int, stop: int) -> npt.NDArray[np.uint64]:
        """Packed free-bit words for counter values ``start..stop-1``."""
        values = np.arange(start, stop, dtype=np.uint64)
        return scatter_free_bits(values, self.free)


def canonical_patterns(
    n: int, *, max_order: int = DEFAULT_SEARCH_MAX_ORDER
) -> CanonicalPatterns:
    """Symmetry-reduced patterns of order ``n``; ``len`` is ``n * 2**((n-1)(n-2))``.

    Parameters
    ----------
    n : int
        Order, at least 1.
    max_order : int
        Largest order allowed. (Default value = 7)

    Returns
    -------
    CanonicalPatterns
        Lazy enumeration.

    Raises
    ------
    OrderTooLarge
        If ``n > max_order``.
    ValueError
        If ``n < 1``.
    """
    if n < 1:
        msg = f"order must be >= 1, got {n}"
        raise ValueError(msg)
    if n > max_order:
        raise OrderTooLarge(n, max_order, "canonical pattern enumeration")
    return CanonicalPatterns(n)


@dataclass(frozen=True)
class Partition:
    """A slice of the scan: one first-column class (or all patterns if None)."""

    k: Optional[int]
    start: int
    stop: int


def _partition_bits(n: int, part: Partition) -> npt.NDArray[np.uint64]:
    if part.k is None:
        return np.arange(part.start, part.stop, dtype=np.uint64)
    base = np.uint64(first_column_bits(n, part.k))
    return CanonicalPatterns(n).bits(part.k, part.start, part.stop) | base


def scan_partition(n: int, part: Partition) -> list[ScanRow]:
    """Pareto front of the distinct determinant polynomials in one partition.

    Each polynomial keeps the pattern with the smallest lexicographic key.

    Parameters
    ----------
    n : int
        Order.
    part : Partition
        Slice to scan.

    Returns
    -------
    list[ScanRow]
        Surviving (coefficients, key, bits) rows.
    """
    bits = _partition_bits(n, part)
    coeffs = batch_det_coefficients(bits, n)
    keys = lex_keys(bits, n * (n - 1))
    order = np.argsort(keys, kind="stable")
    coeffs, keys, bits = coeffs[order], keys[order], bits[order]
    unique, first = np.unique(coeffs, axis=0, return_index=True)
    mask = pareto_mask(unique)
    return [
        (tuple(int(c) for c in unique[i]), int(keys[first[i]]), int(bits[first[i]]))
        for i in np.flatnonzero(mask)
    ]


def canonical_partitions(n: int, chunk_bits: int) -> list[Partition]:
    """Partitions of the canonical space by k and high free bits."""
    total = 1 << ((n - 1) * (n - 2))
    step = 1 << chunk_bits
    return [
        Partition(k, start, min(start + step, total))
        for k in range(1, n + 1)
        for start in range(0, total, step)
    ]


def exhaustive_partitions(n: int, chunk_bits: int) -> list[Partition]:
    """Partitions of all ``2**(n(n-1))`` patterns by high bits."""
    total = 1 << (n * (n - 1))
    step = 1 << chunk_bits
    return [
        Partition(None, start, min(start + step, total))
        for start in range(0, total, step)
    ]


def _absorb(
    merged: dict[tuple[int, ...], tuple[int, int]], rows: list[ScanRow]
) -> None:
    for coeffs, key, bits in rows:
        held = merged.get(coeffs)
        if held is None or key < held[0]:
            merged[coeffs] = (key, bits)


def _abort(pending: set["Future[list[ScanRow]]"], pool: ProcessPoolExecutor) -> None:
    for future in pending:
        future.cancel()
    pool.shutdown(wait=False, cancel_futures=True)


def run_partitions(
    n: int,
    partitions: list[Partition],
    *,
    threads: int = 1,
    timeout: Optional[float] = None,
    progress: Optional[ProgressCallback] = None,
) -> dict[tuple[int, ...], tuple[int, int]]:
    """Scan every partition and merge the fronts.

    Parameters
    ----------
    n : int
        Order.
    partitions : list[Partition]
        Work items.
    threads : int
        Worker processes; 1 scans in the calling process. (Default value = 1)
    timeout : Optional[float]
        Wall-clock budget in seconds. (Default value = None)
    progress : Optional[ProgressCallback]
        Called with (done, total) after each partition. (Default value = None)

    Returns
    -------
    dict[tuple[int, ...], tuple[int, int]]
        Coefficients mapped to (key, bits) of their smallest witness.

    Raises
    ------
    SearchTimeout
        If the budget runs out; nothing partial is returned.
    """
    merged: dict[tuple[int, ...], tuple[int, int]] = {}
    started = time.monotonic()
    total = len(partitions)
    done = 0

    def remaining() -> Optional[float]:
        return None if timeout is None else timeout - (time.monotonic() - started)

    if threads <= 1:
        for part in partitions:
            left = remaining()
            if left is not None and left <= 0:
                raise SearchTimeout(float(timeout or 0), done, total)
            _absorb(merged, scan_partition(n, part))
            done += 1
            if progress is not None:
                progress(done, total)
        return merged
    with ProcessPoolExecutor(max_workers=threads) as pool:
        pending = {pool.submit(scan_partition, n, part) for part in partitions}
        while pending:
            left = remaining()
            if left is not None and left <= 0:
                _abort(pending, pool)
                raise SearchTimeout(float(timeout or 0), done, total)
            finished, pending = wait(pending, timeout=left, return_when=FIRST_COMPLETED)
            for future in finished:
                _absorb(merged, future.result())
                done += 1
                if progress is not None:
                    progress(done, total)
    return merged


def _envelope_from(
    n: int,
    merged: dict[tuple[int, ...], tuple[int, int]],
    domain_hi: Fraction,
    settings: DetboundSettings,
) -> Envelope:
    keys = list(merged)
    mask = pareto_mask(np.array(keys, dtype=np.int64))
    candidates = [
        (EpsPolynomial.of(coeffs), SignPattern(n, merged[coeffs][1]))
        for coeffs, keep in zip(keys, mask)
        if keep
    ]
    return envelope_of(
        candidates,
        (Fraction(0), Fraction(domain_hi)),
        isolation_width=settings.isolation_width,
    )


def _check_search(n: int, domain_hi: Fraction, limit: int) -> None:
    if n < 1:
        msg = f"order must be >= 1, got {n}"
        raise ValueError(msg)
    if n > limit:
        raise OrderTooLarge(n, limit, "maxdet search")
    if domain_hi <= 0:
        msg = "domain_hi must be positive"
        raise ValueError(msg)


def search_maxdet(
    n: int,
    domain_hi: Fraction = DEFAULT_DOMAIN_HI,
    *,
    threads: int = 1,
    timeout: Optional[float] = None,
    all_witnesses: bool = False,
    settings: Optional[DetboundSettings] = None,
    progress: Optional[ProgressCallback] = None,
) -> Envelope:
    """Exact maximal determinant over all unit-diagonal sign patterns.

    Parameters
    ----------
    n : int
        Order; 7 runs with a resource warning.
    domain_hi : Fraction
        Right end of the domain ``(0, domain_hi]``. (Default value = 2)
    threads : int
        Worker processes. (Default value = 1)
    timeout : Optional[float]
        Wall-clock budget in seconds. (Default value = None)
    all_witnesses : bool
        List every canonical witness of each piece, ``n <= 4`` only.
        (Default value = False)
    settings : Optional[DetboundSettings]
        Order limit and partition size. (Default value = None)
    progress : Optional[ProgressCallback]
        Called with (done, total) after each partition. (Default value = None)

    Returns
    -------
    Envelope
        Pieces with one canonical witness each, and exact breakpoints.

    Raises
    ------
    OrderTooLarge
        If ``n`` exceeds the configured maximum, or witnesses are requested
        above order 4.
    SearchTimeout
        If the budget runs out.
    """
    settings = settings or DetboundSettings()
    domain_hi = Fraction(domain_hi)
    _check_search(n, domain_hi, settings.search_max_order)
    if all_witnesses and n > ALL_WITNESSES_MAX_ORDER:
        raise OrderTooLarge(n, ALL_WITNESSES_MAX_ORDER, "witness enumeration")
    if n > SEARCH_COMFORT_ORDER:
        warnings.warn(
            f"the order {n} search scans {len(CanonicalPatterns(n))} patterns"
            " and may take days",
            ResourceWarning,
            stacklevel=2,
        )
    chunk_bits = min(settings.chunk_bits, max((n - 1) * (n - 2), 0))
    merged = run_partitions(
        n,
        canonical_partitions(n, chunk_bits),
        threads=threads,
        timeout=timeout,
        progress=progress,
    )
    envelope = _envelope_from(n, merged, domain_hi, settings)
    if all_witnesses:
        groups: dict[EpsPolynomial, list[SignPattern]] = {p: [] for p in envelope.polys}
        for pattern in CanonicalPatterns(n):
            poly = det_poly(pattern)
            if poly in groups:
                groups[poly].append(pattern)
        envelope = replace(
            envelope, all_witnesses=tuple(tuple(groups[p]) for p in envelope.polys)
        )
    return envelope


def search_maxdet_exhaustive(
    n: int,
    domain_hi: Fraction = DEFAULT_DOMAIN_HI,
    *,
    settings: Optional[DetboundSettings] = None,
) -> Envelope:
    """Same envelope from all ``2**(n(n-1))`` patterns, without symmetry reduction.

    Raises
    ------
    OrderTooLarge
        If ``n > 5``.
    """
    settings = settings or DetboundSettings()
    domain_hi = Fraction(domain_hi)
    _check_search(n, domain_hi, EXHAUSTIVE_MAX_ORDER)
    chunk_bits = min(settings.chunk_bits, n * (n - 1))
    merged = run_partitions(n, exhaustive_partitions(n, chunk_bits))
    return _envelope_from(n, merged, domain_hi, settings)


def maxdet_at_one(n: int, *, threads: int = 1) -> int:
    """Maximal determinant of unit-diagonal ``{+-1}`` matrices of order ``n``.

    Parameters
    ----------
    n : int
        Order, at most 6.
    threads : int
        Worker processes. (Default value = 1)

    Returns
    -------
    int
        Value at eps = 1 of the envelope piece containing 1.

    Raises
    ------
    OrderTooLarge
        If ``n > 6``.
    """
    if n > MAXDET_AT_ONE_MAX_ORDER:
        raise OrderTooLarge(n, MAXDET_AT_ONE_MAX_ORDER, "maxdet at eps = 1")
    envelope = search_maxdet(n, Fraction(1), threads=threads)
    return int(envelope.value_at(Fraction(1)))
