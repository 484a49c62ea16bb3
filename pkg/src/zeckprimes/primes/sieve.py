"""Segmented sieve of Eratosthenes over odd numbers.

Segments are independent, so they can be sieved on a thread pool; results
always come back in ascending segment order, which keeps floating-point
reductions identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, TypeVar

import numpy as np

from ..errors import ResourceLimitError

T = TypeVar("T")

DEFAULT_SEGMENT = 1 << 21  # odd numbers per segment
DEFAULT_MEMORY_BUDGET = 2 << 30
MAX_LIMIT = 2**63 - 1

# optional callback(done, total) invoked after each segment; the CLI uses it
# to report progress on stderr
progress_hook: Callable[[int, int], None] | None = None
# budget applied by map_prime_segments; the CLI sets it from the config file
memory_budget = DEFAULT_MEMORY_BUDGET


def small_primes(limit: int) -> np.ndarray:
    """All primes ``<= limit`` by a plain sieve (used for the base primes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class PrimeSieve:
    """Primes up to ``limit``, produced one segment at a time."""

    limit: int
    segment_size: int = DEFAULT_SEGMENT
    memory_budget: int = DEFAULT_MEMORY_BUDGET

    def __post_init__(self) -> None:
        if not 2 <= self.limit <= MAX_LIMIT:
            raise ValueError("limit must lie in [2, 2**63 - 1]")
        if self.segment_size < 1024:
            raise ValueError("segment_size too small")
        base_bytes = 8 * (math.isqrt(self.limit) + 1)
        if base_bytes + 16 * self.segment_size > self.memory_budget:
            raise ResourceLimitError(f"sieve up to {self.limit} exceeds the memory budget")

    @property
    def segment_count(self) -> int:
        odd_count = (self.limit + 1) // 2  # odd numbers 1, 3, ..., <= limit
        return -(-odd_count // self.segment_size)

    def base_primes(self) -> np.ndarray:
        return _base_primes(math.isqrt(self.limit))

    def segment(self, index: int) -> np.ndarray:
        """Primes in segment ``index`` (int64, ascending); segment 0 includes 2."""
        lo_odd = index * self.segment_size  # odd number 2*i + 1 has i = lo_odd..
        hi_odd = min(lo_odd + self.segment_size, (self.limit + 1) // 2)
        if lo_odd >= hi_odd:
            return np.zeros(0, dtype=np.int64)
        lo = 2 * lo_odd + 1
        flags = np.ones(hi_odd - lo_odd, dtype=bool)
        hi = 2 * hi_odd + 1  # exclusive bound on values
        for p in self.base_primes()[1:]:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            if start % 2 == 0:
                start += p
            flags[(start - lo) // 2 :: p] = False
        values = lo + 2 * np.flatnonzero(flags).astype(np.int64)
        if index == 0:
            values = values[1:]  # drop 1
            if self.limit >= 2:
                values = np.concatenate([[2], values]).astype(np.int64)
        return values

    def __iter__(self) -> Iterator[np.ndarray]:
        for i in range(self.segment_count):
            yield self.segment(i)


_BASE_CACHE: dict[int, np.ndarray] = {}


def _base_primes(limit: int) -> np.ndarray:
    if limit not in _BASE_CACHE:
        _BASE_CACHE.clear()
        _BASE_CACHE[limit] = small_primes(max(limit, 3))
    return _BASE_CACHE[limit]


def map_prime_segments(x: int, func: Callable[[np.ndarray], T], threads: int = 1,
                       segment_size: int = DEFAULT_SEGMENT) -> list[T]:
    """Apply ``func`` to the primes ``<= x`` of every segment, in segment order."""
    sieve = PrimeSieve(x, segment_size, memory_budget)
    # every worker holds its own segment buffers
    if 16 * segment_size * max(threads, 1) > memory_budget:
        raise ResourceLimitError(f"{threads} workers exceed the memory budget of {memory_budget} bytes")
    sieve.base_primes()  # warm the cache before threads start

    total = sieve.segment_count
    done = [0]

    def work(i: int) -> T:
        result = func(sieve.segment(i))
        if progress_hook is not None:
            done[0] += 1
            progress_hook(done[0], total)
        return result

    if threads <= 1:
        return [work(i) for i in range(sieve.segment_count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, range(sieve.segment_count)))


def primes_upto(x: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> np.ndarray:
    """All primes ``<= x`` in one int64 array."""
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    # rough upper bound on pi(x) to refuse runaway requests early
    estimate = 1.26 * x / math.log(x) if x > 10 else 4
    if 8 * estimate > memory_budget:
        raise ResourceLimitError(f"holding all primes up to {x} exceeds the memory budget")
    return np.concatenate(list(PrimeSieve(x)))


def pi(x: int, threads: int = 1) -> int:
    """Prime counting function."""
    if x < 2:
        return 0
    return sum(map_prime_segments(x, len, threads))
