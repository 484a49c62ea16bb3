"""Fibonacci numbers and the Zeckendorf numeration system.

Digits are indexed from 2 upward with ``F_0 = 0, F_1 = 1``, so every
``n >= 0`` is uniquely ``sum(F_k for k with digit 1)`` with no two adjacent
ones.  Scalar functions accept Python ints; the ``*_array`` variants work on
int64 numpy arrays (values below ``2**63``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# F_0 .. F_92 fit in int64; F_93 does not
MAX_INT64_INDEX = 92


@lru_cache(maxsize=None)
def _fib_table(count: int) -> tuple[int, ...]:
    table = [0, 1]
    while len(table) < count:
        table.append(table[-1] + table[-2])
    return tuple(table[:count])


def fib(k: int) -> int:
    """The Fibonacci number ``F_k`` (arbitrary precision)."""
    if k < 0:
        raise ValueError("fib is defined here for k >= 0")
    if k < 200:
        return _fib_table(200)[k]
    from .golden import _fib_pair

    return _fib_pair(k)[0]


FIB64 = np.array(_fib_table(MAX_INT64_INDEX + 1), dtype=np.int64)


def fib_index_above(n: int) -> int:
    """Smallest k >= 2 with ``F_k > n``."""
    k = 2
    while fib(k) <= n:
        k += 1
    return k


@dataclass(frozen=True)
class ZeckDigits:
    """Zeckendorf digits; ``bits[i]`` is the digit at index ``i + 2``."""

    bits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("digits must be 0 or 1")
        if any(bits[i] and bits[i + 1] for i in range(len(bits) - 1)):
            raise ValueError("adjacent ones are not allowed in a Zeckendorf expansion")
        # strip leading zeros so the representation is canonical
        while bits and bits[-1] == 0:
            bits = bits[:-1]
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> ZeckDigits:
        idx = sorted(set(indices))
        if idx and idx[0] < 2:
            raise ValueError("digit indices start at 2")
        bits = [0] * (idx[-1] - 1 if idx else 0)
        for k in idx:
            bits[k - 2] = 1
        return cls(tuple(bits))

    @property
    def length(self) -> int:
        """Highest index carrying a one, 0 for the empty expansion."""
        return len(self.bits) + 1 if self.bits else 0

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i + 2 for i, b in enumerate(self.bits) if b)

    def __getitem__(self, k: int) -> int:
        if k < 2 or k - 2 >= len(self.bits):
            return 0
        return self.bits[k - 2]

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in reversed(self.bits)) or "0"


def zeck_expand(n: int) -> ZeckDigits:
    """Greedy top-down Zeckendorf expansion of ``n >= 0``."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ZeckDigits()
    k = fib_index_above(n) - 1
    bits = [0] * (k - 1)
    while n:
        while fib(k) > n:
            k -= 1
        bits[k - 2] = 1
        n -= fib(k)
        k -= 2
    return ZeckDigits(tuple(bits))


def zeck_value(d: ZeckDigits | Sequence[int]) -> int:
    if not isinstance(d, ZeckDigits):
        d = ZeckDigits(tuple(d))
    return sum(fib(k) for k in d.indices)


def digit(n: int, k: int) -> int:
    """The Zeckendorf digit of ``n`` at index ``k``."""
    return zeck_expand(n)[k]


def sz(n: int) -> int:
    """Zeckendorf sum of digits."""
    return sum(zeck_expand(n).bits)


def v(n: int, lam: int) -> int:
    """Value of the digits of ``n`` below index ``lam``; lies in [0, F_lam)."""
    if lam < 2:
        raise ValueError("lam must be at least 2")
    return sum(fib(k) for k in zeck_expand(n).indices if k < lam)


def sz_trunc(n: int, lam: int) -> int:
    """Number of ones among the digits at indices ``2 <= k < lam``."""
    if lam < 2:
        raise ValueError("lam must be at least 2")
    return sum(1 for k in zeck_expand(n).indices if k < lam)


# --------------------------------------------------------------------------
# vectorised versions


def _top_index(values: np.ndarray) -> int:
    top = int(values.max()) if values.size else 0
    k = fib_index_above(top)
    if k > MAX_INT64_INDEX + 1:
        raise OverflowError("values must be below 2**63")
    return k


def digits_array(n, indices: Sequence[int]) -> dict[int, np.ndarray]:
    """Digits of every element of ``n`` at the requested indices (uint8 arrays)."""
    n = np.array(n, dtype=np.int64)
    if n.size and n.min() < 0:
        raise ValueError("values must be nonnegative")
    wanted = set(indices)
    out = {k: np.zeros(n.shape, dtype=np.uint8) for k in wanted}
    rem = n.copy()
    for k in range(_top_index(n), 1, -1):
        hit = rem >= FIB64[k]
        rem -= np.where(hit, FIB64[k], 0)
        if k in wanted:
            out[k] = hit.astype(np.uint8)
    return out


def sz_array(n, lam: int | None = None) -> np.ndarray:
    """``sz`` (or ``sz_trunc`` when ``lam`` is given) of an integer array."""
    n = np.asarray(n, dtype=np.int64)
    if n.size and n.min() < 0:
        raise ValueError("values must be nonnegative")
    count = np.zeros(n.shape, dtype=np.int16)
    rem = n.copy()
    for k in range(_top_index(n), 1, -1):
        hit = rem >= FIB64[k]
        rem -= np.where(hit, FIB64[k], 0)
        if lam is None or k < lam:
            count += hit
    return count


def sz_window_array(n, lo: int, hi: int) -> np.ndarray:
    """Number of ones among the digits at indices ``lo <= k <= hi``."""
    n = np.asarray(n, dtype=np.int64)
    count = np.zeros(n.shape, dtype=np.int16)
    rem = n.copy()
    for k in range(_top_index(n), 1, -1):
        hit = rem >= FIB64[k]
        rem -= np.where(hit, FIB64[k], 0)
        if lo <= k <= hi:
            count += hit
    return count


def v_array(n, lam: int) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    rem = n.copy()
    for k in range(_top_index(n), lam - 1, -1):
        if k < 2:
            break
        rem -= np.where(rem >= FIB64[k], FIB64[k], 0)
    return rem


# --------------------------------------------------------------------------
# combinatorial facts


def create_zero_shift(n: int, ell: int) -> int:
    """Smallest ``y`` in [0, F_ell) with ``v(n + y, ell) == 0``.

    The integers with vanishing low digits have consecutive gaps F_ell or
    F_{ell-1}, so the answer is one of two candidates above ``n - v(n, ell)``.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    low = v(n, ell)
    if low == 0:
        return 0
    base = n - low
    for step in (fib(ell - 1), fib(ell)):
        cand = base + step
        if cand >= n and v(cand, ell) == 0:
            assert cand - n < fib(ell)
            return cand - n
    raise AssertionError(f"no zero shift found for n={n}, ell={ell}")


def carry_mismatch_count(N: int, r: int, lam: int) -> int:
    """Count ``0 <= n < N`` where adding ``r`` changes digits at index >= lam.

    Precisely: how often ``sz(n+r) - sz(n)`` differs from the same
    difference of truncated digit sums.
    """
    if N < 1 or r < 0 or lam < 2:
        raise ValueError("need N >= 1, r >= 0, lam >= 2")
    n = np.arange(N, dtype=np.int64)
    full = sz_array(n + r).astype(np.int64) - sz_array(n)
    trunc = sz_array(n + r, lam).astype(np.int64) - sz_array(n, lam)
    return int(np.count_nonzero(full != trunc))


_SUBSTITUTION = {"a": "ab", "b": "c", "c": "cd", "d": "a"}
_CODING = {"a": 0, "b": 1, "c": 1, "d": 0}


def fibword_morphic(length: int) -> list[int]:
    """Prefix of the coded fixed point of a->ab, b->c, c->cd, d->a.

    This word is ``sz(n) mod 2``.
    """
    if length < 1:
        raise ValueError("length must be positive")
    word = "a"
    while len(word) < length:
        word = "".join(_SUBSTITUTION[s] for s in word)
    return [_CODING[s] for s in word[:length]]


def w_seq(lam: int, count: int) -> list[int]:
    """The first ``count`` integers whose digits at indices 2..lam-1 vanish."""
    if lam < 3:
        raise ValueError("lam must be at least 3")
    out: list[int] = []
    start = 0
    chunk = min(1 << 22, max(1024, 2 * count * fib(lam)))
    while len(out) < count:
        n = np.arange(start, start + chunk, dtype=np.int64)
        out.extend(int(x) for x in n[v_array(n, lam) == 0])
        start += chunk
    return out[:count]
