"""Digit-sum statistics of primes.

Every routine that walks the primes runs through :func:`map_prime_segments`,
which returns per-segment partial results in segment order; merging them in
that order keeps floating point sums identical for any thread count.
"""

from __future__ import annotations

import math
from typing import Iterator, Optional

import numpy as np

from ..errors import ResourceLimitError
from ..markov import MU, SIGMA2, char_fn_model
from ..numeration import MAX_INT64_INDEX, fib, sz_array, sz_window_array
from .primality import is_prime_64, is_probable_prime
from .sieve import map_prime_segments, small_primes

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)
MAX_SZ = 96
MAX_LOD_X = 100_000
MAX_FIB_SCAN = 1000
# F_93 < 2**64 < F_94, so candidates below F_93 fit in 64 bits
MAX_INDEX_BOUND = 93


def log_phi(x: float) -> float:
    return math.log(x) / LOG_PHI


# histograms ------------------------------------------------------------------

_HIST_CACHE: dict[tuple[int, int, int], np.ndarray] = {}
_HIST_CACHE_SIZE = 16


def _histogram(x: int, lo: int = 0, hi: int = 0, threads: int = 1) -> np.ndarray:
    """Digit-sum histogram of primes up to ``x``; ``lo = hi = 0`` means all digits.

    Integer counts do not depend on the thread count, so results are cached
    by ``(x, lo, hi)`` alone.
    """
    if x < 2:
        raise ValueError("x must be at least 2")
    key = (x, lo, hi)
    if key not in _HIST_CACHE:
        def count(p: np.ndarray) -> np.ndarray:
            digits = sz_array(p) if (lo, hi) == (0, 0) else sz_window_array(p, lo, hi)
            return np.bincount(digits, minlength=MAX_SZ)

        parts = map_prime_segments(x, count, threads)
        if len(_HIST_CACHE) >= _HIST_CACHE_SIZE:
            _HIST_CACHE.pop(next(iter(_HIST_CACHE)))
        _HIST_CACHE[key] = np.sum(parts, axis=0).astype(np.int64)
    return _HIST_CACHE[key].copy()


def sz_histogram_primes(x: int, threads: int = 1) -> dict[int, int]:
    """``{k: #{p <= x : sz(p) = k}}`` over the nonzero classes."""
    hist = _histogram(x, threads=threads)
    return {int(k): int(c) for k, c in enumerate(hist) if c}


def gaussian_prediction(x: int, count: int, k) -> np.ndarray:
    """Local Gaussian prediction ``pi(x) / sqrt(2 pi s2) exp(-(k - m)^2 / (2 s2))``."""
    length = log_phi(x)
    mean, var = MU * length, SIGMA2 * length
    k = np.asarray(k, dtype=float)
    return count / math.sqrt(2 * math.pi * var) * np.exp(-((k - mean) ** 2) / (2 * var))


def local_clt_table(x: int, threads: int = 1) -> tuple[list[dict], dict]:
    """Observed and predicted counts per digit sum, with the sup and modal errors."""
    if x < 1000:
        raise ValueError("x must be at least 1000")
    hist = _histogram(x, threads=threads)
    total = int(hist.sum())
    ks = np.arange(int(np.max(np.flatnonzero(hist))) + 4)
    pred = gaussian_prediction(x, total, ks)
    obs = hist[: len(ks)] if len(ks) <= len(hist) else np.pad(hist, (0, len(ks) - len(hist)))
    err = np.abs(obs - pred)
    rows = [{"k": int(k), "observed": int(o), "predicted": float(p), "abs_err": float(e)}
            for k, o, p, e in zip(ks, obs, pred, err)]
    mode = int(np.argmax(obs))
    summary = {
        "pi": total,
        "mean_predicted": MU * log_phi(x),
        "sup_rel_error": float(err.max() / total),
        "modal_k": mode,
        "modal_rel_error": float(err[mode] / obs[mode]),
        "predicted_mass": float(pred.sum() / total),
    }
    return rows, summary


def residue_counts(x: int, m: int, threads: int = 1) -> dict[int, int]:
    """Counts of ``sz(p) mod m`` over ``p <= x`` for every class ``0 <= a < m``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    hist = _histogram(x, threads=threads)
    out = {a: 0 for a in range(m)}
    for k, c in enumerate(hist):
        out[k % m] += int(c)
    return out


def residue_deviation(x: int, m: int, threads: int = 1) -> float:
    """``max_a |count_a / pi(x) - 1/m|``."""
    counts = residue_counts(x, m, threads)
    total = sum(counts.values())
    return max(abs(c / total - 1 / m) for c in counts.values())


# minimal primes and Fibonacci primes ---------------------------------------------

def _with_digit_sum(k: int, max_index: int) -> Iterator[int]:
    """Integers with exactly ``k`` Zeckendorf ones, all at indices <= max_index, ascending."""
    if k == 0:
        yield 0
        return
    # the top digit of the smallest such number sits at index 2k
    for top in range(2 * k, max_index + 1):
        head = fib(top)
        for rest in _with_digit_sum(k - 1, top - 2):
            yield head + rest


def smallest_prime_with_sz(k: int, index_bound: Optional[int] = None) -> Optional[int]:
    """Least prime with Zeckendorf digit sum ``k`` below ``F_{index_bound}``, if any."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if index_bound is None:
        index_bound = min(2 * k + 10, MAX_INDEX_BOUND)
    if index_bound > MAX_INDEX_BOUND:
        raise ValueError(f"index_bound above {MAX_INDEX_BOUND} leaves the 64-bit range")
    for n in _with_digit_sum(k, index_bound - 1):
        if is_prime_64(n):
            return n
    return None


def fibonacci_prime_rows(max_index: int) -> list[tuple[int, int, str]]:
    """``(k, F_k, certainty)`` for prime ``F_k``, ``k <= max_index``.

    Certainty is "proven" for 64-bit values (deterministic Miller-Rabin) and
    "probable" beyond.
    """
    if not 0 <= max_index <= MAX_FIB_SCAN:
        raise ValueError(f"max_index must lie in [0, {MAX_FIB_SCAN}]")
    rows = []
    for k in range(max_index + 1):
        f = fib(k)
        if f < 2**64:
            if is_prime_64(f):
                rows.append((k, f, "proven"))
        elif is_probable_prime(f):
            rows.append((k, f, "probable"))
    return rows


def fibonacci_prime_scan(max_index: int) -> list[int]:
    return [k for k, _, _ in fibonacci_prime_rows(max_index)]


# exponential sums ----------------------------------------------------------------

def _phase(values: np.ndarray, theta: float) -> np.ndarray:
    frac = math.fmod(theta, 1.0)
    return np.exp(2j * math.pi * np.mod(values * frac, 1.0))


def _ordered_sum(parts) -> complex:
    total = 0j
    for part in parts:
        total += part
    return total


def exp_sum_primes(theta: float, x: int, threads: int = 1) -> complex:
    """``sum_{p <= x} e(theta p)``."""
    return _ordered_sum(map_prime_segments(
        x, lambda p: complex(_phase(p.astype(float), theta).sum()), threads))


def exp_sum_sz_primes(theta: float, x: int, threads: int = 1) -> complex:
    """``sum_{p <= x} e(theta sz(p))``, read off the digit-sum histogram."""
    hist = _histogram(x, threads=threads)
    k = np.arange(len(hist))
    return complex(np.sum(hist * _phase(k.astype(float), theta)))


def _prime_powers(x: int) -> Iterator[tuple[int, int]]:
    """``(p**j, p)`` for primes ``p`` and ``j >= 2`` with ``p**j <= x``."""
    for p in small_primes(math.isqrt(x)).tolist():
        q = p * p
        while q <= x:
            yield q, p
            q *= p


def exp_sum_sz_mangoldt(theta: float, x: int, threads: int = 1) -> complex:
    """``sum_{n <= x} Lambda(n) e(theta sz(n))``."""
    def seg(p: np.ndarray) -> complex:
        return complex(np.sum(np.log(p.astype(float)) * _phase(sz_array(p).astype(float), theta)))

    total = _ordered_sum(map_prime_segments(x, seg, threads))
    for q, p in _prime_powers(x):
        total += math.log(p) * complex(_phase(np.array([float(sz_array(np.array([q]))[0])]), theta)[0])
    return total


def chebyshev_psi(x: int, threads: int = 1) -> float:
    return exp_sum_sz_mangoldt(0.0, x, threads).real


def expsum_shape(theta: float, x: float) -> float:
    """``(log x)^3 (x sqrt||theta|| + sqrt(x / ||theta||) + x^(4/5))``."""
    dist = abs(theta - round(theta))
    if dist == 0:
        raise ValueError("theta must not be an integer")
    return math.log(x) ** 3 * (x * math.sqrt(dist) + math.sqrt(x / dist) + x**0.8)


# level of distribution -------------------------------------------------------

def lod_statistic(x: int, eps: float, theta: float) -> float:
    """``sum_{d <= D} max_a |sum_{0 <= n <= x, n = a mod d} e(theta sz(n))|``, ``D = floor(x^(1-eps))``.

    Only the window ``[0, x]`` is used, so this is a lower bound for the
    maximum over all windows.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if x > MAX_LOD_X:
        raise ResourceLimitError(f"lod_statistic is limited to x <= {MAX_LOD_X}")
    if x < 1:
        raise ValueError("x must be at least 1")
    D = int(math.floor(x ** (1 - eps) + 1e-9))
    n = np.arange(x + 1, dtype=np.int64)
    vals = _phase(sz_array(n).astype(float), theta)
    total = 0.0
    for d in range(1, D + 1):
        res = n % d
        re = np.bincount(res, weights=vals.real, minlength=d)
        im = np.bincount(res, weights=vals.imag, minlength=d)
        total += float(np.max(np.hypot(re, im)))
    return total


def lod_terms(x: int, eps: float, theta: float) -> np.ndarray:
    """The individual ``max_a`` terms for ``d = 1..D`` (for monotonicity checks)."""
    D = int(math.floor(x ** (1 - eps) + 1e-9))
    n = np.arange(x + 1, dtype=np.int64)
    vals = _phase(sz_array(n).astype(float), theta)
    out = np.empty(D)
    for d in range(1, D + 1):
        res = n % d
        out[d - 1] = np.max(np.hypot(np.bincount(res, weights=vals.real, minlength=d),
                                     np.bincount(res, weights=vals.imag, minlength=d)))
    return out


# characteristic functions ------------------------------------------------------

def truncation_window(x: int, nu: float) -> tuple[int, int, int]:
    """``(lo, hi, L')`` for the digit window ``L^nu <= k <= L - L^nu``."""
    if not 0 < nu < 0.5:
        raise ValueError("nu must lie in (0, 1/2)")
    L = int(math.floor(log_phi(x)))
    lo = max(2, math.ceil(L**nu))
    hi = math.floor(L - L**nu)
    return lo, hi, hi - lo + 1


def char_fn_primes(t: float, x: int, nu: Optional[float] = None, threads: int = 1) -> complex:
    """Normalised characteristic function of ``sz(p)`` (or of the truncated sum when ``nu`` is set)."""
    if x < 1000:
        raise ValueError("x must be at least 1000")
    if nu is None:
        length = int(math.floor(log_phi(x)))
        hist = _histogram(x, threads=threads)
    else:
        lo, hi, length = truncation_window(x, nu)
        hist = _histogram(x, lo, hi, threads)
    k = np.arange(len(hist), dtype=float)
    scale = math.sqrt(length * SIGMA2)
    terms = np.exp(1j * t * (k - length * MU) / scale)
    return complex(np.sum(hist * terms) / hist.sum())


def char_fn_chain(t: float, x: int, nu: float) -> complex:
    """The Markov-chain counterpart over the same truncated window."""
    _, _, length = truncation_window(x, nu)
    return char_fn_model(t, length)
