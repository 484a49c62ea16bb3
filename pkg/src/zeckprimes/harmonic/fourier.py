"""Fourier-type sums of the Zeckendorf digit sum."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..numeration import fib, sz_array, v_array, w_seq

PHI = (1 + math.sqrt(5)) / 2
MAX_DIRECT_LAMBDA = 30


def e(x: float) -> complex:
    return cmath.exp(2j * math.pi * x)


@lru_cache(maxsize=8)
def _sz_block(lam: int) -> np.ndarray:
    return sz_array(np.arange(fib(lam), dtype=np.int64))


def _frac_times(beta: float, k: int) -> float:
    """``beta * k mod 1`` without losing the fractional part for huge ``k``."""
    return float((Fraction(beta) * k) % 1)


def fourier_Gtilde_direct(lam: int, theta: float, beta: float) -> complex:
    """``phi**-lam * sum_{u < F_lam} e(theta sz(u) + beta u)`` by summation."""
    if not 2 <= lam <= MAX_DIRECT_LAMBDA:
        raise ValueError(f"direct summation needs 2 <= lam <= {MAX_DIRECT_LAMBDA}")
    total = 0j
    count = fib(lam)
    chunk = 1 << 22
    for start in range(0, count, chunk):
        u = np.arange(start, min(start + chunk, count), dtype=np.int64)
        digits = _sz_block(lam)[start:start + len(u)] if lam <= 25 else sz_array(u)
        total += np.sum(np.exp(2j * math.pi * (theta * digits + (beta * u) % 1.0)))
    return complex(total) * PHI**-lam


def gtilde_step(lam: int, theta: float, beta: float) -> np.ndarray:
    """Matrix taking ``(G~_{lam-1}, G~_{lam-2})`` to ``(G~_lam, G~_{lam-1})``.

    Splitting ``u < F_lam`` at ``F_{lam-1}`` gives
    ``G~_lam = G~_{lam-1} / phi + e(theta + beta F_{lam-1}) G~_{lam-2} / phi**2``.
    """
    alpha = e(theta + _frac_times(beta, fib(lam - 1)))
    return np.array([[1 / PHI, alpha / PHI**2], [1, 0]], dtype=complex)


def fourier_Gtilde_matrix(lam: int, theta: float, beta: float) -> complex:
    """Same value as :func:`fourier_Gtilde_direct` through a product of 2x2 steps."""
    if lam < 1:
        raise ValueError("lam must be at least 1")
    vec = np.array([PHI**-2, PHI**-1], dtype=complex)  # (G~_2, G~_1)
    if lam == 1:
        return complex(vec[1])
    for k in range(3, lam + 1):
        vec = gtilde_step(k, theta, beta) @ vec
    return complex(vec[0])


def gtilde_block_norm(lam: int, theta: float, beta: float, length: int = 5) -> float:
    """Row-sum norm of the product of ``length`` consecutive steps ending at ``lam``."""
    prod = np.eye(2, dtype=complex)
    for k in range(lam - length + 1, lam + 1):
        prod = gtilde_step(k, theta, beta) @ prod
    return float(np.max(np.sum(np.abs(prod), axis=1)))


def gtilde_sup(lam: int, theta: float = 0.5, grid: int = 1024) -> float:
    """``max |G~_lam(theta, beta)|`` over ``beta`` on a uniform grid of [0, 1)."""
    return max(abs(fourier_Gtilde_matrix(lam, theta, b / grid)) for b in range(grid))


def fit_decay(lams, values) -> tuple[float, float]:
    """Least-squares fit ``values ~ C exp(-c lam)``; returns ``(C, c)``."""
    slope, intercept = np.polyfit(np.asarray(lams, float), np.log(np.asarray(values, float)), 1)
    return float(math.exp(intercept)), float(-slope)


def fourier_G_all(lam: int, theta: float) -> np.ndarray:
    """All ``G_lam(h) = F_lam**-1 sum_{u < F_lam} e(theta sz(u) - h u / F_lam)``."""
    if lam < 2:
        raise ValueError("lam must be at least 2")
    count = fib(lam)
    vals = np.exp(2j * math.pi * theta * sz_array(np.arange(count, dtype=np.int64)))
    return np.fft.fft(vals) / count


def fourier_G(lam: int, theta: float, h: int) -> complex:
    count = fib(lam)
    if not 0 <= h < count:
        raise ValueError(f"h must lie in [0, {count})")
    u = np.arange(count, dtype=np.int64)
    terms = np.exp(2j * math.pi * (theta * sz_array(u) - (h * u % count) / count))
    return complex(terms.sum()) / count


def omega(theta: float, t: int, N: int, lam: int) -> complex:
    """``N**-1 sum_{n<N} e(theta (sz_lam(n+t) - sz_lam(n)))`` with truncated digit sums."""
    if t < 0 or N < 1:
        raise ValueError("need t >= 0 and N >= 1")
    n = np.arange(N, dtype=np.int64)
    diff = sz_array(n + t, lam).astype(np.int64) - sz_array(n, lam)
    return complex(np.mean(np.exp(2j * math.pi * theta * diff)))


def wide_blocks(lam: int, count: int) -> list[int]:
    """Indices ``i`` among the first ``count`` gaps of ``w_seq`` whose gap is ``F_lam``."""
    w = w_seq(lam, count + 1)
    return [i for i in range(count) if w[i + 1] - w[i] == fib(lam)]


def correlation_identity_check(lam: int, t: int, i: int, theta: float = 0.5) -> float:
    """``|sum_h |G(h)|^2 e(h t / F_lam) - block average|`` over the ``i``-th w-block.

    The block average is ``F_lam**-1 sum_{w_i <= v < w_{i+1}} e(theta (sz_lam(v+t) - sz_lam(v)))``;
    the residual comes only from the ``t`` terms that run past the block end.
    """
    count = fib(lam)
    w = w_seq(lam, i + 2)
    if w[i + 1] - w[i] != count:
        raise ValueError(f"block {i} has gap {w[i + 1] - w[i]}, not F_lam = {count}")
    g = fourier_G_all(lam, theta)
    h = np.arange(count)
    spectral = complex(np.sum(np.abs(g) ** 2 * np.exp(2j * math.pi * h * t / count)))
    v = np.arange(w[i], w[i + 1], dtype=np.int64)
    diff = sz_array(v + t, lam).astype(np.int64) - sz_array(v, lam)
    block = complex(np.sum(np.exp(2j * math.pi * theta * diff))) / count
    assert np.all(v_array(v, lam) == v - w[i])
    return abs(spectral - block)
