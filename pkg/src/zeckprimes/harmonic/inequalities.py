"""Both sides of van der Corput and Vinogradov type inequalities."""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from ..errors import ToleranceViolation


def _autocorrelation(z: np.ndarray, max_lag: int) -> np.ndarray:
    """``c[r] = sum_n z[n + r] conj z[n]`` for ``0 <= r <= max_lag``."""
    n = len(z)
    return np.array([np.vdot(z[: n - r], z[r:]) if r < n else 0j for r in range(max_lag + 1)])


def vdc_check(z, R: int) -> tuple[float, float]:
    """``|sum z_n|^2`` and ``(N+R-1)/R * sum_{|r|<R} (1 - |r|/R) sum_n z_{n+r} conj z_n``."""
    z = np.asarray(z, dtype=complex)
    if z.size == 0 or R < 1:
        raise ValueError("need a nonempty sequence and R >= 1")
    n = len(z)
    corr = _autocorrelation(z, R - 1)
    r = np.arange(R)
    taper = 1 - r / R
    # the lag -r term is the conjugate of the lag r term
    inner = taper[0] * corr[0].real + 2 * float(np.sum(taper[1:] * corr[1:].real))
    return float(abs(z.sum()) ** 2), float((n + R - 1) / R * inner)


def vdc_general_check(x, K: Iterable[int]) -> tuple[float, float]:
    """Generalised form with an arbitrary finite shift set ``K``."""
    x = np.asarray(x, dtype=complex)
    shifts = sorted(set(int(k) for k in K))
    if x.size == 0 or not shifts:
        raise ValueError("need a nonempty sequence and a nonempty K")
    m = len(x)
    span = shifts[-1] - shifts[0]
    corr = _autocorrelation(x, span)
    total = 0.0
    for k1 in shifts:
        for k2 in shifts:
            d = k1 - k2
            # sum_m x_m conj x_{m+d} is conj(c[d]) for d >= 0 and c[-d] otherwise
            total += (np.conj(corr[d]) if d >= 0 else corr[-d]).real
    return float(abs(x.sum()) ** 2), float((m + span) / len(shifts) ** 2 * total)


def vinogradov_check(a, x: float, y: float, z: float, grid: int = 4096,
                     enforce: bool = True) -> tuple[float, float]:
    """``|sum_{x<=n<y} a_n|`` against ``int_0^1 min(y-x+1, ||xi||^-1) |sum_{x<=n<z} a_n e(n xi)| dxi``.

    The sequence is indexed from 0.  The integral is replaced by an upper
    Riemann sum: on each grid cell the kernel takes its largest value and the
    exponential sum the larger of its two endpoint magnitudes.
    """
    a = np.asarray(a, dtype=complex)
    if grid < 1000:
        raise ValueError("grid must be at least 1000")
    if not x <= y <= z:
        raise ValueError("need x <= y <= z")
    lo = max(math.ceil(x), 0)
    lhs = float(abs(a[lo:max(math.ceil(y), lo)].sum()))
    window = a[lo:max(math.ceil(z), lo)]
    if window.size == 0 or not np.any(window):
        return lhs, 0.0
    # |S(k/grid)| for all k; only the modulus matters, so the window starts at 0
    folded = np.zeros(grid, dtype=complex)
    np.add.at(folded, np.arange(len(window)) % grid, window)
    mags = np.abs(np.fft.ifft(folded) * grid)
    mags = np.append(mags, mags[0])
    cell_sum = np.maximum(mags[:-1], mags[1:])
    k = np.arange(grid)
    nearest = np.minimum(np.minimum(k, grid - k), np.minimum(k + 1, grid - k - 1)) / grid
    with np.errstate(divide="ignore"):
        kernel = np.minimum(y - x + 1, np.where(nearest > 0, 1 / nearest, np.inf))
    rhs = float(np.sum(kernel * cell_sum) / grid)
    if enforce and lhs > rhs * (1 + 1e-3):
        raise ToleranceViolation(f"Vinogradov inequality failed: {lhs} > {rhs}")
    return lhs, rhs
