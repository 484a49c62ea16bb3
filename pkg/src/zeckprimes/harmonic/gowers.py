"""Gowers uniformity norms of step functions on the torus."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ResourceLimitError
from ..golden import GArray, GoldenInt, PHI
from .stepfn import StepFn

MAX_EXACT_ARCS = 1200


def correlation_profile(f: StepFn) -> tuple[np.ndarray, np.ndarray]:
    """Kink positions and values of ``C(t) = int f(x) conj f(x+t) dx`` on [0, 1].

    ``C`` is continuous and piecewise linear.  Its second derivative is a sum of
    point masses ``-J_i conj(J_j)`` at ``t = b_j - b_i mod 1`` where ``J`` are the
    jumps of ``f`` at breakpoints ``b``.  Kink positions are grouped exactly.
    """
    n = len(f)
    if n > MAX_EXACT_ARCS:
        raise ResourceLimitError(f"exact U2 needs at most {MAX_EXACT_ARCS} arcs, got {n}")
    c0 = float(np.sum(np.abs(f.values) ** 2 * f.lengths))
    if n == 1:
        return np.array([0.0, 1.0]), np.array([c0, c0], dtype=complex)
    jumps = f.jumps
    slope0 = complex(np.sum(np.conj(jumps) * np.roll(f.values, 1)))
    i, j = np.nonzero(~np.eye(n, dtype=bool))
    diffs = GArray(f.breaks.a[j] - f.breaks.a[i], f.breaks.b[j] - f.breaks.b[i]).frac()
    weights = -jumps[i] * np.conj(jumps[j])
    keys, inverse = np.unique(np.stack([diffs.a, diffs.b], axis=1), axis=0, return_inverse=True)
    mass = np.bincount(inverse.ravel(), weights=weights.real, minlength=len(keys)) \
        + 1j * np.bincount(inverse.ravel(), weights=weights.imag, minlength=len(keys))
    where = GArray(keys[:, 0], keys[:, 1]).to_float()
    order = np.argsort(where)
    where, mass = where[order], mass[order]
    knots = np.concatenate([[0.0], where, [1.0]])
    slopes = slope0 + np.concatenate([[0.0], np.cumsum(mass)])
    values = c0 + np.concatenate([[0.0], np.cumsum(slopes * np.diff(knots))])
    return knots, values


def gowers_u2_power4(f: StepFn) -> float:
    """``||f||_{U^2}^4``, the integral of ``|C(t)|^2`` computed segment by segment."""
    knots, vals = correlation_profile(f)
    h = np.diff(knots)
    left, right = vals[:-1], vals[1:]
    seg = h * (np.abs(left) ** 2 + (left * np.conj(right)).real + np.abs(right) ** 2) / 3
    return float(max(np.sum(seg), 0.0))


def gowers_u2_exact(f: StepFn) -> float:
    return gowers_u2_power4(f) ** 0.25


def gowers_u2_fourier(f: StepFn, H: int = 1 << 12) -> tuple[float, float]:
    """``sum_{|h| <= H} |f^(h)|^4`` to the power 1/4 and a bound on the omitted tail.

    Since ``|f^(h)| <= V / (2 pi |h|)`` with ``V`` the total variation, the
    omitted part of the fourth-power sum is at most ``2 (V / 2 pi)^4 / (3 H^3)``.
    """
    coeffs = f.fourier(np.arange(-H, H + 1))
    power4 = float(np.sum(np.abs(coeffs) ** 4))
    tail = 2 * (f.total_variation() / (2 * math.pi)) ** 4 / (3 * H**3)
    return power4 ** 0.25, tail


def multiplicative_derivative(f: StepFn, shift: GoldenInt | int) -> StepFn:
    """``x -> f(x) conj f(x + shift)``."""
    return f.derivative_shift(shift)


def kronecker_offsets(count: int, seed: int = 0) -> list[GoldenInt]:
    """Exact points ``{(seed + j) phi}`` for j = 1..count, a low-discrepancy sequence."""
    return [((seed + j) * PHI).frac() for j in range(1, count + 1)]


def gowers_u3_samples(f: StepFn, samples: int = 256, seed: int = 0) -> np.ndarray:
    """``||Delta(f; z)||_{U^2}^4`` at each Kronecker offset ``z``."""
    if samples < 16:
        raise ValueError("samples must be at least 16")
    return np.array([gowers_u2_power4(multiplicative_derivative(f, z).simplify())
                     for z in kronecker_offsets(samples, seed)])


def _jackknife(vals: np.ndarray) -> np.ndarray:
    """Leave-one-out U3 estimates from per-offset samples."""
    n = len(vals)
    return np.maximum((vals.sum() - vals) / (n - 1), 0.0) ** 0.125


def _spread(thetas: np.ndarray) -> float:
    n = len(thetas)
    return math.sqrt((n - 1) / n * float(np.sum((thetas - thetas.mean()) ** 2)))


def gowers_u3_estimate(f: StepFn, samples: int = 256, seed: int = 0) -> tuple[float, float]:
    """Quasi-Monte Carlo estimate of ``||f||_{U^3}`` with a jackknife standard error.

    Uses ``||f||_{U^3}^8 = int ||Delta(f; z)||_{U^2}^4 dz``; the integrand is
    continuous in ``z`` and is sampled along a Kronecker sequence.
    """
    vals = gowers_u3_samples(f, samples, seed)
    return max(float(vals.mean()), 0.0) ** 0.125, _spread(_jackknife(vals))


def gowers_u3_drop(f: StepFn, g: StepFn, samples: int = 256, seed: int = 0) -> tuple[float, float]:
    """``U3(f) - U3(g)`` and its paired jackknife standard error.

    Both norms are sampled at the same offsets, so the pairing removes the
    shared sampling noise from the comparison.
    """
    return paired_drop(gowers_u3_samples(f, samples, seed), gowers_u3_samples(g, samples, seed))


def paired_drop(first: np.ndarray, second: np.ndarray) -> tuple[float, float]:
    """U3 difference and paired jackknife error from samples taken at the same offsets."""
    drop = max(float(first.mean()), 0.0) ** 0.125 - max(float(second.mean()), 0.0) ** 0.125
    return drop, _spread(_jackknife(first) - _jackknife(second))


def unimodular(f: StepFn, theta: float) -> StepFn:
    """``e(theta * f)``."""
    return f.map(lambda v: np.exp(2j * math.pi * theta * v))
