"""Vaaler's trigonometric approximation of interval indicators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrigPoly:
    """``sum_{|h| <= H} coeffs[h + H] e(h x)``."""

    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def coefficient(self, h: int) -> complex:
        H = self.degree
        return complex(self.coeffs[h + H]) if abs(h) <= H else 0j

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        H = self.degree
        h = np.arange(-H, H + 1)
        vals = np.exp(2j * math.pi * np.multiply.outer(x, h)) @ self.coeffs
        return vals.real


def _vaaler_weight(u: np.ndarray) -> np.ndarray:
    """``J(u) = pi u (1 - u) cot(pi u) + u`` on (0, 1)."""
    return math.pi * u * (1 - u) / np.tan(math.pi * u) + u


def vaaler(interval: tuple[float, float], H: int) -> tuple[TrigPoly, TrigPoly]:
    """Polynomials ``A, B`` of degree ``H`` with ``|chi_I - A| <= B`` everywhere.

    ``A`` smooths ``chi_I = l + psi(x - beta) - psi(x - alpha)`` by replacing the
    sawtooth ``psi`` with Vaaler's polynomial; ``B`` is the matching Fejer-kernel
    envelope at both endpoints.  Endpoint values of ``chi_I`` are taken as 1/2.
    """
    alpha, beta = map(float, interval)
    length = beta - alpha
    if not 0 < length < 1:
        raise ValueError("interval length must lie strictly between 0 and 1")
    if H < 1:
        raise ValueError("H must be at least 1")
    h = np.arange(-H, H + 1)
    nz = h != 0
    weight = np.zeros(len(h))
    weight[nz] = _vaaler_weight(np.abs(h[nz]) / (H + 1))
    a = np.zeros(len(h), dtype=complex)
    a[H] = length
    # psi*(x) = -sum J(|h|/(H+1)) e(hx) / (2 pi i h)
    sawtooth = np.zeros(len(h), dtype=complex)
    sawtooth[nz] = -weight[nz] / (2j * math.pi * h[nz])
    a[nz] = sawtooth[nz] * (np.exp(-2j * math.pi * h[nz] * beta) - np.exp(-2j * math.pi * h[nz] * alpha))
    fejer = (1 - np.abs(h) / (H + 1)) / (2 * H + 2)
    b = fejer * (np.exp(-2j * math.pi * h * alpha) + np.exp(-2j * math.pi * h * beta))
    return TrigPoly(a), TrigPoly(b)


def indicator(interval: tuple[float, float], x) -> np.ndarray:
    """Normalised indicator of the arc ``[alpha, beta]`` mod 1, with 1/2 at endpoints."""
    alpha, beta = interval
    x = np.asarray(x, dtype=float)
    rel = np.mod(x - alpha, 1.0)
    length = beta - alpha
    out = (rel < length).astype(float)
    out[(rel == 0) | (rel == length)] = 0.5
    return out


def coefficient_bounds_hold(A: TrigPoly, B: TrigPoly, length: float) -> bool:
    H = A.degree
    h = np.arange(-H, H + 1)
    nz = h != 0
    tol = 1e-12
    ok_a0 = abs(A.coefficient(0) - length) <= tol
    bound = np.minimum(length, 1 / (math.pi * np.abs(h[nz])))
    ok_a = bool(np.all(np.abs(A.coeffs[nz]) <= bound + tol))
    ok_b = bool(np.all(np.abs(B.coeffs) <= 1 / (H + 1) + tol))
    return ok_a0 and ok_a and ok_b


def envelope_violation(interval: tuple[float, float], H: int, grid: int = 10_000) -> float:
    """``max(|chi_I - A| - B)`` on a uniform grid; nonpositive means the envelope holds."""
    A, B = vaaler(interval, H)
    x = (np.arange(grid) + 0.5) / grid
    return float(np.max(np.abs(indicator(interval, x) - A(x)) - B(x)))
