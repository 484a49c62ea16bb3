"""One-periodic step functions with exact breakpoints in Z[phi].

A :class:`StepFn` takes the value ``values[i]`` on the arc
``[breakpoints[i], breakpoints[i+1])`` (the last arc wraps around 1).
Breakpoints are exact, so operations that combine two functions (products,
rotations, correlations) line up arcs without rounding; only the final
numbers are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from ..detection import interval_for_lowdigits
from ..golden import GArray, GoldenInt, gfrac
from ..numeration import fib, sz

MAX_G_LAMBDA = 25


def _exact_order(points: GArray) -> np.ndarray:
    """Indices sorting exact points in [0, 1); ties are impossible after dedupe."""
    approx = points.to_float()
    order = np.argsort(approx, kind="stable")
    srt = points[order]
    if len(order) > 1:
        diff = (srt[1:] - srt[:-1]).sign()
        if np.any(diff <= 0):
            # floats could not separate some points; fall back to exact sorting
            items = [points.item(i) for i in range(len(points))]
            from functools import cmp_to_key
            order = np.array(sorted(range(len(items)), key=cmp_to_key(
                lambda i, j: (items[i] - items[j]).sign())), dtype=np.int64)
    return order


@dataclass(frozen=True)
class StepFn:
    """Piecewise-constant complex function on the torus."""

    breaks: GArray
    values: np.ndarray

    @classmethod
    def from_arcs(cls, breaks: Sequence[GoldenInt] | GArray, values: Sequence[complex]) -> StepFn:
        """Build from unsorted breakpoints (reduced mod 1) and their arc values."""
        if not isinstance(breaks, GArray):
            breaks = GArray(np.array([b.a for b in breaks], dtype=object),
                            np.array([b.b for b in breaks], dtype=object))
            if len(breaks) and max(abs(int(x)) for x in np.concatenate([breaks.a, breaks.b])) < 2**62:
                breaks = GArray(breaks.a.astype(np.int64), breaks.b.astype(np.int64))
        values = np.asarray(values, dtype=complex)
        if len(breaks) != len(values) or len(values) == 0:
            raise ValueError("need one value per breakpoint and at least one arc")
        breaks = breaks.frac()
        order = _exact_order(breaks)
        breaks, values = breaks[order], values[order]
        if len(values) > 1 and np.any((breaks[1:] - breaks[:-1]).sign() == 0):
            raise ValueError("breakpoints must be distinct modulo 1")
        return cls(breaks, values)

    @classmethod
    def constant(cls, c: complex) -> StepFn:
        return cls(GArray(np.zeros(1, dtype=np.int64)), np.array([c], dtype=complex))

    def __len__(self) -> int:
        return len(self.values)

    @cached_property
    def positions(self) -> np.ndarray:
        """Breakpoints as floats in [0, 1)."""
        return self.breaks.to_float()

    @cached_property
    def lengths(self) -> np.ndarray:
        """Arc lengths, computed exactly and then rounded."""
        if len(self) == 1:
            return np.ones(1)
        nxt = GArray(np.roll(self.breaks.a, -1), np.roll(self.breaks.b, -1))
        gaps = nxt - self.breaks
        out = gaps.to_float()
        out[-1] = (gaps[-1:] + 1).to_float()[0]
        return out

    @property
    def jumps(self) -> np.ndarray:
        """``value after - value before`` at each breakpoint."""
        return self.values - np.roll(self.values, 1)

    def __call__(self, x) -> np.ndarray:
        """Evaluate at float positions (right-continuous)."""
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        idx = np.searchsorted(self.positions, x, side="right") - 1
        return self.values[idx % len(self)]

    def value_at(self, x: GoldenInt) -> complex:
        """Exact evaluation at a point of Z[phi]."""
        point = GArray.const(gfrac(x), (1,))
        return complex(self.values[self._arc_of(point)[0]])

    def integral(self) -> complex:
        return complex(np.sum(self.values * self.lengths))

    def conj(self) -> StepFn:
        return StepFn(self.breaks, np.conj(self.values))

    def map(self, func) -> StepFn:
        return StepFn(self.breaks, np.asarray(func(self.values), dtype=complex))

    def rotate(self, offset: GoldenInt | int) -> StepFn:
        """The function ``x -> f(x + offset)``."""
        shifted = (self.breaks - GoldenInt.coerce(offset)).frac()
        return StepFn.from_arcs(shifted, self.values)

    def locate(self, points: GArray) -> np.ndarray:
        """Index of the arc containing each exact point of [0, 1)."""
        n = len(self)
        idx = np.searchsorted(self.positions, points.to_float(), side="right") - 1
        idx = np.clip(idx, 0, n - 1)
        for _ in range(4):
            cur = self.breaks[idx]
            too_far = (idx > 0) & ((cur - points).sign() > 0)
            nxt_idx = np.minimum(idx + 1, n - 1)
            step_up = (idx + 1 < n) & ((self.breaks[nxt_idx] - points).sign() <= 0)
            if not np.any(too_far) and not np.any(step_up):
                return idx
            idx = idx - too_far + step_up
            idx = np.clip(idx, 0, n - 1)
        raise ArithmeticError("exact arc location did not settle")

    def __mul__(self, other: StepFn) -> StepFn:
        """Pointwise product on the common refinement of both partitions."""
        pairs = np.unique(np.stack([
            np.concatenate([self.breaks.a, other.breaks.a]),
            np.concatenate([self.breaks.b, other.breaks.b])], axis=1), axis=0)
        merged = GArray(pairs[:, 0], pairs[:, 1])
        merged = merged[_exact_order(merged)]
        # points before the first break of a factor sit on its wrapped last arc
        vals = self.values[self._arc_of(merged)] * other.values[other._arc_of(merged)]
        return StepFn(merged, vals)

    def _arc_of(self, points: GArray) -> np.ndarray:
        before_first = (points - self.breaks.item(0)).sign() < 0
        idx = self.locate(points)
        return np.where(before_first, len(self) - 1, idx)

    def derivative_shift(self, z: GoldenInt | int) -> StepFn:
        """Multiplicative derivative ``x -> f(x) * conj(f(x + z))``."""
        return self * self.rotate(z).conj()

    def simplify(self) -> StepFn:
        """Drop breakpoints where the value does not change."""
        keep = np.abs(self.jumps) > 0
        if not np.any(keep):
            return StepFn.constant(self.values[0])
        return StepFn(self.breaks[np.flatnonzero(keep)], self.values[keep])

    def total_variation(self) -> float:
        """Sum of all jump sizes around the circle."""
        return float(np.sum(np.abs(self.jumps))) if len(self) > 1 else 0.0

    def fourier(self, h) -> np.ndarray:
        """Fourier coefficients ``int f(x) e(-h x) dx`` for integer array ``h``."""
        h = np.atleast_1d(np.asarray(h, dtype=np.int64))
        out = np.empty(h.shape, dtype=complex)
        zero = h == 0
        out[zero] = self.integral()
        nz = ~zero
        if np.any(nz):
            # sum over breakpoints of jump * e(-h b) / (2 pi i h)
            phase = np.exp(-2j * math.pi * np.outer(h[nz], self.positions))
            out[nz] = (phase @ self.jumps) / (2j * math.pi * h[nz])
        return out

    def correlation(self, t: GoldenInt | int) -> complex:
        """``integral f(x) conj(f(x + t)) dx`` from exact arc overlaps."""
        return (self * self.rotate(t).conj()).integral()


def build_g_lambda(lam: int) -> StepFn:
    """Step function with ``g(n*phi mod 1)`` equal to the truncated digit sum."""
    if not 2 <= lam <= MAX_G_LAMBDA:
        raise ValueError(f"lam must lie in [2, {MAX_G_LAMBDA}]")
    count = fib(lam)
    lefts = [interval_for_lowdigits(lam, u).left for u in range(count)]
    vals = [sz(u) for u in range(count)]
    breaks = GArray(np.array([p.a for p in lefts], dtype=np.int64),
                    np.array([p.b for p in lefts], dtype=np.int64))
    return StepFn.from_arcs(breaks, vals)
