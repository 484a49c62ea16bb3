"""Reading Zeckendorf digits off the torus.

The lowest digits of ``n`` are determined by where ``n*phi`` falls modulo 1
(one interval per digit pattern), and any window of digits by where the
point ``(n / phi**b, n / phi**(b+1))`` falls modulo Z^2 (one parallelogram
per pattern).  All membership decisions are exact: coordinates are elements
of Z[phi] and every comparison is a sign test in that ring.  Floating point
is only used to propose candidates, which are then verified exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .golden import (
    ONE, PHI, ZERO, GArray, GoldenInt, QPhi, gfrac, gsign, multiples_of,
    phi_pow, to_float,
)
from .numeration import digits_array, fib

INV_PHI = GoldenInt(-1, 1)  # 1/phi = phi - 1


@dataclass(frozen=True)
class WrappedInterval:
    """The set ``(left, right) + Z`` with exact endpoints in Z[phi]."""

    left: GoldenInt
    right: GoldenInt
    left_open: bool = True
    right_open: bool = True

    def __post_init__(self) -> None:
        length = self.length
        if gsign(length) <= 0 or gsign(ONE - length) < 0:
            raise ValueError("interval length must lie in (0, 1]")

    @property
    def length(self) -> GoldenInt:
        return self.right - self.left

    def contains(self, x: GoldenInt | int) -> bool:
        d = gfrac(GoldenInt.coerce(x) - self.left)
        s_left, s_right = gsign(d), gsign(self.length - d)
        ok_left = s_left > 0 or (s_left == 0 and not self.left_open)
        ok_right = s_right > 0 or (s_right == 0 and not self.right_open)
        return ok_left and ok_right

    def contains_array(self, x: GArray) -> np.ndarray:
        d = (x - self.left).frac()
        s_left = d.sign()
        s_right = (GArray.const(self.length, d.shape) - d).sign()
        ok_left = s_left > 0 if self.left_open else s_left >= 0
        ok_right = s_right > 0 if self.right_open else s_right >= 0
        return ok_left & ok_right


def _check_u(lam: int, u: int) -> None:
    if lam < 2:
        raise ValueError("lam must be at least 2")
    if not 0 <= u < fib(lam):
        raise ValueError(f"u must lie in [0, F_{lam}) = [0, {fib(lam)})")


def interval_for_lowdigits(lam: int, u: int) -> WrappedInterval:
    """The open interval of ``n*phi mod 1`` on which ``v(n, lam) == u``."""
    _check_u(lam, u)
    deep = -lam + 1 if u < fib(lam - 1) else -lam - 1
    lo, hi = -phi_pow(deep), phi_pow(-lam)
    if lam % 2:
        lo, hi = -hi, -lo
    centre = GoldenInt(0, u)
    return WrappedInterval(centre + lo, centre + hi)


@lru_cache(maxsize=64)
def _lowdigit_table(lam: int):
    """Intervals for every u, sorted by left endpoint mod 1 (float hint)."""
    intervals = [interval_for_lowdigits(lam, u) for u in range(fib(lam))]
    lefts = np.array([float(gfrac(iv.left)) for iv in intervals])
    order = np.argsort(lefts, kind="stable")
    return intervals, lefts[order], order


def detect_lowdigits(n: int, lam: int) -> int:
    """The unique ``u`` with ``n*phi`` in ``interval_for_lowdigits(lam, u)``."""
    return int(detect_lowdigits_array(np.array([n]), lam)[0])


def detect_lowdigits_array(n, lam: int) -> np.ndarray:
    """Vectorised :func:`detect_lowdigits`; exact for every element."""
    n = np.asarray(n, dtype=np.int64)
    intervals, lefts, order = _lowdigit_table(lam)
    pts = multiples_of(PHI, n).frac()
    approx = pts.to_float()
    m = len(lefts)
    hint = np.searchsorted(lefts, approx, side="right") - 1
    result = np.full(n.shape, -1, dtype=np.int64)
    for offset in (0, -1, 1, -2, 2):
        todo = np.flatnonzero(result < 0)
        if todo.size == 0:
            break
        slot = (hint[todo] + offset) % m
        for s in np.unique(slot):
            sel = todo[slot == s]
            u = int(order[s])
            hit = intervals[u].contains_array(pts[sel])
            result[sel[hit]] = u
    for i in np.flatnonzero(result < 0):
        # unreachable unless the hint was far off; scan everything exactly
        p = pts.item(i)
        matches = [u for u, iv in enumerate(intervals) if iv.contains(p)]
        if len(matches) != 1:
            raise AssertionError(f"n={n[i]} lies in {len(matches)} intervals for lam={lam}")
        result[i] = matches[0]
    return result


def max_gap_of_multiples(lam: int) -> GoldenInt:
    """Largest circular gap between the points ``u*phi mod 1``, ``u < F_lam``."""
    pts = [gfrac(GoldenInt(0, u)) for u in range(fib(lam))]
    pts.sort(key=lambda p: to_float(p))
    gaps = [pts[i + 1] - pts[i] for i in range(len(pts) - 1)]
    gaps.append(pts[0] + 1 - pts[-1])
    return max(gaps)


# --------------------------------------------------------------------------
# two-dimensional regions


@dataclass(frozen=True)
class LinearConstraint:
    """``lo <= cx*x + cy*y <= hi`` with per-side openness."""

    cx: GoldenInt
    cy: GoldenInt
    lo: GoldenInt
    hi: GoldenInt
    lo_closed: bool = True
    hi_closed: bool = False

    def evaluate(self, x, y):
        return x * self.cx + y * self.cy

    def holds(self, value: GoldenInt) -> bool:
        s_lo, s_hi = gsign(value - self.lo), gsign(self.hi - value)
        ok_lo = s_lo > 0 or (s_lo == 0 and self.lo_closed)
        ok_hi = s_hi > 0 or (s_hi == 0 and self.hi_closed)
        return ok_lo and ok_hi

    def holds_array(self, value: GArray) -> np.ndarray:
        s_lo = (value - self.lo).sign()
        s_hi = (GArray.const(self.hi, value.shape) - value).sign()
        ok_lo = s_lo >= 0 if self.lo_closed else s_lo > 0
        ok_hi = s_hi >= 0 if self.hi_closed else s_hi > 0
        return ok_lo & ok_hi


@dataclass(frozen=True)
class Parallelogram:
    """Intersection of two strips; membership is tested modulo Z^2."""

    first: LinearConstraint
    second: LinearConstraint

    def __post_init__(self) -> None:
        if self.determinant == ZERO:
            raise ValueError("constraints are parallel")
        for c in (self.first, self.second):
            if gsign(c.hi - c.lo) <= 0:
                raise ValueError("empty strip")

    @property
    def determinant(self) -> GoldenInt:
        return self.first.cx * self.second.cy - self.first.cy * self.second.cx

    def area(self) -> QPhi:
        widths = (self.first.hi - self.first.lo) * (self.second.hi - self.second.lo)
        det = self.determinant
        if gsign(det) < 0:
            det = -det
        return QPhi.coerce(widths) / det

    def vertices(self) -> np.ndarray:
        """Corner coordinates in floating point (for plotting and shift search)."""
        mat = np.array([[float(self.first.cx), float(self.first.cy)],
                        [float(self.second.cx), float(self.second.cy)]])
        out = []
        for s in (self.first.lo, self.first.hi):
            for t in (self.second.lo, self.second.hi):
                out.append(np.linalg.solve(mat, [float(s), float(t)]))
        return np.array(out)

    def _shifts(self) -> list[tuple[int, int]]:
        # integer k with (q + k) able to reach the region for some q in [0,1)^2
        v = self.vertices()
        lo, hi = v.min(axis=0), v.max(axis=0)
        k1 = range(math.floor(lo[0]) - 1, math.floor(hi[0]) + 1)
        k2 = range(math.floor(lo[1]) - 1, math.floor(hi[1]) + 1)
        return list(itertools.product(k1, k2))

    def contains(self, x: GoldenInt | int, y: GoldenInt | int) -> bool:
        """Exact test whether ``(x, y) + Z^2`` meets the region."""
        x, y = gfrac(x), gfrac(y)
        return any(
            self.first.holds(self.first.evaluate(x + k1, y + k2))
            and self.second.holds(self.second.evaluate(x + k1, y + k2))
            for k1, k2 in self._shifts()
        )

    def contains_array(self, x: GArray, y: GArray) -> np.ndarray:
        x, y = x.frac(), y.frac()
        hit = np.zeros(x.shape, dtype=bool)
        for k1, k2 in self._shifts():
            xs, ys = x + k1, y + k2
            ok = self.first.holds_array(self.first.evaluate(xs, ys))
            ok &= self.second.holds_array(self.second.evaluate(xs, ys))
            hit |= ok
        return hit


def _window_region(b: int, low: int, width: int, alpha: GoldenInt) -> Parallelogram:
    return Parallelogram(
        LinearConstraint(GoldenInt(fib(b + 1)), GoldenInt(fib(b)), GoldenInt(low), GoldenInt(low + width)),
        LinearConstraint(-INV_PHI, ONE, alpha, ONE),
    )


def detection_point(n, b: int) -> tuple[GArray, GArray]:
    """``(n / phi**b, n / phi**(b+1))`` modulo 1 for an integer array ``n``."""
    n = np.asarray(n, dtype=np.int64)
    return multiples_of(phi_pow(-b), n).frac(), multiples_of(phi_pow(-b - 1), n).frac()


def parallelogram_B(lam: int, u: int) -> Parallelogram:
    """Region of ``detection_point(n, lam)`` on which ``v(n, lam) == u``."""
    _check_u(lam, u)
    alpha = -PHI if u < fib(lam - 1) else -INV_PHI
    return _window_region(lam, u, 1, alpha)


def detect_via_B_array(n, lam: int) -> np.ndarray:
    """Exact ``v(n, lam)`` recovered from the two-dimensional point.

    Solves the first constraint for ``u`` under each lattice shift and keeps
    the shift whose second constraint matches the case split on ``u``.
    """
    if lam < 2:
        raise ValueError("lam must be at least 2")
    n = np.asarray(n, dtype=np.int64)
    x, y = detection_point(n, lam)
    f_lam, f_lam1, f_prev = fib(lam), fib(lam + 1), fib(lam - 1)
    # union of all B_lam(u): 0 <= L1 < F_lam and -phi <= L2 < 1
    hull = _window_region(lam, 0, f_lam, -PHI)
    result = np.full(n.shape, -1, dtype=np.int64)
    count = np.zeros(n.shape, dtype=np.int64)
    for k1, k2 in hull._shifts():
        xs, ys = x + k1, y + k2
        l1 = xs * GoldenInt(f_lam1) + ys * GoldenInt(f_lam)
        u = l1.floor()
        ok = (u >= 0) & (u < f_lam)
        l2 = ys - xs * INV_PHI
        big_alpha = np.asarray(u >= f_prev)
        s_hi = (GArray.const(ONE, n.shape) - l2).sign() > 0
        s_lo_wide = (l2 + PHI).sign() >= 0
        s_lo_narrow = (l2 + INV_PHI).sign() >= 0
        ok &= s_hi & np.where(big_alpha, s_lo_narrow, s_lo_wide)
        result[ok] = np.asarray(u, dtype=np.int64)[ok]
        count += ok
    if np.any(count != 1):
        bad = int(np.flatnonzero(count != 1)[0])
        raise AssertionError(f"n={n[bad]} matched {count[bad]} parallelograms for lam={lam}")
    return result


def detect_via_B(n: int, lam: int) -> int:
    return int(detect_via_B_array(np.array([n]), lam)[0])


def _check_pattern(a: int, b: int, nu: Sequence[int]) -> tuple[int, ...]:
    nu = tuple(int(t) for t in nu)
    if not 2 <= a < b:
        raise ValueError("need 2 <= a < b")
    if len(nu) != b - a or any(t not in (0, 1) for t in nu):
        raise ValueError("nu must be a 0/1 sequence of length b - a")
    if any(nu[i] and nu[i + 1] for i in range(len(nu) - 1)):
        raise ValueError("nu must not contain adjacent ones")
    return nu


def block_parallelogram(a: int, b: int, nu: Sequence[int]) -> Parallelogram:
    """Region on which the digits at indices ``a..b-1`` equal ``nu``."""
    nu = _check_pattern(a, b, nu)
    low = sum(fib(a + i) for i, t in enumerate(nu) if t)
    width = fib(a - 1) if nu[0] else fib(a)
    alpha = -INV_PHI if nu[-1] else -PHI
    return _window_region(b, low, width, alpha)


def detect_block_array(n, a: int, b: int, nu: Sequence[int]) -> np.ndarray:
    region = block_parallelogram(a, b, nu)
    return region.contains_array(*detection_point(n, b))


def detect_block(n: int, a: int, b: int, nu: Sequence[int]) -> bool:
    return bool(detect_block_array(np.array([n]), a, b, nu)[0])


def block_matches_directly(n, a: int, b: int, nu: Sequence[int]) -> np.ndarray:
    """Reference: compare the digits themselves."""
    nu = _check_pattern(a, b, nu)
    digs = digits_array(n, range(a, b))
    ok = np.ones(np.shape(n), dtype=bool)
    for i, t in enumerate(nu):
        ok &= digs[a + i] == t
    return ok


# --------------------------------------------------------------------------
# single digits by a fixed tiling

_TILE_ONE = Parallelogram(
    LinearConstraint(PHI, ONE, ONE, PHI, lo_closed=True, hi_closed=True),
    LinearConstraint(ONE, -PHI, -INV_PHI, ONE, lo_closed=True, hi_closed=True),
)


def tile_one() -> Parallelogram:
    """The rectangle whose translates mark digit 1 (boundary included)."""
    return _TILE_ONE


def tiling_areas() -> tuple[QPhi, QPhi]:
    one = _TILE_ONE.area()
    return QPhi(1) - one, one


def tiling_classify(x1, x2) -> int:
    return int(_TILE_ONE.contains(x1, x2))


def tiling_point(n, k: int) -> tuple[GArray, GArray]:
    """Point whose position in the tiling approximates the digit at index k."""
    return detection_point(n, k)


def tiling_classify_array(n, k: int) -> np.ndarray:
    return _TILE_ONE.contains_array(*tiling_point(n, k)).astype(np.uint8)


def tiling_error_rate(k: int, N: int) -> float:
    """Fraction of ``n < N`` whose tiling class differs from the digit at k."""
    if k < 2 or N < 1:
        raise ValueError("need k >= 2 and N >= 1")
    n = np.arange(N, dtype=np.int64)
    guess = tiling_classify_array(n, k)
    actual = digits_array(n, [k])[k]
    return float(np.count_nonzero(guess != actual)) / N
