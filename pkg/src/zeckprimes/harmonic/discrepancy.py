"""Discrepancy of point sets on the torus and Erdos-Turan-Koksma bound shapes."""

from __future__ import annotations

import math

import numpy as np

from ..golden import PHI, multiples_of

PHI_F = (1 + math.sqrt(5)) / 2


def _sorted_unit(points) -> np.ndarray:
    x = np.sort(np.asarray(points, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("need at least one point")
    if x[0] < 0 or x[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    return x


def discrepancy_star_1d(points) -> float:
    """Star discrepancy ``sup_a |#{x_n < a}/N - a|`` from the sorted points."""
    x = _sorted_unit(points)
    i = np.arange(1, len(x) + 1) / len(x)
    return float(max(np.max(i - x), np.max(x - (i - 1 / len(x)))))


def discrepancy_1d(points) -> float:
    """Extreme discrepancy, the supremum over all subintervals of [0, 1)."""
    x = _sorted_unit(points)
    n = len(x)
    gap = np.arange(1, n + 1) / n - x
    return float(1 / n + np.max(gap) - np.min(gap))


def nphi_points(N: int, start: int = 1) -> np.ndarray:
    """Float positions of ``{n phi}`` for ``start <= n < start + N``, reduced exactly."""
    n = np.arange(start, start + N, dtype=np.int64)
    return multiples_of(PHI, n).frac().to_float()


def discrepancy_nalpha(N: int, start: int = 1) -> float:
    """Extreme discrepancy of ``({n phi})`` for ``start <= n < start + N``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return discrepancy_1d(nphi_points(N, start))


def bounded_quotient_bound(N: int, K: int = 1) -> float:
    """Upper bound for ``N * D_N`` when all partial quotients are at most ``K``."""
    return 3 + (1 / PHI_F + K / math.log(K + 1)) * math.log(N)


def _exp_sums(points: np.ndarray, H: int) -> np.ndarray:
    """``|N**-1 sum_n e(h x_n)|`` for h = 1..H."""
    out = np.empty(H)
    base = np.exp(2j * math.pi * points)
    cur = np.ones_like(base)
    for h in range(H):
        cur = cur * base
        out[h] = abs(cur.mean())
    return out


def etk_bound_1d(points, H: int) -> float:
    """``1/H + sum_{0<|h|<H} |h|**-1 |N**-1 sum e(h x_n)|`` with the constant set to 1."""
    if H < 1:
        raise ValueError("H must be at least 1")
    x = np.asarray(points, dtype=float).ravel()
    if H == 1:
        return 1.0
    sums = _exp_sums(x, H - 1)
    return 1 / H + 2 * float(np.sum(sums / np.arange(1, H)))


def etk_parallelotope_bound(points2d, H: int, edges) -> float:
    """Parallelotope bound shape in any dimension ``d``.

    ``1/H + sum_{0 < |h|_inf <= H} prod_i max(1, |h . w_i|)**-1 |N**-1 sum e(h . x_n)|``
    where ``w_i`` are the unit edge directions.
    """
    pts = np.atleast_2d(np.asarray(points2d, dtype=float))
    w = np.atleast_2d(np.asarray(edges, dtype=float))
    d = pts.shape[1]
    if H < 1:
        raise ValueError("H must be at least 1")
    if w.shape != (d, d):
        raise ValueError(f"need {d} edge vectors of dimension {d}")
    if not np.allclose(np.linalg.norm(w, axis=1), 1.0):
        raise ValueError("edges must be unit vectors")
    if abs(np.linalg.det(w)) < 1e-12:
        raise ValueError("edges must be linearly independent")
    freqs = np.arange(-H, H + 1)
    # per-coordinate characters, shape (d, 2H+1, N)
    chars = np.exp(2j * math.pi * freqs[None, :, None] * pts.T[:, None, :])
    grids = np.meshgrid(*([freqs] * d), indexing="ij")
    h = np.stack([g.ravel() for g in grids], axis=1)
    if d == 2:
        sums = np.abs(chars[0] @ chars[1].T / len(pts)).ravel()
    else:
        sums = np.array([abs(np.prod([chars[i, hi + H] for i, hi in enumerate(row)], axis=0).mean())
                         for row in h])
    weights = np.prod(1 / np.maximum(1.0, np.abs(h @ w.T)), axis=1)
    nonzero = np.any(h != 0, axis=1)
    return 1 / H + float(np.sum(weights[nonzero] * sums[nonzero]))


def koksma_check(f, points) -> tuple[float, float]:
    """``|mean f(x_n) - int f|`` against ``Var(f) * D*_N`` for a step function ``f``."""
    x = np.asarray(points, dtype=float).ravel()
    lhs = abs(complex(np.mean(f(x))) - f.integral())
    return lhs, f.total_variation() * discrepancy_star_1d(x)
