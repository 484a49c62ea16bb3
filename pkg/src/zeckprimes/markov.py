"""The two-state Markov chain that models Zeckendorf digits.

State 1 (a digit one) is always followed by 0; state 0 is followed by 1
with probability ``phi**-2``.  All chain data is exact in Q(phi); floats
appear only where a complex argument is involved.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .golden import QPhi
from .numeration import MAX_INT64_INDEX, digits_array, fib

PHI_Q = QPhi(0, 1)
PHI_F = (1 + math.sqrt(5)) / 2
LOG_PHI = math.log(PHI_F)

Matrix = tuple[tuple[QPhi, QPhi], tuple[QPhi, QPhi]]


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    return tuple(
        tuple(x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2)) for i in range(2)
    )  # type: ignore[return-value]


def _matpow(m: Matrix, k: int) -> Matrix:
    result: Matrix = ((QPhi(1), QPhi(0)), (QPhi(0), QPhi(1)))
    while k:
        if k & 1:
            result = _matmul(result, m)
        m = _matmul(m, m)
        k >>= 1
    return result


@dataclass(frozen=True)
class MarkovDigitModel:
    """Transition matrix, stationary law and digit moments, all exact."""

    transition: Matrix = field(init=False)
    stationary: tuple[QPhi, QPhi] = field(init=False)

    def __post_init__(self) -> None:
        inv = PHI_Q.inverse()
        object.__setattr__(self, "transition", ((inv, inv * inv), (QPhi(1), QPhi(0))))
        denom = PHI_Q * PHI_Q + 1
        object.__setattr__(self, "stationary", (PHI_Q * PHI_Q / denom, QPhi(1) / denom))

    @property
    def mean(self) -> QPhi:
        """Per-digit mean ``1 / (phi**2 + 1)``."""
        return self.stationary[1]

    @property
    def variance(self) -> QPhi:
        """Asymptotic per-digit variance ``phi**3 / (phi**2 + 1)**3``."""
        return PHI_Q**3 / (PHI_Q * PHI_Q + 1) ** 3

    def step_power(self, k: int) -> Matrix:
        return _matpow(self.transition, k)


MODEL = MarkovDigitModel()
MU = float(MODEL.mean)
SIGMA2 = float(MODEL.variance)


def eigenvalues(v: complex) -> tuple[complex, complex]:
    root = cmath.sqrt(1 + 4 * v)
    return (1 + root) / (2 * PHI_F), (1 - root) / (2 * PHI_F)


def pgf_Sn(v: complex, n: int) -> complex:
    """``E v**S_n`` for ``S_n = Z_1 + ... + Z_n`` under the stationary chain."""
    if n < 1:
        raise ValueError("n must be at least 1")
    lam1, lam2 = eigenvalues(v)
    first = (PHI_F**2 + v) / (PHI_F**2 + 1)  # E v**S_1
    if abs(lam1 - lam2) < 1e-7:
        return _pgf_by_matrix(v, n)
    a = (first - lam2) / (lam1 - lam2)
    b = (first - lam1) / (lam2 - lam1)
    return a * lam1**n + b * lam2**n


def _pgf_by_matrix(v: complex, n: int) -> complex:
    row = np.array([PHI_F**2, v]) / (PHI_F**2 + 1)
    m = np.array([[1 / PHI_F, v / PHI_F**2], [1, 0]], dtype=complex)
    return complex(row @ np.linalg.matrix_power(m, n - 1) @ np.ones(2))


def distribution_Sn(n: int) -> list[QPhi]:
    """Exact law of ``S_n``: entry ``s`` is ``Pr[S_n = s]``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    (p00, p01), (p10, _) = MODEL.transition
    # by_state[z][s] = Pr[Z_n = z, S_n = s]
    zero = [MODEL.stationary[0]]
    one = [QPhi(0), MODEL.stationary[1]]
    for _ in range(n - 1):
        new_zero = [QPhi(0)] * (len(one) + 1)
        new_one = [QPhi(0)] * (len(one) + 1)
        for s, p in enumerate(zero):
            new_zero[s] = new_zero[s] + p * p00
            new_one[s + 1] = new_one[s + 1] + p * p01
        for s, p in enumerate(one):
            new_zero[s] = new_zero[s] + p * p10
        zero, one = new_zero, new_one
    size = max(len(zero), len(one))
    return [(zero[s] if s < len(zero) else QPhi(0)) + (one[s] if s < len(one) else QPhi(0))
            for s in range(size)]


def mean_var_Sn(n: int) -> tuple[QPhi, QPhi]:
    """Exact mean and variance of ``S_n`` from the closed form."""
    if n < 1:
        raise ValueError("n must be at least 1")
    mean = MODEL.mean * n
    decay = (-(PHI_Q.inverse() ** 2)) ** n
    var = MODEL.variance * n + QPhi(Fraction(2, 25)) - QPhi(Fraction(2, 25)) * decay
    return mean, var


def joint_prob(positions: Sequence[int], values: Sequence[int]) -> QPhi:
    """``Pr[Z_{k_1} = v_1, ..., Z_{k_d} = v_d]`` under the stationary chain."""
    if len(positions) != len(values) or not positions:
        raise ValueError("positions and values must be nonempty and of equal length")
    if any(b not in (0, 1) for b in values):
        raise ValueError("values must be bits")
    if any(q <= p for p, q in zip(positions, positions[1:])):
        raise ValueError("positions must be strictly increasing")
    prob = MODEL.stationary[values[0]]
    for (p, q), (b0, b1) in zip(zip(positions, positions[1:]), zip(values, values[1:])):
        prob = prob * MODEL.step_power(q - p)[b0][b1]
    return prob


def exact_digit_prob(length: int, k: int, b: int) -> Fraction:
    """Share of integers with highest digit index ``length`` whose digit k is b."""
    if not 2 <= k <= length:
        raise ValueError("need 2 <= k <= length")
    if b not in (0, 1):
        raise ValueError("b must be 0 or 1")

    def f(j: int) -> int:
        return 1 if j == -1 else fib(j)  # F_{-1} = 1 continues the recurrence

    total = fib(length - 1)
    if b == 0:
        return Fraction(f(k) * f(length - k), total)
    return Fraction(f(k - 1) * f(length - k - 1), total)


def sample_paths(n: int, count: int, seed: int) -> np.ndarray:
    """``count`` chain paths ``Z_0 .. Z_{n-1}`` as a (count, n) uint8 array."""
    if n < 1 or count < 1:
        raise ValueError("need n >= 1 and count >= 1")
    rng = np.random.default_rng(seed)
    out = np.empty((count, n), dtype=np.uint8)
    out[:, 0] = rng.random(count) < MU
    p01 = PHI_F**-2
    for j in range(1, n):
        step = rng.random(count) < p01
        out[:, j] = np.where(out[:, j - 1] == 1, 0, step)
    return out


def sample_path(n: int, seed: int) -> np.ndarray:
    return sample_paths(n, 1, seed)[0]


def _check_positions(x: int, positions: Sequence[int], values: Sequence[int]) -> None:
    if x < 2:
        raise ValueError("x must be at least 2")
    if len(positions) != len(values) or not positions:
        raise ValueError("positions and values must be nonempty and of equal length")
    top = math.log(x) / LOG_PHI
    if min(positions) < 2 or max(positions) > top or max(positions) > MAX_INT64_INDEX:
        raise ValueError(f"positions must lie in [2, {top:.2f}]")


def _pattern_count(n: np.ndarray, positions: Sequence[int], values: Sequence[int]) -> int:
    digs = digits_array(n, positions)
    hit = np.ones(n.shape, dtype=bool)
    for k, b in zip(positions, values):
        hit &= digs[k] == b
    return int(np.count_nonzero(hit))


def empirical_joint_integers(x: int, positions: Sequence[int], values: Sequence[int],
                             chunk: int = 1 << 21) -> float:
    """Frequency of the digit pattern among ``0 <= n < x``."""
    _check_positions(x, positions, values)
    hits = 0
    for start in range(0, x, chunk):
        hits += _pattern_count(np.arange(start, min(start + chunk, x), dtype=np.int64), positions, values)
    return hits / x


def empirical_joint_primes(x: int, positions: Sequence[int], values: Sequence[int],
                           threads: int = 1) -> float:
    """Frequency of the digit pattern among primes ``p <= x``."""
    from .primes import map_prime_segments

    _check_positions(x, positions, values)
    parts = map_prime_segments(x, lambda p: (_pattern_count(p, positions, values), len(p)), threads)
    hits = sum(h for h, _ in parts)
    total = sum(c for _, c in parts)
    return hits / total


def char_fn_model(t: float, length: int) -> complex:
    """Characteristic function of ``(S_L - L mu) / sqrt(L sigma^2)`` at ``t``."""
    if length < 1:
        raise ValueError("length must be at least 1")
    scale = math.sqrt(length * SIGMA2)
    v = cmath.exp(1j * t / scale)
    return pgf_Sn(v, length) * cmath.exp(-1j * t * length * MU / scale)


def centred_moment(n: int, d: int) -> float:
    """``E Y**d`` with ``Y = (S_n - n mu) / sqrt(n sigma^2)``, from the exact law."""
    dist = [float(p) for p in distribution_Sn(n)]
    scale = math.sqrt(n * SIGMA2)
    return sum(p * ((s - n * MU) / scale) ** d for s, p in enumerate(dist))
