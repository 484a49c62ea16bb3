"""Exact arithmetic in the ring Z[phi] and the field Q(phi).

``GoldenInt(a, b)`` is the real number ``a + b*phi`` with integer
coefficients, ``phi = (1 + sqrt 5) / 2``.  Every comparison goes through
:func:`gsign`, which decides the sign of ``a + b*phi`` with integer
arithmetic only.  ``QPhi`` is the same thing with rational coefficients and
is used wherever a division by a non-unit (e.g. ``phi**2 + 1``) is needed.

``GArray`` is a vectorised companion used by the detection code: two
integer numpy arrays holding many elements of Z[phi] at once.  Its sign
test evaluates in floating point with a rigorous error bound and falls back
to exact integer arithmetic for every element the bound cannot decide, so
its answers are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

import numpy as np

PHI_FLOAT = (1.0 + math.sqrt(5.0)) / 2.0

IntLike = Union[int, "GoldenInt"]


def _sign_exact(a: int, b: int) -> int:
    # a + b*phi = ((2a + b) + b*sqrt5) / 2
    p = 2 * a + b
    if p >= 0 and b >= 0:
        return 0 if (p == 0 and b == 0) else 1
    if p <= 0 and b <= 0:
        return -1
    d = p * p - 5 * b * b
    # d != 0 because sqrt5 is irrational and b != 0 here
    if p > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1


def _floor_b_phi(b: int) -> int:
    """Exact floor(b*phi) for an integer b."""
    if b == 0:
        return 0
    if b > 0:
        m = math.isqrt(5 * b * b)
        return (b + m) // 2
    return -_floor_b_phi(-b) - 1


@total_ordering
@dataclass(frozen=True)
class GoldenInt:
    """The element ``a + b*phi`` of Z[phi]."""

    a: int = 0
    b: int = 0

    @staticmethod
    def coerce(x: IntLike) -> GoldenInt:
        if isinstance(x, GoldenInt):
            return x
        if isinstance(x, (int, np.integer)):
            return GoldenInt(int(x), 0)
        raise TypeError(f"cannot interpret {x!r} as an element of Z[phi]")

    def __add__(self, other: IntLike) -> GoldenInt:
        o = GoldenInt.coerce(other)
        return GoldenInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> GoldenInt:
        o = GoldenInt.coerce(other)
        return GoldenInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: IntLike) -> GoldenInt:
        return GoldenInt.coerce(other) - self

    def __neg__(self) -> GoldenInt:
        return GoldenInt(-self.a, -self.b)

    def __mul__(self, other: IntLike) -> GoldenInt:
        o = GoldenInt.coerce(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        return GoldenInt(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> GoldenInt:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GoldenInt(1, 0), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> GoldenInt:
        """Galois conjugate: phi -> 1 - phi."""
        return GoldenInt(self.a + self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse(self) -> GoldenInt:
        n = self.norm()
        if abs(n) != 1:
            raise ZeroDivisionError(f"{self} is not a unit of Z[phi]")
        c = self.conjugate()
        return GoldenInt(c.a * n, c.b * n)

    def sign(self) -> int:
        return _sign_exact(self.a, self.b)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, np.integer)):
            return self.b == 0 and self.a == int(other)
        if isinstance(other, GoldenInt):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other: IntLike) -> bool:
        return (self - GoldenInt.coerce(other)).sign() < 0

    def __floor__(self) -> int:
        return self.a + _floor_b_phi(self.b)

    def frac(self) -> GoldenInt:
        return self - math.floor(self)

    def __float__(self) -> float:
        return to_float(self, 53)

    def __repr__(self) -> str:
        return f"GoldenInt({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{self.b:+d}*phi"


PHI = GoldenInt(0, 1)
ONE = GoldenInt(1, 0)
ZERO = GoldenInt(0, 0)


def gadd(x: IntLike, y: IntLike) -> GoldenInt:
    return GoldenInt.coerce(x) + y


def gmul(x: IntLike, y: IntLike) -> GoldenInt:
    """Product via (a + b phi)(c + d phi) = (ac + bd) + (ad + bc + bd) phi."""
    return GoldenInt.coerce(x) * y


def gneg(x: IntLike) -> GoldenInt:
    return -GoldenInt.coerce(x)


def gsign(x: IntLike) -> int:
    """Exact sign of ``a + b*phi`` in {-1, 0, 1}."""
    x = GoldenInt.coerce(x)
    return _sign_exact(x.a, x.b)


def gnorm(x: IntLike) -> int:
    """Field norm ``a**2 + a*b - b**2``; zero only for x = 0."""
    return GoldenInt.coerce(x).norm()


def _fib_pair(k: int) -> tuple[int, int]:
    # (F_k, F_{k+1}) by fast doubling, k >= 0
    if k == 0:
        return 0, 1
    f, g = _fib_pair(k >> 1)
    c = f * (2 * g - f)
    d = f * f + g * g
    if k & 1:
        return d, c + d
    return c, d


def phi_pow(k: int) -> GoldenInt:
    """Exact ``phi**k`` for any integer k.

    For k >= 0 this is ``F_k*phi + F_{k-1}``; negative powers use
    ``phi**-1 = phi - 1``, i.e. ``phi**-k = (-1)**k (F_{k+1} - F_k*phi)``.
    """
    if k >= 0:
        if k == 0:
            return ONE
        fk, fk1 = _fib_pair(k)
        return GoldenInt(fk1 - fk, fk)
    m = -k
    fm, fm1 = _fib_pair(m)
    s = -1 if m & 1 else 1
    return GoldenInt(s * fm1, -s * fm)


def gfloor(x: IntLike) -> int:
    return math.floor(GoldenInt.coerce(x))


def gfrac(x: IntLike) -> GoldenInt:
    """``x - floor(x)``, an exact element of Z[phi] in [0, 1)."""
    return GoldenInt.coerce(x).frac()


def to_float(x: Union[IntLike, "QPhi"], bits: int = 53) -> float | Fraction:
    """Approximate ``x`` with relative error below ``2**(1 - bits)``.

    Returns a float for ``bits <= 53`` and a :class:`~fractions.Fraction`
    otherwise.  Only ever used for reporting.
    """
    if bits < 24:
        raise ValueError("bits must be at least 24")
    if isinstance(x, QPhi):
        # a + b phi with rational coefficients: scale to a common denominator
        den = x.a.denominator * x.b.denominator // math.gcd(x.a.denominator, x.b.denominator)
        num = GoldenInt(int(x.a * den), int(x.b * den))
        val = to_float(num, max(bits, 64) + 8)
        out = Fraction(val) / den
        return float(out) if bits <= 53 else out
    x = GoldenInt.coerce(x)
    if x.b == 0:
        return float(x.a) if bits <= 53 else Fraction(x.a)
    if x.sign() == 0:
        return 0.0 if bits <= 53 else Fraction(0)
    p, b = 2 * x.a + x.b, x.b
    if (p >= 0) == (b > 0):
        # no cancellation: ((2a + b) + b sqrt5) / 2
        approx = _approx_sum(p, b, bits + 16)
    else:
        # cancellation: use x = N(x) / x' with x' = ((2a + b) - b sqrt5) / 2
        approx = Fraction(x.norm()) / _approx_sum(p, -b, bits + 16)
    return float(approx) if bits <= 53 else approx


def _approx_sum(p: int, b: int, prec: int) -> Fraction:
    # (p + b*sqrt5)/2 where p and b share a sign; relative error ~ 2**-prec
    mag = max(abs(p), abs(b), 1).bit_length()
    shift = prec + mag
    s = math.isqrt(5 * b * b << (2 * shift))
    s = s if b >= 0 else -s
    return Fraction((p << shift) + s, 2 << shift)


# --------------------------------------------------------------------------
# Q(phi) with rational coefficients


@dataclass(frozen=True)
class QPhi:
    """Element ``a + b*phi`` of Q(phi) with rational coefficients."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def coerce(x: object) -> QPhi:
        if isinstance(x, QPhi):
            return x
        if isinstance(x, GoldenInt):
            return QPhi(x.a, x.b)
        if isinstance(x, (int, Fraction, np.integer)):
            return QPhi(Fraction(int(x)) if isinstance(x, np.integer) else x, 0)
        raise TypeError(f"cannot interpret {x!r} as an element of Q(phi)")

    def __add__(self, other: object) -> QPhi:
        o = QPhi.coerce(other)
        return QPhi(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: object) -> QPhi:
        o = QPhi.coerce(other)
        return QPhi(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: object) -> QPhi:
        return QPhi.coerce(other) - self

    def __neg__(self) -> QPhi:
        return QPhi(-self.a, -self.b)

    def __mul__(self, other: object) -> QPhi:
        o = QPhi.coerce(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        return QPhi(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def inverse(self) -> QPhi:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(phi)")
        return QPhi((self.a + self.b) / n, -self.b / n)

    def __truediv__(self, other: object) -> QPhi:
        return self * QPhi.coerce(other).inverse()

    def __rtruediv__(self, other: object) -> QPhi:
        return QPhi.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> QPhi:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = QPhi(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self) -> int:
        den = self.a.denominator * self.b.denominator
        return _sign_exact(int(self.a * den), int(self.b * den))

    def __eq__(self, other: object) -> bool:
        try:
            o = QPhi.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other: object) -> bool:
        return (self - QPhi.coerce(other)).sign() < 0

    def __le__(self, other: object) -> bool:
        return (self - QPhi.coerce(other)).sign() <= 0

    def __float__(self) -> float:
        return float(to_float(self, 53))

    def __repr__(self) -> str:
        return f"QPhi({self.a}, {self.b})"


QPHI = QPhi(0, 1)


# --------------------------------------------------------------------------
# vectorised Z[phi]

_SAFE = 2**62
# float error bound factor for a + b*phi evaluated in double precision
_EPS_FACTOR = 8.0 * 2.0**-53


def _as_int_array(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype == object:
        return arr
    if not np.issubdtype(arr.dtype, np.integer):
        raise TypeError("GArray coefficients must be integers")
    return arr.astype(np.int64, copy=False)


def _maxabs(x: np.ndarray) -> int:
    if x.size == 0:
        return 0
    if x.dtype == object:
        return max(abs(int(v)) for v in x.ravel())
    return int(np.max(np.abs(x)))


def _to_object(x: np.ndarray) -> np.ndarray:
    if x.dtype == object:
        return x
    out = np.empty(x.shape, dtype=object)
    out[...] = [int(v) for v in x.ravel()] if x.ndim else int(x)
    return out.reshape(x.shape)


class GArray:
    """Array of Z[phi] elements stored as two integer numpy arrays.

    Coefficients live in int64 while they provably fit and are promoted to
    Python-integer object arrays otherwise.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b=None):
        a = _as_int_array(a)
        b = np.zeros_like(a) if b is None else _as_int_array(b)
        a, b = np.broadcast_arrays(a, b)
        if a.dtype != b.dtype:
            a, b = _to_object(a), _to_object(b)
        self.a = np.array(a)
        self.b = np.array(b)

    @classmethod
    def const(cls, g: IntLike, shape=()) -> GArray:
        g = GoldenInt.coerce(g)
        fits = abs(g.a) < _SAFE and abs(g.b) < _SAFE
        dtype = np.int64 if fits else object
        a = np.full(shape, g.a if fits else 0, dtype=dtype)
        b = np.full(shape, g.b if fits else 0, dtype=dtype)
        if not fits:
            a[...] = g.a
            b[...] = g.b
        return cls(a, b)

    def __len__(self) -> int:
        return len(self.a)

    @property
    def shape(self):
        return self.a.shape

    def __getitem__(self, idx) -> GArray:
        return GArray(self.a[idx], self.b[idx])

    def item(self, i) -> GoldenInt:
        return GoldenInt(int(self.a[i]), int(self.b[i]))

    def _bound(self) -> int:
        return _maxabs(self.a) + _maxabs(self.b)

    @staticmethod
    def _coerce(other) -> GArray:
        if isinstance(other, GArray):
            return other
        return GArray.const(other)

    def _promote_pair(self, other: GArray, factor: int):
        # promote both to object dtype if the result might overflow int64
        if self.a.dtype == object or other.a.dtype == object or factor >= _SAFE:
            return (_to_object(self.a), _to_object(self.b),
                    _to_object(other.a), _to_object(other.b))
        return self.a, self.b, other.a, other.b

    def __add__(self, other) -> GArray:
        o = GArray._coerce(other)
        a, b, c, d = self._promote_pair(o, 2 * max(self._bound(), o._bound()))
        return GArray(a + c, b + d)

    __radd__ = __add__

    def __neg__(self) -> GArray:
        return GArray(-self.a, -self.b)

    def __sub__(self, other) -> GArray:
        return self + (-GArray._coerce(other))

    def __rsub__(self, other) -> GArray:
        return GArray._coerce(other) - self

    def __mul__(self, other) -> GArray:
        o = GArray._coerce(other)
        a, b, c, d = self._promote_pair(o, 3 * self._bound() * o._bound())
        return GArray(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def scale(self, k) -> GArray:
        """Multiply elementwise by an integer array."""
        k = _as_int_array(k)
        factor = self._bound() * _maxabs(k)
        if factor >= _SAFE or self.a.dtype == object or k.dtype == object:
            k = _to_object(np.asarray(k))
            return GArray(_to_object(self.a) * k, _to_object(self.b) * k)
        return GArray(self.a * k, self.b * k)

    def to_float(self) -> np.ndarray:
        return self.a.astype(float) + self.b.astype(float) * PHI_FLOAT

    def sign(self) -> np.ndarray:
        """Exact elementwise sign, as an int8 array."""
        af = self.a.astype(float)
        bf = self.b.astype(float)
        val = af + bf * PHI_FLOAT
        err = _EPS_FACTOR * (np.abs(af) + 2.0 * np.abs(bf)) + 1e-300
        out = np.sign(val).astype(np.int8)
        unsure = np.abs(val) <= err
        if self.a.dtype == object:
            # float conversion of huge ints is itself inexact; be conservative
            unsure |= np.abs(af) + np.abs(bf) >= 2.0**52
        if np.any(unsure):
            idx = np.flatnonzero(unsure.ravel())
            fa, fb = self.a.ravel(), self.b.ravel()
            flat = out.ravel()
            for i in idx:
                flat[i] = _sign_exact(int(fa[i]), int(fb[i]))
            out = flat.reshape(out.shape)
        return out

    def floor(self) -> np.ndarray:
        """Exact elementwise floor; int64 when it fits, object otherwise."""
        af, bf = self.a.astype(float), self.b.astype(float)
        big = np.abs(af) + 2.0 * np.abs(bf) >= 2.0**50
        if np.any(big):
            # float guesses are too coarse here; use exact integer floors
            flat_a, flat_b = self.a.ravel(), self.b.ravel()
            out = np.array([int(x) + _floor_b_phi(int(y)) for x, y in zip(flat_a, flat_b)],
                           dtype=object).reshape(self.shape)
            if all(abs(v) < _SAFE for v in out.ravel()):
                out = out.astype(np.int64)
            return out
        f = np.floor(af + bf * PHI_FLOAT).astype(np.int64)
        # the float guess is off by at most one; settle it with exact signs
        for _ in range(3):
            low = (self - GArray(f)).sign() < 0        # x < f
            high = (self - GArray(f + 1)).sign() >= 0  # x >= f + 1
            if not (np.any(low) or np.any(high)):
                return f
            f = f - low.astype(np.int64) + high.astype(np.int64)
        raise ArithmeticError("floor fix-up did not converge")

    def frac(self) -> GArray:
        return self - GArray(self.floor())


def multiples_of(g: IntLike, n) -> GArray:
    """The GArray ``n * g`` for an integer array ``n``."""
    g = GoldenInt.coerce(g)
    return GArray.const(g).scale(np.asarray(n))
