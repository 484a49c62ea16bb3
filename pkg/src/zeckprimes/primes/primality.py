"""Miller-Rabin primality tests."""

from __future__ import annotations

# with these bases the test is deterministic below 3.3 * 10**24
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def _strong_probable_prime(n: int, base: int, d: int, s: int) -> bool:
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _miller_rabin(n: int, bases) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return all(_strong_probable_prime(n, a % n, d, s) for a in bases if a % n)


def is_prime_64(n: int) -> bool:
    """Deterministic primality for ``0 <= n < 2**64``."""
    if not 0 <= n < 2**64:
        raise ValueError("is_prime_64 needs 0 <= n < 2**64")
    return _miller_rabin(n, _DETERMINISTIC_BASES)


def is_probable_prime(n: int, rounds: int = 24) -> bool:
    """Exact below 2**64; a strong probable-prime test to many bases above."""
    if n < 2**64:
        return is_prime_64(n)
    return _miller_rabin(n, _SMALL_PRIMES[:rounds])
