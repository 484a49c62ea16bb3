from .primality import is_prime_64, is_probable_prime
from .sieve import PrimeSieve, map_prime_segments, pi, primes_upto

__all__ = ["PrimeSieve", "is_prime_64", "is_probable_prime", "map_prime_segments", "pi", "primes_upto"]

from .experiments import (  # noqa: E402
    char_fn_primes,
    exp_sum_primes,
    exp_sum_sz_mangoldt,
    exp_sum_sz_primes,
    fibonacci_prime_scan,
    local_clt_table,
    lod_statistic,
    residue_counts,
    residue_deviation,
    smallest_prime_with_sz,
    sz_histogram_primes,
)

__all__ += [
    "char_fn_primes", "exp_sum_primes", "exp_sum_sz_mangoldt", "exp_sum_sz_primes",
    "fibonacci_prime_scan", "local_clt_table", "lod_statistic", "residue_counts",
    "residue_deviation", "smallest_prime_with_sz", "sz_histogram_primes",
]
