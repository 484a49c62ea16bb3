"""How the Zeckendorf digit sum is spread over the primes."""

from zeckprimes.primes import local_clt_table, smallest_prime_with_sz

x = 10**6
rows, summary = local_clt_table(x)
print(f"pi({x}) = {summary['pi']}, predicted mean digit sum {summary['mean_predicted']:.3f}")
print(f"largest relative error against the Gaussian: {summary['sup_rel_error']:.4f}")
for row in rows[:12]:
    print("  ", row)

print("\nsmallest prime with a given digit sum")
for k in range(1, 11):
    print(f"  sz = {k:2d}: {smallest_prime_with_sz(k)}")
