"""Gowers U2 and U3 norms of the phase e(sz(u)/2) on the arcs of {n*phi}."""

from zeckprimes.harmonic import build_g_lambda, gowers_u2_exact, gowers_u3_estimate, unimodular

print(" lam   arcs      U2        U3 (+- se)")
for lam in range(4, 13):
    f = unimodular(build_g_lambda(lam), 0.5)
    u2 = gowers_u2_exact(f)
    u3, se = gowers_u3_estimate(f, samples=64)
    print(f"{lam:4d} {len(f.values):6d}  {u2:.5f}   {u3:.4f} +- {se:.4f}")
