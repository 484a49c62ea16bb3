"""Zeckendorf digits, and reading the low digits of n off the point {n*phi}."""

from zeckprimes.detection import detect_lowdigits, interval_for_lowdigits
from zeckprimes.numeration import sz, v, zeck_expand

for n in (12, 100, 2024):
    print(f"{n:5d} = sum of F_k for k in {list(zeck_expand(n).indices)}, sz = {sz(n)}")

lam = 6
print(f"\nlow-digit windows for lambda = {lam} (value below F_{lam} -> arc of {{n*phi}})")
for u in range(8):
    arc = interval_for_lowdigits(lam, u)
    print(f"  u = {u}: ({float(arc.left) % 1:.4f}, {float(arc.right) % 1:.4f}) mod 1")

mismatches = sum(detect_lowdigits(n, lam) != v(n, lam) for n in range(10000))
print(f"\nmismatches between detection and direct digits over n < 10000: {mismatches}")
