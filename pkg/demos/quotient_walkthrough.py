"""Solve f * h = g for h, three ways, and watch them agree.

The quotient of two multiplicative functions under Dirichlet convolution is
multiplicative again, determined prime by prime through a triangular solve.
The same numbers fall out of a Toeplitz-Hessenberg determinant, and the
Dirichlet inverse is the special case g = delta.
"""

import numpy as np

from pretense import build_sieve, evaluate
from pretense.constructions import standard_spec
from pretense.dirichlet import (
    convolve_table,
    dirichlet_inverse,
    h_via_determinant,
    solve_quotient,
)
from pretense.randspecs import random_spec

sieve = build_sieve(10**4)

f = random_spec(314, limit=10**4)
g = random_spec(159, limit=10**4)

q = solve_quotient(f, g, primes=(2, 3, 5), max_exponent=10)
print("local series of h at p = 2 (first five):")
for k, c in enumerate(q.local_series(2).coeffs[:5]):
    print(f"  h(2^{k}) = {c:.6f}")

ht = evaluate(q.spec, sieve)
gt = evaluate(g, sieve)
conv = convolve_table(evaluate(f, sieve), ht)
print(f"\nreconvolution max error on [1, 1e4]: "
      f"{np.max(np.abs(conv.values - gt.values)):.3e}")

# same values through the determinant recurrence
worst = max(
    abs(h_via_determinant(f, g, p, n) - q.spec.value(p, n))
    for p in (2, 3, 5)
    for n in range(1, 9)
)
print(f"determinant route vs triangular solve, max gap: {worst:.3e}")

# inverse = quotient against delta; inverting twice comes home
hinv = dirichlet_inverse(q.spec)
delta = evaluate(standard_spec("delta"), sieve)
unit = convolve_table(ht, evaluate(hinv, sieve))
print(f"h * h^(-1) vs delta, max gap: "
      f"{np.max(np.abs(unit.values - delta.values)):.3e}")
back = evaluate(dirichlet_inverse(hinv), sieve)
print(f"double inverse vs h, max gap: "
      f"{np.max(np.abs(back.values - ht.values)):.3e}")
