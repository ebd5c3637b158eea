"""Growth exponents, normalized sum profiles, and the inversion identity.

Fit |S_f(x)| ~ C x^alpha over a geometric grid, divide the growth out to
get the profile xi(x) = S_f(x)/x^alpha, convolve a quotient through it,
and undo that with the Dirichlet inverse.  The roundtrip residual is the
numerical check that the normalization transports correctly.
"""

import numpy as np

from pretense import build_sieve, evaluate, geometric_checkpoints, partial_sums
from pretense.asymptotics import (
    growth_fit,
    mean_square,
    xi_from_sums,
    xi_lookup,
    xi_roundtrip_residual,
    xi_tilde,
)
from pretense.constructions import standard_spec
from pretense.dirichlet import dirichlet_inverse, solve_quotient
from pretense.randspecs import random_spec

sieve = build_sieve(10**6)

one = standard_spec("one")
mu = standard_spec("moebius")

print("fitted growth exponents over [1e2, 1e6]:")
grid = geometric_checkpoints(10**2, 10**6)
for name, spec in [("one", one), ("moebius", mu)]:
    table = evaluate(spec, sieve)
    fit = growth_fit(partial_sums(table, grid))
    print(f"  {name:<8} alpha-hat = {fit.exponent:.4f}"
          f"   rms residual {fit.residual_rms:.3f}")

# profile of a random completely multiplicative function at alpha = 1/2;
# the mean-square quadrature wants samples all the way down to 1
f = random_spec(77, limit=10**6)
ftab = evaluate(f, sieve)
series = partial_sums(ftab, geometric_checkpoints(1, 10**6))
xi = xi_from_sums(series, alpha=0.5)
print(f"\nprofile xi(x) = S_f(x)/sqrt(x) for {f.name}:")
for x in (10**3, 10**4, 10**5, 10**6):
    v = xi_lookup(xi, np.asarray([float(x)]))[0]
    print(f"  xi({x:>8}) = {v.real:+.4f}{v.imag:+.4f}i   |xi| = {abs(v):.4f}")

T = 10**5
ms = mean_square(xi, T=T)
print(f"\nintegral of |xi|^2 over [1, 1e5]: {ms.value:.1f}"
      f"   time average {ms.value / (T - 1):.4f}"
      f"   (grid error estimate {ms.error_estimate:.2e})")

# push the profile through a quotient and invert back
g = random_spec(78, limit=10**6)
q = solve_quotient(f, g, primes=(2, 3, 5, 7, 11, 13), max_exponent=20)
h_table = evaluate(q.spec, sieve, limit=2000)
hinv_table = evaluate(dirichlet_inverse(q.spec), sieve, limit=2000)

x = 1500.0
tilde = xi_tilde(h_table, xi, x)
resid = xi_roundtrip_residual(h_table, hinv_table, xi, x)
print(f"\nquotient-convolved profile at x = {x}: "
      f"{tilde.real:+.4f}{tilde.imag:+.4f}i")
print(f"inversion roundtrip relative residual: {resid:.2e}")
