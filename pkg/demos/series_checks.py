"""Local series bounds for Dirichlet quotients, and truncated L-values.

When h solves f * h = g on the unit disc, the prime-local square series
H(sigma) and the dense majorant partials of |h| are the two handles on how
big h can get.  The envelope exp(2 D_beta^2 / (1 - 2^-beta)) caps the dense
L2 majorant using nothing but the beta distance between f and g.  At the
global level, truncated Dirichlet series satisfy L(s,g) = L(s,f) L(s,h) up
to tail terms the library bounds explicitly.
"""

from pretense import build_sieve, evaluate
from pretense.asymptotics import l_truncation, quotient_identity_check
from pretense.constructions import standard_spec
from pretense.dirichlet import solve_quotient
from pretense.metrics import (
    distance_beta,
    h2_envelope,
    h_majorant_series,
    quotient_square_series,
)
from pretense.randspecs import random_pair_sparse_diff

sieve = build_sieve(10**4)

one = standard_spec("one")
delta = standard_spec("delta")

# h solving one * h = delta is the moebius function
q = solve_quotient(one, delta, primes=(2, 3, 5, 7), max_exponent=12)
rep = quotient_square_series(q, sigma=1.0)
print("square series of the one -> delta quotient at sigma = 1:")
print(f"  primes <= 4^(1/sigma) = 4: {[r[0] for r in rep.params['prime_status']]}")
print(f"  value {rep.total:.6f}  (exact: (1 + 1/2) + (1 + 1/3) = {1.5 + 4/3:.6f})")

# a pair that differs at a few primes only: the envelope has to hold
f, g, diff_primes = random_pair_sparse_diff(2024, limit=10**4, ndiff=6)
qh = solve_quotient(f, g, primes=(2, 3, 5, 7, 11, 13), max_exponent=12)
beta = 0.5
d2 = distance_beta(f, g, beta, 10**4, sieve=sieve).total
cap = h2_envelope(beta, d2)
maj = h_majorant_series(qh, sigma=1.0, N=10**4, power="L2", sieve=sieve)
print(f"\npair differing only at primes {list(diff_primes)}, beta = {beta}:")
print(f"  squared beta distance   {d2:.6f}")
print(f"  dense L2 majorant of h  {maj.total:.6f}")
print(f"  distance envelope       {cap:.6f}   holds: {maj.total <= cap}")

# truncated L-series: value, certified tail, and the product identity
table_one = evaluate(one, sieve)
lt = l_truncation(table_one, 2.0, N=10**4)
print(f"\ntruncated L(2) of the all-ones function, N = 1e4:")
print(f"  value {lt.value.real:.8f}   tail bound {lt.tail_bound:.2e}")

table_mu = evaluate(standard_spec("moebius"), sieve)
table_delta = evaluate(delta, sieve)
chk = quotient_identity_check(table_one, table_delta, table_mu, s=3.0)
print(f"\nproduct identity L(s, delta) = L(s, one) L(s, moebius) at s = 3:")
print(f"  residual {chk.residual:.2e}   combined tail bound {chk.combined_bound:.2e}")
print(f"  residual within bound: {chk.residual <= chk.combined_bound}")
