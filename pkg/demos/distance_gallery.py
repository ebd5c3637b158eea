"""A tour of the three distance flavours between multiplicative functions.

The classic squared distance sums (1 - Re f(p) conj g(p)) / p over primes and
either settles down or grows like loglog.  The beta-weighted variant shifts
the weight to 1/p^beta, and the strong variant folds in higher prime powers.
Every distance call returns a checkpointed report with a tail-slope verdict,
which is how the library tells "bounded" from "slowly divergent" at desk
scale.
"""

from pretense import build_sieve
from pretense.constructions import dirichlet_character, standard_spec
from pretense.metrics import distance_beta, distance_classic, distance_strong

build_sieve(10**6)

one = standard_spec("one")
mu = standard_spec("moebius")
lam = standard_spec("liouville")
chi4 = dirichlet_character(4, 1)

print("classic squared distances up to 1e6:")
for name, f, g in [
    ("one   vs one      ", one, one),
    ("one   vs liouville", one, lam),
    ("one   vs moebius  ", one, mu),
    ("chi_4 vs liouville", chi4, lam),
]:
    print(f"  {name}  {distance_classic(f, g, 10**6).total:.6f}")

print("\nbeta-weighted distance, one vs liouville:")
for beta in (1.0, 0.5, 0.25):
    d = distance_beta(one, lam, beta, 10**6)
    print(f"  beta = {beta:<5} {d.total:.6f}")

print("\nstrong distance (prime powers up to k), one vs liouville:")
for k in (1, 2, 3):
    d = distance_strong(one, lam, 0.5, k, 10**6)
    print(f"  k = {k}  {d.total:.6f}")

# the tail-slope verdict separates a plateau from loglog growth
print("\nverdicts from the checkpointed reports:")
for name, f, g in [("one vs one", one, one), ("one vs liouville", one, lam)]:
    rep = distance_classic(f, g, 10**6)
    slope = 0.0 if rep.tail_slope is None else rep.tail_slope
    print(f"  {name:<18} slope {slope:+.4f}  -> {rep.verdict}")
