"""Independent oracle implementations for the test suite.

Everything here is deliberately written with different algorithms than the
package (trial division instead of an SPF sieve, math.fsum instead of block
Kahan, Euler-Maclaurin instead of truncated Dirichlet sums) so agreement is
evidence, not tautology.
"""

from __future__ import annotations

import math
from fractions import Fraction

# Bernoulli numbers B_2 .. B_12 for the Euler-Maclaurin correction
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
]


def euler_maclaurin_zeta(s: complex, N: int = 40, terms: int = 6) -> complex:
    """zeta(s) for Re s > 1 via Euler-Maclaurin with Bernoulli corrections."""
    s = complex(s)
    parts = [n ** -s for n in range(1, N + 1)]
    parts.append(N ** (1 - s) / (s - 1))
    parts.append(-0.5 * N**-s)
    fact = s
    power = N ** (-s - 1)
    for k in range(1, terms + 1):
        b = _BERNOULLI[k - 1]
        parts.append(
            (b.numerator / b.denominator) / math.factorial(2 * k) * fact * power
        )
        fact *= (s + 2 * k - 1) * (s + 2 * k)
        power /= N * N
    return complex(
        math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts)
    )


# frozen from euler_maclaurin_zeta before any package code existed
ZETA2 = 1.6449340668482264
ZETA3 = 1.2020569031595942
ZETA4 = 1.0823232337111382


def brute_primes(limit: int):
    """Boolean Eratosthenes, no smallest-factor bookkeeping."""
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    p = 2
    while p * p <= limit:
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(range(p * p, limit + 1, p))
        p += 1
    return [n for n in range(2, limit + 1) if flags[n]]


def brute_factorize(n: int):
    """Trial division, list of (p, k)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def brute_moebius(n: int) -> int:
    fac = brute_factorize(n)
    if any(k > 1 for _, k in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def brute_liouville(n: int) -> int:
    return -1 if sum(k for _, k in brute_factorize(n)) % 2 else 1


def brute_divisor_count(n: int) -> int:
    return math.prod(k + 1 for _, k in brute_factorize(n))


def brute_convolve(a, b):
    """(a*b)(n) = sum_{ij=n} a(i) b(j), double loop over multiples.

    a, b indexed from 0 with a[0] unused; returns same layout.
    """
    n = min(len(a), len(b)) - 1
    out = [0j] * (n + 1)
    for i in range(1, n + 1):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(1, n // i + 1):
            out[i * j] += ai * b[j]
    return out


def brute_distance_sq(fp, gp, primes, beta: float = 1.0) -> float:
    """sum over given primes of (1 - Re f(p) conj(g(p))) / p^beta via fsum."""
    return math.fsum(
        (1.0 - (complex(f) * complex(g).conjugate()).real) / p**beta
        for f, g, p in zip(fp, gp, primes)
    )


def brute_quotient_local(f_coeffs, g_coeffs):
    """Solve sum_{j<=m} f_j h_{m-j} = g_m for h given f_0 = 1, plain loops."""
    K = len(g_coeffs) - 1
    h = [0j] * (K + 1)
    h[0] = 1.0 + 0j
    for m in range(1, K + 1):
        acc = complex(g_coeffs[m])
        for j in range(1, m + 1):
            acc -= complex(f_coeffs[j]) * h[m - j]
        h[m] = acc
    return h


def brute_elementary_symmetric(k: int, xs):
    """e_k by expanding prod (1 + x_i t) with a list of coefficients."""
    coeffs = [1.0 + 0j]
    for x in xs:
        nxt = coeffs + [0j]
        for i in range(len(coeffs), 0, -1):
            nxt[i] += coeffs[i - 1] * x
        coeffs = nxt
    return coeffs[k] if k < len(coeffs) else 0j


def brute_complete_homogeneous(k: int, xs):
    """h_k by brute recursion on the number of variables."""
    if k == 0:
        return 1.0 + 0j
    if not xs:
        return 0j
    # h_k(x_1..x_m) = h_k(x_1..x_{m-1}) + x_m h_{k-1}(x_1..x_m)
    return brute_complete_homogeneous(k, xs[:-1]) + xs[-1] * brute_complete_homogeneous(
        k - 1, xs
    )
