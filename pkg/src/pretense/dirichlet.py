"""Local Dirichlet-series algebra at prime powers.

For multiplicative f, g with f(1) = g(1) = 1 there is a unique multiplicative
h with g = f ∗ h (Dirichlet convolution), determined prime by prime through
the triangular system

    g(p^k) − f(p^k) = Σ_{j=1}^{k} f(p^{k−j}) h(p^j),   k ≥ 1.

solve_quotient performs that forward substitution; dirichlet_inverse is the
same solve against the convolution identity δ.  The determinant route expresses
the same coefficients through Toeplitz-Hessenberg determinants D_f(k, p): both
paths are kept separate so they can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import (
    COMPLETELY_MULTIPLICATIVE,
    GENERAL_MULTIPLICATIVE,
    FunctionSpec,
    ValueTable,
)
from .errors import (
    InvalidArgumentError,
    LimitError,
    PretenseError,
)

DETERMINANT_ORDER_CAP = 64

RECONVOLUTION_TOL = 1e-10


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class LocalSeries:
    """Coefficients c[0..K] of one prime's local factor, c[0] = 1."""

    p: int
    coeffs: np.ndarray

    def to_json_obj(self) -> dict:
        return {
            "prime": int(self.p),
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }


def _lazy_local_solver(update):
    """Shared per-prime forward substitution with a growable coefficient cache.

    update(p, coeffs, m) must return the next coefficient c_m given c_0..c_{m-1}.
    """
    cache: dict = {}

    def rule(p: int, k: int) -> complex:
        c = cache.get(p)
        if c is None:
            c = [1.0 + 0.0j]
            cache[p] = c
        while len(c) <= k:
            c.append(update(p, c, len(c)))
        return c[k]

    return rule


def quotient_rule(f: FunctionSpec, g: FunctionSpec):
    """Lazy rule computing h(p^k) with g = f ∗ h, any prime, cached."""

    def update(p, c, m):
        acc = complex(g.value(p, m))
        for j in range(m):
            acc -= f.value(p, m - j) * c[j]
        return acc

    return _lazy_local_solver(update)


@dataclass(frozen=True)
class QuotientSpec:
    """The multiplicative h with g = f ∗ h, plus its precomputed local table."""

    spec: FunctionSpec
    numerator: str
    denominator: str
    primes: tuple
    max_exponent: int
    local: tuple

    def local_series(self, p: int) -> LocalSeries:
        for ls in self.local:
            if ls.p == p:
                return ls
        raise InvalidArgumentError(f"prime {p} not in the precomputed table")

    def to_json_obj(self) -> list:
        return [ls.to_json_obj() for ls in self.local]


def solve_quotient(
    f: FunctionSpec, g: FunctionSpec, primes: Iterable[int], max_exponent: int
) -> QuotientSpec:
    """Solve g = f ∗ h for h on the given primes up to p^max_exponent.

    The returned spec's rule is not restricted to `primes`: it keeps solving
    the same triangular system lazily for any prime power it is asked for,
    which is what dense evaluation of h needs.
    """
    plist = sorted({int(p) for p in primes})
    if not plist:
        raise InvalidArgumentError("need at least one prime")
    for p in plist:
        if not _is_prime(p):
            raise InvalidArgumentError(f"{p} is not prime")
    K = int(max_exponent)
    if K < 1:
        raise InvalidArgumentError(f"max exponent must be >= 1, got {K}")

    rule = quotient_rule(f, g)
    hook = None
    if f.prime_values is not None and g.prime_values is not None:
        f_hook, g_hook = f.prime_values, g.prime_values

        def hook(ps):
            return np.asarray(g_hook(ps), dtype=np.complex128) - np.asarray(
                f_hook(ps), dtype=np.complex128
            )

    spec = FunctionSpec(
        name=f"({g.name}/{f.name})",
        kind=GENERAL_MULTIPLICATIVE,
        rule=rule,
        prime_values=hook,
    )
    local = []
    for p in plist:
        coeffs = np.array([spec.value(p, k) for k in range(K + 1)], dtype=np.complex128)
        # reconvolve as a guard: the forward solve must reproduce g exactly
        for k in range(1, K + 1):
            acc = sum(f.value(p, k - j) * coeffs[j] for j in range(k + 1))
            if abs(acc - g.value(p, k)) > RECONVOLUTION_TOL * max(1.0, abs(acc)):
                raise PretenseError(
                    f"quotient solve inconsistent at p={p}, k={k}"
                )
        local.append(LocalSeries(p=p, coeffs=coeffs))
    return QuotientSpec(
        spec=spec,
        numerator=g.name,
        denominator=f.name,
        primes=tuple(plist),
        max_exponent=K,
        local=tuple(local),
    )


def dirichlet_inverse(h: FunctionSpec) -> FunctionSpec:
    """The multiplicative inverse under Dirichlet convolution, h ∗ inv = δ.

    Well defined because every FunctionSpec has value(p, 0) = 1, i.e. h(1) = 1.
    """

    def update(p, c, m):
        acc = 0.0 + 0.0j
        for j in range(m):
            acc -= h.value(p, m - j) * c[j]
        return acc

    hook = None
    if h.prime_values is not None:
        h_hook = h.prime_values

        def hook(ps):
            return -np.asarray(h_hook(ps), dtype=np.complex128)

    return FunctionSpec(
        name=f"inv({h.name})",
        kind=GENERAL_MULTIPLICATIVE,
        rule=_lazy_local_solver(update),
        prime_values=hook,
    )


def convolve_spec(f: FunctionSpec, h: FunctionSpec) -> FunctionSpec:
    """Rule-level Dirichlet convolution, (f ∗ h)(p^k) = Σ_j f(p^j) h(p^{k−j})."""

    def rule(p, k):
        return sum(f.value(p, j) * h.value(p, k - j) for j in range(k + 1))

    hook = None
    if f.prime_values is not None and h.prime_values is not None:
        f_hook, h_hook = f.prime_values, h.prime_values

        def hook(ps):
            return np.asarray(f_hook(ps), dtype=np.complex128) + np.asarray(
                h_hook(ps), dtype=np.complex128
            )

    return FunctionSpec(
        name=f"({f.name} * {h.name})",
        kind=GENERAL_MULTIPLICATIVE,
        rule=rule,
        prime_values=hook,
    )


def convolve_table(ft: ValueTable, ht: ValueTable, limit: Optional[int] = None) -> ValueTable:
    """Dense (f ∗ h)(n) for n ≤ limit by direct divisor folding, O(N log N)."""
    if ft.limit != ht.limit:
        raise InvalidArgumentError(
            f"mismatched table limits {ft.limit} != {ht.limit}"
        )
    if limit is None:
        limit = ft.limit
    limit = int(limit)
    if limit < 1 or limit > ft.limit:
        raise InvalidArgumentError(f"limit {limit} outside [1, {ft.limit}]")
    out = np.zeros(limit + 1, dtype=np.complex128)
    fv, hv = ft.values, ht.values
    for d in range(1, limit + 1):
        out[d::d] += fv[d] * hv[1 : limit // d + 1]
    return ValueTable(spec=convolve_spec(ft.spec, ht.spec), limit=limit, values=out)


# ---------------------------------------------------------------------------
# Toeplitz-Hessenberg determinants

def determinant(f: FunctionSpec, p: int, k: int) -> complex:
    """D_f(k, p), the k×k determinant with entries a_ij = f(p^{i−j+1}).

    Entries vanish for i − j + 1 < 0, so the matrix is lower Hessenberg with a
    unit superdiagonal (a_{i,i+1} = f(p^0) = 1).  Repeated cofactor expansion
    along the last column telescopes to the convolution recurrence

        D_m = Σ_{j=1}^{m} (−1)^{j−1} f(p^j) D_{m−j},    D_0 = 1,

    which is what we evaluate (O(k²)).  determinant_dense keeps the direct
    O(k³) route for cross-checking.
    """
    k = int(k)
    if k < 0:
        raise InvalidArgumentError(f"determinant order must be >= 0, got {k}")
    if k > DETERMINANT_ORDER_CAP:
        raise LimitError(
            f"determinant order {k} exceeds the documented cap {DETERMINANT_ORDER_CAP}"
        )
    t = [f.value(p, j) for j in range(k + 1)]
    d = [1.0 + 0.0j]
    for m in range(1, k + 1):
        acc = 0.0 + 0.0j
        sign = 1.0
        for j in range(1, m + 1):
            acc += sign * t[j] * d[m - j]
            sign = -sign
        d.append(acc)
    return d[k]


def determinant_dense(f: FunctionSpec, p: int, k: int) -> complex:
    """Direct numpy determinant of the same matrix (oracle path)."""
    k = int(k)
    if k < 0:
        raise InvalidArgumentError(f"determinant order must be >= 0, got {k}")
    if k == 0:
        return 1.0 + 0.0j
    a = np.zeros((k, k), dtype=np.complex128)
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i - j + 1 >= 0:
                a[i - 1, j - 1] = f.value(p, i - j + 1)
    return complex(np.linalg.det(a))


def h_via_determinant(f: FunctionSpec, g: FunctionSpec, p: int, n: int) -> complex:
    """h(p^n) for g = f ∗ h through the determinant expansion

        h(p^n) = Σ_{k=0}^{n−1} (−1)^k (g(p^{n−k}) − f(p^{n−k})) D_f(k, p).
    """
    n = int(n)
    if n < 1:
        raise InvalidArgumentError(f"exponent must be >= 1, got {n}")
    acc = 0.0 + 0.0j
    sign = 1.0
    for k in range(n):
        acc += sign * (g.value(p, n - k) - f.value(p, n - k)) * determinant(f, p, k)
        sign = -sign
    return acc


@dataclass(frozen=True)
class DetBoundReport:
    """Per-order comparison of |D_f(n, p)| against 2^{n−1} p^{nδ}."""

    p: int
    delta: float
    rows: tuple  # (n, |D|, bound, ok)
    hypothesis_violations: tuple  # exponents k with |f(p^k)| > p^{kδ}

    @property
    def all_pass(self) -> bool:
        return not self.hypothesis_violations and all(ok for *_, ok in self.rows)


def determinant_bound_check(
    f: FunctionSpec, p: int, k_max: int, delta: float = 0.0
) -> DetBoundReport:
    """Check |D_f(n, p)| ≤ 2^{n−1} p^{nδ} for 1 ≤ n ≤ k_max.

    The bound presumes |f(p^k)| ≤ p^{kδ}; exponents where the input itself
    breaks that hypothesis are flagged in the report rather than raised.
    """
    k_max = int(k_max)
    if k_max < 1:
        raise InvalidArgumentError(f"k_max must be >= 1, got {k_max}")
    violations = []
    for k in range(1, k_max + 1):
        if abs(f.value(p, k)) > p ** (k * delta) * (1.0 + 1e-9):
            violations.append(k)
    rows = []
    for n in range(1, k_max + 1):
        absd = abs(determinant(f, p, n))
        bound = 2.0 ** (n - 1) * p ** (n * delta)
        rows.append((n, absd, bound, absd <= bound * (1.0 + 1e-9) + 1e-12))
    return DetBoundReport(
        p=int(p), delta=float(delta), rows=tuple(rows),
        hypothesis_violations=tuple(violations),
    )
