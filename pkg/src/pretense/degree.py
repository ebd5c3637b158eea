"""Degree-d multiplicative functions built from completely multiplicative
constituents, and the symmetric-polynomial identities that characterize them.

A degree-d spec has f(p^k) equal to the complete homogeneous symmetric
polynomial of degree k in the constituent prime values.  The elementary
symmetric values r_k of the same arguments (recovered from the q_k alone by
a unit-triangular solve) furnish a linear recursion of depth d that the
prime-power values must satisfy; its residual is the membership check, and
the quotient determinants of any two degree-d functions vanish beyond d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    COMPLETELY_MULTIPLICATIVE,
    DEGREE_D_COMPOSITE,
    FunctionSpec,
    SieveIndex,
    build_sieve,
    evaluate,
    geometric_checkpoints,
)
from .errors import InvalidArgumentError

MAX_DEGREE = 16


def q_all(kmax: int, x: Sequence[complex]) -> np.ndarray:
    """Complete homogeneous symmetric values q_0..q_kmax of the arguments x.

    One geometric pass per variable: q_k <- q_k + x_m q_{k-1} with k
    ascending keeps the new variable's powers accumulating, O(d·kmax).
    """
    if kmax < 0:
        raise InvalidArgumentError("k must be >= 0")
    q = np.zeros(kmax + 1, dtype=np.complex128)
    q[0] = 1.0
    for xm in x:
        for k in range(1, kmax + 1):
            q[k] += xm * q[k - 1]
    return q


def q_poly(k: int, x: Sequence[complex]) -> complex:
    """q_k^d(x), the sum of all degree-k monomials in the d arguments."""
    return complex(q_all(int(k), x)[int(k)])


def r_all(kmax: int, x: Sequence[complex]) -> np.ndarray:
    """Elementary symmetric values r_0..r_kmax; r_k = 0 beyond len(x)."""
    if kmax < 0:
        raise InvalidArgumentError("k must be >= 0")
    r = np.zeros(kmax + 1, dtype=np.complex128)
    r[0] = 1.0
    for xm in x:
        for k in range(kmax, 0, -1):
            r[k] += xm * r[k - 1]
    return r


def r_poly(k: int, x: Sequence[complex]) -> complex:
    """r_k^d(x), the k-th elementary symmetric value of the d arguments."""
    return complex(r_all(int(k), x)[int(k)])


def q_to_r(q: Sequence[complex]) -> np.ndarray:
    """Solve Σ_{j=0}^k (−1)^j r_{k−j} q_j = 0 (k = 1..d) for r_1..r_d.

    q is q_1..q_d with q_0 = 1 implicit; the system is unit-triangular in r,
    so the solve is exact up to roundoff.
    """
    q = np.asarray(q, dtype=np.complex128)
    d = q.size
    if d < 1:
        raise InvalidArgumentError("need at least one q value")
    full_q = np.concatenate(([1.0 + 0.0j], q))
    r = np.zeros(d + 1, dtype=np.complex128)
    r[0] = 1.0
    for k in range(1, d + 1):
        acc = 0.0 + 0.0j
        for j in range(1, k + 1):
            acc += (-1.0) ** (j + 1) * r[k - j] * full_q[j]
        r[k] = acc
    return r[1:]


@dataclass(frozen=True)
class SymmetricCoeffs:
    """Prime-local coordinates of a degree-d function: the prime-power
    values q, their elementary images r, and the recursion weights alpha
    (alpha_0 = 1, alpha_k = r_k)."""

    p: int
    q: np.ndarray
    r: np.ndarray
    alpha: np.ndarray

    def to_json_obj(self) -> dict:
        enc = lambda a: [[float(z.real), float(z.imag)] for z in a]
        return {"p": self.p, "q": enc(self.q), "r": enc(self.r),
                "alpha": enc(self.alpha)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def degree_d_spec(constituents: Sequence[FunctionSpec]) -> FunctionSpec:
    """Convolution of d completely multiplicative unit-disc constituents,
    realized prime-locally: f(p^k) = q_k(f_1(p), ..., f_d(p))."""
    cs = tuple(constituents)
    d = len(cs)
    if not 1 <= d <= MAX_DEGREE:
        raise InvalidArgumentError(f"degree must be in [1, {MAX_DEGREE}], got {d}")
    for c in cs:
        if c.kind != COMPLETELY_MULTIPLICATIVE:
            raise InvalidArgumentError(
                f"constituent {c.name!r} is not completely multiplicative"
            )
        if not c.bounded_by_one:
            raise InvalidArgumentError(
                f"constituent {c.name!r} does not claim the unit disc"
            )

    cache: dict = {}

    def args_at(p: int):
        got = cache.get(p)
        if got is None:
            got = cache[p] = np.array([c.value(p, 1) for c in cs])
        return got

    def rule(p, k):
        return q_poly(k, args_at(int(p)))

    hook = None
    if all(c.prime_values is not None for c in cs):
        hooks = [c.prime_values for c in cs]

        def hook(ps):
            out = np.zeros(ps.shape, dtype=np.complex128)
            for hk in hooks:
                out += np.asarray(hk(ps), dtype=np.complex128)
            return out

    params = None
    if all(c.params is not None for c in cs):
        params = {
            "construction": "degree-d",
            "constituents": [c.params for c in cs],
        }
    return FunctionSpec(
        name=f"deg{d}({','.join(c.name for c in cs)})",
        kind=DEGREE_D_COMPOSITE,
        rule=rule,
        bounded_by_one=(d == 1),
        prime_values=hook,
        degree=d,
        constituents=cs,
        params=params,
    )


def _declared_degree(f: FunctionSpec) -> int:
    if f.degree is None:
        raise InvalidArgumentError(f"spec {f.name!r} declares no degree")
    return int(f.degree)


def alpha_coeffs(f: FunctionSpec, p: int) -> SymmetricCoeffs:
    """Recursion weights at p from the first d prime-power values alone."""
    d = _declared_degree(f)
    p = int(p)
    q = np.array([f.value(p, k) for k in range(1, d + 1)])
    r = q_to_r(q)
    alpha = np.concatenate(([1.0 + 0.0j], r))
    return SymmetricCoeffs(p=p, q=q, r=r, alpha=alpha)


def recursion_residual(f: FunctionSpec, p: int, n: int) -> float:
    """|Σ_{k=0}^d (−1)^k alpha_k f(p^{n+d−k})| — zero iff the depth-d
    recursion holds at this n; genuine degree-d members are zero for all n."""
    d = _declared_degree(f)
    p = int(p)
    n = int(n)
    if n < 0:
        raise InvalidArgumentError("n must be >= 0")
    alpha = alpha_coeffs(f, p).alpha
    acc = 0.0 + 0.0j
    for k in range(d + 1):
        acc += (-1.0) ** k * alpha[k] * f.value(p, n + d - k)
    return float(abs(acc))


def perturbed_member(f: FunctionSpec, p: int, k: int, eps: complex) -> FunctionSpec:
    """Copy of f with f(p^k) shifted by eps but the same declared degree:
    a deliberate non-member used to show the recursion check has teeth."""
    p = int(p)
    k = int(k)
    if k < 1:
        raise InvalidArgumentError("k must be >= 1")

    def rule(pp, kk):
        v = f.value(int(pp), int(kk))
        if int(pp) == p and int(kk) == k:
            v = v + eps
        return v

    return FunctionSpec(
        name=f"perturbed({f.name},p={p},k={k})",
        kind=f.kind,
        rule=rule,
        bounded_by_one=False,
        degree=f.degree,
        constituents=f.constituents,
    )


@dataclass(frozen=True)
class ExtensionRow:
    p: int
    head: float
    tail: float
    ratio: Optional[float]


@dataclass(frozen=True)
class ExtensionReport:
    """Per-prime comparison of the beyond-degree tail of Σ_n |f(p^n)−g(p^n)|/p^{nβ}
    against its head n ≤ d: bounded ratios witness that first d powers control
    the whole local difference."""

    beta: float
    degree: int
    p_min: int
    rows: tuple
    sup_ratio: Optional[float]
    violations: tuple

    def to_json_obj(self) -> dict:
        return {
            "beta": self.beta,
            "degree": self.degree,
            "p_min": self.p_min,
            "sup_ratio": self.sup_ratio,
            "violations": [int(p) for p in self.violations],
            "rows": [
                {"p": r.p, "head": r.head, "tail": r.tail, "ratio": r.ratio}
                for r in self.rows
            ],
        }


def degreedist_extension_check(
    f: FunctionSpec,
    g: FunctionSpec,
    beta: float,
    cutoff: float,
    p_min: int = 11,
    tail_terms: int = 40,
    sieve: Optional[SieveIndex] = None,
) -> ExtensionReport:
    """Tail-vs-head ratios of the local strong-distance sums, per prime.

    head = Σ_{n≤d}, tail = Σ_{d<n≤d+tail_terms} of |f(p^n)−g(p^n)|/p^{nβ}.
    Primes with head = tail = 0 are skipped; head = 0 with tail > 1e-12 is
    recorded as a violation.  sup_ratio is over p >= p_min, where constituent
    size no longer dominates the weights.
    """
    beta = float(beta)
    if beta <= 0:
        raise InvalidArgumentError("beta must be > 0")
    d = _declared_degree(f)
    if _declared_degree(g) != d:
        raise InvalidArgumentError("f and g must declare the same degree")
    if sieve is None:
        sieve = build_sieve(int(cutoff))
    kmax = d + int(tail_terms)
    rows = []
    violations = []
    sup = None
    for p in sieve.primes[sieve.primes <= cutoff]:
        p = int(p)
        if f.constituents is not None and g.constituents is not None:
            fq = q_all(kmax, [c.value(p, 1) for c in f.constituents])
            gq = q_all(kmax, [c.value(p, 1) for c in g.constituents])
        else:
            fq = np.array([f.value(p, k) for k in range(kmax + 1)])
            gq = np.array([g.value(p, k) for k in range(kmax + 1)])
        w = np.abs(fq - gq) / float(p) ** (beta * np.arange(kmax + 1))
        head = float(np.sum(w[1 : d + 1]))
        tail = float(np.sum(w[d + 1 :]))
        if head == 0.0:
            if tail > 1e-12:
                violations.append(p)
                rows.append(ExtensionRow(p, head, tail, None))
            continue
        ratio = tail / head
        rows.append(ExtensionRow(p, head, tail, ratio))
        if p >= p_min and (sup is None or ratio > sup):
            sup = ratio
    return ExtensionReport(
        beta=beta,
        degree=d,
        p_min=int(p_min),
        rows=tuple(rows),
        sup_ratio=sup,
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class GrowthDeltaRow:
    x: float
    running_max: float
    argmax: int


@dataclass(frozen=True)
class GrowthDeltaReport:
    delta: float
    rows: tuple
    last_increase_n: int

    def to_json_obj(self) -> dict:
        return {
            "delta": self.delta,
            "last_increase_n": self.last_increase_n,
            "rows": [
                {"x": r.x, "running_max": r.running_max, "argmax": r.argmax}
                for r in self.rows
            ],
        }


def growth_delta_check(
    f: FunctionSpec,
    N: int,
    deltas: Sequence[float] = (0.1, 0.2),
    sieve: Optional[SieveIndex] = None,
) -> tuple:
    """Running max of |f(n)|/n^δ at geometric checkpoints, one report per δ.

    For a genuinely subpolynomial f the maximum is attained early: the
    report's last_increase_n is the largest n that ever raised the max.
    """
    N = int(N)
    if sieve is None:
        sieve = build_sieve(N)
    table = evaluate(f, sieve, N)
    mag = np.abs(table.values[1:])
    n = np.arange(1, N + 1, dtype=np.float64)
    checkpoints = geometric_checkpoints(min(10, N), N)
    out = []
    for delta in deltas:
        ratio = mag / n ** float(delta)
        cm = np.maximum.accumulate(ratio)
        increases = np.nonzero(np.diff(cm) > 0)[0]
        last_inc = int(increases[-1] + 2) if increases.size else 1
        rows = []
        for x in checkpoints:
            pos = int(x) - 1
            rows.append(
                GrowthDeltaRow(
                    x=float(x),
                    running_max=float(cm[pos]),
                    argmax=int(np.argmax(ratio[: pos + 1]) + 1),
                )
            )
        out.append(
            GrowthDeltaReport(
                delta=float(delta), rows=tuple(rows), last_increase_n=last_inc
            )
        )
    return tuple(out)
