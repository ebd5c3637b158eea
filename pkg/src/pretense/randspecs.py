"""Seeded random unit-disc specs for the randomized suites.

Values are exp(2πi u) with u drawn from numpy's default_rng(seed).  The draw
order is documented and fixed: primes ascending, and for general
multiplicative specs exponents 1..max_exponent within each prime, so every
reported failure is replayable from (seed, limit, kind, max_exponent) alone.
"""

from __future__ import annotations

import numpy as np

from .core import (
    COMPLETELY_MULTIPLICATIVE,
    GENERAL_MULTIPLICATIVE,
    FunctionSpec,
    build_sieve,
)
from .errors import InvalidArgumentError, RuleError


def _prime_lookup(primes: np.ndarray, name: str):
    def find(p: int) -> int:
        i = int(np.searchsorted(primes, p))
        if i >= primes.size or primes[i] != p:
            raise RuleError(f"{name} is only tabulated for primes <= {primes[-1]}")
        return i

    return find


def random_spec(
    seed: int,
    limit: int = 10**4,
    kind: str = COMPLETELY_MULTIPLICATIVE,
    max_exponent: int = 13,
) -> FunctionSpec:
    """Random unit-disc spec tabulated at all primes <= limit."""
    seed = int(seed)
    limit = int(limit)
    if limit < 2:
        raise InvalidArgumentError("limit must be >= 2")
    primes = build_sieve(limit).primes
    rng = np.random.default_rng(seed)
    if kind == COMPLETELY_MULTIPLICATIVE:
        vals = np.exp(2j * np.pi * rng.random(primes.size))
        name = f"rand(cm,seed={seed})"
    elif kind == GENERAL_MULTIPLICATIVE:
        if max_exponent < 1:
            raise InvalidArgumentError("max_exponent must be >= 1")
        vals = np.exp(2j * np.pi * rng.random((primes.size, max_exponent)))
        name = f"rand(gm,seed={seed})"
    else:
        raise InvalidArgumentError(f"unsupported random spec kind {kind!r}")
    find = _prime_lookup(primes, name)

    if kind == COMPLETELY_MULTIPLICATIVE:
        def rule(p, k):
            return vals[find(int(p))] ** int(k)

        def hook(ps):
            idx = np.searchsorted(primes, ps)
            if np.any(idx >= primes.size) or np.any(primes[idx] != ps):
                raise RuleError(f"{name} is only tabulated for primes <= {primes[-1]}")
            return vals[idx]
    else:
        def rule(p, k):
            if k > max_exponent:
                raise RuleError(f"{name} is only tabulated for exponents <= {max_exponent}")
            return vals[find(int(p)), int(k) - 1]

        def hook(ps):
            idx = np.searchsorted(primes, ps)
            if np.any(idx >= primes.size) or np.any(primes[idx] != ps):
                raise RuleError(f"{name} is only tabulated for primes <= {primes[-1]}")
            return vals[idx, 0]

    return FunctionSpec(
        name=name,
        kind=kind,
        rule=rule,
        bounded_by_one=True,
        prime_values=hook,
        params={
            "construction": "random",
            "seed": seed,
            "limit": limit,
            "kind": kind,
            "max_exponent": max_exponent,
        },
    )


def random_pair_sparse_diff(
    seed: int,
    limit: int = 10**4,
    ndiff: int = 6,
) -> tuple:
    """A completely multiplicative unit-disc pair (f, g) that agrees at all
    primes <= limit except ndiff seeded choices, so every beta-weighted
    distance between them is a finite sum by construction.

    Returns (f, g, diff_primes).
    """
    seed = int(seed)
    limit = int(limit)
    ndiff = int(ndiff)
    primes = build_sieve(limit).primes
    if not 0 <= ndiff <= primes.size:
        raise InvalidArgumentError(f"ndiff must be in [0, {primes.size}]")
    rng = np.random.default_rng(seed)
    fvals = np.exp(2j * np.pi * rng.random(primes.size))
    where = np.sort(rng.choice(primes.size, size=ndiff, replace=False))
    gvals = fvals.copy()
    gvals[where] = np.exp(2j * np.pi * rng.random(ndiff))
    diff_primes = tuple(int(p) for p in primes[where])

    def make(which: str, vals: np.ndarray) -> FunctionSpec:
        name = f"randpair({which},seed={seed})"
        find = _prime_lookup(primes, name)

        def rule(p, k, vals=vals, find=find):
            return vals[find(int(p))] ** int(k)

        def hook(ps, vals=vals):
            idx = np.searchsorted(primes, ps)
            if np.any(idx >= primes.size) or np.any(primes[idx] != ps):
                raise RuleError(f"{name} is only tabulated for primes <= {primes[-1]}")
            return vals[idx]

        return FunctionSpec(
            name=name,
            kind=COMPLETELY_MULTIPLICATIVE,
            rule=rule,
            bounded_by_one=True,
            prime_values=hook,
            params={
                "construction": "random-pair",
                "seed": seed,
                "limit": limit,
                "ndiff": ndiff,
                "role": which,
            },
        )

    return make("f", fvals), make("g", gvals), diff_primes
