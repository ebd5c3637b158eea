"""Dense machinery for multiplicative functions f: ℕ → ℂ.

A function is described by its values on prime powers, f(p^k), via a
FunctionSpec.  Everything downstream works from that rule:

    build_sieve(N)          smallest-prime-factor table and prime list up to N
    evaluate(spec, sieve)   dense table of f(n) for 1 ≤ n ≤ N
    partial_sums(table, x)  S_f(x) = Σ_{n ≤ x} f(n) at checkpoints
    mean_square_sum         Σ_{n ≤ x} |f(n)|²

Partial sums are accumulated with Kahan compensation inside fixed blocks of
2^16 terms; block totals are folded in ascending order through a second
compensated accumulator.  A checkpoint inside a block reports the fold value
of the complete blocks before it plus the compensated prefix within its own
block.  Both summation modes implement exactly this reduction, so results are
bit-identical regardless of mode or thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    InvalidArgumentError,
    LimitError,
    OutOfRangeError,
    PretenseError,
    ResourceError,
    RuleError,
)

COMPLETELY_MULTIPLICATIVE = "completely-multiplicative"
GENERAL_MULTIPLICATIVE = "general-multiplicative"
DEGREE_D_COMPOSITE = "degree-d-composite"
TABULATED = "tabulated"

KINDS = frozenset(
    {COMPLETELY_MULTIPLICATIVE, GENERAL_MULTIPLICATIVE, DEGREE_D_COMPOSITE, TABULATED}
)

# Dense work beyond this is out of scope for a desk-scale toolkit.
MAX_SIEVE_LIMIT = 10**8

BLOCK = 1 << 16

UNIT_DISC_TOL = 1e-9

GRID_RATIO = 10.0 ** 0.125


@dataclass(frozen=True)
class FunctionSpec:
    """A multiplicative function given by its prime-power rule.

    rule(p, k) must return f(p^k) for every prime p and k ≥ 1; f(p^0) = 1 is
    supplied by value().  When bounded_by_one is claimed, every queried value
    is checked against the closed unit disc.  prime_values, when present, is a
    vectorized shortcut returning f(p) for an int64 array of primes; it must
    agree with rule(p, 1).
    """

    name: str
    kind: str
    rule: Callable[[int, int], complex]
    bounded_by_one: bool = False
    growth_delta: Optional[float] = None
    prime_values: Optional[Callable[[np.ndarray], np.ndarray]] = None
    degree: Optional[int] = None
    constituents: Optional[tuple] = None
    params: Optional[dict] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown spec kind {self.kind!r}")

    def value(self, p: int, k: int) -> complex:
        if k == 0:
            return 1.0 + 0.0j
        if k < 0:
            raise InvalidArgumentError(f"negative exponent k={k}")
        key = (p, k)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        try:
            v = complex(self.rule(p, k))
        except PretenseError:
            raise
        except Exception as exc:
            raise RuleError(
                f"rule of spec {self.name!r} failed at (p={p}, k={k}): {exc}"
            ) from exc
        if self.bounded_by_one and abs(v) > 1.0 + UNIT_DISC_TOL:
            raise InvalidArgumentError(
                f"spec {self.name!r} claims |f| <= 1 but |f({p}^{k})| = {abs(v)}"
            )
        self._cache[key] = v
        return v


@dataclass(frozen=True)
class SieveIndex:
    """Smallest prime factor for every n ≤ limit, plus the prime list.

    spf[n] is the least prime dividing n (spf[0] = spf[1] = 0), so spf[n] = n
    exactly when n is prime.  Memory: 4(N+1) bytes for spf, plus two cached
    int32 factor arrays of the same size once a dense evaluation has run.
    """

    limit: int
    spf: np.ndarray
    primes: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def power_cofactor(self):
        """Arrays (pk, rest) with n = pk[n] * rest[n], pk[n] the full power of
        spf[n] dividing n and gcd(spf[n], rest[n]) = 1.  Cached after first use."""
        got = self._cache.get("power_cofactor")
        if got is not None:
            return got
        n = self.limit
        n_arr = np.arange(n + 1, dtype=np.int64)
        p64 = self.spf.astype(np.int64)
        safe = np.maximum(p64, 1)
        pk = np.where(n_arr >= 2, p64, 1)
        rest = np.where(n_arr >= 2, n_arr // safe, 1)
        idx = np.nonzero((n_arr >= 2) & (rest % safe == 0))[0]
        while idx.size:
            pk[idx] *= p64[idx]
            rest[idx] //= p64[idx]
            idx = idx[rest[idx] % p64[idx] == 0]
        pair = (pk.astype(np.int32), rest.astype(np.int32))
        self._cache["power_cofactor"] = pair
        return pair


def build_sieve(limit: int) -> SieveIndex:
    """Smallest-prime-factor sieve on [2, limit]."""
    limit = int(limit)
    if limit < 2:
        raise InvalidArgumentError(f"sieve limit must be >= 2, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        raise LimitError(
            f"sieve limit {limit} exceeds the documented cap {MAX_SIEVE_LIMIT}"
        )
    try:
        spf = np.zeros(limit + 1, dtype=np.int32)
    except MemoryError as exc:
        raise ResourceError(
            f"could not allocate {4 * (limit + 1)} bytes for the sieve"
        ) from exc
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    # untouched entries have no prime factor <= their square root: primes
    free = spf[2:] == 0
    spf[2:][free] = np.arange(2, limit + 1, dtype=np.int32)[free]
    primes = (np.nonzero(free)[0] + 2).astype(np.int64)
    return SieveIndex(limit=limit, spf=spf, primes=primes)


@dataclass(frozen=True)
class ValueTable:
    """Dense f(n) for 1 ≤ n ≤ limit (values[0] is unused and zero)."""

    spec: FunctionSpec
    limit: int
    values: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def prefix_sums(self) -> np.ndarray:
        """Cumulative Σ_{m ≤ n} f(m), plain left-to-right cumsum.  Cached."""
        got = self._cache.get("prefix")
        if got is None:
            got = np.cumsum(self.values)
            self._cache["prefix"] = got
        return got


@dataclass(frozen=True)
class PartialSumSeries:
    """Checkpointed partial sums S_f(x_i) plus the mode that produced them."""

    checkpoints: np.ndarray
    sums: np.ndarray
    summation_mode: str
    source: Optional[ValueTable] = None


SEQUENTIAL = "compensated-sequential"
BLOCK_PARALLEL = "block-parallel-deterministic"
SUMMATION_MODES = (SEQUENTIAL, BLOCK_PARALLEL)


def prime_values_of(spec: FunctionSpec, primes: np.ndarray) -> np.ndarray:
    """f(p) for an array of primes, via the vectorized hook when available."""
    if spec.prime_values is not None:
        vals = np.asarray(spec.prime_values(primes), dtype=np.complex128)
        if vals.shape != primes.shape:
            raise RuleError(
                f"prime_values hook of {spec.name!r} returned shape {vals.shape}"
            )
    else:
        vals = np.array(
            [spec.value(int(p), 1) for p in primes], dtype=np.complex128
        )
    if spec.bounded_by_one and vals.size:
        bad = np.abs(vals) > 1.0 + UNIT_DISC_TOL
        if bad.any():
            p = int(primes[np.argmax(bad)])
            raise InvalidArgumentError(
                f"spec {spec.name!r} claims |f| <= 1 but |f({p})| > 1"
            )
    return vals


def evaluate(spec: FunctionSpec, sieve: SieveIndex, limit: Optional[int] = None) -> ValueTable:
    """Dense table of f(n), 1 ≤ n ≤ limit, from the prime-power rule.

    Prime powers come straight from the rule (completely multiplicative specs
    reuse f(p)^k via cumulative products); composite n = pk·rest are filled in
    doubling blocks, so each value is a single complex multiply once its two
    coprime parts are known.  Cost is O(N) array work after the sieve.
    """
    if limit is None:
        limit = sieve.limit
    limit = int(limit)
    if limit < 1 or limit > sieve.limit:
        raise InvalidArgumentError(
            f"evaluate limit {limit} outside [1, sieve limit {sieve.limit}]"
        )
    try:
        values = np.zeros(limit + 1, dtype=np.complex128)
    except MemoryError as exc:
        raise ResourceError(
            f"could not allocate {16 * (limit + 1)} bytes for the value table"
        ) from exc
    values[1] = 1.0
    if limit == 1:
        return ValueTable(spec=spec, limit=limit, values=values)

    primes = sieve.primes[sieve.primes <= limit]
    pvals = prime_values_of(spec, primes)
    values[primes] = pvals

    if spec.kind == COMPLETELY_MULTIPLICATIVE:
        p_rem, v_rem, pp, acc = primes, pvals, primes, pvals
        while True:
            keep = pp <= limit // p_rem
            if not keep.any():
                break
            p_rem, v_rem = p_rem[keep], v_rem[keep]
            pp = pp[keep] * p_rem
            acc = acc[keep] * v_rem
            values[pp] = acc
    else:
        for p in primes[primes <= math.isqrt(limit)]:
            p = int(p)
            pe = p * p
            k = 2
            while pe <= limit:
                values[pe] = spec.value(p, k)
                pe *= p
                k += 1

    pk, rest = sieve.power_cofactor()
    lo = 1
    while lo < limit:
        hi = min(2 * lo, limit)
        seg = np.arange(lo + 1, hi + 1)
        comp = seg[rest[lo + 1 : hi + 1] > 1]
        values[comp] = values[pk[comp]] * values[rest[comp]]
        lo = hi
    return ValueTable(spec=spec, limit=limit, values=values)


# ---------------------------------------------------------------------------
# compensated block summation

try:  # numba speeds the per-block kernel up ~300x; the fallback is bit-identical
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def _kahan_block_py(vals, offsets):
    caps = np.zeros(offsets.size, dtype=np.complex128)
    s = 0.0 + 0.0j
    c = 0.0 + 0.0j
    j = 0
    while j < offsets.size and offsets[j] == 0:
        j += 1
    for i in range(vals.size):
        y = complex(vals[i]) - c
        t = s + y
        c = (t - s) - y
        s = t
        while j < offsets.size and offsets[j] == i + 1:
            caps[j] = s
            j += 1
    return s, caps


if _HAVE_NUMBA:
    _kahan_block = _njit(cache=True, nogil=True)(_kahan_block_py)
else:  # pragma: no cover
    _kahan_block = _kahan_block_py


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get("PRETENSE_THREADS", "")
        threads = int(env) if env.strip() else 1
    threads = int(threads)
    if threads < 1:
        raise InvalidArgumentError(f"thread count must be >= 1, got {threads}")
    return threads


def checkpointed_sums(
    terms: np.ndarray,
    positions: np.ndarray,
    mode: str = SEQUENTIAL,
    threads: Optional[int] = None,
) -> np.ndarray:
    """Compensated prefix sums of `terms` at sorted 0-based prefix lengths.

    The reduction order is fixed by the block layout, never by the thread
    count, so both modes agree bit for bit.
    """
    if mode not in SUMMATION_MODES:
        raise InvalidArgumentError(f"unknown summation mode {mode!r}")
    terms = np.ascontiguousarray(terms, dtype=np.complex128)
    positions = np.asarray(positions, dtype=np.int64)
    if positions.size and (
        np.any(positions[1:] < positions[:-1])
        or positions[0] < 0
        or positions[-1] > terms.size
    ):
        raise InvalidArgumentError("prefix positions must be sorted within range")

    nblocks = (terms.size + BLOCK - 1) // BLOCK
    per_block_offsets = []
    for j in range(nblocks):
        in_block = positions[
            (positions > j * BLOCK) & (positions <= j * BLOCK + BLOCK)
        ]
        # a position at an exact block boundary is served by the fold alone
        in_block = in_block[in_block < (j + 1) * BLOCK]
        per_block_offsets.append(np.asarray(in_block - j * BLOCK, dtype=np.int64))

    def work(j):
        return _kahan_block(terms[j * BLOCK : (j + 1) * BLOCK], per_block_offsets[j])

    if mode == BLOCK_PARALLEL:
        nthreads = _resolve_threads(threads)
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            block_results = list(pool.map(work, range(nblocks)))
    else:
        block_results = [work(j) for j in range(nblocks)]

    out = np.zeros(positions.size, dtype=np.complex128)
    s = 0.0 + 0.0j
    c = 0.0 + 0.0j
    i = 0
    while i < positions.size and positions[i] == 0:
        i += 1
    for j in range(nblocks):
        block_sum, caps = block_results[j]
        ci = 0
        while i < positions.size and j * BLOCK < positions[i] < (j + 1) * BLOCK:
            out[i] = s + caps[ci]
            ci += 1
            i += 1
        y = block_sum - c
        t = s + y
        c = (t - s) - y
        s = t
        while i < positions.size and positions[i] == (j + 1) * BLOCK:
            out[i] = s
            i += 1
    return out


def partial_sums(
    table: ValueTable,
    checkpoints: Sequence[float],
    mode: str = SEQUENTIAL,
    threads: Optional[int] = None,
) -> PartialSumSeries:
    """S_f(x_i) = Σ_{n ≤ x_i} f(n) at strictly increasing real checkpoints."""
    x = np.asarray(checkpoints, dtype=np.float64)
    if x.size == 0:
        raise InvalidArgumentError("need at least one checkpoint")
    if np.any(np.diff(x) <= 0):
        raise InvalidArgumentError("checkpoints must be strictly increasing")
    if x[0] < 1:
        raise InvalidArgumentError(f"checkpoints start at 1, got {x[0]}")
    if x[-1] > table.limit:
        raise OutOfRangeError(
            f"checkpoint {x[-1]} beyond table limit {table.limit}"
        )
    positions = np.floor(x).astype(np.int64)
    sums = checkpointed_sums(table.values[1:], positions, mode=mode, threads=threads)
    return PartialSumSeries(checkpoints=x, sums=sums, summation_mode=mode, source=table)


def mean_square_sum(table: ValueTable, x: float) -> float:
    """Σ_{n ≤ x} |f(n)|² (nonnegative, nondecreasing in x)."""
    m = int(math.floor(x))
    if m < 1 or m > table.limit:
        raise OutOfRangeError(f"x={x} outside [1, {table.limit}]")
    v = table.values[1 : m + 1]
    return float(np.sum(v.real * v.real + v.imag * v.imag))


def geometric_checkpoints(lo: float, hi: float, ratio: float = GRID_RATIO) -> np.ndarray:
    """Grid ⌊lo·ratio^j⌋, deduplicated, clipped to hi.  Default ratio 10^(1/8)."""
    if not (lo >= 1 and hi >= lo):
        raise InvalidArgumentError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    if ratio <= 1:
        raise InvalidArgumentError(f"grid ratio must exceed 1, got {ratio}")
    pts = []
    x = float(lo)
    while math.floor(x) <= hi:
        pts.append(math.floor(x))
        x *= ratio
    out = np.unique(np.asarray(pts, dtype=np.float64))
    return out


# ---------------------------------------------------------------------------
# CSV serialization: header n_or_x,re,im,abs with round-trip precision


def _fmt(v) -> str:
    f = float(v)
    if f.is_integer() and abs(f) < 2**53:
        return str(int(f))
    return repr(f)


def _csv_rows(xs, values) -> str:
    lines = ["n_or_x,re,im,abs"]
    for x, v in zip(xs, values):
        v = complex(v)
        lines.append(f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v))}")
    return "\n".join(lines) + "\n"


def table_csv(table: ValueTable) -> str:
    return _csv_rows(range(1, table.limit + 1), table.values[1:])


def series_csv(series: PartialSumSeries) -> str:
    return _csv_rows(series.checkpoints, series.sums)


def read_series_csv(text: str) -> PartialSumSeries:
    """Parse the CSV written by series_csv back into a series (no source table)."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].split(",")[:2] != ["n_or_x", "re"]:
        raise InvalidArgumentError("missing n_or_x,re,im,abs header")
    xs, vs = [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 4:
            raise InvalidArgumentError(f"malformed CSV row {ln!r}")
        xs.append(float(parts[0]))
        vs.append(complex(float(parts[1]), float(parts[2])))
    return PartialSumSeries(
        checkpoints=np.asarray(xs), sums=np.asarray(vs), summation_mode=SEQUENTIAL
    )
