"""Distance and majorant series between multiplicative functions.

All quantities here are finite partial sums with a diagnostic attached, not
convergence proofs.  Prime-indexed series (the classic, beta and strong
distances) get a fitted slope of their partials against log log cutoff, and
the slope threshold classifies the report as plateauing or growing.  Local
series over prime powers (the square and absolute quotient series) instead
truncate each inner k-sum at a declared depth and apply a trailing ratio
test, reporting a geometric tail bound when it passes and a divergence flag
when it does not.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    COMPLETELY_MULTIPLICATIVE,
    FunctionSpec,
    SEQUENTIAL,
    SieveIndex,
    ValueTable,
    build_sieve,
    checkpointed_sums,
    evaluate,
    geometric_checkpoints,
    prime_values_of,
)
from .errors import InvalidArgumentError, OutOfRangeError

PLATEAU_SLOPE = 0.01
VERDICT_PLATEAU = "plateau (consistent with convergence)"
VERDICT_GROWING = "growing"
DEFAULT_TRUNCATION = 40
UNIT_DISC_SLACK = 1e-9


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


@dataclass(frozen=True)
class DistanceReport:
    """A checkpointed nonnegative series with its convergence diagnostic.

    kind is one of classic, beta, strong-beta-k, H-sigma, Hhat-Y-sigma,
    h-L2, h-L1.  params carries the defining parameters plus any per-prime
    status a local series produced.  partials are nondecreasing.
    """

    kind: str
    params: dict
    cutoffs: np.ndarray
    partials: np.ndarray
    tail_slope: Optional[float]
    verdict: str

    @property
    def total(self) -> float:
        return float(self.partials[-1]) if self.partials.size else 0.0

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "params": _json_safe(self.params),
            "cutoffs": [float(x) for x in self.cutoffs],
            "partials": [float(s) for s in self.partials],
            "tail_slope": _json_safe(self.tail_slope),
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)


def fit_tail_slope(cutoffs: np.ndarray, partials: np.ndarray) -> Optional[float]:
    """Least-squares slope of the upper half of partials against log log x.

    None when fewer than two upper-half checkpoints exceed e (log log must
    be defined and the fit needs two points).
    """
    x = np.asarray(cutoffs, dtype=np.float64)
    y = np.asarray(partials, dtype=np.float64)
    half = x.size // 2
    x, y = x[half:], y[half:]
    keep = x > np.e
    x, y = x[keep], y[keep]
    if x.size < 2:
        return None
    u = np.log(np.log(x))
    if u[-1] == u[0]:
        return None
    return float(np.polyfit(u, y, 1)[0])


def _verdict(slope: Optional[float]) -> str:
    if slope is None:
        return "no slope (too few checkpoints)"
    return VERDICT_PLATEAU if slope < PLATEAU_SLOPE else VERDICT_GROWING


def _checkpoints_for(cutoff: float, checkpoints) -> np.ndarray:
    if checkpoints is not None:
        x = np.asarray(checkpoints, dtype=np.float64)
        if x.size == 0 or np.any(np.diff(x) <= 0):
            raise InvalidArgumentError("checkpoints must be strictly increasing")
        if x[-1] > cutoff:
            raise OutOfRangeError(f"checkpoint {x[-1]} beyond cutoff {cutoff}")
        return x
    return geometric_checkpoints(min(10, cutoff), cutoff)


def _prime_report(kind, params, ps, terms, cutoffs, mode, threads) -> DistanceReport:
    positions = np.searchsorted(ps, cutoffs, side="right")
    partials = checkpointed_sums(
        terms.astype(np.complex128), positions, mode=mode, threads=threads
    ).real
    slope = fit_tail_slope(cutoffs, partials)
    return DistanceReport(
        kind=kind,
        params=params,
        cutoffs=cutoffs,
        partials=partials,
        tail_slope=slope,
        verdict=_verdict(slope),
    )


def _require_unit_disc(label: str, spec: FunctionSpec, ps, vals) -> None:
    bad = np.abs(vals) > 1.0 + UNIT_DISC_SLACK
    if np.any(bad):
        p = int(ps[np.argmax(bad)])
        raise InvalidArgumentError(
            f"{label}={spec.name!r} leaves the unit disc at p={p}"
        )


def distance_classic(
    f: FunctionSpec,
    g: FunctionSpec,
    cutoff: float,
    checkpoints=None,
    sieve: Optional[SieveIndex] = None,
    mode: str = SEQUENTIAL,
    threads: Optional[int] = None,
) -> DistanceReport:
    """Squared prime distance: partials of Σ_{p≤x} (1 − Re f(p) conj(g(p)))/p."""
    return distance_beta(
        f, g, 1.0, cutoff,
        checkpoints=checkpoints, sieve=sieve, mode=mode, threads=threads,
        _kind="classic",
    )


def distance_beta(
    f: FunctionSpec,
    g: FunctionSpec,
    beta: float,
    cutoff: float,
    checkpoints=None,
    sieve: Optional[SieveIndex] = None,
    mode: str = SEQUENTIAL,
    threads: Optional[int] = None,
    _kind: str = "beta",
) -> DistanceReport:
    """Squared beta-weighted distance: Σ_{p≤x} (1 − Re f(p) conj(g(p)))/p^β."""
    beta = float(beta)
    if not 0.0 < beta <= 1.0:
        raise InvalidArgumentError(f"beta must be in (0, 1], got {beta}")
    cutoff = float(cutoff)
    if cutoff < 2:
        raise InvalidArgumentError("cutoff must be >= 2")
    if sieve is None:
        sieve = build_sieve(int(cutoff))
    ps = sieve.primes[sieve.primes <= cutoff]
    fp = prime_values_of(f, ps)
    gp = prime_values_of(g, ps)
    _require_unit_disc("f", f, ps, fp)
    _require_unit_disc("g", g, ps, gp)
    terms = (1.0 - (fp * np.conj(gp)).real) / ps.astype(np.float64) ** beta
    params = {"f": f.name, "g": g.name, "cutoff": cutoff}
    if _kind == "beta":
        params["beta"] = beta
    return _prime_report(
        _kind, params, ps, terms, _checkpoints_for(cutoff, checkpoints),
        mode, threads,
    )


def distance_strong(
    f: FunctionSpec,
    g: FunctionSpec,
    beta: float,
    k: int,
    cutoff: float,
    checkpoints=None,
    sieve: Optional[SieveIndex] = None,
    mode: str = SEQUENTIAL,
    threads: Optional[int] = None,
) -> DistanceReport:
    """Strong distance partials: Σ_{p≤x} Σ_{j=1}^k |f(p^j) − g(p^j)|/p^{jβ}.

    No unit-disc requirement; β may exceed 1.
    """
    beta = float(beta)
    if beta <= 0:
        raise InvalidArgumentError(f"beta must be > 0, got {beta}")
    k = int(k)
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    cutoff = float(cutoff)
    if cutoff < 2:
        raise InvalidArgumentError("cutoff must be >= 2")
    if sieve is None:
        sieve = build_sieve(int(cutoff))
    ps = sieve.primes[sieve.primes <= cutoff]
    pf = ps.astype(np.float64)
    fp = prime_values_of(f, ps)
    gp = prime_values_of(g, ps)
    terms = np.abs(fp - gp) / pf**beta
    both_cm = (
        f.kind == COMPLETELY_MULTIPLICATIVE and g.kind == COMPLETELY_MULTIPLICATIVE
    )
    for j in range(2, k + 1):
        if both_cm:
            diff = np.abs(fp**j - gp**j)
        else:
            diff = np.abs(
                np.array([f.value(int(p), j) - g.value(int(p), j) for p in ps])
            )
        terms += diff / pf ** (j * beta)
    params = {"f": f.name, "g": g.name, "beta": beta, "k": k, "cutoff": cutoff}
    return _prime_report(
        "strong-beta-k", params, ps, terms,
        _checkpoints_for(cutoff, checkpoints), mode, threads,
    )


# ---------------------------------------------------------------------------
# truncated local series over prime powers

def _spec_of(h) -> FunctionSpec:
    # accept either a FunctionSpec or anything carrying one (QuotientSpec)
    return h if isinstance(h, FunctionSpec) else h.spec


def _truncated_local_report(
    kind: str,
    h: FunctionSpec,
    sigma: float,
    ps,
    K: int,
    power: int,
    k_start: int,
    extra_params: dict,
) -> DistanceReport:
    """Σ_p Σ_k |h(p^k)|^power / p^{kσ} with the inner sum truncated at K.

    The trailing ratio t_K/t_{K−1} decides each prime's flag: below 1 the
    tail is bounded by the geometric series t_K ρ/(1−ρ); a trailing pair of
    zeros counts as converged with zero tail; anything else is flagged
    divergent.  A divergent flag is conservative: it means the ratio test
    failed at depth K, not a proof of divergence.
    """
    if K < 2:
        raise InvalidArgumentError("truncation depth must be >= 2")
    rows = []
    partial_list = []
    running = 0.0
    diverged = []
    tail_total = 0.0
    for p in ps:
        p = int(p)
        tk = [
            abs(h.value(p, k)) ** power / float(p) ** (k * sigma)
            for k in range(k_start, K + 1)
        ]
        inner = float(sum(tk))
        t_last, t_prev = tk[-1], tk[-2]
        if t_prev == 0.0 and t_last == 0.0:
            ok, tail = True, 0.0
        elif t_prev > 0.0 and t_last / t_prev < 1.0:
            rho = t_last / t_prev
            ok, tail = True, t_last * rho / (1.0 - rho)
        else:
            ok, tail = False, math.inf
        if not ok:
            diverged.append(p)
        tail_total += tail
        running += inner
        rows.append((p, inner, ok, tail))
        partial_list.append(running)
    converged = not diverged
    params = dict(extra_params)
    params.update(
        {
            "h": h.name,
            "sigma": sigma,
            "truncation": K,
            "value": running,
            "converged": converged,
            "tail_bound": tail_total if converged else math.inf,
            "diverged_primes": diverged,
            "prime_status": rows,
        }
    )
    cutoffs = np.asarray([float(p) for p in ps], dtype=np.float64)
    partials = np.asarray(partial_list, dtype=np.float64)
    slope = fit_tail_slope(cutoffs, partials)
    if converged:
        verdict = f"inner sums converged (tail bound {tail_total:.6g})"
    else:
        verdict = "divergent at p in {" + ", ".join(str(p) for p in diverged) + "}"
    return DistanceReport(
        kind=kind,
        params=params,
        cutoffs=cutoffs,
        partials=partials,
        tail_slope=slope,
        verdict=verdict,
    )


def quotient_square_series(
    h, sigma: float, truncation: int = DEFAULT_TRUNCATION
) -> DistanceReport:
    """Σ_{p ≤ 4^{1/σ}} Σ_{k≥0} |h(p^k)|²/p^{kσ}, inner sums truncated.

    The prime range 4^{1/σ} is part of the definition and is taken
    literally; for σ > 2 it is empty and the value is 0.
    """
    sigma = float(sigma)
    if sigma <= 0:
        raise InvalidArgumentError(f"sigma must be > 0, got {sigma}")
    spec = _spec_of(h)
    cutoff = 4.0 ** (1.0 / sigma)
    if cutoff >= 2.0:
        ps = [int(p) for p in build_sieve(int(cutoff)).primes]
    else:
        ps = []
    return _truncated_local_report(
        "H-sigma", spec, sigma, ps, truncation, power=2, k_start=0,
        extra_params={"prime_cutoff": cutoff},
    )


def quotient_abs_series(
    h, sigma: float, Y: float, truncation: int = DEFAULT_TRUNCATION
) -> DistanceReport:
    """Σ_{p≤Y} Σ_{k≥1} |h(p^k)|/p^{kσ}, inner sums truncated at the declared depth."""
    sigma = float(sigma)
    if sigma <= 0:
        raise InvalidArgumentError(f"sigma must be > 0, got {sigma}")
    Y = float(Y)
    if Y < 2:
        raise InvalidArgumentError(f"Y must be >= 2, got {Y}")
    spec = _spec_of(h)
    ps = [int(p) for p in build_sieve(int(Y)).primes if p <= Y]
    return _truncated_local_report(
        "Hhat-Y-sigma", spec, sigma, ps, truncation, power=1, k_start=1,
        extra_params={"Y": Y},
    )


def h_majorant_series(
    h,
    sigma: float,
    N: int,
    power: str = "L2",
    sieve: Optional[SieveIndex] = None,
    mode: str = SEQUENTIAL,
    threads: Optional[int] = None,
    checkpoints=None,
) -> DistanceReport:
    """Dense majorant partials Σ_{n≤x} |h(n)|^{1 or 2} / n^σ for x up to N."""
    if power not in ("L1", "L2"):
        raise InvalidArgumentError("power must be L1 or L2")
    sigma = float(sigma)
    N = int(N)
    if N < 1:
        raise InvalidArgumentError("N must be >= 1")
    spec = _spec_of(h)
    if isinstance(h, ValueTable):
        table = h
        if table.limit < N:
            raise OutOfRangeError(f"table covers [1,{table.limit}], need {N}")
    else:
        if sieve is None:
            sieve = build_sieve(N)
        table = evaluate(spec, sieve, N)
    n = np.arange(N + 1, dtype=np.float64)
    n[0] = 1.0  # keep the unused 0 slot finite
    mag = np.abs(table.values[: N + 1])
    w = (mag if power == "L1" else mag * mag) / n**sigma
    x = _checkpoints_for(float(N), checkpoints)
    positions = np.floor(x).astype(np.int64)
    partials = checkpointed_sums(
        w[1:].astype(np.complex128), positions, mode=mode, threads=threads
    ).real
    slope = fit_tail_slope(x, partials)
    params = {"h": spec.name, "sigma": sigma, "N": N, "power": power}
    return DistanceReport(
        kind="h-L2" if power == "L2" else "h-L1",
        params=params,
        cutoffs=x,
        partials=partials,
        tail_slope=slope,
        verdict=_verdict(slope),
    )


def h2_envelope(beta: float, dist_beta_sq: float) -> float:
    """The quotient-majorant envelope exp(2 (1 − 2^{−β})^{-1} · 𝔻_β²)."""
    beta = float(beta)
    if not 0.0 < beta <= 1.0:
        raise InvalidArgumentError(f"beta must be in (0, 1], got {beta}")
    return float(np.exp(2.0 / (1.0 - 2.0**-beta) * dist_beta_sq))
