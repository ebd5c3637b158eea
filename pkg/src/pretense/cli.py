"""Command-line front end.

Exit codes: 0 on success, 1 on a computation error (bad spec, out-of-range
argument, a verify bundle with failing rows), 2 on a usage error.

Spec arguments (--spec, --spec2) accept, in order of trial:
  * a builtin name: one, delta, moebius, liouville
  * shorthand: char:Q:INDEX, kron:D, twist:T, random:SEED[:LIMIT[:KIND]]
  * inline descriptor JSON (starts with "{"), @FILE, or a path to a .json
    file holding a descriptor as emitted by `construct`

Checkpoint grids (--checkpoints) accept a comma list ("10,100,1000") or a
geometric range "LO:HI" on the default ratio.

A plain-text config file (--config, key=value under [args] plus optional
[spec]/[spec2] descriptor sections) supplies defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from configparser import RawConfigParser
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .asymptotics import (
    growth_fit,
    l_truncation,
    quotient_identity_check,
    xi_from_sums,
    xi_lookup,
    xi_tilde,
    EXACT,
    NEAREST,
)
from .constructions import (
    archimedean_twist,
    dirichlet_character,
    kronecker_character,
    optimality_twist,
    spec_descriptor,
    spec_from_descriptor,
    sparse_dyadic,
    squarefree_restrict,
    standard_spec,
)
from .core import (
    BLOCK_PARALLEL,
    COMPLETELY_MULTIPLICATIVE,
    GENERAL_MULTIPLICATIVE,
    SEQUENTIAL,
    build_sieve,
    evaluate,
    geometric_checkpoints,
    partial_sums,
    read_series_csv,
    series_csv,
    table_csv,
    _fmt,
)
from .degree import alpha_coeffs, degree_d_spec, recursion_residual
from .dirichlet import dirichlet_inverse, solve_quotient
from .errors import InvalidArgumentError, PretenseError
from .metrics import (
    distance_beta,
    distance_classic,
    distance_strong,
    h_majorant_series,
    quotient_abs_series,
    quotient_square_series,
)
from .randspecs import random_spec
from .verify import BUNDLES, DEFAULT_SEED, bundle_json, run_bundle

_STANDARD_NAMES = ("one", "delta", "moebius", "liouville")


# ---------------------------------------------------------------------------
# argument parsing helpers

def parse_spec_arg(text: str):
    s = text.strip()
    if s.startswith("@"):
        s = Path(s[1:]).read_text()
    elif s.startswith("{"):
        pass
    elif s.endswith(".json") and os.path.exists(s):
        s = Path(s).read_text()
    else:
        return _spec_shorthand(s)
    return spec_from_descriptor(json.loads(s))


def _spec_shorthand(s: str):
    if s in _STANDARD_NAMES:
        return standard_spec(s)
    head, _, rest = s.partition(":")
    try:
        if head == "char":
            q, ix = rest.split(":")
            return dirichlet_character(int(q), int(ix))
        if head == "kron":
            return kronecker_character(int(rest))
        if head == "twist":
            return archimedean_twist(float(rest))
        if head == "random":
            parts = rest.split(":")
            seed = int(parts[0])
            limit = int(float(parts[1])) if len(parts) > 1 else 10**4
            kind = parts[2] if len(parts) > 2 else "cm"
            kind_name = {
                "cm": COMPLETELY_MULTIPLICATIVE,
                "gm": GENERAL_MULTIPLICATIVE,
            }[kind]
            return random_spec(seed, limit=limit, kind=kind_name)
    except (ValueError, KeyError) as exc:
        raise InvalidArgumentError(f"cannot parse spec shorthand {s!r}: {exc}")
    raise InvalidArgumentError(
        f"cannot parse spec {s!r}; expected a builtin name {_STANDARD_NAMES}, "
        "char:Q:INDEX, kron:D, twist:T, random:SEED, descriptor JSON, or a "
        "descriptor file path"
    )


def parse_checkpoints(text: Optional[str], n: int):
    if text is None:
        return geometric_checkpoints(min(10, n), n)
    s = text.strip()
    if ":" in s:
        lo, hi = s.split(":")
        return geometric_checkpoints(float(lo), float(hi))
    return np.array([float(v) for v in s.split(",")])


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise InvalidArgumentError(f"cannot parse {text!r} as a complex number")


def _sum_mode(threads: Optional[int]) -> str:
    # both modes produce identical bits; pick the parallel path when the
    # caller asked for workers so the flag actually exercises it
    return BLOCK_PARALLEL if threads else SEQUENTIAL


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump_json(obj, out: Optional[str]) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True), out)


# ---------------------------------------------------------------------------
# experiment config files

@dataclass
class ExperimentConfig:
    """Plain-text run description: key=value pairs under section headers.

    [args] holds flag values by flag name (no dashes); [spec] and [spec2]
    hold descriptor fields, dotted keys for nesting, values JSON-encoded
    when not plain strings.  Round-trips losslessly through dumps/loads.
    """

    sections: Dict[str, Dict[str, str]] = field(default_factory=dict)

    @classmethod
    def loads(cls, text: str) -> "ExperimentConfig":
        cp = RawConfigParser(delimiters=("=",), comment_prefixes=("#",))
        cp.optionxform = str
        cp.read_string(text)
        return cls({name: dict(cp.items(name)) for name in cp.sections()})

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.loads(Path(path).read_text())

    def dumps(self) -> str:
        cp = RawConfigParser(delimiters=("=",))
        cp.optionxform = str
        for name in self.sections:
            cp.add_section(name)
            for k, v in self.sections[name].items():
                cp.set(name, k, v)
        buf = StringIO()
        cp.write(buf)
        return buf.getvalue()

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps())

    def _section_descriptor(self, name: str) -> Optional[dict]:
        flat = self.sections.get(name)
        if not flat:
            return None
        root: dict = {}
        for dotted, raw in flat.items():
            try:
                value = json.loads(raw)
            except json.JSONDecodeError:
                value = raw
            node = root
            *heads, leaf = dotted.split(".")
            for h in heads:
                node = node.setdefault(h, {})
            node[leaf] = value
        return root

    def argv_prefix(self) -> List[str]:
        """Flags implied by the config, to go before explicit ones."""
        out: List[str] = []
        for key, value in self.sections.get("args", {}).items():
            out.extend([f"--{key}", value])
        for section, flag in (("spec", "--spec"), ("spec2", "--spec2")):
            desc = self._section_descriptor(section)
            if desc is not None:
                out.extend([flag, json.dumps(desc, sort_keys=True)])
        return out


def _apply_config(argv: List[str]) -> List[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise InvalidArgumentError("--config needs a file path")
    cfg = ExperimentConfig.load(argv[i + 1])
    rest = argv[:i] + argv[i + 2:]
    if not rest:
        raise InvalidArgumentError("--config cannot supply the subcommand itself")
    # insert after the subcommand so explicit flags parsed later win
    return [rest[0]] + cfg.argv_prefix() + rest[1:]


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_sieve(a) -> int:
    sv = build_sieve(a.N)
    if a.out:
        Path(a.out).write_text(
            "p\n" + "\n".join(str(int(p)) for p in sv.primes) + "\n"
        )
    print(json.dumps(
        {
            "limit": int(a.N),
            "count": int(len(sv.primes)),
            "largest": int(sv.primes[-1]) if len(sv.primes) else None,
        },
        sort_keys=True,
    ))
    return 0


def _cmd_eval(a) -> int:
    spec = parse_spec_arg(a.spec)
    table = evaluate(spec, build_sieve(a.N))
    _emit(table_csv(table), a.out)
    return 0


def _cmd_sums(a) -> int:
    spec = parse_spec_arg(a.spec)
    table = evaluate(spec, build_sieve(a.N))
    grid = parse_checkpoints(a.checkpoints, a.N)
    series = partial_sums(table, grid, mode=_sum_mode(a.threads), threads=a.threads)
    _emit(series_csv(series), a.out)
    return 0


def _cmd_convolve(a) -> int:
    sv = build_sieve(a.N)
    ft = evaluate(parse_spec_arg(a.spec), sv)
    ht = evaluate(parse_spec_arg(a.spec2), sv)
    from .dirichlet import convolve_table

    _emit(table_csv(convolve_table(ft, ht)), a.out)
    return 0


def _parse_primes(text: Optional[str], default_limit: int = 50):
    if text is None:
        return tuple(int(p) for p in build_sieve(default_limit).primes)
    return tuple(int(v) for v in text.split(","))


def _cmd_quotient(a) -> int:
    f = parse_spec_arg(a.spec)
    g = parse_spec_arg(a.spec2)
    q = solve_quotient(f, g, primes=_parse_primes(a.primes), max_exponent=a.k)
    _dump_json(q.to_json_obj(), a.out)
    return 0


def _cmd_inverse(a) -> int:
    h = parse_spec_arg(a.spec)
    inv = dirichlet_inverse(h)
    local = [
        {
            "prime": p,
            "coeffs": [[inv.value(p, j).real, inv.value(p, j).imag]
                       for j in range(a.k + 1)],
        }
        for p in _parse_primes(a.primes)
    ]
    _dump_json(local, a.out)
    return 0


def _cmd_distance(a) -> int:
    f = parse_spec_arg(a.spec)
    g = parse_spec_arg(a.spec2)
    grid = parse_checkpoints(a.checkpoints, a.N) if a.checkpoints else None
    mode = _sum_mode(a.threads)
    if a.kind == "classic":
        rep = distance_classic(f, g, a.N, checkpoints=grid,
                               mode=mode, threads=a.threads)
    elif a.kind == "beta":
        rep = distance_beta(f, g, a.beta, a.N, checkpoints=grid,
                            mode=mode, threads=a.threads)
    else:
        rep = distance_strong(f, g, a.beta, a.k, a.N, checkpoints=grid,
                              mode=mode, threads=a.threads)
    _emit(rep.to_json(), a.out)
    return 0


def _cmd_hseries(a) -> int:
    spec = parse_spec_arg(a.spec)
    if a.spec2 is not None:
        g = parse_spec_arg(a.spec2)
        spec = solve_quotient(spec, g, primes=(2, 3, 5),
                              max_exponent=max(a.k, 2)).spec
    if a.N is not None:
        table = evaluate(spec, build_sieve(a.N))
        rep = h_majorant_series(table, a.sigma, a.N, power=a.power,
                                mode=_sum_mode(a.threads), threads=a.threads)
    elif a.Y is not None:
        rep = quotient_abs_series(spec, a.sigma, a.Y, truncation=a.k)
    else:
        rep = quotient_square_series(spec, a.sigma, truncation=a.k)
    _emit(rep.to_json(), a.out)
    return 0


def _cmd_degree(a) -> int:
    names = [s for s in a.constituents.split(",") if s]
    spec = degree_d_spec([parse_spec_arg(s) for s in names])
    coeffs = alpha_coeffs(spec, a.p)
    residuals = [recursion_residual(spec, a.p, n) for n in range(0, a.k + 1)]
    _dump_json(
        {
            "degree": spec.degree,
            "coeffs": coeffs.to_json_obj(),
            "residuals": residuals,
        },
        a.out,
    )
    return 0


def _cmd_construct(a) -> int:
    name = a.name
    if name in _STANDARD_NAMES:
        spec = standard_spec(name)
    elif name == "character":
        spec = dirichlet_character(a.q, a.index)
    elif name == "kronecker":
        spec = kronecker_character(a.D)
    elif name == "archimedean-twist":
        spec = archimedean_twist(a.t)
    elif name == "sparse-dyadic":
        if a.spec is None or a.intervals is None:
            raise InvalidArgumentError("sparse-dyadic needs --spec and --intervals")
        spec = sparse_dyadic(parse_spec_arg(a.spec),
                             [int(v) for v in a.intervals.split(",")])
    elif name == "optimality-twist":
        if a.spec is None:
            raise InvalidArgumentError("optimality-twist needs --spec and --beta")
        cutoff = int(a.cutoff) if a.cutoff else 10**7
        spec = optimality_twist(parse_spec_arg(a.spec), a.beta,
                                diagnostics_cutoff=cutoff)
    elif name == "squarefree-restrict":
        if a.spec is None:
            raise InvalidArgumentError("squarefree-restrict needs --spec")
        spec = squarefree_restrict(parse_spec_arg(a.spec))
    elif name == "random":
        spec = random_spec(a.seed, limit=a.N or 10**4)
    elif name == "degree-d":
        if not a.constituents:
            raise InvalidArgumentError("degree-d needs --constituents")
        spec = degree_d_spec(
            [parse_spec_arg(s) for s in a.constituents.split(",") if s]
        )
    else:
        raise InvalidArgumentError(f"unknown construction {name!r}")
    _dump_json(spec_descriptor(spec), a.out)
    return 0


def _cmd_growth_fit(a) -> int:
    series = read_series_csv(Path(a.series).read_text())
    _emit(growth_fit(series).to_json(), a.out)
    return 0


def _cmd_xi(a) -> int:
    f = parse_spec_arg(a.spec)
    sv = build_sieve(a.N)
    table = evaluate(f, sv)
    grid = parse_checkpoints(a.checkpoints, a.N)
    series = partial_sums(table, grid, mode=_sum_mode(a.threads), threads=a.threads)
    xi = xi_from_sums(series, a.alpha)
    if a.x is not None:
        if a.spec2 is not None:
            g = parse_spec_arg(a.spec2)
            h = solve_quotient(f, g, primes=(2, 3, 5), max_exponent=18).spec
            v = xi_tilde(evaluate(h, sv), xi, a.x, mode=a.mode)
            payload = {"x": a.x, "kind": "convolved", "value": [v.real, v.imag]}
        else:
            v = xi_lookup(xi, a.x, mode=a.mode)
            payload = {"x": a.x, "kind": "sample", "value": [v.real, v.imag]}
        _dump_json(payload, a.out)
        return 0
    lines = ["n_or_x,re,im,abs"]
    for x, v in xi.sample_pairs():
        lines.append(f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v))}")
    _emit("\n".join(lines), a.out)
    return 0


def _cmd_lseries(a) -> int:
    s = _parse_complex(a.s)
    sv = build_sieve(a.N)
    f = parse_spec_arg(a.spec)
    ft = evaluate(f, sv)
    if a.spec2 is None:
        _emit(l_truncation(ft, s).to_json(), a.out)
        return 0
    g = parse_spec_arg(a.spec2)
    h = solve_quotient(f, g, primes=(2, 3, 5), max_exponent=18).spec
    check = quotient_identity_check(ft, evaluate(g, sv), evaluate(h, sv), s)
    _emit(check.to_json(), a.out)
    return 0


def _cmd_verify(a) -> int:
    results = run_bundle(a.bundle, seed=a.seed, threads=a.threads)
    for r in results:
        print(r.row())
    n_pass = sum(r.passed for r in results)
    print(f"{a.bundle}: {n_pass}/{len(results)} checks passed")
    if a.out:
        outdir = Path(a.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / f"{a.bundle}.json").write_text(
            bundle_json(a.bundle, a.seed, results) + "\n"
        )
    return 0 if n_pass == len(results) else 1


# ---------------------------------------------------------------------------
# parser wiring

def _add_common(p, *names, **overrides):
    defs = {
        "--N": dict(type=lambda v: int(float(v)), help="dense table limit"),
        "--spec": dict(type=str, help="function spec (see module docstring)"),
        "--spec2": dict(type=str, help="second function spec"),
        "--beta": dict(type=float, help="distance weight exponent in (0,1]"),
        "--sigma": dict(type=float, help="series evaluation point"),
        "--k": dict(type=int, help="max exponent / truncation depth"),
        "--Y": dict(type=float, help="prime cutoff for the first-power series"),
        "--alpha": dict(type=float, help="normalization exponent"),
        "--checkpoints": dict(type=str, help='comma list "10,100" or range "1e3:1e6"'),
        "--out": dict(type=str, help="write output here instead of stdout"),
        "--seed": dict(type=int, default=DEFAULT_SEED, help="random seed"),
        "--threads": dict(type=int, default=None,
                          help="worker count (default PRETENSE_THREADS or 1)"),
        "--mode": dict(type=str, choices=(EXACT, NEAREST), default=EXACT,
                       help="lookup mode for normalized sums"),
        "--primes": dict(type=str, help='comma list of primes, e.g. "2,3,5"'),
    }
    for name in names:
        kw = dict(defs[name])
        kw.update(overrides.get(name.lstrip("-"), {}))
        p.add_argument(name, **kw)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pretense",
        description="multiplicative-function distance and quotient toolkit",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="smallest-prime-factor sieve summary")
    _add_common(p, "--N", "--out", N={"required": True})
    p.set_defaults(fn=_cmd_sieve)

    p = sub.add_parser("eval", help="dense value table as CSV")
    _add_common(p, "--spec", "--N", "--out",
                spec={"required": True}, N={"required": True})
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("sums", help="checkpointed partial sums as CSV")
    _add_common(p, "--spec", "--N", "--checkpoints", "--threads", "--out",
                spec={"required": True}, N={"required": True})
    p.set_defaults(fn=_cmd_sums)

    p = sub.add_parser("convolve", help="Dirichlet convolution table as CSV")
    _add_common(p, "--spec", "--spec2", "--N", "--out",
                spec={"required": True}, spec2={"required": True},
                N={"required": True})
    p.set_defaults(fn=_cmd_convolve)

    p = sub.add_parser("quotient", help="solve f*h = g for local series of h")
    _add_common(p, "--spec", "--spec2", "--primes", "--k", "--out",
                spec={"required": True}, spec2={"required": True},
                k={"default": 12})
    p.set_defaults(fn=_cmd_quotient)

    p = sub.add_parser("inverse", help="Dirichlet-inverse local series")
    _add_common(p, "--spec", "--primes", "--k", "--out",
                spec={"required": True}, k={"default": 12})
    p.set_defaults(fn=_cmd_inverse)

    p = sub.add_parser("distance", help="pretentious distance report as JSON")
    p.add_argument("--kind", choices=("classic", "beta", "strong"),
                   default="classic")
    _add_common(p, "--spec", "--spec2", "--beta", "--k", "--N",
                "--checkpoints", "--threads", "--out",
                spec={"required": True}, spec2={"required": True},
                N={"required": True}, beta={"default": 1.0}, k={"default": 1})
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser(
        "hseries",
        help="quotient size series: squares at sigma, first powers up to Y, "
             "or a dense majorant up to N",
    )
    p.add_argument("--power", choices=("L2", "L1"), default="L2")
    _add_common(p, "--spec", "--spec2", "--sigma", "--Y", "--N", "--k",
                "--threads", "--out",
                spec={"required": True}, sigma={"required": True},
                k={"default": 40})
    p.set_defaults(fn=_cmd_hseries)

    p = sub.add_parser("degree", help="symmetric coefficients and recursion check")
    p.add_argument("--constituents", required=True,
                   help='comma list of specs, e.g. "one,one"')
    p.add_argument("--p", type=int, default=2, help="prime to localize at")
    _add_common(p, "--k", "--out", k={"default": 8})
    p.set_defaults(fn=_cmd_degree)

    p = sub.add_parser("construct", help="emit a reusable spec descriptor")
    p.add_argument("name", choices=list(_STANDARD_NAMES) + [
        "character", "kronecker", "archimedean-twist", "sparse-dyadic",
        "optimality-twist", "squarefree-restrict", "random", "degree-d",
    ])
    p.add_argument("--q", type=int, help="modulus")
    p.add_argument("--index", type=int, default=0, help="character index")
    p.add_argument("--t", type=float, default=0.0, help="twist height")
    p.add_argument("--D", type=int, help="fundamental discriminant")
    p.add_argument("--intervals", type=str, help='interval indices, e.g. "3,4"')
    p.add_argument("--cutoff", type=float, help="diagnostic prime cutoff")
    p.add_argument("--constituents", type=str, help="comma list of specs")
    _add_common(p, "--spec", "--beta", "--seed", "--N", "--out",
                beta={"default": 0.5})
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("growth-fit", help="fit |S(x)| ~ C x^alpha from a sums CSV")
    p.add_argument("series", help="path to a CSV written by `sums`")
    _add_common(p, "--out")
    p.set_defaults(fn=_cmd_growth_fit)

    p = sub.add_parser("xi", help="normalized partial-sum profile")
    p.add_argument("--x", type=float, help="evaluate at one point instead")
    _add_common(p, "--spec", "--spec2", "--N", "--alpha", "--checkpoints",
                "--mode", "--threads", "--out",
                spec={"required": True}, N={"required": True},
                alpha={"required": True})
    p.set_defaults(fn=_cmd_xi)

    p = sub.add_parser("lseries", help="truncated Dirichlet series / identity check")
    p.add_argument("--s", type=str, required=True,
                   help='evaluation point, e.g. "2" or "2+1j"')
    _add_common(p, "--spec", "--spec2", "--N", "--out",
                spec={"required": True}, N={"default": 10**5})
    p.set_defaults(fn=_cmd_lseries)

    p = sub.add_parser("verify", help="run a named acceptance bundle")
    p.add_argument("bundle", choices=sorted(BUNDLES))
    _add_common(p, "--seed", "--threads", "--out")
    p.set_defaults(fn=_cmd_verify)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except PretenseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
