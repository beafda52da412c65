"""fuchs: verification suites and symbol/operator conversions from the shell.

Exit status: 0 success, 1 a check failed, 2 invalid configuration or input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def _cap_threads():
    # only effective if numpy has not been imported yet in this process
    k = os.environ.get("FUCHS_NUM_THREADS")
    if k:
        for var in _THREAD_VARS:
            os.environ[var] = k


def _digits(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"theta digits must be integers, got {s!r}")


def _grid_args(sp: argparse.ArgumentParser, *, with_res: bool = True):
    sp.add_argument("--prime", type=int, default=3)
    sp.add_argument("--n", type=int, default=1)
    if with_res:
        sp.add_argument("--u-scale", "--m", dest="m", type=int, default=3, help="u-resolution m (U_m cosets)")
        sp.add_argument("--t-cutoff", "--N", dest="N", type=int, default=2, help="t-support cutoff N")
    sp.add_argument("--theta-digits", type=_digits, default=(1,),
                    help="little-endian digits of theta, first digit nonzero (e.g. '1' or '2,1')")
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuchs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and write a report")
    _grid_args(v)
    v.add_argument("--suite", default="all",
                   choices=["padic", "harmonic", "repn", "quantize", "star", "calculus", "cv", "all"])
    v.add_argument("--tol", type=float, default=None, help="override the per-check tolerances")
    v.add_argument("--samples", type=int, default=10, help="random samples per check")
    v.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
    v.add_argument("--strict", action="store_true",
                   help="reject resolutions violating m >= N + n instead of refining")
    v.add_argument("--timings", action="store_true", help="record per-check runtimes (breaks byte-identity)")
    v.add_argument("--out", default=None)

    r = sub.add_parser("random-symbol", help="write a random symbol file")
    _grid_args(r)
    r.add_argument("--out", default=None)

    q = sub.add_parser("quantize", help="symbol file -> operator kernel file")
    q.add_argument("input")
    q.add_argument("--strict", action="store_true")
    q.add_argument("--out", default=None)

    s = sub.add_parser("star", help="star product of two symbol files")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--strict", action="store_true")
    s.add_argument("--out", default=None)

    c = sub.add_parser("reconstruct", help="operator kernel file -> symbol file")
    c.add_argument("input")
    c.add_argument("--theta-digits", type=_digits, default=None,
                   help="theta, if the kernel file does not record one")
    c.add_argument("--s-probe", type=float, default=-3.0)
    c.add_argument("--strict", action="store_true")
    c.add_argument("--out", default=None)
    return ap


class UsageError(Exception):
    pass


def _closure(f, strict: bool, trace: list, label: str):
    n = f.params.n
    if f.m < f.N + n:
        if strict:
            raise UsageError(f"{label}: resolution (m={f.m}, N={f.N}) violates m >= N + n = {f.N + n} "
                             "(J^s is not defined on it); rerun without --strict to refine")
        trace.append(f"{label}: (m={f.m}, N={f.N}) refined to (m={f.N + n}, N={f.N}) "
                     "wherever J^s is applied (m >= N + n)")


def _report_text(rows, cfg, notes, fmt: str) -> str:
    from .suites import all_passed

    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "p", "n", "m", "N", "lhs", "rhs", "pass", "kind", "runtime_ms", "anchor"])
        for r in rows:
            d = r.to_json()
            w.writerow([d["suite"], d["check"], r.params["p"], r.params["n"], r.params["m"], r.params["N"],
                        repr(d["lhs"]) if isinstance(d["lhs"], float) else d["lhs"],
                        repr(d["rhs"]) if isinstance(d["rhs"], float) else d["rhs"],
                        d["pass"], d["kind"], "" if d["runtime_ms"] is None else d["runtime_ms"], d["anchor"]])
        return buf.getvalue()
    gated = [r for r in rows if r.kind != "info"]
    doc = {
        "config": cfg.echo(),
        "notes": notes,
        "summary": {"checks": len(gated), "failed": sum(not r.passed for r in gated),
                    "informational": len(rows) - len(gated), "pass": all_passed(rows)},
        "results": [r.to_json() for r in rows],
    }
    return json.dumps(doc, indent=1) + "\n"


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_verify(a) -> int:
    from .suites import ConfigError, RunConfig, all_passed, run

    try:
        cfg = RunConfig(prime=a.prime, n=a.n, m=a.m, N=a.N, theta_digits=tuple(a.theta_digits),
                        tol=a.tol, seed=a.seed, suite=a.suite, fmt=a.fmt, strict=a.strict,
                        timings=a.timings, samples=a.samples)
    except ConfigError as e:
        raise UsageError(str(e))
    notes = []
    if cfg.m < cfg.N + cfg.n:
        if cfg.strict:
            raise UsageError(f"(m={cfg.m}, N={cfg.N}) violates the J-closure condition m >= N + n; "
                             "rerun without --strict to refine automatically")
        notes.append(f"calculus suite runs at (m={cfg.N + cfg.n}, N={cfg.N}): m refined for J-closure")
    rows = run(cfg)
    _write(_report_text(rows, cfg, notes, cfg.fmt), a.out)
    failed = [r for r in rows if not r.passed and r.kind != "info"]
    for r in failed:
        print(f"FAIL [{r.suite}] {r.check}: lhs={r.lhs!r} rhs={r.rhs!r}", file=sys.stderr)
    return 0 if all_passed(rows) else 1


def _provenance(command: str, inputs: list[str], trace: list[str], extra: dict | None = None) -> dict:
    from . import __version__

    out = {"tool": "fuchs", "version": __version__, "command": command, "inputs": inputs, "resolution": trace}
    if extra:
        out.update(extra)
    return out


def cmd_random_symbol(a) -> int:
    import numpy as np

    from .padic import FieldParams
    from .quantize import Symbol
    from .repn import ThetaParam
    from .serialize import dump, symbol_to_json
    from .suites import ConfigError, RunConfig

    try:
        RunConfig(prime=a.prime, n=a.n, m=a.m, N=a.N, theta_digits=tuple(a.theta_digits))
    except ConfigError as e:
        raise UsageError(str(e))
    P = FieldParams(a.prime, a.n)
    th = ThetaParam.from_digits(a.theta_digits, a.prime)
    f = Symbol.random(P, th, a.m, a.N, np.random.default_rng(a.seed))
    dump(symbol_to_json(f, _provenance("random-symbol", [], [f"(m={a.m}, N={a.N})"], {"seed": a.seed})), a.out)
    return 0


def cmd_quantize(a) -> int:
    from .quantize import quantize_direct
    from .serialize import dump, kernel_to_json, load, symbol_from_json

    f = symbol_from_json(load(a.input))
    trace = []
    _closure(f, a.strict, trace, a.input)
    A = quantize_direct(f)
    trace.append(f"symbol (m={f.m}, N={f.N}) -> kernel scale M = max(m, N) = {A.M}")
    dump(kernel_to_json(A, _provenance("quantize", [a.input], trace)), a.out)
    return 0


def cmd_star(a) -> int:
    from .serialize import dump, load, symbol_from_json, symbol_to_json
    from .star import star_via_operators

    f1, f2 = symbol_from_json(load(a.left)), symbol_from_json(load(a.right))
    if f1.theta != f2.theta:
        raise UsageError(f"theta mismatch: {a.left} has {f1.theta.to_json()}, {a.right} has {f2.theta.to_json()}")
    if f1.params != f2.params:
        raise UsageError("inputs live over different (p, n)")
    trace = []
    _closure(f1, a.strict, trace, a.left)
    _closure(f2, a.strict, trace, a.right)
    m, N = max(f1.m, f2.m), max(f1.N, f2.N)
    if (f1.m, f1.N) != (f2.m, f2.N):
        trace.append(f"inputs refined to common resolution (m={m}, N={N})")
    out = star_via_operators(f1, f2)
    trace.append(f"product computed at kernel scale M = max(m, N) = {out.m}; output (m={out.m}, N={out.N})")
    dump(symbol_to_json(out, _provenance("star", [a.left, a.right], trace)), a.out)
    return 0


def cmd_reconstruct(a) -> int:
    import warnings

    from .calculus import b_seminorms, reconstruct_symbol
    from .repn import ThetaParam
    from .serialize import dump, kernel_from_json, load, symbol_to_json

    A = kernel_from_json(load(a.input))
    theta = A.theta
    if a.theta_digits is not None:
        t = ThetaParam.from_digits(a.theta_digits, A.params.p)
        if theta is not None and t != theta:
            raise UsageError("--theta-digits disagrees with the theta recorded in the kernel file")
        theta = t
    if theta is None:
        raise UsageError("the kernel file records no theta; pass --theta-digits")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        F, rep = reconstruct_symbol(A, theta, s_probe=a.s_probe, report=True)
    trace = [f"kernel scale M = {A.M} -> symbol (m={F.m}, N={F.N})"]
    _closure(F, False, trace, "output")
    semi = b_seminorms(F, 2)
    extra = {"decay": {"s_probe": rep.s_probe, "constant": rep.decay_constant, "support_ok": rep.support_ok,
                       "warnings": [str(w.message) for w in caught]},
             "b_seminorms": {str(k): v for k, v in semi.entries}}
    dump(symbol_to_json(F, _provenance("reconstruct", [a.input], trace, extra)), a.out)
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "random-symbol": cmd_random_symbol,
    "quantize": cmd_quantize,
    "star": cmd_star,
    "reconstruct": cmd_reconstruct,
}


def main(argv: list[str] | None = None) -> int:
    _cap_threads()
    ap = build_parser()
    a = ap.parse_args(argv)
    from .serialize import SchemaError

    try:
        return COMMANDS[a.command](a)
    except (UsageError, SchemaError) as e:
        print(f"fuchs: error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"fuchs: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
