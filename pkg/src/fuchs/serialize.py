"""JSON interchange for symbols and operator kernels.  Complex numbers are [re, im]."""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .padic import FieldParams
from .quantize import OperatorKernel, Symbol
from .repn import ThetaParam

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


def _encode(a: np.ndarray) -> list:
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _decode(x, shape: tuple[int, ...], what: str) -> np.ndarray:
    try:
        a = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"{what}: values must be numeric [re, im] pairs") from e
    if a.shape != shape + (2,):
        raise SchemaError(f"{what}: expected shape {list(shape)} of [re, im] pairs, got {list(a.shape)}")
    return a[..., 0] + 1j * a[..., 1]


def _theta(d: dict, p: int) -> ThetaParam:
    try:
        digits = d["digits"]
    except (KeyError, TypeError) as e:
        raise SchemaError("theta must be an object with a 'digits' list") from e
    if d.get("val", 0) != 0:
        raise SchemaError("theta must have valuation 0")
    try:
        return ThetaParam.from_digits(digits, p)
    except ValueError as e:
        raise SchemaError(str(e)) from e


def _require(d: dict, keys, what):
    missing = [k for k in keys if k not in d]
    if missing:
        raise SchemaError(f"{what}: missing field(s) {', '.join(missing)}")


def symbol_to_json(f: Symbol, provenance: dict | None = None) -> dict:
    out = {"kind": "symbol", "schema": SCHEMA_VERSION, "p": f.params.p, "n": f.params.n,
           "theta": f.theta.to_json(), "m": f.m, "N": f.N, "values": _encode(f.values)}
    if provenance is not None:
        out = {"provenance": provenance, **out}
    return out


def symbol_from_json(d: dict) -> Symbol:
    if not isinstance(d, dict) or d.get("kind") != "symbol":
        raise SchemaError("not a symbol document (kind != 'symbol')")
    _require(d, ("p", "n", "theta", "m", "N", "values"), "symbol")
    try:
        params = FieldParams(int(d["p"]), int(d["n"]))
    except ValueError as e:
        raise SchemaError(str(e)) from e
    p, n, m, N = params.p, params.n, int(d["m"]), int(d["N"])
    if m < n or N < n:
        raise SchemaError(f"symbol resolution (m={m}, N={N}) must satisfy m, N >= n={n}")
    vals = _decode(d["values"], (p ** (m - n), p ** (N - n)), "symbol")
    return Symbol(params, _theta(d["theta"], p), m, N, vals)


def kernel_to_json(A: OperatorKernel, provenance: dict | None = None) -> dict:
    out = {"kind": "kernel", "schema": SCHEMA_VERSION, "p": A.params.p, "n": A.params.n,
           "theta": A.theta.to_json() if A.theta else None, "M": A.M, "matrix": _encode(A.matrix)}
    if provenance is not None:
        out = {"provenance": provenance, **out}
    return out


def kernel_from_json(d: dict) -> OperatorKernel:
    if not isinstance(d, dict) or d.get("kind") != "kernel":
        raise SchemaError("not a kernel document (kind != 'kernel')")
    _require(d, ("p", "n", "M", "matrix"), "kernel")
    try:
        params = FieldParams(int(d["p"]), int(d["n"]))
    except ValueError as e:
        raise SchemaError(str(e)) from e
    M = int(d["M"])
    if M < params.n:
        raise SchemaError("kernel scale M must be >= n")
    S = params.p ** (M - params.n)
    theta = _theta(d["theta"], params.p) if d.get("theta") is not None else None
    return OperatorKernel(params, M, _decode(d["matrix"], (S, S), "kernel"), theta)


def load(path: str) -> dict[str, Any]:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON ({e})") from e


def dump(doc: dict, path: str | None):
    text = json.dumps(doc, indent=1) + "\n"
    if path is None or path == "-":
        import sys

        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
