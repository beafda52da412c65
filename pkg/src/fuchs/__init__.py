"""Covariant p-adic pseudo-differential calculus on U_n = 1 + p^n Z_p, computed exactly.

Submodules: padic, harmonic, repn, quantize, star, calculus, suites, cli.
Importing the package itself stays light (numpy is loaded by the submodules),
so the CLI can cap BLAS threads before numpy starts.
"""

__version__ = "0.1.0"

_EXPORTS = {
    "FieldParams": "padic",
    "PAdicScalar": "padic",
    "PrincipalUnit": "padic",
    "ConfigFunction": "harmonic",
    "ThetaParam": "repn",
    "GroupElement": "repn",
    "Symbol": "quantize",
    "OperatorKernel": "quantize",
    "quantize_direct": "quantize",
    "symbol_of_operator": "quantize",
    "wigner": "quantize",
    "star": "star",
    "j_matrix": "calculus",
    "cv_certify": "calculus",
    "reconstruct_symbol": "calculus",
}


def __getattr__(name):
    if name in _EXPORTS:
        import importlib

        return getattr(importlib.import_module(f".{_EXPORTS[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = sorted(_EXPORTS) + ["__version__"]
