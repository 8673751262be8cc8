"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``GMCD_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("GMCD_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import add_terms, addmul_inplace, eval_terms, mul_terms
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        pass
if BACKEND == "python":
    from ._pykernels import add_terms, addmul_inplace, eval_terms, mul_terms

__all__ = ["BACKEND", "add_terms", "addmul_inplace", "eval_terms", "mul_terms"]
