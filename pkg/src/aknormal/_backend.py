"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``AKNORMAL_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("AKNORMAL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._kernels import mul_terms, rref_int  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import mul_terms, rref_int  # noqa: F401
