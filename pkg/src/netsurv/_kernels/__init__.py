"""Numeric kernels with a compiled fast path.

The Cython extension ``_fast`` is built on a best-effort basis; when it is
absent (no compiler, source checkout without a build step) the pure-NumPy
module ``pure`` takes over.  ``BACKEND`` records which one won.

Set ``NETSURV_BACKEND=python`` to force the fallback, or
``NETSURV_BACKEND=cython`` to insist on the extension (raising if it is
missing) — useful for benchmarks and for reproducing backend-specific bugs.
"""

import os

_choice = os.environ.get("NETSURV_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "cython", "python"):
    raise ImportError(
        f"NETSURV_BACKEND={_choice!r} not understood; "
        "expected 'auto', 'cython', or 'python'"
    )

if _choice == "python":
    from . import pure as _impl

    BACKEND = "python"
else:
    try:
        from . import _fast as _impl

        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise ImportError(
                "NETSURV_BACKEND=cython but the compiled extension is not "
                "available; rebuild the package or unset NETSURV_BACKEND"
            )
        from . import pure as _impl

        BACKEND = "python"

weibull_invert = _impl.weibull_invert
constant_invert = _impl.constant_invert
piecewise_rate = _impl.piecewise_rate
piecewise_cumhaz = _impl.piecewise_cumhaz
piecewise_invert = _impl.piecewise_invert
product_limit = _impl.product_limit

__all__ = [
    "BACKEND",
    "constant_invert",
    "piecewise_cumhaz",
    "piecewise_invert",
    "piecewise_rate",
    "product_limit",
    "weibull_invert",
]
