"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation.
Set ``CURVEDIST_FORCE_PURE=1`` to force the fallback (used by the kernel
agreement tests and the benchmark).
"""

import os

if os.environ.get("CURVEDIST_FORCE_PURE") == "1":
    from curvedist import _purekernels as _impl

    BACKEND = "pure"
else:
    try:
        from curvedist import _fastkernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from curvedist import _purekernels as _impl

        BACKEND = "pure"

aberth = _impl.aberth
polyval = _impl.polyval
eval2 = _impl.eval2
line_coeffs = _impl.line_coeffs
