"""Backend selection for the unshuffle kernel.

The compiled extension is used when it was built; otherwise the pure-Python
implementation is loaded.  Setting ``LINFTY_PURE_PYTHON=1`` forces the
fallback, which the tests and the benchmark use to compare the two.
"""

import os

from . import _unshuffle_py

if os.environ.get("LINFTY_PURE_PYTHON", "") not in ("", "0"):
    signed_unshuffle_count = _unshuffle_py.signed_unshuffle_count
    BACKEND = "python"
else:
    try:
        from ._unshuffle import signed_unshuffle_count
        BACKEND = "cython"
    except ImportError:
        signed_unshuffle_count = _unshuffle_py.signed_unshuffle_count
        BACKEND = "python"

python_signed_unshuffle_count = _unshuffle_py.signed_unshuffle_count

__all__ = ["BACKEND", "signed_unshuffle_count", "python_signed_unshuffle_count"]
