"""Hot-loop kernels: compiled extension when available, else pure Python.

Set ``BSFE_PURE_PYTHON=1`` to force the fallback.  Both backends expose
the same functions and produce bit-identical results.
"""

import os

from . import _kernels_py

if os.environ.get("BSFE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND
siphash24 = _impl.siphash24
prf_word = _impl.prf_word
row_layout = _impl.row_layout
garble_tables = _impl.garble_tables
eval_garbled = _impl.eval_garbled
compress_bits = _impl.compress_bits
gf_mul_small = _impl.gf_mul_small
toeplitz_rows = _impl.toeplitz_rows

OP_AND, OP_XOR, OP_NOT, OP_CONST0, OP_CONST1 = 0, 1, 2, 3, 4


def python_backend():
    """The pure-Python kernel module, for parity checks and benchmarks."""
    return _kernels_py


def compiled_backend():
    """The compiled kernel module, or None when it was not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
