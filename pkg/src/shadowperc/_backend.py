"""Kernel backend selection.

The compiled extension is used when importable. Setting the environment
variable ``SHADOWPERC_BACKEND=python`` forces the pure-Python fallback.
"""

import os

from . import _pykernels

python_kernels = _pykernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("SHADOWPERC_BACKEND", "").lower() != "python":
    kernels = compiled_kernels
else:
    kernels = _pykernels

BACKEND = kernels.NAME


def available():
    """Names -> kernel modules for every backend importable in this process."""
    out = {"python": _pykernels}
    if compiled_kernels is not None:
        out["cython"] = compiled_kernels
    return out
