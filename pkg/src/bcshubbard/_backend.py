"""Pick the kernel implementation once, at import.

``BCSHUBBARD_KERNELS=python`` forces the fallback.
"""

import os

from . import _pykernels

KERNELS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:
    _ckernels = None
else:
    KERNELS["cython"] = _ckernels

if os.environ.get("BCSHUBBARD_KERNELS", "").lower() == "python" or _ckernels is None:
    kernels = _pykernels
    name = "python"
else:
    kernels = _ckernels
    name = "cython"
