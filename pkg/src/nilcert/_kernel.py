"""Backend selection for the collector.

The compiled extension is used when it was built; setting
``NILCERT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _pykernel

python_backend = _pykernel

if os.environ.get("NILCERT_PURE_PYTHON"):
    compiled_backend = None
else:
    try:
        from . import _ckernel as compiled_backend
    except ImportError:
        compiled_backend = None

backend = compiled_backend or python_backend
BACKEND = backend.BACKEND


def available_backends():
    return [b for b in (compiled_backend, python_backend) if b is not None]
