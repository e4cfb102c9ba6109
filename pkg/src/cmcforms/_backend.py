"""Kernel backend selection.

The integrator kernel exists twice: a compiled extension (``_kernels``) and
a pure-Python fallback (``_kernels_py``) with identical arithmetic.  The
environment variable CMCFORMS_BACKEND picks one explicitly:

* ``auto`` (default): compiled if importable, else pure Python
* ``cython``: compiled, ImportError if the extension is missing
* ``python``: always the fallback
"""

import os

from . import _kernels_py


def _load():
    choice = os.environ.get("CMCFORMS_BACKEND", "auto").strip().lower()
    if choice == "python":
        return _kernels_py
    if choice == "cython":
        from . import _kernels
        return _kernels
    if choice != "auto":
        raise ValueError(
            "CMCFORMS_BACKEND must be one of 'auto', 'cython', 'python', "
            "got %r" % choice
        )
    try:
        from . import _kernels
        return _kernels
    except ImportError:
        return _kernels_py


_active = _load()


def get_backend():
    """Return the active kernel module."""
    return _active


def backend_name() -> str:
    """Name of the active kernel backend, 'cython' or 'python'."""
    return _active.backend_name
