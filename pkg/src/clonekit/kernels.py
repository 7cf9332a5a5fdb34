"""Kernel dispatch: the compiled core when it was built, else pure Python."""

from __future__ import annotations

try:
    from clonekit import _ckernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    from clonekit import _pykernels as _impl

    BACKEND = "python"

close_traces = _impl.close_traces
first_escape = _impl.first_escape

__all__ = ["BACKEND", "close_traces", "first_escape"]
