"""Hot inner loops, with a compiled backend selected at import.

The Cython module ``_ckernels`` is used when it was built and importable,
unless ``QSTAIRS_PURE_PYTHON`` is set in the environment. Compiled kernels
work in int64 with overflow checks; any overflow transparently re-runs the
call on the pure-Python kernels, so results are always exact.
"""

from __future__ import annotations

import os

from . import _pykernels as python

compiled = None
if not os.environ.get("QSTAIRS_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

BACKEND = "cython" if compiled is not None else "python"


def _dispatch(name):
    py_impl = getattr(python, name)
    c_impl = getattr(compiled, name, None) if compiled is not None else None
    if c_impl is None:
        return py_impl

    def call(*args, **kwargs):
        try:
            return c_impl(*args, **kwargs)
        except OverflowError:
            return py_impl(*args, **kwargs)

    call.__name__ = name
    call.__doc__ = py_impl.__doc__
    return call


convolve = _dispatch("convolve")
multisum_accumulate = _dispatch("multisum_accumulate")
inverse_euler = _dispatch("inverse_euler")

__all__ = ["BACKEND", "compiled", "python", "convolve",
           "multisum_accumulate", "inverse_euler"]
