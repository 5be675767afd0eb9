"""Backend selection for the hot kernels.

The compiled ``gidlab._core`` extension is used when importable; otherwise, or
when the environment variable ``GIDLAB_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the numpy implementations in ``gidlab._pykernels`` are used.
Both backends produce draws from the same distributions, but they consume the
random stream differently, so sampled values are reproducible per backend.
"""
import os

from . import _pykernels

_forced = os.environ.get("GIDLAB_PURE_PYTHON", "") not in ("", "0")

_impl = _pykernels
if not _forced:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND

empirical_lt = _impl.empirical_lt
ks_statistic = _impl.ks_statistic
segment_sums = _impl.segment_sums
geometric_stable_sums = _impl.geometric_stable_sums


def available_backends():
    """Map backend name to kernel module for every importable backend."""
    found = {"numpy": _pykernels}
    try:
        from . import _core

        found["cython"] = _core
    except ImportError:
        pass
    return found
