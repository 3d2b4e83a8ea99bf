"""Backend selection for the hot kernels.

The compiled ``_native`` extension is used when importable; otherwise (or
when the environment variable ``MKONHAUSER_PURE`` is set to a non-empty value
other than ``0``) the numpy fallback is used. Both expose ``cgamma``,
``clgamma`` and ``bipoly_grid`` with identical semantics.
"""
import os

from . import _fallback

_force_pure = os.environ.get("MKONHAUSER_PURE", "") not in ("", "0")

try:
    if _force_pure:
        raise ImportError("pure backend requested")
    from . import _native as _impl
    BACKEND = "native"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

cgamma = _impl.cgamma
clgamma = _impl.clgamma
bipoly_grid = _impl.bipoly_grid

__all__ = ["BACKEND", "cgamma", "clgamma", "bipoly_grid"]
