"""Geometry kernel backend selection.

The compiled extension (``_core``, Cython) is preferred; the pure-numpy twin
(``pure``) is used when the extension is not built. Both produce bit-identical
results. Set ``BODYMETRY_KERNELS=pure`` to force the fallback, or
``BODYMETRY_KERNELS=compiled`` to fail loudly when the extension is missing.
"""

import os

from . import pure as _pure

_requested = os.environ.get("BODYMETRY_KERNELS", "auto").strip().lower()
_compiled = None
if _requested in ("auto", "compiled", "c"):
    try:
        from . import _core as _compiled
    except ImportError:
        if _requested != "auto":
            raise ImportError(
                "BODYMETRY_KERNELS=compiled was requested but the "
                "bodymetry.kernels._core extension is not built"
            )
elif _requested not in ("pure", "py", "python"):
    raise ValueError(f"unrecognized BODYMETRY_KERNELS value: {_requested!r}")

_impl = _compiled if _compiled is not None else _pure
BACKEND = "compiled" if _compiled is not None else "pure"

slice_faces = _impl.slice_faces
hull_indices = _impl.hull_indices
rasterize = _impl.rasterize

__all__ = ["BACKEND", "slice_faces", "hull_indices", "rasterize"]
