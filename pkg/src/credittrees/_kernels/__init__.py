"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when it is
not built. Set CREDITTREES_KERNEL=python or =native to force a backend
(native raises ImportError if the extension is missing).
"""

import os

_requested = os.environ.get("CREDITTREES_KERNEL", "auto")

if _requested == "python":
    from . import _fallback as _impl
elif _requested == "native":
    from . import _native as _impl
else:
    try:
        from . import _native as _impl
    except ImportError:
        from . import _fallback as _impl

BACKEND = _impl.BACKEND
rep_numeric_scan = _impl.rep_numeric_scan
lad_numeric_scan = _impl.lad_numeric_scan
