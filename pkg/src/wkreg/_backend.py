"""Select the sampling/KDE core at import time.

Prefers the compiled extension; falls back to the NumPy implementation when
the extension is absent or when ``WKREG_PURE_PYTHON`` is set (any non-empty
value). ``BACKEND`` names the active choice for logging and benchmarks.
"""

import os

if os.environ.get("WKREG_PURE_PYTHON"):
    from . import _fastpath_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _fastpath as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fastpath_py as _impl

        BACKEND = "python"

standard_gamma = _impl.standard_gamma
kde_gaussian = _impl.kde_gaussian
