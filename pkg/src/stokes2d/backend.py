"""Import-time selection of the series engine.

The compiled extension ``_seriescore`` is preferred when it built; the pure
NumPy module ``_seriespy`` is the drop-in fallback.  Both export the same
entry points with identical semantics, so the rest of the package only ever
imports from here.
"""

try:
    from . import _seriescore as _engine
except ImportError:  # pragma: no cover - depends on the build environment
    from . import _seriespy as _engine

BACKEND_NAME = _engine.BACKEND_NAME
LMAX = _engine.LMAX
SERIES_HARD_LIMIT = _engine.SERIES_HARD_LIMIT
base_sums = _engine.base_sums
h0_series_derivs = _engine.h0_series_derivs
