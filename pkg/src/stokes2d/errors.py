"""Error types shared across the package."""


class SeriesNonConvergence(RuntimeError):
    """Series term cap reached before the stopping rule fired."""


class QuadratureNonConvergence(RuntimeError):
    """Adaptive quadrature exhausted its refinement ladder."""


class MeshError(ValueError):
    """Boundary or volume discretisation request is inconsistent."""


class ConfigError(ValueError):
    """Run configuration is malformed or contains unknown keys."""


class WindowDetectionError(RuntimeError):
    """No admissible fitting window found in a rate-measurement sweep."""
