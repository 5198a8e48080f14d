"""Exception hierarchy shared by every pvsim layer.

All failures raised by the library derive from :class:`PvSimError`, so
callers (CLI, HTTP service) can catch one type and map it to an exit
code or status without losing the specific failure class.
"""


class PvSimError(Exception):
    """Base class for all pvsim failures."""


class DatasheetError(PvSimError):
    """Datasheet input is malformed, incomplete, or physically inconsistent."""


class EstimationError(PvSimError):
    """Parameter estimation could not produce a trustworthy result."""


class ConvergenceError(EstimationError):
    """Newton iteration exhausted its budget without meeting tolerance."""


class DivergenceError(EstimationError):
    """Newton iterate left the plausible ideality-factor range."""


class SingularStepError(EstimationError):
    """Newton derivative vanished; no update step can be formed."""


class NumericalRangeError(PvSimError):
    """An intermediate value left the representable floating-point range."""


class ModelRangeError(PvSimError):
    """Requested operating point is outside the model's valid domain."""
