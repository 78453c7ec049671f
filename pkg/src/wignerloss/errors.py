"""Exception types raised by the numerical core.

Everything derives from :class:`NumericalError` so callers (the CLI in
particular) can separate numerical failures from usage errors.
"""


class NumericalError(ValueError):
    """Base class for failures of the numerical pipeline."""


class GridTooSmall(NumericalError):
    pass


class KernelExceedsGrid(NumericalError):
    pass


class BlurUnderResolved(NumericalError):
    pass


class ResolutionBudget(NumericalError):
    """Resolving the shortest fringe needs more than ``n_max`` points per axis."""


class OrderTooLarge(NumericalError):
    pass


class TruncationBudget(NumericalError):
    pass


class DegenerateFlat(NumericalError):
    """The negative region carries no curvature (d0 <= 0)."""


class UnboundedSqueeze(NumericalError):
    """The optimal squeeze diverges because d0 == sqrt(d1^2 + d3^2)."""
