"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Two operands live in lattices of different dimension."""


class CoordinateOverflow(OverflowError):
    """A coordinate left the signed 64-bit range."""


class BudgetExceeded(RuntimeError):
    """A requested computation is larger than the configured cap."""


class SupportivenessBreach(RuntimeError):
    """A walk step found a cross meeting the set only in one arm point."""

    def __init__(self, center):
        self.center = tuple(center)
        super().__init__(f"set is not supportive at {self.center}")


class RegionTooSmall(RuntimeError):
    """A walk would look at points outside the region where the set is known."""
