"""Exception types shared across the package."""


class DegenerateCandidates(ValueError):
    """Two candidate locations coincide (no bisector exists)."""


class NoChord(ValueError):
    """A half-plane boundary line misses the domain interior."""


class EmptyRegion(ValueError):
    """A constrained region is empty (infeasible support query)."""


class InsufficientData(ValueError):
    """Not enough points to fit a growth model."""
