"""Exception types shared across the package."""


class BasmajianError(Exception):
    """Base class for all package-specific errors."""


class ParabolicOrElliptic(BasmajianError):
    """Raised when an operation requires a loxodromic map but got one whose
    derivative moduli at the fixed points are indistinguishable from 1."""


class DegenerateConfiguration(BasmajianError):
    """Cross ratio is 0, infinite or NaN (coincident or near-coincident points)."""


class Diverging(BasmajianError):
    """Series level sums fail to decay; the underlying set has dimension >= 1.

    Carries the level sums computed so far in ``level_sums``.
    """

    def __init__(self, message, level_sums=None):
        super().__init__(message)
        self.level_sums = list(level_sums) if level_sums is not None else []


class LostTrack(BasmajianError):
    """Analytic continuation could not decide between candidate branches."""


class NonLoxodromic(BasmajianError):
    """A tracked boundary word degenerated along a parameter path."""


class BranchAmbiguity(BasmajianError):
    """A square-root branch point was hit during branch evaluation."""


class NoConvergence(BasmajianError):
    """Fixed-point iteration failed to converge (non-contracting input)."""


class NoSignChange(BasmajianError):
    """Pressure has no sign change on the bisection bracket."""
