"""Exception types raised across the package."""


class TrischmidtError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(TrischmidtError):
    """Shapes, dimensions or party indices do not fit together."""


class NotNormalized(TrischmidtError):
    """A state or vector that must have unit norm does not."""


class NotHermitian(TrischmidtError):
    """A matrix required to be Hermitian fails the symmetry check."""


class NoConvergence(TrischmidtError):
    """An iterative kernel exhausted its budget without converging."""


class NotUnitaryError(TrischmidtError):
    """A matrix required to be unitary is not, within tolerance."""


class ZeroVector(TrischmidtError):
    """An operation that needs a nonzero vector received the zero vector."""


class RankNotOne(TrischmidtError):
    """Construction requires every slice to have Schmidt rank one."""


class Indeterminate(TrischmidtError):
    """The degenerate-eigenspace search could not settle the verdict.

    Distinct from a negative verdict: the state was neither accepted nor
    provably rejected.  Carries the analysis that was attempted.
    """

    def __init__(self, message, analysis=None, max_residual=0.0):
        super().__init__(message)
        self.analysis = analysis
        self.max_residual = max_residual


class BadWeights(TrischmidtError):
    """Generator weights are empty, non-positive, or too many for the dims."""


class BadDims(TrischmidtError):
    """Generator dimensions are unusable for the requested state family."""
