"""Exception hierarchy shared by all modules."""


class SolvharmError(Exception):
    """Base class for all library errors."""


class DimensionError(SolvharmError):
    """Inputs have incompatible or non-square shapes."""


class NumericalError(SolvharmError):
    """An iterative kernel failed to converge or overflowed."""


class SingularMatrixError(NumericalError):
    """Linear solve hit a pivot below the relative tolerance."""


class StructureError(SolvharmError):
    """Algebraic precondition violated (codimension, centrality, ...)."""


class NotStandardError(StructureError):
    """The algebra does not admit the orthogonal standard decomposition."""


class DegenerateSpectrumError(NumericalError):
    """Spectrum too close to the imaginary axis to split stable/unstable.

    Carries the offending eigenvalues in ``diagnostics``.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics if diagnostics is not None else {}


class ConjugatePointError(NumericalError):
    """A Jacobi determinant vanished inside the integration window."""


class DomainError(SolvharmError):
    """Scalar argument outside the admissible domain (poles, ranges)."""
