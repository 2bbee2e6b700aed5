"""Exception hierarchy shared by every module of the package."""


class QVFError(Exception):
    """Base class for all domain errors raised by :mod:`qvf`."""


class UndefinedResultant(QVFError, ValueError):
    pass


class DegenerateDivisor(QVFError, ValueError):
    """The divisor polynomial is not squarefree (or G' is not invertible mod G)."""


class OutsideV2(QVFError):
    """A vector field fails one or more of the membership predicates of V2.

    ``reasons`` always holds the complete list of violated conditions.
    """

    def __init__(self, reasons):
        if isinstance(reasons, str):
            reasons = [reasons]
        self.reasons = list(reasons)
        super().__init__("; ".join(self.reasons))


class DegenerateSpectra(QVFError, ValueError):
    """Spectra with a vanishing determinant or an inconsistent Euler-Jacobi sum."""


class NonGenericSpectra(QVFError):
    pass


class TwinCoincidence(QVFError):
    """Discriminant D vanishes: the field coincides with its twin."""


class RecoveryError(QVFError):
    """Interpolation of the hidden polynomial failed."""


class InternalCheckFailed(QVFError, AssertionError):
    """A cross-check that theory says cannot fail did fail."""


class IrrationalTwin(QVFError):
    """The twin exists only over a quadratic extension; ``reconstruction`` holds the numeric pair."""

    def __init__(self, message, reconstruction=None):
        super().__init__(message)
        self.reconstruction = reconstruction
