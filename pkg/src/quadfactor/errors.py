"""Exception types raised by quadfactor."""


class QuadfactorError(Exception):
    """Base class for all quadfactor-specific errors."""


class NotQuadraticError(QuadfactorError):
    """The matrix does not satisfy any monic quadratic polynomial within tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RankAmbiguousError(QuadfactorError):
    """A singular value lies too close to the rank cutoff to classify reliably."""


class NotPsdError(QuadfactorError):
    """A matrix required to be positive semidefinite is not (within tolerance)."""


class NoWitnessError(QuadfactorError):
    """No contraction witness exists for the requested off-diagonal block."""


class InfeasibleError(QuadfactorError):
    """The instance admits no factorization into two positive contractions.

    Carries the :class:`~quadfactor.factorize.FeasibilityReport` explaining why.
    """

    def __init__(self, report, message=None):
        if message is None:
            message = (
                "no factorization into two positive contractions exists "
                "(margin %.6g)" % report.margin
            )
        super().__init__(message)
        self.report = report


class NotUpperTriangularError(QuadfactorError):
    """The product is not block upper triangular for the requested split."""


class CertificateError(QuadfactorError):
    """A constructed factorization failed its own re-verification."""
