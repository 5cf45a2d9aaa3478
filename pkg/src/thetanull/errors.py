"""Exception hierarchy for domain and numerical failures.

Domain errors describe inputs that are outside the mathematical domain of an
operation; numerical errors describe computations that could not reach their
certified target.  The CLI maps the two branches to distinct exit codes, so
everything raised out of the public API should derive from one of the two
bases below.
"""


class ThetanullError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ThetanullError):
    """Input outside the mathematical domain of the requested operation."""


class NotSymmetric(DomainError):
    """Matrix expected to be symmetric is not (beyond tolerance)."""


class NotPositiveDefinite(DomainError):
    """Imaginary part of a period matrix is not positive definite."""


class NotSymplectic(DomainError):
    """Integer matrix does not satisfy the exact symplectic relations."""


class SingularCocycle(DomainError):
    """c*tau + d is numerically singular; the fractional action is unreliable."""


class NotOnThetaNull(DomainError):
    """Operation requires a vanishing theta constant at the given point."""


class BadCharacteristic(DomainError):
    """Characteristic with the wrong parity (or the excluded zero one)."""


class BadOrder(DomainError):
    """Minor order outside the valid range 1..g."""


class ToleranceBelowCertificate(DomainError):
    """A decision threshold is smaller than the attached error certificate."""


class NumericalError(ThetanullError):
    """A computation could not be completed to its certified target."""


class TargetUnreachable(NumericalError):
    """No truncation radius within the cap meets the requested tail bound."""


class DerivativeTooSmall(NumericalError):
    """Newton step rejected: derivative below the safe-division threshold."""


class NoConvergence(NumericalError):
    """Iteration budget exhausted before the stopping criterion was met."""


class LeftSiegelSpace(NumericalError):
    """An iterate stepped outside the Siegel upper half-space."""
