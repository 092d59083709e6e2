"""Exception hierarchy shared by every module in the package."""


class GaussianError(ValueError):
    """Base class for all errors raised by gaussfid."""


class DomainError(GaussianError):
    """An integral diverges or an argument is outside its domain."""


class InvalidKernelError(GaussianError):
    """Kernel parameters violate Hermiticity or normalization."""


class NonPositiveError(GaussianError):
    """Kernel does not describe a non-negative operator (b > 0 or Re a < -b)."""


class UnphysicalStateError(GaussianError):
    """Covariance matrix violates det A >= 1 or positivity."""


class PreconditionError(GaussianError):
    """A caller-side precondition (e.g. purity) does not hold."""


class UnreliableQuadratureError(GaussianError):
    """Quadrature did not converge between successive orders."""


class TruncationError(GaussianError):
    """Fock truncation leaves more trace outside the basis than allowed."""

    def __init__(self, message: str, required_dim: int | None = None):
        super().__init__(message)
        self.required_dim = required_dim
