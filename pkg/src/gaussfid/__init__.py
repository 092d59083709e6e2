"""Fidelity of displaced squeezed thermal states via the oscillator semigroup."""

from .errors import (
    DomainError,
    GaussianError,
    InvalidKernelError,
    NonPositiveError,
    PreconditionError,
    TruncationError,
    UnphysicalStateError,
    UnreliableQuadratureError,
)
from .fidelity_engine import (
    FidelityBreakdown,
    bures_angle,
    bures_distance,
    cf_overlap,
    delta_T_canonical,
    exponential_factor_canonical,
    fidelity,
    pure_fidelity,
)
from .fock_oracle import kernel_to_fock, oracle_fidelity, required_dim, uhlmann_fidelity
from .kernel_algebra import DensityKernel, GaussianKernel, compose, normalize, sqrt_kernel, trace
from .state_model import (
    CanonicalForm,
    CovarianceMatrix,
    Displacement,
    GaussianState,
    canonical_decompose,
    from_canonical,
    kernel_from_state,
    state_from_kernel,
    thermal_kernel,
    thermal_state,
    twamley_params,
)

__version__ = "0.1.0"
