"""Brute-force fidelity in a truncated Fock basis.

Density kernels are projected onto the first ``dim`` Hermite functions of the
unit oscillator by tensor Gauss-Hermite quadrature; the Uhlmann fidelity is
then computed with Hermitian matrix square roots. Nothing here uses the
closed-form fidelity, so the two routes check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_hermite

from .errors import NonPositiveError, TruncationError
from .kernel_algebra import DensityKernel, GaussianKernel, evaluate
from .state_model import GaussianState, kernel_from_state, state_from_kernel

#: eigenvalues above -EIG_TOL are treated as round-off and clamped to zero
EIG_TOL = 1e-10
HERMITIAN_TOL = 1e-10
MAX_DIM = 400


@dataclass(frozen=True)
class FockMatrix:
    dim: int
    entries: np.ndarray
    trace_deficit: float

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=complex)
        if ent.shape != (self.dim, self.dim):
            raise ValueError(f"entries have shape {ent.shape}, expected ({self.dim}, {self.dim})")
        herm_err = np.max(np.abs(ent - ent.conj().T)) if self.dim else 0.0
        if herm_err > HERMITIAN_TOL:
            raise NonPositiveError(f"Fock matrix is not Hermitian (max deviation {herm_err:.2e})")
        ent = 0.5 * (ent + ent.conj().T)
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Normalized Hermite functions ``psi_0 .. psi_{n_max-1}`` at ``x``.

    Uses the three-term recurrence on the normalized functions, so values stay
    bounded for large ``n``. Returns an array of shape ``(n_max,) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max,) + x.shape)
    out[0] = math.pi**-0.25 * np.exp(-0.5 * x * x)
    if n_max > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, n_max - 1):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


@lru_cache(maxsize=32)
def _quadrature_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes and weights for ∫ f(x) dx; w_i exp(x_i^2) = 1 / sum_n psi_n(x_i)^2
    # (Christoffel identity) avoids the underflow of w_i at large orders
    nodes, _ = roots_hermite(order)
    psi = hermite_functions(order, nodes)
    weights = 1.0 / np.sum(psi * psi, axis=0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def default_quad_order(dim: int) -> int:
    return 2 * dim + 16


def kernel_matrix(k: GaussianKernel, dim: int, quad_order: int | None = None) -> np.ndarray:
    """Raw ``dim x dim`` Hermite-basis matrix of any Gaussian kernel (no Hermiticity required)."""
    quad_order = default_quad_order(dim) if quad_order is None else quad_order
    if quad_order < 2 * dim:
        raise ValueError(f"quad_order must be >= 2*dim = {2 * dim}, got {quad_order}")
    nodes, weights = _quadrature_rule(quad_order)
    basis = hermite_functions(dim, nodes) * weights
    kern = evaluate(k, nodes[:, None], nodes[None, :])
    return basis @ kern @ basis.T


def kernel_to_fock(
    k: DensityKernel,
    dim: int,
    quad_order: int | None = None,
    budget: float | None = None,
) -> FockMatrix:
    """Matrix elements ``<m|rho|n>`` for ``m, n < dim``.

    Args:
        k: density kernel to project.
        dim: truncation dimension, at least 4.
        quad_order: Gauss-Hermite order per axis; defaults to ``2*dim + 16``.
        budget: if given, the largest acceptable ``1 - trace``.

    Raises:
        TruncationError: the trace outside the basis exceeds ``budget``.
    """
    if dim < 4:
        raise ValueError(f"dim must be >= 4, got {dim}")
    rho = kernel_matrix(k, dim, quad_order)
    deficit = 1.0 - float(np.real(np.trace(rho)))
    if budget is not None and deficit > budget:
        suggestion = max(_dim_for_kernel(k, budget), int(math.ceil(1.5 * dim)))
        raise TruncationError(
            f"dim={dim} leaves trace deficit {deficit:.3e} > budget {budget:.1e}; "
            f"use dim >= {suggestion}",
            required_dim=suggestion,
        )
    return FockMatrix(dim, rho, deficit)


def state_to_fock(
    s: GaussianState, dim: int | None = None, budget: float = 1e-9, quad_order: int | None = None
) -> FockMatrix:
    dim = required_dim(s, budget) if dim is None else dim
    return kernel_to_fock(kernel_from_state(s), dim, quad_order, budget)


def _psd_sqrt(mat: np.ndarray, what: str) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    if vals.min() < -EIG_TOL:
        raise NonPositiveError(f"{what} has eigenvalue {vals.min():.3e} below -{EIG_TOL}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * root) @ vecs.conj().T


def uhlmann_fidelity(m1: FockMatrix, m2: FockMatrix) -> float:
    """``[trace sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2`` by eigendecomposition."""
    if m1.dim != m2.dim:
        raise ValueError(f"dimension mismatch: {m1.dim} vs {m2.dim}")
    root1 = _psd_sqrt(m1.entries, "first state")
    inner = root1 @ m2.entries @ root1
    inner = 0.5 * (inner + inner.conj().T)
    vals = np.linalg.eigvalsh(inner)
    if vals.min() < -EIG_TOL:
        raise NonPositiveError(f"sqrt(rho1) rho2 sqrt(rho1) has eigenvalue {vals.min():.3e}")
    return float(np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2)


def mean_photon_number(s: GaussianState) -> float:
    cov, u = s.cov, s.disp
    return 0.25 * (cov.a_qq + cov.a_pp) + 0.5 * (u.alpha**2 + u.tau**2) - 0.5


def required_dim(s: GaussianState, budget: float) -> int:
    """Truncation dimension whose estimated tail mass is below ``budget``.

    The photon-number tail of a Gaussian state decays like ``q**n`` with
    ``q = (lam - 1)/(lam + 1)`` for the largest eigenvalue ``lam`` of ``A``
    (a thermal state with mean ``(lam - 1)/2``, i.e. ``gamma`` inflated by
    the squeeze factor ``m**2``). Displacement shifts the bulk of the
    distribution by its energy, which is added before the geometric tail.
    """
    if not 0 < budget < 1:
        raise ValueError(f"budget must lie in (0, 1), got {budget}")
    cov = s.cov
    half_tr = 0.5 * (cov.a_qq + cov.a_pp)
    lam = half_tr + math.hypot(0.5 * (cov.a_qq - cov.a_pp), cov.a_pq)
    disp_energy = 0.5 * (s.disp.alpha**2 + s.disp.tau**2)
    tail = 0
    if lam > 1 + 1e-12:
        q = (lam - 1) / (lam + 1)
        # the geometric tail sum(q^n, n >= N) = q^N / (1 - q)
        tail = math.ceil(math.log(budget * (1 - q)) / math.log(q))
    # displaced bulk: Chernoff bound on a Poisson tail, widened by the noise
    spread = _poisson_tail_dim(disp_energy, budget) + 2.0 * math.sqrt(disp_energy * (lam - 1))
    dim = int(math.ceil(tail + spread)) + 4
    return max(min(dim, MAX_DIM), 8 if budget < 1e-6 else 4)


def _poisson_tail_dim(mean: float, budget: float) -> int:
    # smallest N with exp(-mean) (e mean / N)^N <= budget
    if mean <= 0:
        return 0
    n = max(1, int(math.ceil(mean)))
    while -mean + n * (1 + math.log(mean / n)) > math.log(budget):
        n += 1
    return n


def _dim_for_kernel(k: DensityKernel, budget: float) -> int:
    return required_dim(state_from_kernel(k), budget)


def oracle_fidelity(
    s1: GaussianState, s2: GaussianState, budget: float = 1e-9, dim: int | None = None
) -> tuple[float, int]:
    """Brute-force fidelity and the truncation used for it."""
    if dim is None:
        dim = max(required_dim(s1, budget), required_dim(s2, budget))
    f1 = kernel_to_fock(kernel_from_state(s1), dim, budget=budget)
    f2 = kernel_to_fock(kernel_from_state(s2), dim, budget=budget)
    return uhlmann_fidelity(f1, f2), dim


__all__ = [
    "FockMatrix",
    "hermite_functions",
    "kernel_to_fock",
    "kernel_matrix",
    "state_to_fock",
    "uhlmann_fidelity",
    "required_dim",
    "mean_photon_number",
    "oracle_fidelity",
    "default_quad_order",
]
