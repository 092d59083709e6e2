"""Closed-form Uhlmann fidelity between single-mode Gaussian states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .state_model import (
    DET_TOL,
    CanonicalForm,
    CovarianceMatrix,
    Displacement,
    GaussianState,
    rotation,
)


@dataclass(frozen=True)
class FidelityBreakdown:
    """Fidelity together with the pieces it is assembled from.

    ``F == prefactor * exp_factor`` where ``prefactor = 2/(sqrt(Delta+T) - sqrt(T))``.
    """

    F: float
    Delta: float
    T: float
    exp_factor: float
    prefactor: float

    def __float__(self):
        return self.F


@dataclass(frozen=True)
class GMatrix:
    """Inverse of ``Gamma_1 + M1^-1 O1 A2 O1^T M1^-1`` in the frame of state 1."""

    g_aa: float
    g_tt: float
    g_at: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.g_aa, self.g_at], [self.g_at, self.g_tt]])


def _sum_matrix(c1: CovarianceMatrix, c2: CovarianceMatrix):
    return c1.a_qq + c2.a_qq, c1.a_pp + c2.a_pp, c1.a_pq + c2.a_pq


def _quadratic_inverse_form(s_qq, s_pp, s_pq, u) -> tuple[float, float]:
    # u^T S^-1 u via the adjugate; returns (form, det S)
    det = s_qq * s_pp - s_pq * s_pq
    form = (s_pp * u[0] ** 2 - 2 * s_pq * u[0] * u[1] + s_qq * u[1] ** 2) / det
    return form, det


def relative_displacement(s1: GaussianState, s2: GaussianState) -> np.ndarray:
    return s2.disp.vector() - s1.disp.vector()


def _thermal_excess(det: float) -> float:
    # det A - 1, snapped to zero for states pure within DET_TOL; sqrt(T) would
    # otherwise turn 1e-15 round-off in det A into 1e-8 errors in F
    excess = det - 1.0
    return 0.0 if excess <= DET_TOL else excess


def prefactor_from(Delta: float, T: float) -> float:
    """``2/(sqrt(Delta+T) - sqrt(T))`` in the cancellation-free rationalized form."""
    return 2.0 * (math.sqrt(Delta + T) + math.sqrt(T)) / Delta


def fidelity(s1: GaussianState, s2: GaussianState) -> FidelityBreakdown:
    """Uhlmann fidelity of two displaced squeezed thermal states.

    Args:
        s1: first state.
        s2: second state.

    Returns:
        FidelityBreakdown with ``Delta = det(A1 + A2)``,
        ``T = (det A1 - 1)(det A2 - 1)`` and the exponential factor
        ``exp(-u^T (A1 + A2)^-1 u)`` for the relative displacement
        ``u = u2 - u1``.
    """
    s_qq, s_pp, s_pq = _sum_matrix(s1.cov, s2.cov)
    u = relative_displacement(s1, s2)
    form, Delta = _quadratic_inverse_form(s_qq, s_pp, s_pq, u)
    # A1 + A2 >= 2 I for physical states, so Delta >= 4
    assert Delta > 0, "A1 + A2 singular for physical states"
    T = _thermal_excess(s1.det) * _thermal_excess(s2.det)
    pref = prefactor_from(Delta, T)
    exp_factor = math.exp(-form)
    # round-off can push identical states a few ulps above one
    F = min(pref * exp_factor, 1.0)
    return FidelityBreakdown(F=F, Delta=Delta, T=T, exp_factor=exp_factor, prefactor=pref)


def pure_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """Fidelity when the first state is pure: ``det((A1+A2)/2)^-1/2 exp(-u^T (A1+A2)^-1 u)``."""
    if abs(s1.det - 1.0) > DET_TOL:
        raise PreconditionError(f"first state must be pure, det A1 = {s1.det!r}")
    s_qq, s_pp, s_pq = _sum_matrix(s1.cov, s2.cov)
    form, Delta = _quadratic_inverse_form(s_qq, s_pp, s_pq, relative_displacement(s1, s2))
    return math.exp(-form) / math.sqrt(Delta / 4.0)


def cf_overlap(s1: GaussianState, s2: GaussianState) -> float:
    """Hilbert-Schmidt overlap ``trace(rho1 rho2)``.

    Closed form of ``(2 pi)^-1 ∫ CF1(-alpha, -tau) CF2(alpha, tau)``: the
    integrand is a Gaussian with matrix ``(A1 + A2)/2`` and a linear phase set
    by the relative displacement, giving ``2/sqrt(Delta) exp(-u^T (A1+A2)^-1 u)``.
    """
    s_qq, s_pp, s_pq = _sum_matrix(s1.cov, s2.cov)
    form, Delta = _quadratic_inverse_form(s_qq, s_pp, s_pq, relative_displacement(s1, s2))
    return 2.0 / math.sqrt(Delta) * math.exp(-form)


# ---------------------------------------------------------------------------
# canonical-parameter route


def _angle_terms(c1: CanonicalForm, c2: CanonicalForm) -> tuple[float, float]:
    dtheta = c2.theta - c1.theta
    return math.cos(dtheta), math.sin(dtheta)


def delta_T_canonical(c1: CanonicalForm, c2: CanonicalForm) -> float:
    """``Delta + T`` expressed through the canonical coordinates of both states."""
    C, S = _angle_terms(c1, c2)
    g1, g2, m1, m2 = c1.gamma, c2.gamma, c1.m, c2.m
    prod = (m1 * m2) ** 2
    ratio = (m1 / m2) ** 2
    bracket = S * S * (prod + 1 / prod) + C * C * (ratio + 1 / ratio)
    return g1**2 * g2**2 + 1 + g1 * g2 * bracket


def delta_canonical(c1: CanonicalForm, c2: CanonicalForm) -> float:
    """``det(A1 + A2)`` from canonical coordinates."""
    T = _thermal_excess(c1.gamma**2) * _thermal_excess(c2.gamma**2)
    return delta_T_canonical(c1, c2) - T


def g_matrix(c1: CanonicalForm, c2: CanonicalForm) -> GMatrix:
    C, S = _angle_terms(c1, c2)
    g1, g2, m1, m2 = c1.gamma, c2.gamma, c1.m, c2.m
    Delta = delta_canonical(c1, c2)
    g_aa = (g1 + g2 * (S * S * (m1 * m2) ** 2 + C * C * (m1 / m2) ** 2)) / Delta
    g_tt = (g1 + g2 * (S * S / (m1 * m2) ** 2 + C * C * (m2 / m1) ** 2)) / Delta
    # sign fixed by O(theta) = [[c, -s], [s, c]]; checked against direct inversion
    g_at = g2 * C * S * (m2**2 - 1 / m2**2) / Delta
    return GMatrix(g_aa, g_tt, g_at)


def exponential_factor_canonical(
    c1: CanonicalForm, c2: CanonicalForm, u: Displacement
) -> float:
    """``exp(-u~^T G u~)`` with ``u~ = M1^-1 O1 u`` in the frame of the first state."""
    m_inv = np.array([1 / c1.m, c1.m])
    ut = m_inv * (rotation(c1.theta) @ u.vector())
    G = g_matrix(c1, c2)
    form = G.g_aa * ut[0] ** 2 + 2 * G.g_at * ut[0] * ut[1] + G.g_tt * ut[1] ** 2
    return math.exp(-form)


def fidelity_canonical(
    c1: CanonicalForm, c2: CanonicalForm, u: Displacement | None = None
) -> float:
    """Fidelity assembled entirely from canonical coordinates."""
    u = u if u is not None else Displacement()
    dt = delta_T_canonical(c1, c2)
    T = _thermal_excess(c1.gamma**2) * _thermal_excess(c2.gamma**2)
    return prefactor_from(dt - T, T) * exponential_factor_canonical(c1, c2, u)


# ---------------------------------------------------------------------------
# Bures metrics


def bures_distance(s1: GaussianState, s2: GaussianState) -> float:
    return bures_distance_from_fidelity(fidelity(s1, s2).F)


def bures_angle(s1: GaussianState, s2: GaussianState) -> float:
    return bures_angle_from_fidelity(fidelity(s1, s2).F)


def bures_distance_from_fidelity(F: float) -> float:
    return math.sqrt(max(2.0 - 2.0 * math.sqrt(min(F, 1.0)), 0.0))


def bures_angle_from_fidelity(F: float) -> float:
    return math.acos(min(math.sqrt(F), 1.0))


__all__ = [
    "FidelityBreakdown",
    "GMatrix",
    "fidelity",
    "pure_fidelity",
    "cf_overlap",
    "delta_T_canonical",
    "delta_canonical",
    "g_matrix",
    "exponential_factor_canonical",
    "fidelity_canonical",
    "bures_distance",
    "bures_angle",
    "bures_distance_from_fidelity",
    "bures_angle_from_fidelity",
    "prefactor_from",
    "relative_displacement",
]
