"""Phase-space description of single-mode Gaussian states.

Units: hbar = 1, ``(Q psi)(x) = x psi(x)``, ``P = -i d/dx``. Covariances carry a
factor of two (``a_qq = 2 Var Q``), so the vacuum has ``A = I`` and a state is
physical iff ``det A >= 1``, pure iff ``det A == 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple

import numpy as np

from .errors import DomainError, GaussianError, UnphysicalStateError
from .kernel_algebra import DensityKernel, GaussianKernel, normalize

#: slack allowed below det A = 1 before a state counts as unphysical
DET_TOL = 1e-10


@dataclass(frozen=True)
class CovarianceMatrix:
    a_qq: float
    a_pp: float
    a_pq: float = 0.0

    def __post_init__(self):
        for name in ("a_qq", "a_pp", "a_pq"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise UnphysicalStateError(f"{name} is not finite")
            object.__setattr__(self, name, value)
        if self.a_qq <= 0 or self.a_pp <= 0:
            raise UnphysicalStateError(
                f"diagonal entries must be positive (a_qq={self.a_qq}, a_pp={self.a_pp})"
            )
        if self.det < 1 - DET_TOL:
            raise UnphysicalStateError(f"det A = {self.det!r} < 1 violates uncertainty")

    @property
    def det(self) -> float:
        return self.a_qq * self.a_pp - self.a_pq**2

    @property
    def is_pure(self) -> bool:
        return abs(self.det - 1) <= DET_TOL

    def matrix(self) -> np.ndarray:
        return np.array([[self.a_qq, self.a_pq], [self.a_pq, self.a_pp]])

    @classmethod
    def from_matrix(cls, mat) -> "CovarianceMatrix":
        mat = np.asarray(mat, dtype=float)
        if mat.shape != (2, 2):
            raise UnphysicalStateError(f"expected a 2x2 matrix, got shape {mat.shape}")
        if abs(mat[0, 1] - mat[1, 0]) > 1e-12 * max(1.0, np.abs(mat).max()):
            raise UnphysicalStateError("covariance matrix is not symmetric")
        return cls(mat[0, 0], mat[1, 1], 0.5 * (mat[0, 1] + mat[1, 0]))


@dataclass(frozen=True)
class Displacement:
    alpha: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "tau"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"displacement {name} is not finite")
            object.__setattr__(self, name, value)

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.tau])


@dataclass(frozen=True)
class GaussianState:
    cov: CovarianceMatrix
    disp: Displacement = field(default_factory=Displacement)

    @property
    def det(self) -> float:
        return self.cov.det

    @property
    def is_pure(self) -> bool:
        return self.cov.is_pure


@dataclass(frozen=True)
class CanonicalForm:
    """Coordinates of ``A = O^T M Gamma M O``.

    ``gamma`` is the thermal factor (``det A = gamma**2``), ``m`` the squeeze
    magnitude and ``theta`` the orientation of the squeeze axis.
    """

    gamma: float
    m: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.gamma >= 1 - DET_TOL:
            raise UnphysicalStateError(f"gamma = {self.gamma!r} < 1 is unphysical")
        if not self.m > 0:
            raise DomainError(f"squeeze magnitude must be positive, got m={self.m!r}")


class TwamleyParams(NamedTuple):
    r: float
    beta_T: float  # math.inf for a pure state

    @property
    def is_pure_limit(self) -> bool:
        return math.isinf(self.beta_T)


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


# ---------------------------------------------------------------------------
# kernels <-> states


def kernel_from_state(s: GaussianState) -> DensityKernel:
    """Position-representation kernel of a displaced squeezed thermal state."""
    a_qq, a_pq = s.cov.a_qq, s.cov.a_pq
    det = s.cov.det
    a = complex((det + 1) / (4 * a_qq), -a_pq / (2 * a_qq))
    b = min(-(det - 1) / (4 * a_qq), 0.0)
    centred = normalize(GaussianKernel(a, b, a.conjugate()))
    alpha, tau = s.disp.alpha, s.disp.tau
    # <x|W rho W^dag|y> = exp[i tau (x - y)] <x - alpha|rho|y - alpha>
    l = 2 * (a + b) * alpha + 1j * tau
    g = centred.g.real - (a + a.conjugate() + 2 * b).real * alpha**2
    return DensityKernel(a, b, a.conjugate(), l, l.conjugate(), g)


def state_from_kernel(k: DensityKernel) -> GaussianState:
    """Covariance matrix and first moments of a density kernel."""
    if not isinstance(k, DensityKernel):
        k = DensityKernel(*k.params())
    a, d, b = k.a, k.d, k.b.real
    s = a + d + 2 * b
    a_qq = (1 / s).real
    a_pp = (4 * (a * d - b * b) / s).real
    a_pq = (1j * (a - d) / s).real
    alpha = k.l.real / (2 * (a.real + b))
    tau = k.l.imag - 2 * a.imag * alpha
    return GaussianState(CovarianceMatrix(a_qq, a_pp, a_pq), Displacement(alpha, tau))


# ---------------------------------------------------------------------------
# constructors


def _coth(x: float) -> float:
    return 1.0 / math.tanh(x)


def _csch(x: float) -> float:
    # 1/sinh without overflow for large x
    return 2.0 * math.exp(-x) / -math.expm1(-2.0 * x)


def thermal_kernel(beta: float) -> DensityKernel:
    """Mehler kernel of ``exp(-beta H)/Z`` for the unit oscillator.

    The unit-trace constant is ``-ln sqrt(pi / tanh(beta/2))``; the shape
    coefficients are ``a = d = coth(beta)/2`` and ``b = -1/(2 sinh beta)``.
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    a = 0.5 * _coth(beta)
    g = -math.log(math.sqrt(math.pi / math.tanh(0.5 * beta)))
    return DensityKernel(a, -0.5 * _csch(beta), a, 0j, 0j, g)


def thermal_state(beta: float) -> GaussianState:
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    gamma = _coth(beta / 2)
    return GaussianState(CovarianceMatrix(gamma, gamma, 0.0))


def vacuum_state() -> GaussianState:
    return GaussianState(CovarianceMatrix(1.0, 1.0, 0.0))


def coherent_state(alpha: float, tau: float) -> GaussianState:
    return GaussianState(CovarianceMatrix(1.0, 1.0, 0.0), Displacement(alpha, tau))


def from_canonical(c: CanonicalForm, u: Displacement | None = None) -> GaussianState:
    o = rotation(c.theta)
    core = np.diag([c.m**2 * c.gamma, c.gamma / c.m**2])
    mat = o.T @ core @ o
    return GaussianState(
        CovarianceMatrix(mat[0, 0], mat[1, 1], 0.5 * (mat[0, 1] + mat[1, 0])),
        u if u is not None else Displacement(),
    )


def canonical_decompose(A: CovarianceMatrix | GaussianState) -> CanonicalForm:
    """Invert :func:`from_canonical`.

    ``m >= 1`` always; the squeeze angle is reduced to ``[0, pi)`` and set to
    zero when ``A`` is proportional to the identity.
    """
    if isinstance(A, GaussianState):
        A = A.cov
    det = A.det
    half_tr = 0.5 * (A.a_qq + A.a_pp)
    radius = math.hypot(0.5 * (A.a_qq - A.a_pp), A.a_pq)
    lam1 = half_tr + radius
    lam2 = det / lam1
    gamma = math.sqrt(det)
    m = (lam1 / lam2) ** 0.25
    if radius <= 1e-15 * half_tr:
        return CanonicalForm(gamma, 1.0, 0.0)
    # major axis of A points along (cos phi, sin phi) = O^T e1 = (cos theta, -sin theta)
    phi = 0.5 * math.atan2(2 * A.a_pq, A.a_qq - A.a_pp)
    theta = (-phi) % math.pi
    if theta >= math.pi:
        theta = 0.0
    return CanonicalForm(gamma, m, theta)


def twamley_params(c: CanonicalForm) -> TwamleyParams:
    """Squeeze parameter ``r`` and temperature ``beta_T`` in Twamley's convention.

    ``cosh r = (m + 1/m)/2`` and ``cosh(beta_T/4) = gamma/sqrt(gamma**2 - 1)``.
    Note the temperature convention differs from :func:`thermal_state` by a
    factor of two. A pure state returns ``beta_T = inf``.
    """
    r = math.acosh(0.5 * (c.m + 1 / c.m))
    if c.gamma <= 1.0:
        return TwamleyParams(r, math.inf)
    beta_T = 4 * math.acosh(c.gamma / math.sqrt(c.gamma**2 - 1))
    return TwamleyParams(r, beta_T)


def from_twamley(r: float, beta_T: float) -> tuple[float, float]:
    """Return ``(m, gamma)`` with ``m >= 1`` for Twamley's ``(r, beta_T)``."""
    m = math.exp(abs(r))
    gamma = 1.0 if math.isinf(beta_T) else _coth(beta_T / 4)
    return m, gamma


# ---------------------------------------------------------------------------
# phase space


def characteristic_function(s: GaussianState, alpha, tau):
    r"""``trace(W(alpha, tau) rho)`` with ``(W psi)(x) = exp[i tau (x - alpha/2)] psi(x - alpha)``.

    For this Weyl operator ``W = exp[i(tau Q - alpha P)]``, so the Gaussian
    envelope pairs ``alpha`` with the momentum variance and ``tau`` with the
    position variance:

        exp[-(a_pp alpha^2 + a_qq tau^2 - 2 a_pq alpha tau)/4]

    which is the textbook ``exp[-(a_qq x^2 + a_pp y^2 + 2 a_pq x y)/4]`` at the
    rotated argument ``(x, y) = (tau, -alpha)``. A displacement
    ``(alpha0, tau0)`` contributes the phase ``exp[i(alpha0 tau - tau0 alpha)]``.
    """
    alpha = np.asarray(alpha, dtype=float)
    tau = np.asarray(tau, dtype=float)
    cov = s.cov
    quad = cov.a_pp * alpha**2 + cov.a_qq * tau**2 - 2 * cov.a_pq * alpha * tau
    phase = s.disp.alpha * tau - s.disp.tau * alpha
    out = np.exp(-0.25 * quad + 1j * phase)
    return complex(out) if out.ndim == 0 else out


def symplectic_transform(
    s: GaussianState, theta_rot: float, u_shift: Displacement | None = None
) -> GaussianState:
    """Apply a phase-space rotation followed by a displacement."""
    rot = rotation(theta_rot)
    mat = rot @ s.cov.matrix() @ rot.T
    u = rot @ s.disp.vector()
    if u_shift is not None:
        u = u + u_shift.vector()
    return GaussianState(
        CovarianceMatrix(mat[0, 0], mat[1, 1], 0.5 * (mat[0, 1] + mat[1, 0])),
        Displacement(u[0], u[1]),
    )


# ---------------------------------------------------------------------------
# StateSpec JSON objects

STATE_KINDS = ("thermal", "covariance", "canonical", "kernel", "vacuum")

SPEC_FIELDS: dict[str, dict[str, float | None]] = {
    # field -> default (None means required)
    "thermal": {"beta": None},
    "covariance": {"a_qq": None, "a_pp": None, "a_pq": 0.0, "alpha": 0.0, "tau": 0.0},
    "canonical": {"gamma": None, "m": 1.0, "theta": 0.0, "alpha": 0.0, "tau": 0.0},
    "kernel": {"re_a": None, "im_a": 0.0, "b": None, "re_l": 0.0, "im_l": 0.0},
    "vacuum": {"alpha": 0.0, "tau": 0.0},
}


class SpecError(GaussianError):
    """A StateSpec object cannot be parsed."""


def spec_params(spec: Mapping[str, Any]) -> dict[str, float]:
    """Validate the shape of a StateSpec and return its numeric parameters with defaults filled."""
    if not isinstance(spec, Mapping):
        raise SpecError(f"state spec must be a JSON object, got {type(spec).__name__}")
    kind = spec.get("kind")
    if kind not in SPEC_FIELDS:
        raise SpecError(f"unknown state kind {kind!r}; expected one of {STATE_KINDS}")
    raw = spec.get("params", {})
    if not isinstance(raw, Mapping):
        raise SpecError("'params' must be a JSON object")
    fields = SPEC_FIELDS[kind]
    unknown = set(raw) - set(fields)
    if unknown:
        raise SpecError(f"unknown {kind} parameters: {sorted(unknown)}")
    out = {}
    for name, default in fields.items():
        if name in raw:
            value = raw[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SpecError(f"parameter {name!r} must be a number, got {value!r}")
            out[name] = float(value)
        elif default is None:
            raise SpecError(f"{kind} spec is missing required parameter {name!r}")
        else:
            out[name] = default
    return out


def state_from_spec(spec: Mapping[str, Any]) -> GaussianState:
    """Build a :class:`GaussianState` from a StateSpec mapping.

    Shape problems raise :class:`SpecError`; parameters that parse but break a
    physical constraint raise the matching domain/unphysical error.
    """
    kind = spec.get("kind") if isinstance(spec, Mapping) else None
    p = spec_params(spec)
    if kind == "thermal":
        return thermal_state(p["beta"])
    if kind == "vacuum":
        return coherent_state(p["alpha"], p["tau"])
    if kind == "covariance":
        return GaussianState(
            CovarianceMatrix(p["a_qq"], p["a_pp"], p["a_pq"]),
            Displacement(p["alpha"], p["tau"]),
        )
    if kind == "canonical":
        return from_canonical(
            CanonicalForm(p["gamma"], p["m"], p["theta"]), Displacement(p["alpha"], p["tau"])
        )
    a = complex(p["re_a"], p["im_a"])
    l = complex(p["re_l"], p["im_l"])
    kernel = normalize(GaussianKernel(a, p["b"], a.conjugate(), l, l.conjugate()))
    return state_from_kernel(kernel)


def state_to_spec(s: GaussianState, label: str | None = None) -> dict[str, Any]:
    spec: dict[str, Any] = {
        "kind": "covariance",
        "params": {
            "a_qq": s.cov.a_qq,
            "a_pp": s.cov.a_pp,
            "a_pq": s.cov.a_pq,
            "alpha": s.disp.alpha,
            "tau": s.disp.tau,
        },
    }
    if label is not None:
        spec["label"] = label
    return spec


__all__ = [
    "CovarianceMatrix",
    "Displacement",
    "GaussianState",
    "CanonicalForm",
    "TwamleyParams",
    "SpecError",
    "kernel_from_state",
    "state_from_kernel",
    "thermal_kernel",
    "thermal_state",
    "vacuum_state",
    "coherent_state",
    "from_canonical",
    "canonical_decompose",
    "twamley_params",
    "from_twamley",
    "characteristic_function",
    "symplectic_transform",
    "state_from_spec",
    "state_to_spec",
    "spec_params",
    "rotation",
    "SPEC_FIELDS",
    "STATE_KINDS",
]
