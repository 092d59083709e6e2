"""Gaussian integral kernels on the line and the oscillator-semigroup rules.

A kernel is stored through six parameters of the exponent

    <x|K|y> = exp[-(a x^2 + d y^2 + 2 b x y) + l x + k y + g]

so that composition and square roots map parameters to parameters in
closed form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_hermite

from .errors import (
    DomainError,
    InvalidKernelError,
    NonPositiveError,
    UnreliableQuadratureError,
)

#: absolute tolerance on parameter relations checked at construction
PARAM_TOL = 1e-10
#: relative disagreement between quadrature orders that counts as failure
QUADRATURE_RTOL = 1e-6


@dataclass(frozen=True)
class GaussianKernel:
    """Element of the oscillator semigroup.

    ``b`` is half the cross coefficient, so the exponent carries ``-2bxy``.
    """

    a: complex
    b: complex
    d: complex
    l: complex = 0j
    k: complex = 0j
    g: complex = 0j

    def __post_init__(self):
        for name in ("a", "b", "d", "l", "k", "g"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise DomainError(f"kernel parameter {name} is not finite: {value}")
            object.__setattr__(self, name, value)
        if self.a.real <= 0 or self.d.real <= 0:
            raise DomainError(
                f"kernel must decay in both arguments (Re a={self.a.real}, Re d={self.d.real})"
            )

    def params(self) -> tuple[complex, ...]:
        return (self.a, self.b, self.d, self.l, self.k, self.g)

    def __call__(self, x, y):
        return evaluate(self, x, y)


@dataclass(frozen=True)
class DensityKernel(GaussianKernel):
    """Gaussian kernel of a normalized, Hermitian, non-negative operator.

    Construction checks the density-operator constraints to ``PARAM_TOL`` and
    snaps the Hermitian partners (``d``, ``k``) and the real parts of ``b`` and
    ``g`` onto their exact values.
    """

    def __post_init__(self):
        super().__post_init__()
        _check_hermitian(self)
        _check_positive(self)
        object.__setattr__(self, "d", self.a.conjugate())
        object.__setattr__(self, "b", complex(min(self.b.real, 0.0)))
        object.__setattr__(self, "k", self.l.conjugate())
        g_norm = _normalized_g(self.a, self.b.real, self.l)
        if abs(self.g - g_norm) > PARAM_TOL * max(1.0, abs(g_norm)):
            raise InvalidKernelError(
                f"kernel is not trace-normalized: g={self.g}, expected {g_norm}"
            )
        object.__setattr__(self, "g", complex(self.g.real))

    @property
    def width(self) -> float:
        """``Re a + b``, half the diagonal Gaussian coefficient."""
        return self.a.real + self.b.real


def _check_hermitian(kernel: GaussianKernel, check_g: bool = True) -> None:
    a, b, d, l, k, g = kernel.params()
    bad = []
    if abs(d - a.conjugate()) > PARAM_TOL * max(1.0, abs(a)):
        bad.append("d != conj(a)")
    if abs(b.imag) > PARAM_TOL * max(1.0, abs(b)):
        bad.append("b not real")
    if abs(k - l.conjugate()) > PARAM_TOL * max(1.0, abs(l)):
        bad.append("k != conj(l)")
    if check_g and abs(g.imag) > PARAM_TOL * max(1.0, abs(g)):
        bad.append("g not real")
    if bad:
        raise InvalidKernelError("kernel is not Hermitian: " + ", ".join(bad))


def _check_positive(kernel: GaussianKernel) -> None:
    b = kernel.b.real
    if b > PARAM_TOL:
        raise NonPositiveError(f"non-negativity requires b <= 0, got b={b}")
    if kernel.a.real + min(b, 0.0) <= 0:
        raise NonPositiveError(
            f"normalizability requires Re a > -b, got Re a={kernel.a.real}, b={b}"
        )


def _normalized_g(a: complex, b: float, l: complex) -> float:
    w = a.real + b
    return -(l.real**2) / (2 * w) - math.log(math.sqrt(math.pi / (2 * w)))


def evaluate(kernel: GaussianKernel, x, y):
    """Kernel value ``<x|K|y>``; broadcasts over numpy arrays."""
    a, b, d, l, k, g = kernel.params()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.exp(-(a * x * x + d * y * y + 2 * b * x * y) + l * x + k * y + g)
    return complex(out) if out.ndim == 0 else out


def trace(kernel: GaussianKernel) -> complex:
    """Closed-form ``∫ <x|K|x> dx`` (principal square root branch)."""
    s = kernel.a + kernel.d + 2 * kernel.b
    if s.real <= 0:
        raise DomainError(f"diagonal is not integrable: Re(a+d+2b)={s.real}")
    lk = kernel.l + kernel.k
    return cmath.sqrt(math.pi / s) * cmath.exp(lk * lk / (4 * s) + kernel.g)


def normalize(kernel: GaussianKernel) -> DensityKernel:
    """Replace ``g`` so the kernel has unit trace and return it as a density kernel."""
    _check_hermitian(kernel, check_g=False)
    _check_positive(kernel)
    g = _normalized_g(kernel.a, kernel.b.real, kernel.l)
    return DensityKernel(kernel.a, kernel.b.real, kernel.a.conjugate(), kernel.l, kernel.l.conjugate(), g)


def compose(k1: GaussianKernel, k2: GaussianKernel) -> GaussianKernel:
    """Kernel of the operator product ``K1 K2`` (composition rule R1).

    The Gaussian z-integral in ``∫<x|K1|z><z|K2|y>dz`` is completed to a
    square, giving closed-form parameters for the product kernel.
    """
    c = k1.d + k2.a
    if c.real <= 0:
        raise DomainError(f"composition integral diverges: Re(d1+a2)={c.real}")
    j = k1.k + k2.l
    return GaussianKernel(
        a=k1.a - k1.b**2 / c,
        b=-k1.b * k2.b / c,
        d=k2.d - k2.b**2 / c,
        l=k1.l - j * k1.b / c,
        k=k2.k - j * k2.b / c,
        g=k1.g + k2.g + j * j / (4 * c) + cmath.log(cmath.sqrt(math.pi / c)),
    )


def quadrature_compose(
    k1: GaussianKernel, k2: GaussianKernel, x, y, order: int = 40, max_order: int = 640
):
    """Evaluate ``∫<x|K1|z><z|K2|y>dz`` numerically on the points ``(x, y)``.

    Gauss-Hermite quadrature is applied after shifting and scaling z so the
    real Gaussian envelope of the integrand becomes the Hermite weight. The
    order is doubled until two successive orders agree to ``QUADRATURE_RTOL``
    (relative); strongly chirped kernels need more than one doubling. If
    ``max_order`` is reached first an :class:`UnreliableQuadratureError` is
    raised rather than returning the unconverged values.
    """
    if order < 20:
        raise ValueError(f"quadrature order must be >= 20, got {order}")
    c = k1.d + k2.a
    if c.real <= 0:
        raise DomainError(f"composition integral diverges: Re(d1+a2)={c.real}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    coarse = _gh_compose(k1, k2, x, y, order)
    while 2 * order <= max_order:
        order *= 2
        fine = _gh_compose(k1, k2, x, y, order)
        scale = np.maximum(np.abs(fine), np.finfo(float).tiny)
        worst = float(np.max(np.abs(coarse - fine) / scale))
        if worst <= QUADRATURE_RTOL:
            return fine
        coarse = fine
    raise UnreliableQuadratureError(
        f"quadrature not converged at order {order}: successive orders differ by relative {worst:.3e}"
    )


def _gh_compose(k1, k2, x, y, order):
    t, w = roots_hermite(order)
    cr = (k1.d + k2.a).real
    scale = 1.0 / math.sqrt(cr)
    # real part of the linear z-coefficient fixes the envelope centre
    lin = (k1.k + k2.l).real - 2 * (k1.b.real * x + k2.b.real * y)
    center = lin / (2 * cr)
    z = center[..., None] + scale * t
    xx = x[..., None]
    yy = y[..., None]
    vals = evaluate(k1, xx, z) * evaluate(k2, z, yy)
    return scale * np.sum(w * np.exp(t * t) * vals, axis=-1)


def sqrt_kernel(rho: DensityKernel) -> GaussianKernel:
    """Square root of a density kernel (rule R2).

    The cross coefficient takes the negative real branch so that the root is
    itself a non-negative operator. A pure state (``b == 0``) is a projector
    and is returned unchanged.
    """
    if not isinstance(rho, DensityKernel):
        rho = DensityKernel(*rho.params())
    a, b, d, l, k, g = rho.params()
    b = b.real
    if b > 0:
        raise NonPositiveError(f"square root requires b <= 0, got b={b}")
    if b == 0:
        return rho
    s = a + d - 2 * b
    if s.real <= 0:
        raise DomainError(f"degenerate square root: Re(a+d-2b)={s.real}")
    root_s = cmath.sqrt(s)
    root_mb = math.sqrt(-b)
    b_t = -cmath.sqrt(-b * s)
    sum_t = (l + k) / (1 + 2 * cmath.sqrt(-b / s))
    diff_t = l - k
    g_t = 0.5 * g - 0.5 * cmath.log(cmath.sqrt(math.pi / s)) - (l + k) ** 2 / (
        8 * (root_s + 2 * root_mb) ** 2
    )
    return GaussianKernel(
        a=a - b,
        b=b_t.real if abs(b_t.imag) <= PARAM_TOL else b_t,
        d=d - b,
        l=0.5 * (sum_t + diff_t),
        k=0.5 * (sum_t - diff_t),
        g=g_t,
    )


def vacuum_kernel() -> DensityKernel:
    return DensityKernel(0.5, 0.0, 0.5, 0j, 0j, -math.log(math.sqrt(math.pi)))


__all__ = [
    "GaussianKernel",
    "DensityKernel",
    "evaluate",
    "trace",
    "normalize",
    "compose",
    "quadrature_compose",
    "sqrt_kernel",
    "vacuum_kernel",
]
