"""Randomized self-check of the closed forms against their independent routes.

Each category draws its own cases from one seeded generator, records the
largest error seen and the case that produced it, and compares against a
tolerance. The report is deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import fidelity_engine as fe
from . import fock_oracle as fo
from . import kernel_algebra as ka
from . import state_model as sm

DEFAULT_TOLERANCES = {
    "F1_identity": 1e-12,
    "F2_symmetry": 1e-12,
    "F3_pure_overlap": 1e-10,
    "F4_invariance": 1e-12,
    "range": 0.0,
    "canonical_delta_T": 1e-12,
    "canonical_exp_factor": 1e-12,
    "R1_quadrature": 1e-8,
    "R1_associativity": 1e-10,
    "R2_square": 1e-10,
    "oracle": 1e-6,
}

#: the Fock comparison is the slow category; it uses at most this many cases
MAX_ORACLE_CASES = 20


@dataclass
class Category:
    name: str
    tol: float
    max_error: float = 0.0
    worst_case: dict[str, Any] | None = None
    cases: int = 0

    def record(self, error: float, case: Callable[[], dict[str, Any]]) -> None:
        self.cases += 1
        if not math.isfinite(error):
            error = math.inf
        if error > self.max_error or self.worst_case is None:
            self.max_error = max(error, self.max_error)
            self.worst_case = case()

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tol

    def to_dict(self) -> dict[str, Any]:
        out = {
            "cases": self.cases,
            "max_error": self.max_error if math.isfinite(self.max_error) else "inf",
            "tol": self.tol,
            "passed": self.passed,
        }
        if not self.passed:
            out["failing_case"] = self.worst_case
        return out


@dataclass
class Report:
    seed: int
    cases: int
    categories: dict[str, Category] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.categories.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed,
            "categories": {k: v.to_dict() for k, v in self.categories.items()},
        }


def random_canonical(rng: np.random.Generator, gamma_max=5.0, m_max=3.0) -> sm.CanonicalForm:
    return sm.CanonicalForm(
        rng.uniform(1.0, gamma_max), rng.uniform(1.0, m_max), rng.uniform(0.0, math.pi)
    )


def random_displacement(rng: np.random.Generator, radius: float = 5.0) -> sm.Displacement:
    r = radius * math.sqrt(rng.uniform())
    phi = rng.uniform(0.0, 2 * math.pi)
    return sm.Displacement(r * math.cos(phi), r * math.sin(phi))


def random_state(rng: np.random.Generator, gamma_max=5.0, m_max=3.0, radius=5.0) -> sm.GaussianState:
    return sm.from_canonical(random_canonical(rng, gamma_max, m_max), random_displacement(rng, radius))


def random_pure_state(rng: np.random.Generator, m_max=3.0, radius=5.0) -> sm.GaussianState:
    c = sm.CanonicalForm(1.0, rng.uniform(1.0, m_max), rng.uniform(0.0, math.pi))
    return sm.from_canonical(c, random_displacement(rng, radius))


def random_density_kernel(rng: np.random.Generator, gamma_max=5.0, m_max=3.0, radius=5.0) -> ka.DensityKernel:
    return sm.kernel_from_state(random_state(rng, gamma_max, m_max, radius))


def _state_dict(s: sm.GaussianState) -> dict[str, float]:
    return sm.state_to_spec(s)["params"]


def _canon_dict(c: sm.CanonicalForm) -> dict[str, float]:
    return {"gamma": c.gamma, "m": c.m, "theta": c.theta}


def _kernel_dict(k: ka.GaussianKernel) -> dict[str, list[float]]:
    return {n: [complex(v).real, complex(v).imag] for n, v in zip("abdlkg", k.params())}


def _param_error(k1: ka.GaussianKernel, k2: ka.GaussianKernel) -> float:
    return max(abs(p - q) for p, q in zip(k1.params(), k2.params()))


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(abs(y), 1e-300)


def run_verification(
    seed: int = 42, cases: int = 50, tolerances: dict[str, float] | None = None
) -> Report:
    if cases < 1:
        raise ValueError(f"cases must be >= 1, got {cases}")
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(tolerances or {})
    rng = np.random.default_rng(seed)
    report = Report(seed, cases, {name: Category(name, tol) for name, tol in tols.items()})
    cat = report.categories

    for _ in range(cases):
        s1, s2 = random_state(rng), random_state(rng)
        f12 = fe.fidelity(s1, s2).F
        f21 = fe.fidelity(s2, s1).F
        cat["F1_identity"].record(abs(fe.fidelity(s1, s1).F - 1.0), lambda: {"s": _state_dict(s1)})
        cat["F2_symmetry"].record(
            abs(f12 - f21), lambda: {"s1": _state_dict(s1), "s2": _state_dict(s2)}
        )
        range_err = 0.0 if 0.0 < f12 <= 1.0 else abs(f12) + 1.0
        cat["range"].record(range_err, lambda: {"s1": _state_dict(s1), "s2": _state_dict(s2), "F": f12})

        pure = random_pure_state(rng)
        f_pure = fe.fidelity(pure, s2).F
        cat["F3_pure_overlap"].record(
            abs(f_pure - fe.cf_overlap(pure, s2)),
            lambda: {"s1": _state_dict(pure), "s2": _state_dict(s2)},
        )

        theta, shift = rng.uniform(0, 2 * math.pi), random_displacement(rng)
        t1 = sm.symplectic_transform(s1, theta, shift)
        t2 = sm.symplectic_transform(s2, theta, shift)
        cat["F4_invariance"].record(
            abs(fe.fidelity(t1, t2).F - f12),
            lambda: {"s1": _state_dict(s1), "s2": _state_dict(s2), "theta": theta},
        )

        c1, c2 = random_canonical(rng), random_canonical(rng)
        u = random_displacement(rng)
        a1, a2 = sm.from_canonical(c1), sm.from_canonical(c2, u)
        direct = fe.fidelity(a1, a2)
        cat["canonical_delta_T"].record(
            _rel(fe.delta_T_canonical(c1, c2), direct.Delta + direct.T),
            lambda: {"c1": _canon_dict(c1), "c2": _canon_dict(c2)},
        )
        cat["canonical_exp_factor"].record(
            abs(fe.exponential_factor_canonical(c1, c2, u) - direct.exp_factor),
            lambda: {"c1": _canon_dict(c1), "c2": _canon_dict(c2), "u": [u.alpha, u.tau]},
        )

        k1 = random_density_kernel(rng, radius=2.0)
        k2 = random_density_kernel(rng, radius=2.0)
        k3 = random_density_kernel(rng, radius=2.0)
        probes = np.linspace(-1.0, 1.0, 5)
        xs, ys = np.meshgrid(probes, probes)
        closed = ka.evaluate(ka.compose(k1, k2), xs, ys)
        try:
            quad = ka.quadrature_compose(k1, k2, xs, ys, order=40)
            r1_err = float(np.max(np.abs(quad - closed) / np.abs(closed)))
        except ka.UnreliableQuadratureError:
            r1_err = math.inf
        cat["R1_quadrature"].record(r1_err, lambda: {"k1": _kernel_dict(k1), "k2": _kernel_dict(k2)})
        left = ka.compose(ka.compose(k1, k2), k3)
        right = ka.compose(k1, ka.compose(k2, k3))
        cat["R1_associativity"].record(
            _param_error(left, right),
            lambda: {"k1": _kernel_dict(k1), "k2": _kernel_dict(k2), "k3": _kernel_dict(k3)},
        )
        root = ka.sqrt_kernel(k1)
        cat["R2_square"].record(
            _param_error(ka.compose(root, root), k1), lambda: {"rho": _kernel_dict(k1)}
        )

    for _ in range(min(cases, MAX_ORACLE_CASES)):
        s1 = random_state(rng, gamma_max=3.0, m_max=2.0, radius=2.0)
        s2 = random_state(rng, gamma_max=3.0, m_max=2.0, radius=2.0)
        oracle, dim = fo.oracle_fidelity(s1, s2, budget=1e-9)
        closed_f = fe.fidelity(s1, s2).F
        cat["oracle"].record(
            abs(oracle - closed_f),
            lambda: {"s1": _state_dict(s1), "s2": _state_dict(s2), "dim": dim},
        )
    return report
