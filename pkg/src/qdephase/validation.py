"""Seeded self-validation suites: backend agreement, physicality, identities.

Each suite draws its own deterministic sample from a seed, checks one
contract, and reports counts plus the worst observed error.  The CLI
``validate`` subcommand runs them all; the test suite reuses them for the
acceptance criteria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import (
    BathSpec,
    DisplacementSpec,
    ModelSpec,
    ground_coherent_overlap,
    profile_at,
)
from .dynamics import (
    InitialStateSpec,
    QubitAmplitudes,
    coherence_factor,
    distance_same_amplitudes,
    distance_same_environment,
    pair_weights,
    reduced_state,
    trace_distance,
)
from .numerics import QuadratureSettings

__all__ = [
    "SuiteResult",
    "check_backend_agreement",
    "check_physicality",
    "check_overlap_consistency",
    "check_distance_equivalence",
    "run_all",
]

_ABS_FLOOR = 1e-8


@dataclass(frozen=True)
class SuiteResult:
    name: str
    samples: int
    failures: int
    worst: float
    tolerance: str

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{self.name}: {status} {self.samples - self.failures}/{self.samples} "
            f"(worst {self.worst:.3e}, tol {self.tolerance})"
        )


def _random_model(rng: np.random.Generator) -> ModelSpec:
    alpha = 10.0 ** rng.uniform(-4, 0)
    gamma_coef = 10.0 ** rng.uniform(-4, 0)
    mu = rng.uniform(1e-3, 2.0)
    nu = rng.uniform(1e-3, 2.0)
    omega_c = rng.uniform(0.5, 2.0)
    epsilon = rng.uniform(0.0, 2.0)
    return ModelSpec(
        epsilon=epsilon,
        bath=BathSpec(alpha=alpha, mu=mu, omega_c=omega_c),
        displacement=DisplacementSpec(gamma_coef=gamma_coef, nu=nu),
    )


def _random_amplitudes(rng: np.random.Generator) -> QubitAmplitudes:
    weight = rng.uniform(0.05, 0.95)
    phase_p = rng.uniform(0.0, 2.0 * math.pi)
    phase_m = rng.uniform(0.0, 2.0 * math.pi)
    b_plus = math.sqrt(weight) * complex(math.cos(phase_p), math.sin(phase_p))
    b_minus = math.sqrt(1.0 - weight) * complex(math.cos(phase_m), math.sin(phase_m))
    return QubitAmplitudes(b_plus, b_minus)


def check_backend_agreement(
    samples: int,
    rel_tol: float = 1e-6,
    seed: int = 42,
    settings: QuadratureSettings | None = None,
) -> SuiteResult:
    """Closed-form r, s, phi against the quadrature backend on random tuples."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for i in range(samples):
        model = _random_model(rng)
        t = 0.0 if i % 25 == 0 else rng.uniform(0.0, 100.0)
        closed = profile_at(model, t, backend="closed_form")
        quadr = profile_at(model, t, backend="quadrature", settings=settings)
        sample_worst = 0.0
        for lhs, rhs in (
            (closed.r, quadr.r),
            (closed.s, quadr.s),
            (closed.phi, quadr.phi),
        ):
            err = abs(lhs - rhs) / max(_ABS_FLOOR, rel_tol * abs(lhs))
            sample_worst = max(sample_worst, err)
        worst = max(worst, sample_worst)
        if sample_worst > 1.0:
            failures += 1
    return SuiteResult(
        name="backend-agreement",
        samples=samples,
        failures=failures,
        worst=worst,
        tolerance=f"max({_ABS_FLOOR:g}, {rel_tol:g}*rel), reported as fraction of tol",
    )


def check_physicality(
    samples: int,
    seed: int = 42,
    settings: QuadratureSettings | None = None,
) -> SuiteResult:
    """|A_lambda(t)| <= 1 + 1e-9 and valid density matrices, both backends."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for i in range(samples):
        model = _random_model(rng)
        t = rng.uniform(0.0, 100.0)
        lam = rng.uniform(0.0, 1.0)
        amps = _random_amplitudes(rng)
        state = InitialStateSpec(amps, lam)
        overlap = ground_coherent_overlap(model.displacement, model.bath.omega_c)
        backend = "quadrature" if i % 2 else "closed_form"
        profile = profile_at(model, t, backend=backend, settings=settings)
        factor = coherence_factor(state, profile, model.epsilon, overlap)
        excess = abs(factor) - 1.0
        worst = max(worst, excess)
        try:
            reduced_state(amps, factor)
        except Exception:
            failures += 1
            continue
        if excess > 1e-9:
            failures += 1
    return SuiteResult(
        name="physicality",
        samples=samples,
        failures=failures,
        worst=worst,
        tolerance="|A| - 1 <= 1e-9; density matrix PSD/trace/Hermitian",
    )


def check_overlap_consistency(
    samples: int,
    rel_tol: float = 1e-12,
    seed: int = 42,
    double_s_offset: bool = False,
) -> SuiteResult:
    """exp(s(0)) must equal the ground-coherent overlap to 1e-12 relative.

    ``double_s_offset`` deliberately doubles the static offset in s(0)
    (a debugging aid): the identity then fails by exp(offset/2), which is
    exactly what this suite is designed to catch.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(samples):
        model = _random_model(rng)
        overlap = ground_coherent_overlap(model.displacement, model.bath.omega_c)
        s0 = profile_at(model, 0.0, backend="closed_form").s
        if double_s_offset:
            s0 = 2.0 * s0
        err = abs(math.exp(s0) - overlap) / overlap
        worst = max(worst, err)
        if err > rel_tol:
            failures += 1
    return SuiteResult(
        name="overlap-consistency",
        samples=samples,
        failures=failures,
        worst=worst,
        tolerance=f"{rel_tol:g} relative",
    )


def check_distance_equivalence(
    samples: int,
    abs_tol: float = 1e-12,
    seed: int = 42,
) -> SuiteResult:
    """Closed-form distances against the eigenvalue trace distance."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(samples):
        model = _random_model(rng)
        t = rng.uniform(0.0, 50.0)
        lam1 = rng.uniform(0.0, 1.0)
        lam2 = rng.uniform(0.0, 1.0)
        amps = _random_amplitudes(rng)
        overlap = ground_coherent_overlap(model.displacement, model.bath.omega_c)
        profile = profile_at(model, t, backend="closed_form")

        state1 = InitialStateSpec(amps, lam1)
        state2 = InitialStateSpec(amps, lam2)
        a1 = coherence_factor(state1, profile, model.epsilon, overlap)
        a2 = coherence_factor(state2, profile, model.epsilon, overlap)
        rho1 = reduced_state(amps, a1)
        rho2 = reduced_state(amps, a2)

        w = pair_weights(lam1, lam2, overlap)
        closed = distance_same_amplitudes(w, profile, amps.coherence_scale)
        generic = trace_distance(rho1, rho2)
        err = abs(closed - generic)

        amps_b = _random_amplitudes(rng)
        rho1b = reduced_state(amps, a1)
        rho2b = reduced_state(amps_b, a1)
        closed_env = distance_same_environment(amps, amps_b, a1)
        generic_env = trace_distance(rho1b, rho2b)
        err = max(err, abs(closed_env - generic_env))

        worst = max(worst, err)
        if err > abs_tol:
            failures += 1
    return SuiteResult(
        name="distance-equivalence",
        samples=samples,
        failures=failures,
        worst=worst,
        tolerance=f"{abs_tol:g} absolute",
    )


def run_all(
    samples: int,
    rel_tol: float = 1e-6,
    seed: int = 42,
    double_s_offset: bool = False,
    settings: QuadratureSettings | None = None,
) -> list[SuiteResult]:
    """Run every suite with a shared seed; deterministic for fixed inputs."""
    return [
        check_backend_agreement(samples, rel_tol=rel_tol, seed=seed, settings=settings),
        check_physicality(samples, seed=seed, settings=settings),
        check_overlap_consistency(samples, seed=seed, double_s_offset=double_s_offset),
        check_distance_equivalence(samples, seed=seed),
    ]
