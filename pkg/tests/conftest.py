import pytest

from qdephase import BathSpec, DisplacementSpec, ModelSpec


@pytest.fixture
def benchmark_model() -> ModelSpec:
    """Weak-coupling scenario with a pronounced long-time distance gain."""
    return ModelSpec(
        epsilon=1.0,
        bath=BathSpec(alpha=0.0025, mu=0.01, omega_c=1.0),
        displacement=DisplacementSpec(gamma_coef=0.05, nu=0.05),
    )


@pytest.fixture
def strong_model() -> ModelSpec:
    """Same environment at four times the coupling: the gain disappears."""
    return ModelSpec(
        epsilon=1.0,
        bath=BathSpec(alpha=0.01, mu=0.01, omega_c=1.0),
        displacement=DisplacementSpec(gamma_coef=0.05, nu=0.05),
    )
