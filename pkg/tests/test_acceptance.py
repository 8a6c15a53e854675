"""Acceptance criteria: one test per criterion, pinned tolerances, runtime caps.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion.  Derived reference numbers come from tests/oracles.py (series
gamma oracle, direct quadrature of the defining integrals, 40-digit frozen
constants).
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

import oracles
from qdephase import (
    BathSpec,
    DisplacementSpec,
    InitialStateSpec,
    ModelSpec,
    QubitAmplitudes,
    coherence_factor,
    distance_same_amplitudes,
    distance_same_environment,
    find_lambda_c,
    distance_series,
    find_extremum,
    gain_ratio,
    ground_coherent_overlap,
    pair_weights,
    profile_at,
    profile_limit,
    reduced_state,
    trace_distance,
)
from qdephase.cli import main
from qdephase.validation import (
    check_backend_agreement,
    check_distance_equivalence,
    check_overlap_consistency,
    check_physicality,
)

BENCHMARK = ModelSpec(
    epsilon=1.0,
    bath=BathSpec(alpha=0.0025, mu=0.01, omega_c=1.0),
    displacement=DisplacementSpec(gamma_coef=0.05, nu=0.05),
)

CONFIG_TEXT = (
    "alpha = 0.0025\ngamma = 0.05\nmu = 0.01\nnu = 0.05\n"
    "lambda1 = 0.25\nlambda2 = 0\n"
)


def report(number: int, message: str) -> None:
    print(f"ACCEPTANCE {number:>2}: PASS  {message}")


def test_criterion_01_oracle_equivalence():
    started = time.monotonic()
    result = check_backend_agreement(samples=100, rel_tol=1e-6, seed=42)
    elapsed = time.monotonic() - started
    assert result.failures == 0, result.line()
    assert elapsed <= 30.0, f"runtime {elapsed:.1f}s exceeds 30s"
    report(1, f"closed vs quadrature r,s,phi on 100 tuples, worst "
              f"{result.worst:.2e} of tol, {elapsed:.1f}s")


def test_criterion_02_physicality():
    started = time.monotonic()
    result = check_physicality(samples=1000, seed=42)
    elapsed = time.monotonic() - started
    assert result.failures == 0, result.line()
    assert elapsed <= 10.0, f"runtime {elapsed:.1f}s exceeds 10s"
    report(2, f"|A| <= 1+1e-9 and PSD/trace/Hermitian on 1000 samples, "
              f"both backends, {elapsed:.1f}s")


def test_criterion_03_overlap_identity_and_typo_sensitivity():
    result = check_overlap_consistency(samples=100, rel_tol=1e-12, seed=42)
    assert result.failures == 0, result.line()
    corrupted = check_overlap_consistency(
        samples=100, rel_tol=1e-12, seed=42, double_s_offset=True
    )
    assert corrupted.failures == 100, (
        "doubling the static s offset must break exp(s(0)) = overlap"
    )
    report(3, f"exp(s(0)) = overlap to 1e-12 on 100 draws (worst "
              f"{result.worst:.2e}); doubled offset fails all 100")


def test_criterion_04_distance_equivalence():
    result = check_distance_equivalence(samples=500, abs_tol=1e-12, seed=42)
    assert result.failures == 0, result.line()
    report(4, f"closed-form distances = eigenvalue distance to 1e-12 on "
              f"500 scenarios (worst {result.worst:.2e})")


def test_criterion_05_contraction_baseline():
    # shared (vacuum) environment branch: A is common to both states and
    # |A(t)| = e^(-r(t)) is non-increasing for mu in (0, 1]
    rng = np.random.default_rng(42)
    checked = 0
    for _ in range(100):
        model = ModelSpec(
            epsilon=rng.uniform(0.0, 2.0),
            bath=BathSpec(
                alpha=10.0 ** rng.uniform(-4, 0),
                mu=rng.uniform(1e-3, 1.0),
                omega_c=rng.uniform(0.5, 2.0),
            ),
            displacement=DisplacementSpec(
                gamma_coef=10.0 ** rng.uniform(-4, 0),
                nu=rng.uniform(1e-3, 2.0),
            ),
        )
        overlap = ground_coherent_overlap(model.displacement, model.bath.omega_c)
        w1 = rng.uniform(0.05, 0.95)
        w2 = rng.uniform(0.05, 0.95)
        b1 = QubitAmplitudes(math.sqrt(w1), math.sqrt(1 - w1))
        b2 = QubitAmplitudes(math.sqrt(w2) * 1j, math.sqrt(1 - w2))
        state = InitialStateSpec(b1, 0.0)
        d0 = distance_same_environment(b1, b2, 1.0)
        for t in np.geomspace(1e-3, 1e3, 25):
            profile = profile_at(model, float(t))
            factor = coherence_factor(state, profile, model.epsilon, overlap)
            assert distance_same_environment(b1, b2, factor) <= d0 + 1e-12
            checked += 1
    report(5, f"shared-environment distance never exceeds D(0) "
              f"({checked} grid points over 100 scenarios)")


def test_criterion_06_growth_phenomenon():
    started = time.monotonic()
    ratio_weak = gain_ratio(BENCHMARK, 0.25, 0.0)
    strong = replace(BENCHMARK, bath=replace(BENCHMARK.bath, alpha=0.01))
    ratio_strong = gain_ratio(strong, 0.25, 0.0)
    elapsed = time.monotonic() - started
    assert abs(ratio_weak - 2.52) <= 0.05
    assert abs(ratio_strong - 0.43) <= 0.02
    # pinned against the independently derived oracles as well
    assert ratio_weak == pytest.approx(oracles.SCENARIO_GAIN, rel=1e-9)
    assert ratio_strong == pytest.approx(oracles.STRONG_GAIN, rel=1e-9)
    assert elapsed <= 1.0
    # gamma prefactors from the series oracle, structure cross-checked by
    # quadrature at omega_c * t = 1e6
    r_oracle = 4.0 * 0.0025 * oracles.series_gamma(0.01)
    assert profile_limit(BENCHMARK).r == pytest.approx(r_oracle, rel=1e-12)
    late_closed = profile_at(BENCHMARK, 1e6)
    late_quad = profile_at(BENCHMARK, 1e6, backend="quadrature")
    for lhs, rhs in ((late_closed.r, late_quad.r), (late_closed.s, late_quad.s)):
        assert abs(lhs - rhs) <= max(1e-8, 1e-6 * abs(lhs))
    report(6, f"gain ratios {ratio_weak:.4f} (2.52 +- 0.05) and "
              f"{ratio_strong:.4f} (0.43 +- 0.02), quadrature-checked, "
              f"{elapsed * 1e3:.0f} ms")


def test_criterion_07_critical_correlation():
    started = time.monotonic()
    tol = 1e-3
    lam_c = find_lambda_c(BENCHMARK, 0.0, bracket=(0.05, 0.95), tol=tol)
    elapsed = time.monotonic() - started
    assert abs(lam_c - 0.49) <= 0.01
    assert gain_ratio(BENCHMARK, lam_c - 2 * tol, 0.0) > 1.0
    assert gain_ratio(BENCHMARK, lam_c + 2 * tol, 0.0) < 1.0
    assert elapsed <= 1.0
    report(7, f"lambda_c = {lam_c:.4f} (0.49 +- 0.01) with verified sign "
              f"change, {elapsed * 1e3:.0f} ms")


def test_criterion_08_interior_minimum():
    started = time.monotonic()
    series = distance_series(BENCHMARK, 0.25, 0.0)
    overlap = ground_coherent_overlap(BENCHMARK.displacement, 1.0)
    w = pair_weights(0.25, 0.0, overlap)
    d_inf = distance_same_amplitudes(w, profile_limit(BENCHMARK), 0.5)
    result = find_extremum(series)
    elapsed = time.monotonic() - started
    assert result.kind == "minimum"
    assert result.value < 0.5 * min(series.distance[0], d_inf)
    assert elapsed <= 1.0
    report(8, f"interior minimum D* = {result.value:.5f} at t = {result.t:.1f}, "
              f"below half of min(D0, Dinf) = {0.5 * min(series.distance[0], d_inf):.5f}, "
              f"{elapsed * 1e3:.0f} ms")


def test_criterion_09_epsilon_invariance():
    overlap = ground_coherent_overlap(BENCHMARK.displacement, 1.0)
    amps = QubitAmplitudes.balanced()
    w = pair_weights(0.25, 0.0, overlap)
    b_other = QubitAmplitudes(math.sqrt(0.8), math.sqrt(0.2))
    reference = None
    for epsilon in (0.0, 1.0, 10.0):
        model = replace(BENCHMARK, epsilon=epsilon)
        values = []
        for t in (0.0, 0.9, 7.0, 120.0):
            profile = profile_at(model, t)
            s1 = InitialStateSpec(amps, 0.25)
            s2 = InitialStateSpec(amps, 0.0)
            a1 = coherence_factor(s1, profile, epsilon, overlap)
            a2 = coherence_factor(s2, profile, epsilon, overlap)
            values.extend(
                [
                    distance_same_amplitudes(w, profile, 0.5),
                    trace_distance(reduced_state(amps, a1), reduced_state(amps, a2)),
                    distance_same_environment(amps, b_other, a1),
                ]
            )
        if reference is None:
            reference = values
        else:
            worst = max(abs(v - ref) for v, ref in zip(values, reference))
            assert worst <= 1e-12
    report(9, "all three distance routes invariant under epsilon in {0, 1, 10} "
              "to 1e-12")


def test_criterion_10_cli_contract(tmp_path):
    config = tmp_path / "scenario.cfg"
    config.write_text(CONFIG_TEXT, encoding="utf-8")

    # exit 0: full validation run
    assert main(["validate", "--samples", "100", "--tol", "1e-6", "--seed", "42"]) == 0

    # golden CSV: byte-identical across runs
    out1, out2 = tmp_path / "run1.csv", tmp_path / "run2.csv"
    assert main(["evolve", "--config", str(config), "--out", str(out1)]) == 0
    assert main(["evolve", "--config", str(config), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    # exit 1: validation failure (deliberately corrupted s offset)
    assert main(["validate", "--samples", "8", "--debug-double-s-offset"]) == 1

    # exit 2: config error
    bad = tmp_path / "bad.cfg"
    bad.write_text("alpha = 0.1\nunknown_key = 3\n", encoding="utf-8")
    assert main(["evolve", "--config", str(bad)]) == 2

    # exit 3: empty gain region
    strong = tmp_path / "strong.cfg"
    strong.write_text(CONFIG_TEXT.replace("0.0025", "0.05"), encoding="utf-8")
    assert main(["critical", "--config", str(strong), "--bracket", "0.05:0.95"]) == 3

    report(10, "validate seed 42 exits 0; evolve CSV byte-stable; "
               "exit codes {0, 1, 2, 3} all exercised")
