import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burgers_lyapunov import (
    GridField,
    ProblemSpec,
    decay_experiment,
    evolve,
    fit_decay_rate,
    modal_decay_curve,
    modal_solution,
    step,
)
from burgers_lyapunov.exceptions import SchemeError
from burgers_lyapunov.simulate import (
    discrete_stationary,
    distance_to_stationary,
    modal_field,
    perturbed_stationary,
    sample_field,
    stable_dt,
)
from burgers_lyapunov.stationary import eval_stationary, solve_stationary

SPEC_E = ProblemSpec(1.0, 1.0, 1.0, -1.0)


def stationary_field(spec, n):
    profile = solve_stationary(spec)
    return sample_field(spec, n, lambda x: eval_stationary(profile, spec, x)), profile


def test_grid_field_validation():
    with pytest.raises(ValueError):
        GridField(8, 0.125, np.zeros(9))
    with pytest.raises(ValueError):
        GridField(16, 1 / 16, np.zeros(16))


@pytest.mark.parametrize("n", [64, 128])
def test_step_on_exact_steady_state_changes_little(n):
    fld, _ = stationary_field(SPEC_E, n)
    out = step(fld, SPEC_E, stable_dt(fld.values, fld.h, SPEC_E.nu))
    assert np.max(np.abs(out.values - fld.values)) < 1e-3 * fld.h**2


def test_zero_state_stays_zero():
    spec = ProblemSpec(1, 1, 0, 0)
    fld = GridField(32, 1 / 32, np.zeros(33))
    for _ in range(20):
        fld = step(fld, spec, 0.9 * fld.h**2 / 2)
    assert np.all(fld.values == 0.0)
    snaps = evolve(spec, GridField(32, 1 / 32, np.zeros(33)), 0.5)
    assert all(np.all(s.values == 0.0) for s in snaps)


def test_step_pins_boundary_and_rejects_large_dt():
    fld = perturbed_stationary(SPEC_E, 32, amplitude=0.1)
    dt = stable_dt(fld.values, fld.h, SPEC_E.nu)
    out = step(fld, SPEC_E, dt)
    assert out.values[0] == SPEC_E.A and out.values[-1] == SPEC_E.B
    assert out.time == dt
    with pytest.raises(ValueError):
        step(fld, SPEC_E, dt * 1.01)
    with pytest.raises(ValueError):
        step(fld, SPEC_E, 0.0)


def test_compiled_loop_matches_step_bitwise():
    fld = perturbed_stationary(SPEC_E, 40, amplitude=0.05)
    snaps = evolve(SPEC_E, fld, 0.01, sample_every=1)
    ref = fld
    for s in snaps[1:]:
        ref = step(ref, SPEC_E, stable_dt(ref.values, ref.h, SPEC_E.nu))
        assert np.array_equal(ref.values, s.values)
        assert ref.time == s.time


def test_evolve_rejects_bad_initial_data():
    n = 32
    constant = GridField(n, 1 / n, np.full(n + 1, SPEC_E.A))
    with pytest.raises(ValueError):
        evolve(SPEC_E, constant, 0.1)
    fld = perturbed_stationary(SPEC_E, n)
    with pytest.raises(ValueError):
        evolve(SPEC_E, fld, 0.0)
    with pytest.raises(ValueError):
        evolve(SPEC_E, fld, 0.1, sample_every=0)
    with pytest.raises(ValueError):
        evolve(SPEC_E, fld, 0.1, reference=np.zeros(n + 1))
    wrong_length = GridField(n, 0.5 / n, fld.values)
    with pytest.raises(ValueError):
        evolve(SPEC_E, wrong_length, 0.1)


def test_blow_up_detected(monkeypatch):
    import burgers_lyapunov.simulate as sim

    # a too-generous CFL factor lets the explicit scheme run away
    monkeypatch.setattr(sim, "CFL_SAFETY", 3.0)
    fld = perturbed_stationary(SPEC_E, 64, amplitude=0.1)
    with pytest.raises(SchemeError):
        sim.evolve(SPEC_E, fld, 1.0)


def test_distance_examples():
    fld, profile = stationary_field(SPEC_E, 64)
    # only the pinned end nodes differ, by roundoff
    assert distance_to_stationary(fld, profile, SPEC_E) < 1e-14
    shifted = fld.values.copy()
    shifted[1:-1] += 0.25
    assert distance_to_stationary(GridField(64, fld.h, shifted), profile, SPEC_E) == pytest.approx(0.25, rel=1e-12)


def test_distance_of_modal_samples_matches_curve():
    m = modal_solution(SPEC_E, 1, alpha=1e-2)
    profile = solve_stationary(SPEC_E)
    for t in (0.0, 0.05):
        d_grid = distance_to_stationary(modal_field(m, 1024, t), profile, SPEC_E)
        d_curve = modal_decay_curve(m, [t])[0][1]
        assert d_grid == pytest.approx(d_curve, rel=1e-5)


def test_fit_exact_exponential():
    t = np.linspace(0, 10, 200)
    fit = fit_decay_rate(list(zip(t, 3 * np.exp(-2 * t))))
    assert abs(fit.rate + 2) < 1e-12 and fit.reliable


def test_fit_two_exponentials_converges_as_window_moves_late():
    t = np.linspace(0, 12, 2000)
    samples = list(zip(t, np.exp(-2 * t) + np.exp(-10 * t)))
    errors = []
    for hi in (1.0, 1e-1, 1e-2, 1e-3):
        fit = fit_decay_rate(samples, window=(hi, hi * 1e-5))
        errors.append(abs(fit.rate + 2))
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 1e-6


def test_fit_floor_and_unreliable_flag():
    t = np.linspace(0, 40, 400)
    d = np.maximum(np.exp(-2 * t), 1e-16)
    fit = fit_decay_rate(list(zip(t, d)))
    assert fit.rate == pytest.approx(-2, rel=1e-9)
    short = fit_decay_rate([(0.0, 1.0), (1.0, 0.5), (2.0, 0.25)], window=(1.0, 0.1))
    assert not short.reliable and short.n_samples == 3
    with pytest.raises(ValueError):
        fit_decay_rate([])


def test_fit_of_closed_form_modal_curve():
    m = modal_solution(ProblemSpec(1, math.pi, 2, 2), 1)
    times = np.linspace(0, 10, 400)
    fit = fit_decay_rate(modal_decay_curve(m, times))
    assert fit.reliable and fit.rate == pytest.approx(-2.0, rel=5e-3)


def test_discrete_steady_state_is_second_order_close():
    gaps = []
    for n in (50, 100):
        _, profile = stationary_field(SPEC_E, n)
        x = np.linspace(0, 1, n + 1)
        exact = eval_stationary(profile, SPEC_E, x)
        gaps.append(np.max(np.abs(discrete_stationary(SPEC_E, n) - exact)))
    assert gaps[0] / gaps[1] == pytest.approx(4.0, rel=0.05)


def test_evolution_from_modal_data_tracks_analytic_curve():
    m = modal_solution(SPEC_E, 1, alpha=1e-3)
    n = 200
    fld = modal_field(m, n)
    ref = discrete_stationary(SPEC_E, n)
    snaps = evolve(SPEC_E, fld, 1.2, reference=ref)
    d0 = float(np.max(np.abs(snaps[0].deviation)))
    for s in snaps[:: max(1, len(snaps) // 40)]:
        numeric = float(np.max(np.abs(s.deviation)))
        analytic = modal_decay_curve(m, [s.time])[0][1]
        if numeric < 1e-6 * d0:
            break
        assert numeric == pytest.approx(analytic, rel=0.02)


def test_perturbed_run_decays_monotonically_after_transient():
    report = decay_experiment(SPEC_E, 100, t_end=2.0)
    t_transient = 5.0 / abs(report.predicted_mu)
    late = [d for t, d in report.samples if t > t_transient]
    assert len(late) > 10
    assert all(b < a for a, b in zip(late, late[1:]))
    assert report.max_principle_ok


def test_decay_experiment_validation():
    with pytest.raises(ValueError):
        decay_experiment(SPEC_E, 32, initial="mode:1")
    with pytest.raises(ValueError):
        decay_experiment(SPEC_E, 32, initial=0)


@settings(max_examples=15, deadline=None)
@given(
    A=st.floats(-2, 2),
    B=st.floats(-2, 2),
    amplitude=st.floats(-0.5, 0.5),
)
def test_discrete_maximum_principle(A, B, amplitude):
    spec = ProblemSpec(1.0, 1.0, A, B)
    fld = perturbed_stationary(spec, 40, amplitude=amplitude)
    bound = max(float(np.max(np.abs(fld.values))), abs(A), abs(B))
    snaps = evolve(spec, fld, 0.2)
    scale = max(bound, 1.0)
    assert snaps[-1].peak <= bound + 1e-8 * scale
    assert all(s.values[0] == A and s.values[-1] == B for s in snaps)
