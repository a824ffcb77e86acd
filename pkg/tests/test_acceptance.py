"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a one-line verdict; the lines are printed together at the
end of the pytest run under "acceptance criteria".
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from burgers_lyapunov import (
    CaseLabel,
    ProblemSpec,
    classify,
    decay_experiment,
    fit_decay_rate,
    ground_state,
    lyapunov_exponents,
    modal_decay_curve,
    modal_solution,
    spectrum,
)
from burgers_lyapunov.spectrum import eval_eigenfunction, eval_eigenfunction_derivative
from burgers_lyapunov.stationary import solve_stationary, stationary_derivatives
from conftest import ACCEPTANCE_LINES, CASE_SPECS

SIM_SPEC = ProblemSpec(1.0, 1.0, 1.0, -1.0)


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def sign_rule(nu, l, A, B):
    """Case from the sign rules, with H evaluated exactly in rationals."""
    H = 2 * nu * (B - A) - l * A * B
    if A > B:
        return CaseLabel.HYPER_TANH
    if A == B:
        return CaseLabel.CONSTANT
    return CaseLabel.TRIG_COT if H > 0 else CaseLabel.RATIONAL if H == 0 else CaseLabel.HYPER_COTH


def test_criterion_1_closed_form_spectrum():
    spec = ProblemSpec(1.0, math.pi, 2.0, 2.0)
    entries = spectrum(spec, 11)
    lam0_err = abs(entries[0].eigenvalue + 1.0)
    rel = max(abs(e.eigenvalue - n * n) / (n * n) for n, e in enumerate(entries[1:], start=1))
    mu1 = lyapunov_exponents(spec, 1).mu[0]
    ok = lam0_err < 1e-12 and rel < 1e-12 and abs(mu1 + 2.0) < 1e-12
    record(1, ok, f"lambda0 err {lam0_err:.2e}, max rel err lambda_1..10 {rel:.2e}, mu1 err {abs(mu1 + 2):.2e}")


def test_criterion_2_classification_table():
    # grid points are the decimals -3 + 0.3 k; H vanishes exactly at some of them
    values = [Fraction(-3) + Fraction(3, 10) * k for k in range(21)]
    failures = [
        (A, B)
        for A in values
        for B in values
        if classify(ProblemSpec(1.0, 1.0, float(A), float(B))) is not sign_rule(1, 1, A, B)
    ]
    record(2, not failures, f"441 grid points, {len(failures)} disagreements")


def test_criterion_3_stationarity_residuals():
    worst_first, worst_ode = 0.0, 0.0
    for spec in CASE_SPECS.values():
        prof = solve_stationary(spec)
        x = np.linspace(0, spec.l, 1001)
        u, du, d2u = stationary_derivatives(prof, spec, x)
        worst_first = max(worst_first, float(np.max(np.abs(2 * spec.nu * du - u * u - prof.c0))))
        worst_ode = max(worst_ode, float(np.max(np.abs(u * du - spec.nu * d2u))))
    ok = worst_first < 1e-9 and worst_ode < 1e-9
    record(3, ok, f"max first-integral residual {worst_first:.2e}, max ODE residual {worst_ode:.2e}")


def test_criterion_4_oscillation_certification():
    start = time.perf_counter()
    failures = []
    for label, spec in CASE_SPECS.items():
        for e in spectrum(spec, 11):
            if e.zero_count != e.index:
                failures.append((label.value, e.index, e.zero_count))
    elapsed = time.perf_counter() - start
    record(4, not failures and elapsed < 1.0, f"5 specs x 11 levels, {len(failures)} failures, {elapsed:.3f} s")


def test_criterion_5_route_consistency():
    worst = 0.0
    for spec in CASE_SPECS.values():
        delta = 1e-6 * spec.l
        x = np.linspace(delta, spec.l - delta, 2001)
        g = ground_state(spec)
        spectral = -2 * spec.nu * eval_eigenfunction_derivative(g, spec, x) / eval_eigenfunction(g, spec, x)
        formula = stationary_derivatives(solve_stationary(spec), spec, x)[0]
        worst = max(worst, float(np.max(np.abs(spectral - formula))))
    record(5, worst < 1e-8, f"max sup-norm gap over five cases {worst:.2e}")


def test_criterion_6_modal_decay_rates():
    start = time.perf_counter()
    worst = 0.0
    for spec in CASE_SPECS.values():
        for mode in (1, 2, 3):
            m = modal_solution(spec, mode)
            d0 = modal_decay_curve(m, [0.0])[0][1]
            times = np.linspace(0.0, math.log(d0 / 1e-9) / abs(m.mu), 300)
            fit = fit_decay_rate(modal_decay_curve(m, times))
            assert fit.reliable
            worst = max(worst, abs(fit.rate - m.mu) / abs(m.mu))
    elapsed = time.perf_counter() - start
    record(6, worst < 5e-3 and elapsed < 5.0, f"worst relative slope error {worst:.2e} (15 fits), {elapsed:.2f} s")


@pytest.fixture(scope="module")
def pde_runs():
    runs = {}
    for key, kwargs in {
        "default_400": dict(n_cells=400),
        "default_800": dict(n_cells=800),
        "mode2_800": dict(n_cells=800, initial=2),
    }.items():
        start = time.perf_counter()
        report = decay_experiment(SIM_SPEC, **kwargs)
        runs[key] = (report, time.perf_counter() - start)
    return runs


def test_criterion_7_pde_cross_validation(pde_runs):
    coarse, t400 = pde_runs["default_400"]
    fine, t800 = pde_runs["default_800"]
    err400 = coarse.fitted_rate - coarse.predicted_mu
    err800 = fine.fitted_rate - fine.predicted_mu
    ratio = err400 / err800
    ok = fine.reliable and fine.relative_error < 0.03 and 3.5 <= ratio <= 4.5 and t800 < 60
    record(
        7,
        ok,
        f"rate {fine.fitted_rate:.6f} vs mu1 {fine.predicted_mu:.6f} "
        f"(rel err {fine.relative_error:.2e}), Richardson ratio {ratio:.3f}, {t800:.1f} s at 800 cells",
    )


def test_criterion_8_mode_selection(pde_runs):
    report, elapsed = pde_runs["mode2_800"]
    mu = lyapunov_exponents(SIM_SPEC, 2).mu
    off_mu1 = abs(report.fitted_rate - mu[0]) / abs(mu[0])
    ok = report.reliable and report.relative_error < 0.03 and off_mu1 > 0.03 and elapsed < 60
    record(
        8,
        ok,
        f"rate {report.fitted_rate:.6f} vs mu2 {mu[1]:.6f} (rel err {report.relative_error:.2e}; "
        f"{off_mu1:.0%} away from mu1), {elapsed:.1f} s",
    )


def test_criterion_9_discrete_maximum_principle(pde_runs):
    excess = []
    for key, (report, _) in pde_runs.items():
        scale = max(report.max_principle_bound, 1.0)
        excess.append(report.peak_abs - report.max_principle_bound - 1e-8 * scale)
    ok = all(e <= 0 for e in excess)
    record(9, ok, f"{len(excess)} runs, worst peak - (bound + 1e-8 scale) = {max(excess):.2e}")
