"""Explicit finite-difference solver and empirical decay rates.

The scheme is forward Euler on the nodal grid ``x_j = j h``:

    u_j <- u_j - dt (f_{j+1} - f_{j-1}) / (2h) + dt nu (u_{j+1} - 2u_j + u_{j-1}) / h^2

with ``f = u^2 / 2`` and the end nodes pinned to ``A`` and ``B``.  It knows
nothing about Cole-Hopf or the eigenproblem, which makes its measured decay
rates an independent check of the predicted exponents.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numba
import numpy as np
from scipy.linalg import solve_banded

from .exceptions import NumericalError, SchemeError
from .lyapunov import ModalSolution, eval_modal_solution, lyapunov_exponents, modal_solution
from .model import ProblemSpec
from .spectrum import min_abs_on_interval
from .stationary import StationaryProfile, eval_stationary, solve_stationary

logger = logging.getLogger(__name__)

CFL_SAFETY = 0.9
MIN_CELLS = 16
BLOWUP_FACTOR = 10.0
DEFAULT_PERTURBATION = 1e-3
FIT_WINDOW = (1e-2, 1e-8)
FIT_FLOOR = 1e-12
MIN_FIT_SAMPLES = 10


@dataclass
class GridField:
    """Nodal velocities ``values[j] = u(j h)`` at ``time``.

    ``peak`` is the largest node ``|u|`` met since the run started.  Runs
    made against a reference state also carry ``deviation = values - reference``
    at full relative precision.
    """

    n_cells: int
    h: float
    values: np.ndarray
    time: float = 0.0
    peak: float = field(default=float("nan"))
    deviation: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.n_cells < MIN_CELLS:
            raise ValueError(f"n_cells must be at least {MIN_CELLS}, got {self.n_cells}")
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.n_cells + 1,):
            raise ValueError(f"expected {self.n_cells + 1} node values, got {self.values.shape}")
        if math.isnan(self.peak):
            self.peak = float(np.max(np.abs(self.values)))

    @property
    def x(self) -> np.ndarray:
        return self.h * np.arange(self.n_cells + 1)


def sample_field(spec: ProblemSpec, n_cells: int, func) -> GridField:
    """Grid field from ``func(x)`` with the end nodes set to the boundary data."""
    h = spec.l / n_cells
    x = h * np.arange(n_cells + 1)
    values = np.array(func(x), dtype=float)
    values[0], values[-1] = spec.A, spec.B
    return GridField(n_cells, h, values)


def default_perturbation(x: np.ndarray, l: float) -> np.ndarray:
    """Generic shape vanishing at both ends (excites odd and even modes)."""
    return np.sin(math.pi * x / l) + 0.5 * np.sin(2.0 * math.pi * x / l)


def perturbed_stationary(
    spec: ProblemSpec,
    n_cells: int,
    amplitude: float = DEFAULT_PERTURBATION,
    profile: Optional[StationaryProfile] = None,
) -> GridField:
    profile = profile or solve_stationary(spec)
    return sample_field(
        spec,
        n_cells,
        lambda x: eval_stationary(profile, spec, x) + amplitude * default_perturbation(x, spec.l),
    )


def modal_field(m: ModalSolution, n_cells: int, t: float = 0.0) -> GridField:
    """Samples of the two-term solution ``u_i(., t)``."""
    return sample_field(m.spec, n_cells, lambda x: eval_modal_solution(m, x, t))


def stable_dt(values: np.ndarray, h: float, nu: float) -> float:
    """Largest admitted step: ``0.9 min(h^2 / (2 nu), h / max|u|)``."""
    umax = float(np.max(np.abs(values)))
    return CFL_SAFETY * min(h * h / (2.0 * nu), h / (umax + 1e-300))


def step(fld: GridField, spec: ProblemSpec, dt: float) -> GridField:
    """One explicit step; rejects ``dt`` above :func:`stable_dt`."""
    h = fld.h
    if not 0.0 < dt <= stable_dt(fld.values, h, spec.nu):
        raise ValueError(f"dt={dt!r} violates the stability bound {stable_dt(fld.values, h, spec.nu)!r}")
    u = fld.values
    f = 0.5 * u * u
    new = np.empty_like(u)
    adv = (f[2:] - f[:-2]) / (2.0 * h)
    dif = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    new[1:-1] = u[1:-1] - dt * adv + (dt * spec.nu) * dif
    new[0], new[-1] = spec.A, spec.B
    peak = max(fld.peak, float(np.max(np.abs(new))))
    return GridField(fld.n_cells, h, new, fld.time + dt, peak)


@numba.njit(cache=True)
def _advance(u, nsteps, dt, h, nu, A, B, limit):
    # same arithmetic, in the same order, as step()
    n = u.shape[0]
    cur = u.copy()
    new = np.empty_like(cur)
    two_h = 2.0 * h
    h2 = h * h
    dtnu = dt * nu
    peak = 0.0
    for s in range(nsteps):
        for j in range(1, n - 1):
            adv = (0.5 * cur[j + 1] * cur[j + 1] - 0.5 * cur[j - 1] * cur[j - 1]) / two_h
            dif = (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]) / h2
            new[j] = cur[j] - dt * adv + dtnu * dif
        new[0] = A
        new[n - 1] = B
        cur, new = new, cur
        for j in range(n):
            a = abs(cur[j])
            if a > peak:
                peak = a
        if not peak <= limit:
            return cur, peak, s + 1
    return cur, peak, nsteps


@numba.njit(cache=True)
def _advance_deviation(w, ref, nsteps, dt, h, nu, limit):
    # step() rewritten for w = u - ref around a steady state ref; roundoff
    # then scales with |w| instead of |u|
    n = w.shape[0]
    cur = w.copy()
    new = np.zeros_like(cur)
    two_h = 2.0 * h
    h2 = h * h
    dtnu = dt * nu
    peak = 0.0
    for s in range(nsteps):
        for j in range(1, n - 1):
            flux_p = cur[j + 1] * (ref[j + 1] + 0.5 * cur[j + 1])
            flux_m = cur[j - 1] * (ref[j - 1] + 0.5 * cur[j - 1])
            adv = (flux_p - flux_m) / two_h
            dif = (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]) / h2
            new[j] = cur[j] - dt * adv + dtnu * dif
        cur, new = new, cur
        for j in range(n):
            a = abs(ref[j] + cur[j])
            if a > peak:
                peak = a
        if not peak <= limit:
            return cur, peak, s + 1
    return cur, peak, nsteps


def evolve(
    spec: ProblemSpec,
    initial: GridField,
    t_end: float,
    sample_every: Optional[int] = None,
    reference: Optional[np.ndarray] = None,
) -> list[GridField]:
    """March to ``t_end`` and return snapshots, the initial field first.

    ``dt`` is recomputed from the current ``max |u|`` before each batch of
    ``sample_every`` steps; by default about 1000 snapshots are kept.

    With ``reference`` (a steady state of the scheme, e.g. from
    :func:`discrete_stationary`) the same scheme is advanced for the
    deviation from it, so distances far below ``eps * max|u|`` stay accurate.
    """
    if abs(initial.values[0] - spec.A) > 0.0 or abs(initial.values[-1] - spec.B) > 0.0:
        raise ValueError("initial field must carry the boundary values A and B at its end nodes")
    if not t_end > initial.time:
        raise ValueError("t_end must exceed the initial time")
    h = initial.h
    if abs(h * initial.n_cells - spec.l) > 1e-12 * spec.l:
        raise ValueError("grid does not span [0, l]")
    bound = max(float(np.max(np.abs(initial.values))), abs(spec.A), abs(spec.B))
    limit = BLOWUP_FACTOR * max(bound, 1e-300)
    dt = stable_dt(initial.values, h, spec.nu)
    if sample_every is None:
        total = math.ceil((t_end - initial.time) / dt)
        sample_every = max(1, total // 1000)
    if sample_every < 1:
        raise ValueError("sample_every must be a positive step count")

    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        if reference.shape != initial.values.shape or reference[0] != spec.A or reference[-1] != spec.B:
            raise ValueError("reference must be a full nodal field carrying the boundary values")
        initial = replace(initial, deviation=initial.values - reference)

    snapshots = [initial]
    current = initial
    while current.time < t_end:
        dt = stable_dt(current.values, h, spec.nu)
        nsteps = min(sample_every, math.ceil((t_end - current.time) / dt))
        if reference is None:
            values, peak, done = _advance(
                current.values, nsteps, dt, h, spec.nu, spec.A, spec.B, limit
            )
            deviation = None
        else:
            deviation, peak, done = _advance_deviation(
                current.deviation, reference, nsteps, dt, h, spec.nu, limit
            )
            values = reference + deviation
        peak = max(peak, current.peak)
        if done < nsteps or not np.all(np.isfinite(values)):
            raise SchemeError(
                f"blow-up at t={current.time + done * dt:.6g}: max|u|={peak:.6g} exceeds {limit:.6g}"
            )
        current = GridField(initial.n_cells, h, values, current.time + nsteps * dt, peak, deviation)
        snapshots.append(current)
    return snapshots


def distance_to_stationary(fld: GridField, profile: StationaryProfile, spec: ProblemSpec) -> float:
    """Max over nodes of ``|u_j - u^S(x_j)|``."""
    return float(np.max(np.abs(fld.values - eval_stationary(profile, spec, fld.x))))


def _steady_residual(u: np.ndarray, h: float, nu: float) -> np.ndarray:
    return -(u[2:] ** 2 - u[:-2] ** 2) / (4.0 * h) + nu * (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)


def discrete_stationary(spec: ProblemSpec, n_cells: int, guess: Optional[np.ndarray] = None) -> np.ndarray:
    """Steady state of the discrete scheme, by Newton iteration from ``guess``.

    The scheme converges to this state rather than to the exact profile;
    the two differ by ``O(h^2)``.
    """
    h = spec.l / n_cells
    if guess is None:
        profile = solve_stationary(spec)
        guess = eval_stationary(profile, spec, h * np.arange(n_cells + 1))
    u = np.array(guess, dtype=float)
    u[0], u[-1] = spec.A, spec.B
    nu = spec.nu
    for _ in range(50):
        r = _steady_residual(u, h, nu)
        bands = np.zeros((3, n_cells - 1))
        bands[0, 1:] = -u[2:-1] / (2.0 * h) + nu / (h * h)  # d r_j / d u_{j+1}
        bands[1, :] = -2.0 * nu / (h * h)
        bands[2, :-1] = u[1:-2] / (2.0 * h) + nu / (h * h)  # d r_j / d u_{j-1}
        delta = solve_banded((1, 1), bands, -r)
        u[1:-1] += delta
        if np.max(np.abs(delta)) <= 1e-15 * (1.0 + np.max(np.abs(u))):
            return u
    raise NumericalError("Newton iteration for the discrete steady state did not converge")


@dataclass(frozen=True)
class RateFit:
    rate: float
    intercept: float
    n_samples: int
    window: tuple[float, float]
    reliable: bool


def fit_decay_rate(
    samples: Sequence[tuple[float, float]],
    window: tuple[float, float] = FIT_WINDOW,
    floor: float = FIT_FLOOR,
) -> RateFit:
    """Least-squares slope of ``ln D`` against ``t``.

    Only samples with ``window[1] * D0 <= D <= window[0] * D0`` enter the
    fit, ``D0`` being the first sample; fewer than ten such samples mark the
    result unreliable.
    """
    if not samples:
        raise ValueError("no samples to fit")
    t = np.array([s[0] for s in samples], dtype=float)
    d = np.array([s[1] for s in samples], dtype=float)
    scale = d[0]
    hi, lo = window[0] * scale, max(window[1], floor) * scale
    mask = (d <= hi) & (d >= lo) & (d > 0.0)
    n = int(np.count_nonzero(mask))
    if n < 2:
        return RateFit(float("nan"), float("nan"), n, (hi, lo), False)
    slope, intercept = np.polyfit(t[mask], np.log(d[mask]), 1)
    return RateFit(float(slope), float(intercept), n, (hi, lo), n >= MIN_FIT_SAMPLES)


@dataclass(frozen=True)
class DecayReport:
    """Outcome of one decay experiment.

    ``samples`` hold the distance to the scheme's own steady state, which is
    what decays exponentially; ``exact_samples`` hold the distance to the
    exact profile and level off at the ``O(h^2)`` gap ``stationary_gap``.
    """

    n_cells: int
    mode: int
    samples: list[tuple[float, float]]
    exact_samples: list[tuple[float, float]]
    fitted_rate: float
    predicted_mu: float
    relative_error: float
    fit_window: tuple[float, float]
    n_fit_samples: int
    reliable: bool
    stationary_gap: float
    peak_abs: float
    max_principle_bound: float

    @property
    def max_principle_ok(self) -> bool:
        return self.peak_abs <= self.max_principle_bound + 1e-8 * max(self.max_principle_bound, 1.0)


def decay_experiment(
    spec: ProblemSpec,
    n_cells: int,
    initial: Union[str, int] = "default",
    amplitude: Optional[float] = None,
    t_end: Optional[float] = None,
) -> DecayReport:
    """Run the scheme from a perturbed stationary state and fit its decay.

    ``initial="default"`` perturbs by ``amplitude`` times
    :func:`default_perturbation` and is compared with ``mu_1``; an integer
    ``n`` starts from the two-term solution built on mode ``n`` alone
    (``alpha / C = amplitude * min|X_0|``) and is compared with ``mu_n``.
    """
    profile = solve_stationary(spec)
    if initial == "default":
        mode = 1
        start = perturbed_stationary(
            spec, n_cells, DEFAULT_PERTURBATION if amplitude is None else amplitude, profile
        )
        predicted = lyapunov_exponents(spec, 1).mu[0]
    elif isinstance(initial, int) and not isinstance(initial, bool) and initial >= 1:
        mode = initial
        m = modal_solution(spec, mode)
        if amplitude is not None:
            m = replace(m, alpha=amplitude * min_abs_on_interval(m.ground, spec) * m.c_ground)
        start = modal_field(m, n_cells)
        predicted = m.mu
    else:
        raise ValueError(f"initial must be 'default' or a mode index >= 1, got {initial!r}")
    if t_end is None:
        t_end = 1.1 * math.log(1.0 / FIT_WINDOW[1]) / abs(predicted)

    x = start.x
    exact = eval_stationary(profile, spec, x)
    reference = discrete_stationary(spec, n_cells, exact)
    logger.info("evolving %s on %d cells to t=%.4g", spec, n_cells, t_end)
    snapshots = evolve(spec, start, t_end, reference=reference)
    samples = [(s.time, float(np.max(np.abs(s.deviation)))) for s in snapshots]
    exact_samples = [(s.time, float(np.max(np.abs(s.values - exact)))) for s in snapshots]
    fit = fit_decay_rate(samples)
    bound = max(float(np.max(np.abs(start.values))), abs(spec.A), abs(spec.B))
    return DecayReport(
        n_cells=n_cells,
        mode=mode,
        samples=samples,
        exact_samples=exact_samples,
        fitted_rate=fit.rate,
        predicted_mu=predicted,
        relative_error=abs(fit.rate - predicted) / abs(predicted),
        fit_window=fit.window,
        n_fit_samples=fit.n_samples,
        reliable=fit.reliable,
        stationary_gap=float(np.max(np.abs(reference - exact))),
        peak_abs=snapshots[-1].peak,
        max_principle_bound=bound,
    )
