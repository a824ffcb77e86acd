"""Lyapunov exponents and explicit two-term solutions.

For a potential ``phi = C X_0 T_0 + alpha X_i T_i`` with
``T_j(t) = exp(-nu lambda_j t)``, the Cole-Hopf image

    u_i = -2 nu (C X_0' + alpha X_i' E) / (C X_0 + alpha X_i E),
    E = exp(-nu (lambda_i - lambda_0) t),

solves Burgers' equation with the original Dirichlet data and approaches
the stationary profile at the exact rate ``mu_i = -nu (lambda_i - lambda_0)``
in the max norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exceptions import SingularityError
from .model import ProblemSpec
from .spectrum import (
    SpectrumEntry,
    eval_eigenfunction,
    eval_eigenfunction_derivative,
    min_abs_on_interval,
    spectrum,
)

DECAY_GRID_POINTS = 1025
#: default ``alpha / C`` relative to ``min |X_0| / max |X_i|``
DEFAULT_AMPLITUDE = 1e-3


@dataclass(frozen=True)
class LyapunovSpectrum:
    mu: list[float]
    entries: list[SpectrumEntry]


def lyapunov_exponents(spec: ProblemSpec, count: int) -> LyapunovSpectrum:
    """``mu_i = -nu (lambda_i - lambda_0)`` for ``i = 1..count``."""
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    entries = spectrum(spec, count + 1)
    lam0 = entries[0].eigenvalue
    mu = [-spec.nu * (e.eigenvalue - lam0) for e in entries[1:]]
    return LyapunovSpectrum(mu=mu, entries=entries)


@dataclass(frozen=True)
class ModalSolution:
    """Ground term ``c_ground X_0`` plus one mode ``alpha X_i``.

    Construction enforces ``|alpha| < min|X_0| |c_ground| / max|X_i|``, which
    keeps the potential positive for every ``t >= 0``.
    """

    spec: ProblemSpec
    ground: SpectrumEntry
    mode: SpectrumEntry
    c_ground: float
    alpha: float

    def __post_init__(self) -> None:
        if self.ground.index != 0:
            raise ValueError("ground entry must have index 0")
        if self.mode.index < 1:
            raise ValueError("mode entry must have index >= 1")
        if self.c_ground == 0.0:
            raise ValueError("c_ground must be nonzero")
        # eigenfunctions are normalized to max |X| = 1
        limit = min_abs_on_interval(self.ground, self.spec) * abs(self.c_ground)
        if not abs(self.alpha) < limit:
            raise ValueError(
                f"|alpha|={abs(self.alpha)!r} must be below {limit!r} to keep the potential zero-free"
            )

    @property
    def mu(self) -> float:
        return -self.spec.nu * (self.mode.eigenvalue - self.ground.eigenvalue)


def modal_solution(
    spec: ProblemSpec,
    mode_index: int,
    alpha: Optional[float] = None,
    c_ground: float = 1.0,
) -> ModalSolution:
    """Two-term solution for mode ``mode_index``; ``alpha`` defaults to a small safe value."""
    if mode_index < 1:
        raise ValueError(f"mode_index must be at least 1, got {mode_index}")
    entries = spectrum(spec, mode_index + 1)
    ground, mode = entries[0], entries[mode_index]
    if alpha is None:
        alpha = DEFAULT_AMPLITUDE * min_abs_on_interval(ground, spec) * c_ground
    return ModalSolution(spec, ground, mode, c_ground, alpha)


def _terms(m: ModalSolution, x, t: float):
    x = np.asarray(x, dtype=float)
    if t < 0:
        raise ValueError("t must be nonnegative")
    decay = math.exp(m.mu * t)
    X0 = eval_eigenfunction(m.ground, m.spec, x)
    dX0 = eval_eigenfunction_derivative(m.ground, m.spec, x)
    Xi = eval_eigenfunction(m.mode, m.spec, x)
    dXi = eval_eigenfunction_derivative(m.mode, m.spec, x)
    return decay, X0, dX0, Xi, dXi


def eval_modal_solution(m: ModalSolution, x, t: float) -> np.ndarray:
    """``u_i(x, t)``: Cole-Hopf image of the two-term potential."""
    decay, X0, dX0, Xi, dXi = _terms(m, x, t)
    den = m.c_ground * X0 + m.alpha * decay * Xi
    scale = abs(m.c_ground) + abs(m.alpha)
    if np.any(np.abs(den) < 1e-14 * scale):
        raise SingularityError("potential vanishes: modal solution is singular")
    return -2.0 * m.spec.nu * (m.c_ground * dX0 + m.alpha * decay * dXi) / den


def modal_deviation(m: ModalSolution, x, t: float) -> np.ndarray:
    """``u_i - u^S`` written through the Wronskian, free of cancellation.

    ``u_i - u^S = -2 nu alpha E (X_i' X_0 - X_0' X_i) / (X_0 (C X_0 + alpha E X_i))``
    """
    decay, X0, dX0, Xi, dXi = _terms(m, x, t)
    den = X0 * (m.c_ground * X0 + m.alpha * decay * Xi)
    return -2.0 * m.spec.nu * m.alpha * decay * (dXi * X0 - dX0 * Xi) / den


def deviation_bound(m: ModalSolution, x, t: float, u_max: Optional[float] = None) -> np.ndarray:
    """Pointwise envelope ``U |phi~ / phi^S| + 2 nu |phi~_x / phi^S|``.

    ``U`` bounds ``|u|`` by the maximum principle; by default it is the max
    of ``|u_i(., 0)|`` on the decay grid.
    """
    decay, X0, _, Xi, dXi = _terms(m, x, t)
    if u_max is None:
        grid = np.linspace(0.0, m.spec.l, DECAY_GRID_POINTS)
        u_max = float(np.max(np.abs(eval_modal_solution(m, grid, 0.0))))
    ratio = m.alpha * decay / m.c_ground
    return u_max * np.abs(ratio * Xi / X0) + 2.0 * m.spec.nu * np.abs(ratio * dXi / X0)


def cole_hopf_numeric(phi, h: float, nu: float) -> np.ndarray:
    """``u = -2 nu d/dx ln|phi|`` from uniform samples.

    Central differences inside, second-order one-sided at both ends.
    """
    phi = np.asarray(phi, dtype=float)
    if h <= 0:
        raise ValueError("grid spacing h must be positive")
    if phi.size < 3:
        raise ValueError("need at least 3 samples")
    signs = np.sign(phi)
    if np.any(signs == 0) or np.any(signs != signs[0]):
        raise SingularityError("potential changes sign or vanishes: u would be discontinuous")
    return -2.0 * nu * np.gradient(np.log(np.abs(phi)), h, edge_order=2)


def modal_decay_curve(
    m: ModalSolution, times: Sequence[float], n_points: int = DECAY_GRID_POINTS
) -> list[tuple[float, float]]:
    """``(t, max_x |u_i(x, t) - u^S(x)|)`` on an ``n_points`` grid."""
    times = list(times)
    if any(t < 0 for t in times) or any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("times must be nonnegative and strictly increasing")
    grid = np.linspace(0.0, m.spec.l, n_points)
    return [(float(t), float(np.max(np.abs(modal_deviation(m, grid, t))))) for t in times]
