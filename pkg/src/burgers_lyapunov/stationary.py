"""Closed-form stationary solutions.

Integrating ``u u_x = nu u_xx`` once gives ``2 nu u_x = u^2 + C0``; the
sign of ``C0`` selects the family:

    (a) C0 > 0   u = -2 nu k0 cot(k0 (x - x0))
    (b) C0 = 0   u = -2 nu / (x - x0)
    (c) C0 < 0   u = -2 nu k0 coth(k0 (x - x0))      (|u| > 2 nu k0)
    (d)          u = const = A
    (e) C0 < 0   u = -2 nu k0 tanh(k0 (x - x0))      (|u| < 2 nu k0)

with ``|C0| = (2 nu k0)^2``.  The wavenumber comes from the ground state of
the Robin eigenproblem, so ``C0 / (4 nu^2)`` is its eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import spectrum as _spectrum
from .exceptions import NumericalError
from .model import CaseLabel, ProblemSpec, classify

#: Below this value of ``k0 * |x - x0|`` case (a) uses its Laurent series.
LAURENT_THRESHOLD = 1e-4

_GROUND_SHAPE = {
    CaseLabel.TRIG_COT: "sin",
    CaseLabel.HYPER_COTH: "sinh",
    CaseLabel.HYPER_TANH: "cosh",
}


@dataclass(frozen=True)
class StationaryProfile:
    """Case label plus the constants of the closed-form profile.

    ``x0`` is ``None`` for the constant case (d), which has no phase.
    """

    label: CaseLabel
    k0: float
    x0: Optional[float]
    c0: float


@dataclass(frozen=True)
class StationaryResidual:
    first_integral: float
    ode: float


def _cot_phase(A: float, nu: float, k0: float) -> float:
    # arccot(A / (2 nu k0)) / k0, branch continuous with case (b) as k0 -> 0
    if A == 0.0:
        return math.pi / (2.0 * k0)
    return math.atan(2.0 * nu * k0 / A) / k0


def _hyperbolic_phase(spec: ProblemSpec, k0: float, coth: bool) -> float:
    """``x0`` from ``u(0) = A``, or from ``u(l) = B`` when that is better conditioned."""
    scale = 2.0 * spec.nu * k0
    left, right = spec.A / scale, spec.B / scale
    inverse = (lambda r: math.atanh(1.0 / r)) if coth else math.atanh
    if abs(abs(left) - 1.0) >= abs(abs(right) - 1.0):
        return inverse(left) / k0
    # u(l) = -2 nu k0 f(k0 (l - x0)) = B
    return spec.l + inverse(right) / k0


def solve_stationary(spec: ProblemSpec) -> StationaryProfile:
    """Build the stationary profile matching both boundary values."""
    label = classify(spec)
    nu = spec.nu
    if label is CaseLabel.CONSTANT:
        k0 = abs(spec.A) / (2.0 * nu)
        profile = StationaryProfile(label, k0, None, -(spec.A * spec.A) + 0.0)
    elif label is CaseLabel.RATIONAL:
        profile = StationaryProfile(label, 0.0, 2.0 * nu / spec.A, 0.0)
    else:
        ground = _spectrum.ground_state(spec)
        if ground.shape != _GROUND_SHAPE[label]:
            raise NumericalError(
                f"ground state has shape {ground.shape!r} but case ({label.value}) "
                f"needs {_GROUND_SHAPE[label]!r} for {spec}"
            )
        k0 = ground.k
        c0 = (2.0 * nu * k0) ** 2
        if label is CaseLabel.TRIG_COT:
            profile = StationaryProfile(label, k0, _cot_phase(spec.A, nu, k0), c0)
        else:
            x0 = _hyperbolic_phase(spec, k0, coth=label is CaseLabel.HYPER_COTH)
            profile = StationaryProfile(label, k0, x0, -c0)

    ends = eval_stationary(profile, spec, np.array([0.0, spec.l]))
    tol = 1e-10 * (1.0 + abs(spec.A) + abs(spec.B))
    if abs(ends[0] - spec.A) > tol or abs(ends[1] - spec.B) > tol:
        raise NumericalError(
            f"stationary profile misses the boundary data: u(0)={ends[0]!r} (A={spec.A!r}), "
            f"u(l)={ends[1]!r} (B={spec.B!r})"
        )
    return profile


def stationary_derivatives(
    profile: StationaryProfile, spec: ProblemSpec, x
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``u``, ``u'`` and ``u''`` from the analytic case formula."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > spec.l) or np.any(np.isnan(x)):
        raise ValueError(f"x must lie in [0, {spec.l!r}]")
    nu, k = spec.nu, profile.k0
    label = profile.label
    if label is CaseLabel.CONSTANT:
        return np.full_like(x, spec.A), np.zeros_like(x), np.zeros_like(x)
    s = x - profile.x0
    if label is CaseLabel.RATIONAL:
        return -2.0 * nu / s, 2.0 * nu / s**2, -4.0 * nu / s**3
    if label is CaseLabel.TRIG_COT:
        if k * np.max(np.abs(s)) < LAURENT_THRESHOLD:
            k2 = k * k
            kcot = 1.0 / s - k2 * s / 3.0 - k2 * k2 * s**3 / 45.0
            dkcot = -1.0 / s**2 - k2 / 3.0 - k2 * k2 * s**2 / 15.0
            d2kcot = 2.0 / s**3 - 2.0 * k2 * k2 * s / 15.0
            return -2.0 * nu * kcot, -2.0 * nu * dkcot, -2.0 * nu * d2kcot
        z = k * s
        cot = np.cos(z) / np.sin(z)
        csc2 = 1.0 / np.sin(z) ** 2
        return -2.0 * nu * k * cot, 2.0 * nu * k**2 * csc2, -4.0 * nu * k**3 * csc2 * cot
    z = k * s
    if label is CaseLabel.HYPER_COTH:
        coth = 1.0 / np.tanh(z)
        decay = np.exp(-2.0 * np.abs(z))
        csch2 = 4.0 * decay / np.expm1(-2.0 * np.abs(z)) ** 2
        return -2.0 * nu * k * coth, 2.0 * nu * k**2 * csch2, -4.0 * nu * k**3 * csch2 * coth
    tanh = np.tanh(z)
    decay = np.exp(-2.0 * np.abs(z))
    sech2 = 4.0 * decay / (1.0 + decay) ** 2
    return -2.0 * nu * k * tanh, -2.0 * nu * k**2 * sech2, 4.0 * nu * k**3 * sech2 * tanh


def eval_stationary(profile: StationaryProfile, spec: ProblemSpec, x) -> np.ndarray:
    """Stationary velocity at ``x`` (scalar or array) in ``[0, l]``."""
    return stationary_derivatives(profile, spec, x)[0]


def stationary_residual(profile: StationaryProfile, spec: ProblemSpec, grid) -> StationaryResidual:
    """Max residuals of ``2 nu u' = u^2 + C0`` and of ``u u' = nu u''`` on ``grid``."""
    u, du, d2u = stationary_derivatives(profile, spec, grid)
    first = np.max(np.abs(2.0 * spec.nu * du - u * u - profile.c0))
    ode = np.max(np.abs(u * du - spec.nu * d2u))
    return StationaryResidual(float(first), float(ode))
