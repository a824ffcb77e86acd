"""Problem definition and classification of the stationary solution.

A problem is the viscous Burgers equation ``u_t + u u_x = nu u_xx`` on
``[0, l]`` with constant Dirichlet data ``u(0) = A`` and ``u(l) = B``.
Which closed-form family the stationary profile belongs to is decided by
the sign of ``B - A`` and of ``H = 2 nu (B - A) - l A B``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

#: Relative tolerance used to decide ``H == 0``.
H_ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class ProblemSpec:
    """Viscosity, interval length and the two boundary values."""

    nu: float
    l: float
    A: float
    B: float

    def __post_init__(self) -> None:
        for name in ("nu", "l", "A", "B"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.nu <= 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if self.l <= 0:
            raise ValueError(f"l must be positive, got {self.l}")

    @property
    def robin_left(self) -> float:
        """Coefficient ``A / (2 nu)`` of the Robin condition at ``x = 0``."""
        return self.A / (2.0 * self.nu)

    @property
    def robin_right(self) -> float:
        """Coefficient ``B / (2 nu)`` of the Robin condition at ``x = l``."""
        return self.B / (2.0 * self.nu)


class CaseLabel(str, enum.Enum):
    """The five closed-form families of stationary profiles."""

    TRIG_COT = "a"
    RATIONAL = "b"
    HYPER_COTH = "c"
    CONSTANT = "d"
    HYPER_TANH = "e"


@dataclass(frozen=True)
class HQuantity:
    value: float
    tolerance: float

    @property
    def is_zero(self) -> bool:
        return abs(self.value) <= self.tolerance

    @property
    def sign(self) -> int:
        if self.is_zero:
            return 0
        return 1 if self.value > 0 else -1


def compute_h(spec: ProblemSpec) -> HQuantity:
    """Return ``H = 2 nu (B - A) - l A B`` with its zero tolerance."""
    drift = 2.0 * spec.nu * (spec.B - spec.A)
    product = spec.l * spec.A * spec.B
    return HQuantity(drift - product, H_ZERO_RTOL * (abs(drift) + abs(product)))


def classify(spec: ProblemSpec) -> CaseLabel:
    """Pick the stationary family from the signs of ``B - A`` and ``H``."""
    if spec.A > spec.B:
        return CaseLabel.HYPER_TANH
    if spec.A == spec.B:
        return CaseLabel.CONSTANT
    sign = compute_h(spec).sign
    if sign > 0:
        return CaseLabel.TRIG_COT
    if sign == 0:
        return CaseLabel.RATIONAL
    return CaseLabel.HYPER_COTH
