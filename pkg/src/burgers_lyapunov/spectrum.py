"""Robin eigenproblem behind the Cole-Hopf picture.

Under ``u = -2 nu (ln |phi|)_x`` the Dirichlet data become Robin conditions,
and separated solutions ``X(x) exp(-nu lambda t)`` reduce to

    -X'' = lambda X,   X'(0) + a X(0) = 0,   X'(l) + b X(l) = 0,

with ``a = A / (2 nu)`` and ``b = B / (2 nu)``.  Writing ``xi = k l`` the
eigenvalues come from two transcendental equations

    cot xi  = p / xi + q xi     (lambda = +k^2)
    coth xi = p / xi - q xi     (lambda = -k^2)

with ``p = l A B / (2 nu (B - A))`` and ``q = 2 nu / (l (B - A))``.  Both are
solved in the pole-free forms ``g(xi) = xi cos xi - (p + q xi^2) sin xi`` and
``h(xi) = xi cosh xi - (p - q xi^2) sinh xi``.  ``A == B`` is handled in
closed form, and the ``H == 0`` family gets the linear eigenfunction with
``lambda = 0``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ._roots import bisect, scan_roots
from .exceptions import CertificationError, RootBracketingError
from .model import ProblemSpec, compute_h

TRIG_SCAN_STEP = math.pi / 64
ROOT_RTOL = 1e-13
# Roots this close to xi = 0 are the lambda = 0 mode seen through roundoff.
ZERO_BRANCH_EXCLUSION = 1e-5


class Branch(str, enum.Enum):
    TRIG = "trig"
    HYPERBOLIC = "hyperbolic"
    ZERO = "zero"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class RobinCoefficients:
    p: float
    q: float


@dataclass(frozen=True)
class SpectrumEntry:
    """One eigenpair.

    ``shape`` names the spatial factor: ``sin`` for ``sin(k (x - phase))``,
    ``cosh``/``sinh`` for the hyperbolic forms, ``linear`` for
    ``x - phase`` and ``exp`` for ``exp(-a x)``.
    """

    index: int
    branch: Branch
    xi: float
    k: float
    eigenvalue: float
    phase: float
    shape: str
    zero_count: int = -1


def build_pq(spec: ProblemSpec) -> RobinCoefficients:
    if spec.A == spec.B:
        raise ValueError("p and q are undefined for A == B; use the closed-form spectrum")
    jump = spec.B - spec.A
    return RobinCoefficients(
        p=spec.l * spec.A * spec.B / (2.0 * spec.nu * jump),
        q=2.0 * spec.nu / (spec.l * jump),
    )


def trig_residual(pq: RobinCoefficients, xi: float) -> float:
    return xi * math.cos(xi) - (pq.p + pq.q * xi * xi) * math.sin(xi)


def hyperbolic_residual(pq: RobinCoefficients, xi: float) -> float:
    return xi * math.cosh(xi) - (pq.p - pq.q * xi * xi) * math.sinh(xi)


# The trig search uses g / xi: same positive roots, no spurious root at 0.


def _trig_scaled(p: float, q: float, xi: float) -> float:
    return math.cos(xi) - (p + q * xi * xi) * float(np.sinc(xi / math.pi))


def _trig_scaled_prime(p: float, q: float, xi: float) -> float:
    s, c = math.sin(xi), math.cos(xi)
    return -s - 2.0 * q * s - (p + q * xi * xi) * (xi * c - s) / (xi * xi)


def _scan_grid(upper: float, step: float) -> np.ndarray:
    n = max(int(math.ceil(upper / step)), 1)
    # g / xi is 1 - p at xi = 0, so the scan can start there and still see
    # roots far below the step; a zero at 0 itself is the lambda = 0 mode
    return step * np.arange(0, n + 1)


def trig_roots(pq: RobinCoefficients, count: int, step: float = TRIG_SCAN_STEP) -> list[float]:
    """The ``count`` smallest positive roots of ``cot xi = p/xi + q xi``."""
    if count < 1:
        raise ValueError("count must be at least 1")
    p, q = pq.p, pq.q
    upper = (count + 2) * math.pi
    for _ in range(8):
        roots = scan_roots(
            lambda x: _trig_scaled(p, q, x),
            _scan_grid(upper, step),
            df=lambda x: _trig_scaled_prime(p, q, x),
            rtol=ROOT_RTOL,
        )
        if len(roots) >= count:
            return roots[:count]
        upper *= 2.0
    raise RootBracketingError(
        f"found {len(roots)} of {count} trig roots scanning (0, {upper / 2:.6g}] "
        f"with step {step:.6g} (p={p!r}, q={q!r})"
    )


def _xi_coth(xi: float) -> float:
    if xi < 0.05:
        x2 = xi * xi
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0 + 2.0 * x2**3 / 945.0
    return xi / math.tanh(xi)


# Below this relative split of the two hyperbolic roots mu_1 would carry
# less than about six correct digits.
PAIR_SPLIT_RTOL = 1e-10


def _split_pair(alpha: float, beta: float) -> list[float]:
    """The hyperbolic roots when ``A > 0 > B``, each from its own equation.

    With ``alpha = l a`` and ``beta = -l b`` (both positive) the sinh mode
    solves ``atanh(xi/alpha) + atanh(xi/beta) = xi`` below ``min(alpha, beta)``
    and the cosh mode solves ``atanh(alpha/xi) + atanh(beta/xi) = xi`` above
    ``max(alpha, beta)``.  Both roots are simple, unlike the near-double
    root the combined equation has when the two are exponentially close.
    The sinh mode exists only when ``1/alpha + 1/beta < 1``, i.e. ``p > 1``.
    """
    lo, hi = min(alpha, beta), max(alpha, beta)

    def odd(x: float) -> float:
        if x >= lo:
            return math.inf
        if x == 0.0:
            return 1.0 / alpha + 1.0 / beta - 1.0
        return (math.atanh(x / alpha) + math.atanh(x / beta)) / x - 1.0

    def even(x: float) -> float:
        if x <= hi:
            return math.inf
        return math.atanh(alpha / x) + math.atanh(beta / x) - x

    ground = bisect(even, hi, 2.0 * hi + 2.0, rtol=0.0)
    if odd(0.0) >= 0.0:
        return [ground]
    excited = bisect(odd, 0.0, lo, rtol=0.0)
    if ground - excited <= PAIR_SPLIT_RTOL * ground:
        raise RootBracketingError(
            f"the two hyperbolic roots near xi = {ground:.17g} are split by only "
            f"{ground - excited:.3g}; the two lowest eigenvalues are exponentially "
            "close and their difference is not resolved in double precision"
        )
    return [excited, ground]


def hyperbolic_roots(pq: RobinCoefficients, ends: Optional[tuple[float, float]] = None) -> list[float]:
    """All positive roots of ``coth xi = p/xi - q xi`` (at most two).

    In the form ``F(xi) = xi coth xi + q xi^2 - p`` the roots are bracketed
    from the shape of ``F`` rather than by a scan: it increases for
    ``q > 0`` and rises then falls for ``q < 0``, using
    ``max(1, xi) <= xi coth xi < xi + 1``.  ``ends = (l a, l b)`` gives the
    Robin coefficients directly; otherwise they are recovered from ``p, q``.
    """
    p, q = pq.p, pq.q

    def F(xi: float) -> float:
        return _xi_coth(xi) + q * xi * xi - p

    f0 = 1.0 - p
    if q >= 0.0:
        if f0 >= 0.0:
            return []
        hi = min(p, math.sqrt(p / q)) if q > 0.0 else p
        return [bisect(F, 0.0, hi, rtol=0.0)]
    s = -q
    if p > 0.0:
        # q < 0 and p > 0 means A > 0 > B
        if ends is None:
            # l a and -l b are the roots of t^2 - t / |q| + p / |q|
            big = 0.5 * (1.0 / s + math.sqrt(max(1.0 / (s * s) - 4.0 * p / s, 0.0)))
            ends = (big, -(p / s) / big)
        return _split_pair(ends[0], -ends[1])
    hi = (1.0 + math.sqrt(1.0 + 4.0 * s * f0)) / (2.0 * s)
    for _ in range(64):
        if F(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise RootBracketingError(f"no upper bracket for the hyperbolic root (p={p!r}, q={q!r})")
    return [bisect(F, 0.0, hi, rtol=0.0)]


# -- eigenfunction construction ---------------------------------------------


def _trig_angle(a: float, k: float) -> float:
    """``k * phase`` for ``sin(k (x - phase))`` satisfying the left condition.

    This is arccot(a / k) taken in (-pi/2, pi/2], which keeps the phase
    finite (it tends to ``1 / a``) as ``k -> 0``.
    """
    if a == 0.0:
        return math.pi / 2
    return math.atan(k / a)


def _hyperbolic_form(spec: ProblemSpec, k: float) -> tuple[str, float]:
    """Shape (``cosh`` or ``sinh``) and phase of a hyperbolic eigenfunction.

    The phase is taken from whichever endpoint gives the better conditioned
    inverse function.
    """
    a, b = spec.robin_left, spec.robin_right
    r_left, r_right = a / k, -b / k
    far = max(abs(abs(r_left) - 1.0), abs(abs(r_right) - 1.0))
    if far == 0.0:
        raise ValueError(
            f"degenerate hyperbolic mode: |A| = |B| = 2 nu k (k={k!r}); sinh/cosh choice undefined"
        )
    use_left = abs(abs(r_left) - 1.0) >= abs(abs(r_right) - 1.0)
    r = r_left if use_left else r_right
    if abs(r) < 1.0:
        shape, offset = "cosh", math.atanh(r) / k
    else:
        shape, offset = "sinh", math.atanh(1.0 / r) / k
    phase = offset if use_left else spec.l - offset
    return shape, phase


def _make_entry(spec: ProblemSpec, index: int, branch: Branch, xi: float) -> SpectrumEntry:
    a = spec.robin_left
    k = xi / spec.l
    if branch is Branch.ZERO:
        return SpectrumEntry(index, branch, 0.0, 0.0, 0.0, 1.0 / a, "linear")
    if branch is Branch.CLOSED_FORM and index == 0:
        return SpectrumEntry(index, branch, xi, k, 0.0 - a * a, 0.0, "exp")
    if branch is Branch.HYPERBOLIC:
        shape, phase = _hyperbolic_form(spec, k)
        return SpectrumEntry(index, branch, xi, k, -(k * k), phase, shape)
    return SpectrumEntry(index, branch, xi, k, k * k, _trig_angle(a, k) / k, "sin")


def _closed_form(spec: ProblemSpec, count: int) -> list[SpectrumEntry]:
    a = spec.robin_left
    entries = [_make_entry(spec, 0, Branch.CLOSED_FORM, abs(a) * spec.l)]
    for i in range(1, count):
        entries.append(_make_entry(spec, i, Branch.CLOSED_FORM, math.pi * i))
    return entries


def _transcendental(spec: ProblemSpec, count: int, refine: int) -> list[SpectrumEntry]:
    pq = build_pq(spec)
    hyp = hyperbolic_roots(pq, ends=(spec.l * spec.robin_left, spec.l * spec.robin_right))
    trig = trig_roots(pq, count, step=TRIG_SCAN_STEP / 4**refine)
    candidates: list[tuple[float, Branch, float]] = []
    # lambda = 0 is an eigenvalue exactly when H = 0; for A > B it is excited
    if compute_h(spec).is_zero:
        candidates.append((0.0, Branch.ZERO, 0.0))
        hyp = [xi for xi in hyp if xi > ZERO_BRANCH_EXCLUSION]
        trig = [xi for xi in trig if xi > ZERO_BRANCH_EXCLUSION]
    l2 = spec.l * spec.l
    candidates += [(-(xi * xi) / l2, Branch.HYPERBOLIC, xi) for xi in hyp]
    candidates += [(xi * xi / l2, Branch.TRIG, xi) for xi in trig]
    candidates.sort(key=lambda c: c[0])
    return [_make_entry(spec, i, br, xi) for i, (_, br, xi) in enumerate(candidates[:count])]


@functools.lru_cache(maxsize=256)
def _certified_spectrum(spec: ProblemSpec, count: int) -> tuple[SpectrumEntry, ...]:
    if spec.A == spec.B:
        attempts = [_closed_form(spec, count)]
    else:
        attempts = (_transcendental(spec, count, refine) for refine in range(3))
    failure = ""
    for entries in attempts:
        certified = [replace(e, zero_count=count_interior_zeros(e, spec)) for e in entries]
        bad = [e for e in certified if e.zero_count != e.index]
        if len(certified) == count and not bad:
            return tuple(certified)
        failure = (
            f"got {len(certified)} of {count} eigenvalues; zero-count mismatches "
            f"(index, zeros): {[(e.index, e.zero_count) for e in bad]}"
        )
    raise CertificationError(f"spectrum of {spec} failed oscillation certification: {failure}")


def spectrum(spec: ProblemSpec, count: int) -> list[SpectrumEntry]:
    """The ``count`` lowest eigenpairs, each certified to have ``index`` interior zeros."""
    if count < 2:
        raise ValueError(f"count must be at least 2, got {count}")
    return list(_certified_spectrum(spec, count))


def ground_state(spec: ProblemSpec) -> SpectrumEntry:
    """The eigenpair with the least eigenvalue (no zeros on ``[0, l]``)."""
    return _certified_spectrum(spec, 2)[0]


# -- evaluation ---------------------------------------------------------------


def _check_domain(spec: ProblemSpec, x: np.ndarray) -> None:
    if np.any(x < 0.0) or np.any(x > spec.l) or np.any(np.isnan(x)):
        raise ValueError(f"x must lie in [0, {spec.l!r}]")


def _unnormalized(entry: SpectrumEntry, spec: ProblemSpec, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Value and derivative, scaled so the hyperbolic forms cannot overflow."""
    k, x0 = entry.k, entry.phase
    if entry.shape == "sin":
        z = k * x - k * x0
        return np.sin(z), k * np.cos(z)
    if entry.shape == "linear":
        return x - x0, np.ones_like(x)
    if entry.shape == "exp":
        a = spec.robin_left
        shift = max(0.0, -a * spec.l)
        v = np.exp(-a * x - shift)
        return v, -a * v
    z = k * (x - x0)
    shift = max(abs(k * x0), abs(k * (spec.l - x0)))
    grow, shrink = 0.5 * np.exp(z - shift), 0.5 * np.exp(-z - shift)
    cosh, sinh = grow + shrink, grow - shrink
    if entry.shape == "cosh":
        return cosh, k * sinh
    return sinh, k * cosh


def _shape_sign(entry: SpectrumEntry, x: np.ndarray) -> np.ndarray:
    """Exact sign of the unnormalized form; unlike its value it cannot underflow."""
    if entry.shape == "sin":
        return np.sign(np.sin(entry.k * x - entry.k * entry.phase))
    if entry.shape in ("sinh", "linear"):
        return np.sign(x - entry.phase)
    return np.ones_like(x)


def _normalization(entry: SpectrumEntry, spec: ProblemSpec) -> float:
    """Signed max-abs of the unnormalized form (sign taken from ``x = 0``)."""
    ends = np.array([0.0, spec.l])
    v, _ = _unnormalized(entry, spec, ends)
    peak = float(np.max(np.abs(v)))
    if entry.shape == "sin":
        # an interior crest of |sin| exists iff z passes pi/2 + m pi
        z0, z1 = -entry.k * entry.phase, entry.k * spec.l - entry.k * entry.phase
        if math.floor((z1 - math.pi / 2) / math.pi) >= math.ceil((z0 - math.pi / 2) / math.pi):
            peak = 1.0
    sign = _shape_sign(entry, ends)[0]
    if sign == 0.0:
        # X(0) = 0: orient by the slope instead
        _, d = _unnormalized(entry, spec, ends)
        sign = np.sign(d[0])
    return peak if sign > 0 else -peak


def eval_eigenfunction(entry: SpectrumEntry, spec: ProblemSpec, x) -> np.ndarray:
    """``X_i(x)`` normalized to max-abs 1 on ``[0, l]`` with ``X_i(0) > 0``."""
    x = np.asarray(x, dtype=float)
    _check_domain(spec, x)
    v, _ = _unnormalized(entry, spec, x)
    return v / _normalization(entry, spec)


def eval_eigenfunction_derivative(entry: SpectrumEntry, spec: ProblemSpec, x) -> np.ndarray:
    """Analytic ``X_i'(x)`` with the same normalization as :func:`eval_eigenfunction`."""
    x = np.asarray(x, dtype=float)
    _check_domain(spec, x)
    _, d = _unnormalized(entry, spec, x)
    return d / _normalization(entry, spec)


def min_abs_on_interval(entry: SpectrumEntry, spec: ProblemSpec) -> float:
    """``min |X|`` on ``[0, l]`` for a zero-free eigenfunction."""
    candidates = [0.0, spec.l, min(max(entry.phase, 0.0), spec.l)]
    return float(np.min(np.abs(eval_eigenfunction(entry, spec, np.array(candidates)))))


def interior_zeros(entry: SpectrumEntry, spec: ProblemSpec, scan_resolution: int = 64) -> list[float]:
    """Locations of the sign changes of ``X_i`` strictly inside ``(0, l)``."""
    if scan_resolution < 64:
        raise ValueError("scan_resolution must be at least 64 points per unit xi")
    n = int(math.ceil(scan_resolution * max(entry.xi, 1.0))) + 1
    x = np.linspace(0.0, spec.l, n)
    signs = _shape_sign(entry, x)
    for j in np.flatnonzero(signs[1:-1] == 0.0) + 1:
        if signs[j - 1] == signs[j + 1]:
            raise CertificationError(
                f"tangential zero of eigenfunction {entry.index} at x={x[j]!r}"
            )
    nonzero = np.flatnonzero(signs != 0.0)
    zeros: list[float] = []
    for lo, hi in zip(nonzero[:-1], nonzero[1:]):
        if signs[lo] == signs[hi]:
            continue
        if hi - lo == 2:
            zeros.append(float(x[lo + 1]))
            continue
        f = lambda s: float(_shape_sign(entry, np.array(s)))
        zeros.append(bisect(f, float(x[lo]), float(x[hi])))
    return zeros


def count_interior_zeros(entry: SpectrumEntry, spec: ProblemSpec, scan_resolution: int = 64) -> int:
    return len(interior_zeros(entry, spec, scan_resolution))
