"""Scalar root bracketing: grid scan, bisection, safeguarded Newton polish."""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

Func = Callable[[float], float]


def bisect(f: Func, lo: float, hi: float, rtol: float = 1e-13, max_iter: int = 300) -> float:
    """Shrink a sign-change bracket ``[lo, hi]`` until it is ``rtol``-narrow."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or hi - lo <= rtol * max(abs(lo), abs(hi)):
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def newton_polish(
    f: Func, df: Func, x: float, lo: float, hi: float, steps: int = 3
) -> float:
    """A few Newton steps, each kept only if it stays in the bracket and helps."""
    fx = f(x)
    for _ in range(steps):
        if fx == 0.0:
            break
        slope = df(x)
        if slope == 0.0 or not np.isfinite(slope):
            break
        candidate = x - fx / slope
        if not lo <= candidate <= hi:
            break
        fc = f(candidate)
        if abs(fc) >= abs(fx):
            break
        x, fx = candidate, fc
    return x


def scan_roots(
    f: Func,
    grid: np.ndarray,
    df: Optional[Func] = None,
    rtol: float = 1e-13,
) -> list[float]:
    """Every root of ``f`` signalled by a sign change between grid nodes."""
    values = np.array([f(float(x)) for x in grid])
    roots: list[float] = []
    for j in range(len(grid) - 1):
        a, b = float(grid[j]), float(grid[j + 1])
        fa, fb = values[j], values[j + 1]
        if fa == 0.0:
            if j > 0:
                roots.append(a)
            continue
        if fb == 0.0 or np.sign(fa) == np.sign(fb):
            continue
        root = bisect(f, a, b, rtol=rtol)
        if df is not None:
            root = newton_polish(f, df, root, a, b)
        roots.append(root)
    return roots
