"""Independent reference computations used to freeze expected values.

Nothing here imports the package: plain bisection, brute-force sign-change
scans and textbook finite differences.
"""

import math


def bisection(f, lo, hi, tol=1e-14):
    flo = f(lo)
    assert flo * f(hi) < 0, "bracket must straddle a sign change"
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sign_changes(f, lo, hi, n):
    """Brackets of every sign change of ``f`` on an ``n``-interval uniform scan."""
    xs = [lo + (hi - lo) * j / n for j in range(n + 1)]
    vals = [f(x) for x in xs]
    return [(a, b) for a, b, fa, fb in zip(xs, xs[1:], vals, vals[1:]) if fa * fb < 0]


def robin_pq(nu, l, A, B):
    return l * A * B / (2 * nu * (B - A)), 2 * nu / (l * (B - A))


def g_trig(p, q):
    return lambda x: x * math.cos(x) - (p + q * x * x) * math.sin(x)


def h_hyp(p, q):
    return lambda x: x * math.cosh(x) - (p - q * x * x) * math.sinh(x)


def shooting_zero_count(lam, a, l, n=20000):
    """Interior zeros of the solution of -X'' = lam X with X(0)=1, X'(0)=-a.

    Integrated by classical RK4, independent of any closed form.
    """
    h = l / n
    y, v = 1.0, -a
    zeros = 0
    for _ in range(n):
        def rhs(yy, vv):
            return vv, -lam * yy

        k1 = rhs(y, v)
        k2 = rhs(y + 0.5 * h * k1[0], v + 0.5 * h * k1[1])
        k3 = rhs(y + 0.5 * h * k2[0], v + 0.5 * h * k2[1])
        k4 = rhs(y + h * k3[0], v + h * k3[1])
        y_new = y + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        v = v + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        if y_new * y < 0:
            zeros += 1
        y = y_new
    return zeros, y, v
