"""Self-contained numerics: principal-branch Lambert W and a 1-D maximizer.

Both routines are deliberately dependency-free.  lambert_w0 solves w*e^w = x
by Halley iteration and certifies its own result through the residual
|w*e^w - x|, so the implementation carries a built-in correctness oracle.
"""

from __future__ import annotations

import math
from typing import Callable

from .errors import ConvergenceError, DomainError

_INV_E = math.exp(-1.0)
# Slack for callers that land on the branch point -1/e up to roundoff.
_BRANCH_SLACK = 1e-15
_MAX_ITER = 50
_RESIDUAL_TOL = 1e-12

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_PRESCAN_POINTS = 64


def lambert_w0(x: float) -> float:
    """Principal branch W0 of the Lambert W function.

    Returns w >= -1 with w*e^w = x for x >= -1/e.  Arguments within 1e-15
    below -1/e are clamped onto the branch point; anything lower raises
    DomainError.  The result satisfies |w*e^w - x| <= 1e-12 * max(1, |x|),
    enforced after iteration; a violation raises ConvergenceError and would
    indicate an implementation bug rather than a data problem.
    """
    x = float(x)
    if math.isnan(x) or x < -_INV_E - _BRANCH_SLACK:
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x < -_INV_E:
        x = -_INV_E
    if x == 0.0:
        return 0.0

    # Branch-aware starting point: log-based for the growing side, series
    # near zero, square-root expansion near the branch point where the
    # derivative blows up.
    if x > 0.0:
        w = math.log1p(x)
    elif x > -0.2:
        w = x * (1.0 - x)
    else:
        w = -1.0 + math.sqrt(max(0.0, 2.0 * (1.0 + math.e * x)))

    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            # Exactly at the branch point; the residual check below decides.
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        step = f / denom
        w -= step
        if abs(step) <= 4e-16 * (1.0 + abs(w)):
            break

    if abs(w * math.exp(w) - x) > _RESIDUAL_TOL * max(1.0, abs(x)):
        raise ConvergenceError(f"lambert_w0 residual contract violated at x={x!r}")
    return w


def maximize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-8,
) -> tuple[float, float]:
    """Maximize f on [lo, hi]; returns (argmax, max value).

    A 64-point pre-scan locates the best grid cell, then golden-section
    search refines inside it until the bracket is narrower than
    tol * (hi - lo).  For unimodal f the result is within that width of the
    true maximizer; for general f it is the best point found, which is never
    worse than the pre-scan grid optimum.
    """
    if not lo < hi:
        raise DomainError(f"maximize_scalar requires lo < hi, got [{lo!r}, {hi!r}]")

    span = hi - lo
    step = span / (_PRESCAN_POINTS - 1)
    xs = [lo + i * step for i in range(_PRESCAN_POINTS - 1)] + [hi]
    vals = [f(x) for x in xs]
    best = max(range(_PRESCAN_POINTS), key=vals.__getitem__)

    a = xs[best - 1] if best > 0 else lo
    b = xs[best + 1] if best < _PRESCAN_POINTS - 1 else hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * span:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)

    x_star = 0.5 * (a + b)
    candidates = [(f(x_star), x_star), (fc, c), (fd, d), (vals[best], xs[best])]
    fx, x = max(candidates)
    return x, fx
