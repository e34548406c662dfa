"""Adaptive Simpson quadrature used by the analytic cavity pipeline.

Kept dependency-free so the analytic route and the scipy-based test
oracles stay independent of each other.
"""

from __future__ import annotations

from typing import Callable


def _simpson(f, a, fa, b, fb, m, fm):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(f, a, fa, m, fm, lm, flm)
    right = _simpson(f, m, fm, b, fb, rm, frm)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1
    )


def adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = 40
) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Works for real- or complex-valued integrands.
    """
    if a == b:
        return 0.0 * f(a)
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(f, a, fa, b, fb, m, fm)
    return _adaptive(f, a, fa, b, fb, m, fm, whole, tol, max_depth)


def cumulative_adaptive_simpson(f, grid, tol):
    """Cumulative integral of ``f`` from grid[0] to each grid point.

    The tolerance is split evenly across subintervals so the endpoint
    value meets ``tol`` in absolute terms.
    """
    import numpy as np

    grid = np.asarray(grid, dtype=float)
    n = len(grid)
    out = np.zeros(n, dtype=complex)
    if n == 0:
        return out
    sub_tol = tol / max(n - 1, 1)
    acc = 0.0 + 0.0j
    for i in range(1, n):
        acc = acc + adaptive_simpson(f, grid[i - 1], grid[i], sub_tol)
        out[i] = acc
    if np.allclose(out.imag, 0.0):
        return out.real
    return out
