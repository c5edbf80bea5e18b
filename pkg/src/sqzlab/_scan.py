"""Deterministic 1-D maximization: coarse grid, then golden-section refine.

Shared by the sigma and coupler optimizers.  Deliberately not scipy's
minimize_scalar: we want a fixed seed grid, reproducible tie-breaking
(toward the smaller argument) and honest endpoint handling.
"""
from __future__ import annotations

import math
from typing import Callable

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def grid_then_refine(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n_grid: int = 200,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Maximize f on [lo, hi]; returns (x_opt, f(x_opt)).

    A uniform n_grid scan locates the best bracket, a golden-section search
    shrinks it below tol, and the endpoints compete as candidates so a
    monotone f reports the exact boundary.  Ties go to the smaller x.
    """
    if not (lo < hi):
        raise ValueError(f"empty scan range: [{lo}, {hi}]")
    if n_grid < 3:
        raise ValueError("n_grid must be at least 3")

    step = (hi - lo) / (n_grid - 1)
    xs = [lo + i * step for i in range(n_grid)]
    ys = [f(x) for x in xs]
    best = max(range(n_grid), key=lambda i: (ys[i], -i))  # first wins on ties

    a = xs[max(best - 1, 0)]
    b = xs[min(best + 1, n_grid - 1)]
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:  # keep the left interval on ties
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x_ref = 0.5 * (a + b)

    candidates = [(lo, ys[0]), (x_ref, f(x_ref)), (hi, ys[-1])]
    x_opt, y_opt = candidates[0]
    for x, y in candidates[1:]:
        if y > y_opt:
            x_opt, y_opt = x, y
    return x_opt, y_opt
