"""Deterministic scalar optimization helpers.

Golden-section search over a bracket, optionally preceded by a dense grid
scan to localize the best cell.  Evaluation order is fixed, so results are
reproducible bit for bit.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .core import DomainError

__all__ = ["golden_section_minimize", "grid_then_golden_minimize"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_minimize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Minimize a unimodal scalar function on [lo, hi].

    Returns (x, f(x)).  The bracket endpoints are also evaluated so a
    boundary minimum cannot be missed by the interior search.
    """
    if not lo <= hi:
        raise DomainError(f"invalid bracket [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    dist = b - a
    if dist <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + _INV_PHI_SQ * dist
    d = a + _INV_PHI * dist
    yc, yd = f(c), f(d)
    it = 0
    while dist > tol and it < max_iter:
        if yc < yd:
            b, d, yd = d, c, yc
            dist *= _INV_PHI
            c = a + _INV_PHI_SQ * dist
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            dist *= _INV_PHI
            d = a + _INV_PHI * dist
            yd = f(d)
        it += 1
    x_in = c if yc < yd else d
    y_in = min(yc, yd)
    best = min(((lo, f(lo)), (hi, f(hi)), (x_in, y_in)), key=lambda p: p[1])
    return best


def grid_then_golden_minimize(
    f: Callable[[float], float],
    grid: Sequence[float],
    *,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Scan a fixed grid, then refine around the best cell by golden section.

    The grid must be sorted increasing.  Returns (x, f(x)) over the union
    of grid points and the refined bracket.
    """
    pts = [float(x) for x in grid]
    if len(pts) < 2:
        raise DomainError("grid needs at least two points")
    vals = [f(x) for x in pts]
    i = min(range(len(pts)), key=lambda k: (vals[k], k))
    lo = pts[max(i - 1, 0)]
    hi = pts[min(i + 1, len(pts) - 1)]
    x, y = golden_section_minimize(f, lo, hi, tol=tol)
    if vals[i] <= y:
        return pts[i], vals[i]
    return x, y
