"""Grouped sums over fixed-size index subsets, keyed by subset minimum.

The layered bound needs, for each cardinality j, the sum over all j-element
subsets J of {1..n} of ``g(min J - 1) * prod_{i in J} w_i`` (with the empty
subset contributing ``g(n)``).  Grouping subsets by their smallest element k
reduces this to

    sum_{k=1..n} g(k-1) * w_k * e_{j-1}(w_{k+1}, ..., w_n),

where e_r is the elementary symmetric polynomial of the suffix, so a single
O(n * j) table of suffix polynomials evaluates every cardinality.  A direct
enumeration oracle is provided for testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import DomainError, ValidationError

__all__ = [
    "MinGroupedSumSpec",
    "elementary_symmetric_suffix",
    "min_grouped_sum",
    "brute_force_min_grouped_sum",
]

_BRUTE_FORCE_MAX_N = 20


@dataclass(frozen=True)
class MinGroupedSumSpec:
    """Inputs of a min-grouped subset sum.

    ``weights`` are the n per-index factors (squared envelope entries in
    the bounds), ``prefix_values`` the n+1 values g(0..n) attached to the
    position just before the subset minimum, and ``j`` the cardinality.
    """

    weights: tuple[float, ...]
    prefix_values: tuple[float, ...]
    j: int

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        g = np.asarray(self.prefix_values, dtype=float)
        if w.ndim != 1 or g.ndim != 1 or g.shape[0] != w.shape[0] + 1:
            raise ValidationError(
                "need n weights and n+1 prefix values, got "
                f"{w.shape[0]} and {g.shape[0]}"
            )
        if w.size and (not np.all(np.isfinite(w)) or np.any(w < 0)):
            raise ValidationError("weights must be finite and >= 0")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise ValidationError("prefix values must be finite and >= 0")
        if int(self.j) != self.j or self.j < 0:
            raise ValidationError(f"cardinality j must be an integer >= 0, got {self.j}")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "prefix_values", tuple(float(x) for x in g))
        object.__setattr__(self, "j", int(self.j))

    @property
    def n(self) -> int:
        return len(self.weights)


def elementary_symmetric_suffix(weights: Sequence[float], order: int) -> np.ndarray:
    """Table of elementary symmetric polynomials of weight suffixes.

    Returns an array T of shape (n+1, order+1) with ``T[k, r]`` equal to
    e_r(weights[k:]) for 0-based suffix starts k = 0..n; row n is the
    empty suffix.  e_0 = 1 by the empty-product convention, and
    e_r(w_k..) = e_r(w_{k+1}..) + w_k * e_{r-1}(w_{k+1}..).
    """
    if int(order) != order or order < 0:
        raise ValidationError(f"order must be an integer >= 0, got {order}")
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    table = np.zeros((n + 1, int(order) + 1))
    table[:, 0] = 1.0
    if order >= 1:
        for k in range(n - 1, -1, -1):
            table[k, 1:] = table[k + 1, 1:] + w[k] * table[k + 1, :-1]
    return table


def _kahan_sum(terms) -> float:
    # Compensated accumulation in a fixed order keeps results
    # bit-reproducible across runs.
    total = 0.0
    carry = 0.0
    for x in terms:
        y = x - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total


def min_grouped_sum(spec: MinGroupedSumSpec, *, esp_table: np.ndarray | None = None) -> float:
    """Sum of ``g(min J - 1) * prod_{i in J} w_i`` over all j-subsets J.

    The empty subset (j = 0) contributes ``g(n)``; j > n yields 0.  An
    ``esp_table`` from :func:`elementary_symmetric_suffix` of order at
    least j - 1 may be supplied to share work across cardinalities.
    """
    n, j = spec.n, spec.j
    g = spec.prefix_values
    if j > n:
        return 0.0
    if j == 0:
        return g[n]
    w = spec.weights
    if esp_table is None:
        esp_table = elementary_symmetric_suffix(w, j - 1)
    elif esp_table.shape[0] != n + 1 or esp_table.shape[1] < j:
        raise ValidationError("esp_table does not match the spec")
    return _kahan_sum(
        g[k] * w[k] * esp_table[k + 1, j - 1] for k in range(n)
    )


def brute_force_min_grouped_sum(spec: MinGroupedSumSpec) -> float:
    """Enumeration oracle for :func:`min_grouped_sum` (n <= 20)."""
    n, j = spec.n, spec.j
    if n > _BRUTE_FORCE_MAX_N:
        raise DomainError(
            f"refusing to enumerate subsets for n={n} > {_BRUTE_FORCE_MAX_N}"
        )
    if j > n:
        return 0.0
    if j == 0:
        return spec.prefix_values[n]
    w = spec.weights
    g = spec.prefix_values
    total = 0.0
    for subset in combinations(range(1, n + 1), j):
        prod = 1.0
        for i in subset:
            prod *= w[i - 1]
        total += g[min(subset) - 1] * prod
    return total
