"""Per-layer constants of the subset-sum bound and their aggregation.

For exponent t with m = floor(t/2) layers, smoothness constant D, and a
weight schedule (p, q):

    c_j(t) = (t-2j-2+D^2)/(t-2j-1) * q(t-2j)
             * prod_{k<j} (t-2k)(t-2k-2+D^2) p(t-2k) / 2,

    c~_m(t) = prod_{j<m} (t-2j)(t-2j-2+D^2) p(t-2j) / 2.

Aggregating the layers with balancing parameters lambda_j > 0 gives the
two-term form C_A * A_n(t) + C_B * B_n^t with

    C_A = sum_{j<m} c_j (t-2j-2)/(t-2) / (lambda_j^{2j} j!),
    C_B = c~_m prod_{j=1..m} 1/(t/2 - m + j)
          + sum_{j<m} c_j (2j)/(t-2) lambda_j^{t-2j-2} / j!.

Each lambda_j trades the A-term against the B-term independently, so the
minimizing value has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import DomainError, ValidationError, half_layers, smoothness_value
from .schedules import PQSchedule, default_schedule, pq_eval

__all__ = [
    "MAX_T",
    "c_j",
    "c_tilde",
    "C_A",
    "C_B",
    "optimize_lambdas",
    "ConstantSet",
    "compute_constants",
]

# Guards iterated products and factorials against float overflow.
MAX_T = 60.0


def _check_t(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"exponent t must be finite and >= 0, got {t}")
    if t > MAX_T:
        raise DomainError(f"exponent t={t} exceeds the supported maximum {MAX_T}")
    return t


def c_j(t: float, D, schedule: PQSchedule | None, j: int) -> float:
    """The j-th layer constant c_j(t), for 0 <= j <= m-1."""
    t = _check_t(t)
    D = smoothness_value(D)
    schedule = schedule or default_schedule()
    m = half_layers(t)
    if int(j) != j or not 0 <= j <= m - 1:
        raise DomainError(f"layer index j must lie in 0..{m - 1}, got {j}")
    _, q = pq_eval(schedule, t - 2.0 * j)
    value = (t - 2 * j - 2 + D * D) / (t - 2 * j - 1) * q
    for k in range(int(j)):
        p, _ = pq_eval(schedule, t - 2.0 * k)
        value *= (t - 2 * k) * (t - 2 * k - 2 + D * D) * p / 2.0
    return value


def c_tilde(t: float, D, schedule: PQSchedule | None = None) -> float:
    """The top-layer constant c~_m(t); 1 when m = 0."""
    t = _check_t(t)
    D = smoothness_value(D)
    schedule = schedule or default_schedule()
    value = 1.0
    for j in range(half_layers(t)):
        p, _ = pq_eval(schedule, t - 2.0 * j)
        value *= (t - 2 * j) * (t - 2 * j - 2 + D * D) * p / 2.0
    return value


def _check_lambdas(lambdas: Sequence[float], m: int) -> list[float]:
    lam = [float(x) for x in lambdas]
    if len(lam) != m:
        raise ValidationError(f"need {m} balancing parameters, got {len(lam)}")
    if any(not math.isfinite(x) or x <= 0.0 for x in lam):
        raise ValidationError("balancing parameters must be finite and > 0")
    return lam


def C_A(t: float, D, schedule: PQSchedule | None, lambdas: Sequence[float]) -> float:
    """Coefficient of A_n(t) in the aggregated bound (t > 2)."""
    t = _check_t(t)
    if t <= 2.0:
        raise DomainError(f"the aggregated constants need t > 2, got t={t}")
    m = half_layers(t)
    lam = _check_lambdas(lambdas, m)
    total = 0.0
    for j in range(m):
        total += (
            c_j(t, D, schedule, j)
            * (t - 2 * j - 2)
            / (t - 2)
            / (lam[j] ** (2 * j) * math.factorial(j))
        )
    return total


def C_B(t: float, D, schedule: PQSchedule | None, lambdas: Sequence[float]) -> float:
    """Coefficient of B_n^t in the aggregated bound (t > 2)."""
    t = _check_t(t)
    if t <= 2.0:
        raise DomainError(f"the aggregated constants need t > 2, got t={t}")
    m = half_layers(t)
    lam = _check_lambdas(lambdas, m)
    lead = c_tilde(t, D, schedule)
    for j in range(1, m + 1):
        lead /= t / 2.0 - m + j
    total = lead
    for j in range(m):
        total += (
            c_j(t, D, schedule, j)
            * (2 * j)
            / (t - 2)
            * lam[j] ** (t - 2 * j - 2)
            / math.factorial(j)
        )
    return total


def optimize_lambdas(
    t: float, D, schedule: PQSchedule | None, A_t: float, B: float
) -> tuple[float, ...]:
    """Per-layer balancing parameters minimizing C_A * A_t + C_B * B^t.

    Layer j contributes u_j lambda^{-2j} + v_j lambda^{t-2j-2} to the
    objective with u_j = c_j (t-2j-2)/(t-2) A_t / j! and
    v_j = c_j (2j)/(t-2) B^t / j!, so the unique stationary point is

        lambda_j = (2j u_j / ((t-2j-2) v_j))^(1/(t-2)).

    Degenerate layers (j = 0, vanishing exponent t-2j-2, or a vanishing
    coefficient) default to lambda_j = 1.
    """
    t = _check_t(t)
    if t <= 2.0:
        raise DomainError(f"balancing applies for t > 2, got t={t}")
    if A_t < 0.0 or B < 0.0:
        raise ValidationError("moment totals must be >= 0")
    m = half_layers(t)
    schedule = schedule or default_schedule()
    out = []
    for j in range(m):
        expo = t - 2 * j - 2
        if j == 0 or expo == 0.0:
            out.append(1.0)
            continue
        cj = c_j(t, D, schedule, j)
        u = cj * expo / (t - 2) * A_t / math.factorial(j)
        v = cj * (2 * j) / (t - 2) * B**t / math.factorial(j)
        if u == 0.0 or v == 0.0:
            out.append(1.0)
        else:
            out.append((2 * j * u / (expo * v)) ** (1.0 / (t - 2)))
    return tuple(out)


@dataclass(frozen=True)
class ConstantSet:
    """All constants of the bounds at one (t, D, schedule, lambdas) tuple."""

    t: float
    D: float
    c: tuple[float, ...]
    c_tilde: float
    C_A: float
    C_B: float
    lambdas: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "D": self.D,
            "c": list(self.c),
            "c_tilde": self.c_tilde,
            "C_A": self.C_A,
            "C_B": self.C_B,
            "lambdas": list(self.lambdas),
        }


def compute_constants(
    t: float,
    D,
    schedule: PQSchedule | None = None,
    lambdas: Sequence[float] | None = None,
) -> ConstantSet:
    """Evaluate every constant at once (t > 2); lambdas default to ones."""
    t = _check_t(t)
    if t <= 2.0:
        raise DomainError(f"the aggregated constants need t > 2, got t={t}")
    D = smoothness_value(D)
    schedule = schedule or default_schedule()
    m = half_layers(t)
    lam = tuple(_check_lambdas(lambdas, m)) if lambdas is not None else (1.0,) * m
    return ConstantSet(
        t=t,
        D=D,
        c=tuple(c_j(t, D, schedule, j) for j in range(m)),
        c_tilde=c_tilde(t, D, schedule),
        C_A=C_A(t, D, schedule, lam),
        C_B=C_B(t, D, schedule, lam),
        lambdas=lam,
    )
