"""Upper bounds on E||S_n||^t for martingales with increment moment profile
(a_i(s)) and conditional-variance envelope (b_i) in a (2, D)-smooth space.

``theorem_bound`` evaluates the layered subset-sum inequality, the
strongest form.  ``corollary_bound`` evaluates its two-term aggregation
C_A * A_n(t) + C_B * B_n^t, with optional closed-form optimization of the
balancing parameters.  Closed forms specialize the aggregation on (2, 4],
and ``pin94_bound`` evaluates a classical comparison bound that carries an
unspecified absolute constant K.  ``best_bound`` scans every applicable
candidate and returns the smallest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import C_A, C_B, c_j, c_tilde, optimize_lambdas
from .core import (
    BoundReport,
    DomainError,
    MomentProfile,
    ValidationError,
    VarianceEnvelope,
    half_layers,
    moment_ratio,
    pow00,
    smoothness_value,
)
from .optimize import golden_section_minimize, grid_then_golden_minimize
from .schedules import PQSchedule, default_schedule
from .subset_sums import MinGroupedSumSpec, elementary_symmetric_suffix, min_grouped_sum

__all__ = [
    "Pin94Config",
    "theorem_bound",
    "corollary_bound",
    "closed_form_2_3",
    "closed_form_3_4",
    "closed_form_min",
    "hilbert_2_4",
    "t3_bound",
    "pin94_bound",
    "best_bound",
    "BETA_GRID",
]

# Fixed scan grid for the schedule parameter: 33 log-spaced points.
BETA_GRID: tuple[float, ...] = tuple(np.geomspace(0.02, 0.98, 33))

# Tie-break preference when candidate bounds coincide exactly.
_METHOD_PRIORITY = {
    "theorem": 0,
    "t3": 1,
    "closed_2_3": 2,
    "closed_3_4": 3,
    "closed_min": 4,
    "hilbert_2_4": 5,
    "corollary": 6,
    "pin94": 7,
}


def _check_pair(profile: MomentProfile, envelope: VarianceEnvelope) -> None:
    if profile.n != envelope.n:
        raise ValidationError(
            f"profile has n={profile.n} increments but envelope has {envelope.n}"
        )


def _check_nonneg(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise ValidationError(f"{name} must be finite and >= 0, got {x}")
    return x


def theorem_bound(
    profile: MomentProfile,
    envelope: VarianceEnvelope,
    D,
    schedule: PQSchedule | None = None,
    *,
    allow_small_t: bool = False,
) -> BoundReport:
    """The layered subset-sum bound on E||S_n||^t.

    Evaluates  sum_{j<m} c_j(t) T_j + c~_m(t) T~_m  where T_j groups the
    j-subsets of steps by their first element with prefix values
    A_{k}(t-2j), and the top layer uses (A_k(2))^(t/2-m) with 0^0 := 1.

    Exponents t < 2 degenerate (m = 0 leaves only (A_n(2))^(t/2) with no
    dependence on D) and are rejected unless ``allow_small_t`` is set.
    """
    _check_pair(profile, envelope)
    t = profile.t
    if t < 2.0 and not allow_small_t:
        raise DomainError(
            f"t={t} is below 2; pass allow_small_t=True to evaluate the "
            "degenerate m=0 form anyway"
        )
    D = smoothness_value(D)
    schedule = schedule or default_schedule()
    m = half_layers(t)
    w = tuple(float(x * x) for x in envelope.b)
    table = elementary_symmetric_suffix(w, max(m - 1, 0))

    layer_constants = [c_j(t, D, schedule, j) for j in range(m)]
    top_constant = c_tilde(t, D, schedule)

    value = 0.0
    for j in range(m):
        g = profile.prefix_sums(t - 2.0 * j)
        spec = MinGroupedSumSpec(w, tuple(g), j)
        value += layer_constants[j] * min_grouped_sum(spec, esp_table=table)
    g_top = pow00(profile.prefix_sums(2.0), t / 2.0 - m)
    spec = MinGroupedSumSpec(w, tuple(g_top), m)
    value += top_constant * min_grouped_sum(spec, esp_table=table)

    return BoundReport(
        value=value,
        method="theorem",
        constants={"c": layer_constants, "c_tilde": top_constant},
        parameters={"schedule": schedule.to_dict()},
        ratio_r=moment_ratio(profile, envelope),
    )


def corollary_bound(
    profile: MomentProfile,
    envelope: VarianceEnvelope,
    D,
    schedule: PQSchedule | None = None,
    lambdas: Sequence[float] | str | None = "optimize",
) -> BoundReport:
    """The aggregated bound C_A * A_n(t) + C_B * B_n^t (t > 2).

    ``lambdas`` may be an explicit sequence, ``None`` for all ones, or
    ``"optimize"`` (default) for the closed-form minimizers.
    """
    _check_pair(profile, envelope)
    t = profile.t
    if t <= 2.0:
        raise DomainError(f"the aggregated bound needs t > 2, got t={t}")
    D = smoothness_value(D)
    schedule = schedule or default_schedule()
    A_t = profile.total(t)
    B = envelope.total()
    m = half_layers(t)
    if isinstance(lambdas, str):
        if lambdas != "optimize":
            raise ValidationError(f"unknown lambdas mode {lambdas!r}")
        lam = optimize_lambdas(t, D, schedule, A_t, B)
    elif lambdas is None:
        lam = (1.0,) * m
    else:
        lam = tuple(float(x) for x in lambdas)
    ca = C_A(t, D, schedule, lam)
    cb = C_B(t, D, schedule, lam)
    return BoundReport(
        value=ca * A_t + cb * B**t,
        method="corollary",
        constants={
            "C_A": ca,
            "C_B": cb,
            "c": [c_j(t, D, schedule, j) for j in range(m)],
            "c_tilde": c_tilde(t, D, schedule),
        },
        parameters={"lambdas": list(lam), "schedule": schedule.to_dict()},
        ratio_r=moment_ratio(profile, envelope),
    )


def _ratio_scalar(t: float, A_t: float, B: float) -> float | None:
    if B <= 0.0:
        return None
    r = A_t / B**t
    return float(r) if math.isfinite(r) else None


def closed_form_2_3(t: float, D, A_t: float, B: float) -> BoundReport:
    """((t-2+D^2)/(t-1)) * (A + (t-1) B^t)  for t in (2, 3]."""
    if not 2.0 < t <= 3.0:
        raise DomainError(f"this closed form needs t in (2, 3], got t={t}")
    D = smoothness_value(D)
    A_t = _check_nonneg("A_t", A_t)
    B = _check_nonneg("B", B)
    front = (t - 2 + D * D) / (t - 1)
    return BoundReport(
        value=front * (A_t + (t - 1) * B**t),
        method="closed_2_3",
        constants={"C_A": front, "C_B": front * (t - 1)},
        parameters={},
        ratio_r=_ratio_scalar(t, A_t, B),
    )


def closed_form_3_4(t: float, D, A_t: float, B: float, alpha: float) -> BoundReport:
    """((t-2+D^2)/(t-1)) * (A / alpha^(t-3) + (t-1) B^t / (1-alpha)^(t-3))
    for t in [3, 4] and alpha in (0, 1)."""
    if not 3.0 <= t <= 4.0:
        raise DomainError(f"this closed form needs t in [3, 4], got t={t}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    D = smoothness_value(D)
    A_t = _check_nonneg("A_t", A_t)
    B = _check_nonneg("B", B)
    front = (t - 2 + D * D) / (t - 1)
    return BoundReport(
        value=front * (A_t / alpha ** (t - 3) + (t - 1) * B**t / (1 - alpha) ** (t - 3)),
        method="closed_3_4",
        constants={
            "C_A": front / alpha ** (t - 3),
            "C_B": front * (t - 1) / (1 - alpha) ** (t - 3),
        },
        parameters={"alpha": float(alpha)},
        ratio_r=_ratio_scalar(t, A_t, B),
    )


def closed_form_min(t: float, D, A_t: float, B: float) -> BoundReport:
    """The split-point-optimized closed form on (2, 4]:

    ((t-2+D^2)/(t-1)) * [A^(1/s) + (t-1)^(1/s) B^(t/s)]^s,  s = max(1, t-2).
    """
    if not 2.0 < t <= 4.0:
        raise DomainError(f"this closed form needs t in (2, 4], got t={t}")
    D = smoothness_value(D)
    A_t = _check_nonneg("A_t", A_t)
    B = _check_nonneg("B", B)
    s = max(1.0, t - 2.0)
    front = (t - 2 + D * D) / (t - 1)
    core = A_t ** (1.0 / s) + (t - 1) ** (1.0 / s) * B ** (t / s)
    return BoundReport(
        value=front * core**s,
        method="closed_min",
        constants={"front": front, "s_t": s},
        parameters={},
        ratio_r=_ratio_scalar(t, A_t, B),
    )


def hilbert_2_4(t: float, A_t: float, B: float) -> BoundReport:
    """2^((t-3)_+) * (A + (t-1) B^t) for t in (2, 4]; Hilbert case D = 1."""
    if not 2.0 < t <= 4.0:
        raise DomainError(f"this closed form needs t in (2, 4], got t={t}")
    A_t = _check_nonneg("A_t", A_t)
    B = _check_nonneg("B", B)
    front = 2.0 ** max(0.0, t - 3.0)
    return BoundReport(
        value=front * (A_t + (t - 1) * B**t),
        method="hilbert_2_4",
        constants={"C_A": front, "C_B": front * (t - 1)},
        parameters={},
        ratio_r=_ratio_scalar(t, A_t, B),
    )


def t3_bound(D, A_3: float, B: float) -> BoundReport:
    """The t = 3 specialization ((1+D^2)/2) * (A_n(3) + 2 B_n^3)."""
    D = smoothness_value(D)
    A_3 = _check_nonneg("A_3", A_3)
    B = _check_nonneg("B", B)
    front = (1 + D * D) / 2.0
    return BoundReport(
        value=front * (A_3 + 2.0 * B**3),
        method="t3",
        constants={"C_A": front, "C_B": 2.0 * front},
        parameters={},
        ratio_r=_ratio_scalar(3.0, A_3, B),
    )


@dataclass(frozen=True)
class Pin94Config:
    """Parameters of the comparison bound K^t (c^t A + c^(t/2) e^(t^2/c) D^t B^t).

    ``K`` is the unspecified absolute constant (a straightforward proof
    yields the large value 120).  ``c`` in [1, t] balances the two terms;
    ``None`` requests internal minimization by scalar search.
    """

    K: float = 120.0
    c: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.K) and self.K > 0.0):
            raise ValidationError(f"K must be finite and > 0, got {self.K}")


def _pin94_value(t: float, D: float, A_t: float, B: float, K: float, c: float) -> float:
    term1 = c**t * A_t
    if B == 0.0:
        term2 = 0.0
    else:
        log2 = 0.5 * t * math.log(c) + t * t / c + t * math.log(D) + t * math.log(B)
        term2 = math.exp(log2) if log2 < 700.0 else math.inf
    return K**t * (term1 + term2)


def pin94_bound(
    t: float, D, A_t: float, B: float, config: Pin94Config | None = None
) -> BoundReport:
    """Comparison bound with unspecified constant, valid for all t >= 2.

    Unlike the layered bounds it does not require the conditional-variance
    envelope assumption, but its constants are far larger.
    """
    if t < 2.0:
        raise DomainError(f"the comparison bound needs t >= 2, got t={t}")
    config = config or Pin94Config()
    D = smoothness_value(D)
    A_t = _check_nonneg("A_t", A_t)
    B = _check_nonneg("B", B)
    if config.c is not None:
        c = float(config.c)
        if not 1.0 <= c <= t:
            raise DomainError(f"balancing parameter c must lie in [1, {t}], got {c}")
    else:
        c, _ = golden_section_minimize(
            lambda x: _pin94_value(t, D, A_t, B, 1.0, x), 1.0, t, tol=1e-10
        )
    return BoundReport(
        value=_pin94_value(t, D, A_t, B, config.K, c),
        method="pin94",
        constants={"K": config.K},
        parameters={"c": c},
        ratio_r=_ratio_scalar(t, A_t, B),
    )


def _best_beta_corollary(
    profile: MomentProfile, envelope: VarianceEnvelope, D
) -> BoundReport:
    """Aggregated bound with the schedule parameter tuned over the fixed
    grid plus golden-section refinement of the best cell."""

    def report_at(beta: float) -> BoundReport:
        return corollary_bound(
            profile, envelope, D, PQSchedule.beta_family(beta), lambdas="optimize"
        )

    beta, _ = grid_then_golden_minimize(
        lambda b: report_at(b).value, BETA_GRID, tol=1e-10
    )
    return report_at(beta)


def best_bound(
    profile: MomentProfile,
    envelope: VarianceEnvelope,
    D,
    schedule: PQSchedule | None = None,
    *,
    pin94: Pin94Config | None = None,
) -> BoundReport:
    """Smallest applicable bound with provenance (t > 2).

    Candidates: the layered bound, the aggregated bound with optimized
    balancing parameters (with a schedule-parameter scan on top when the
    schedule weights matter, i.e. t > 3), the closed forms on (2, 4], and
    optionally the comparison bound.  Exact value ties prefer the layered
    bound, then closed forms, then the aggregation.
    """
    t = profile.t
    if t <= 2.0:
        raise DomainError(f"best_bound needs t > 2, got t={t}")
    D = smoothness_value(D)
    schedule = schedule or default_schedule()
    A_t = profile.total(t)
    B = envelope.total()

    candidates = [
        theorem_bound(profile, envelope, D, schedule),
        corollary_bound(profile, envelope, D, schedule, lambdas="optimize"),
    ]
    if t > 3.0:
        candidates.append(_best_beta_corollary(profile, envelope, D))
    if 2.0 < t <= 3.0:
        candidates.append(closed_form_2_3(t, D, A_t, B))
    if 2.0 < t <= 4.0:
        candidates.append(closed_form_min(t, D, A_t, B))
        if D == 1.0:
            candidates.append(hilbert_2_4(t, A_t, B))
    if pin94 is not None:
        candidates.append(pin94_bound(t, D, A_t, B, pin94))
    return min(candidates, key=lambda r: (r.value, _METHOD_PRIORITY[r.method]))
