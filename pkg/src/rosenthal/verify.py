"""Monte-Carlo verification: estimate E||S_n||^t for a simulatable model
and check it against the computed bounds.

Per-step moments a_i(s) are estimated on one random stream and the norm
moment on an independent second stream, so the two sides of the inequality
never share randomness.  The check passes when

    estimate - 3 * standard_error <= layered bound

(a one-sided three-sigma margin; with a valid bound the false-alarm
probability per check is about 0.3%).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import corollary_bound, theorem_bound
from .core import BoundReport, DomainError, MomentProfile, required_exponents
from .models import MartingaleModel, SimulationResult, simulate
from .schedules import PQSchedule, default_schedule

__all__ = [
    "VerificationReport",
    "empirical_profile",
    "check_from_simulation",
    "estimate_and_check",
]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one Monte-Carlo bound check."""

    model: dict
    t: float
    estimate: float
    std_error: float
    bound: BoundReport
    corollary: BoundReport | None
    slack: float | None
    passed: bool
    replications: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "model": dict(self.model),
            "t": self.t,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "bound": self.bound.to_dict(),
            "corollary": None if self.corollary is None else self.corollary.to_dict(),
            "slack": self.slack,
            "passed": self.passed,
            "replications": self.replications,
            "seed": self.seed,
        }


def empirical_profile(
    model: MartingaleModel, t: float, increment_norms: np.ndarray
) -> MomentProfile:
    """Moment profile estimated from sampled per-step increment norms."""
    moments = {
        s: (increment_norms**s).mean(axis=0) for s in required_exponents(t)
    }
    return MomentProfile(model.n, t, moments)


def check_from_simulation(
    model: MartingaleModel,
    sim: SimulationResult,
    t: float,
    schedule: PQSchedule | None = None,
    *,
    seed: int = 0,
) -> VerificationReport:
    """Bound check against an existing simulation (shared across exponents)."""
    if t < 2.0:
        raise DomainError(f"verification needs t >= 2, got t={t}")
    schedule = schedule or default_schedule()
    replications = int(sim.final_norms.shape[0])

    profile = empirical_profile(model, t, sim.increment_norms)
    envelope = model.envelope()
    D = model.smoothness

    powers = sim.final_norms**t
    estimate = float(powers.mean())
    if replications > 1:
        std_error = float(powers.std(ddof=1) / math.sqrt(replications))
    else:
        std_error = 0.0

    bound = theorem_bound(profile, envelope, D, schedule)
    coro = (
        corollary_bound(profile, envelope, D, schedule, lambdas="optimize")
        if t > 2.0
        else None
    )
    lower = estimate - 3.0 * std_error
    passed = lower <= bound.value and (coro is None or lower <= coro.value)
    return VerificationReport(
        model=model.describe(),
        t=float(t),
        estimate=estimate,
        std_error=std_error,
        bound=bound,
        corollary=coro,
        slack=(bound.value / estimate) if estimate > 0.0 else None,
        passed=passed,
        replications=replications,
        seed=int(seed),
    )


def estimate_and_check(
    model: MartingaleModel,
    t: float,
    schedule: PQSchedule | None = None,
    seed: int = 0,
    replications: int = 100_000,
    *,
    threads: int | None = None,
) -> VerificationReport:
    """Simulate a model and check the bounds at exponent t >= 2."""
    if t < 2.0:
        raise DomainError(f"verification needs t >= 2, got t={t}")
    sim = simulate(model, seed, replications, threads=threads)
    return check_from_simulation(model, sim, t, schedule, seed=seed)
