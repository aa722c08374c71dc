"""Simulatable martingale constructions.

Every model guarantees the per-step conditional second-moment bound
E_{i-1}||X_i||^2 <= b_i^2 surely, by construction; where possible the
bound holds with equality so the envelope is tight.  Increments are
symmetric, which makes the partial sums a martingale automatically.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .core import ValidationError, VarianceEnvelope
from .rng import block_generator, iter_blocks, worker_count

__all__ = [
    "MartingaleModel",
    "RademacherModel",
    "UniformModel",
    "TwoPointModel",
    "HilbertModel",
    "LpModel",
    "DependentModel",
    "SimulationResult",
    "simulate",
    "make_model",
    "builtin_models",
    "MODEL_KINDS",
]

MOMENT_STREAM = "moments"
NORM_STREAM = "norms"


def _as_scale(scale, n: int) -> np.ndarray:
    arr = np.asarray(scale, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise ValidationError(f"scale must be a scalar or length-{n} sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValidationError("every scale entry must be finite and > 0")
    arr.setflags(write=False)
    return arr


class MartingaleModel(ABC):
    """Base class: n symmetric steps with per-step envelope ``scale``."""

    kind: str = ""

    def __init__(self, n: int, scale=1.0) -> None:
        if int(n) != n or n < 1:
            raise ValidationError(f"step count n must be an integer >= 1, got {n}")
        self.n = int(n)
        self.scale = _as_scale(scale, self.n)

    @property
    def smoothness(self) -> float:
        """Two-smoothness constant of the ambient space."""
        return 1.0

    def envelope(self) -> VarianceEnvelope:
        """The conditional-variance envelope the construction guarantees."""
        return VarianceEnvelope(self.scale)

    @abstractmethod
    def _simulate_block(
        self, gen: np.random.Generator, size: int, keep_final: bool
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
        """(final norms (size,), increment norms (size, n), final vectors)."""

    def describe(self) -> dict:
        return {"kind": self.kind, "n": self.n, "scale": [float(b) for b in self.scale]}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


def _signs(gen: np.random.Generator, shape) -> np.ndarray:
    return np.where(gen.random(shape) < 0.5, -1.0, 1.0)


class RademacherModel(MartingaleModel):
    """Real scalar steps X_i = b_i * eps_i with Rademacher signs."""

    kind = "rademacher"

    def _simulate_block(self, gen, size, keep_final):
        x = _signs(gen, (size, self.n)) * self.scale
        s = x.sum(axis=1)
        xnorm = np.broadcast_to(self.scale, (size, self.n))
        return np.abs(s), xnorm, (s[:, None] if keep_final else None)


class UniformModel(MartingaleModel):
    """Real scalar steps b_i * sqrt(3) * U_i, U_i uniform on [-1, 1].

    The sqrt(3) factor makes E X_i^2 = b_i^2, so the envelope is tight.
    """

    kind = "uniform"

    def _simulate_block(self, gen, size, keep_final):
        u = 2.0 * gen.random((size, self.n)) - 1.0
        x = math.sqrt(3.0) * self.scale * u
        s = x.sum(axis=1)
        return np.abs(s), np.abs(x), (s[:, None] if keep_final else None)


class TwoPointModel(MartingaleModel):
    """Real steps taking values 0 and +-b_i/sqrt(2p).

    P(X_i = +-b_i/sqrt(2p)) = p each and X_i = 0 otherwise, so
    E X_i^2 = b_i^2 exactly.  As p decreases the increments grow heavy
    tailed and the moment ratio A_n(t)/B_n^t blows up, the regime in which
    the coefficient of A_n(t) is the binding one.
    """

    kind = "two_point"

    def __init__(self, n: int, scale=1.0, prob: float = 0.1) -> None:
        super().__init__(n, scale)
        if not 0.0 < prob <= 0.5:
            raise ValidationError(f"point mass must lie in (0, 0.5], got {prob}")
        self.prob = float(prob)

    def _simulate_block(self, gen, size, keep_final):
        u = gen.random((size, self.n))
        eps = np.where(u < self.prob, -1.0, np.where(u >= 1.0 - self.prob, 1.0, 0.0))
        x = (self.scale / math.sqrt(2.0 * self.prob)) * eps
        s = x.sum(axis=1)
        return np.abs(s), np.abs(x), (s[:, None] if keep_final else None)

    def describe(self) -> dict:
        return {**super().describe(), "prob": self.prob}


class HilbertModel(MartingaleModel):
    """Steps b_i * V_i with V_i uniform on the Euclidean unit sphere."""

    kind = "hilbert"

    def __init__(self, n: int, scale=1.0, dim: int = 3) -> None:
        super().__init__(n, scale)
        if int(dim) != dim or dim < 1:
            raise ValidationError(f"dimension must be an integer >= 1, got {dim}")
        self.dim = int(dim)

    def _simulate_block(self, gen, size, keep_final):
        g = gen.standard_normal((size, self.n, self.dim))
        nrm = np.sqrt((g * g).sum(axis=2))
        nrm[nrm == 0.0] = 1.0
        x = g / nrm[..., None] * self.scale[None, :, None]
        s = x.sum(axis=1)
        snorm = np.sqrt((s * s).sum(axis=1))
        xnorm = np.broadcast_to(self.scale, (size, self.n))
        return snorm, xnorm, (s if keep_final else None)

    def describe(self) -> dict:
        return {**super().describe(), "dim": self.dim}


class LpModel(MartingaleModel):
    """Steps b_i * V_i with V_i a symmetric unit vector of l_p norm (p >= 2).

    The ambient space is l_p^d with smoothness constant sqrt(p - 1).
    """

    kind = "lp"

    def __init__(self, n: int, scale=1.0, p: float = 3.0, dim: int = 8) -> None:
        super().__init__(n, scale)
        if not (math.isfinite(p) and p >= 2.0):
            raise ValidationError(f"l_p exponent must satisfy p >= 2, got {p}")
        if int(dim) != dim or dim < 1:
            raise ValidationError(f"dimension must be an integer >= 1, got {dim}")
        self.p = float(p)
        self.dim = int(dim)

    @property
    def smoothness(self) -> float:
        return math.sqrt(self.p - 1.0)

    def _lp_norm(self, v: np.ndarray) -> np.ndarray:
        return (np.abs(v) ** self.p).sum(axis=-1) ** (1.0 / self.p)

    def _simulate_block(self, gen, size, keep_final):
        g = gen.standard_normal((size, self.n, self.dim))
        nrm = self._lp_norm(g)
        nrm[nrm == 0.0] = 1.0
        x = g / nrm[..., None] * self.scale[None, :, None]
        s = x.sum(axis=1)
        xnorm = np.broadcast_to(self.scale, (size, self.n))
        return self._lp_norm(s), xnorm, (s if keep_final else None)

    def describe(self) -> dict:
        return {**super().describe(), "p": self.p, "dim": self.dim}


class DependentModel(MartingaleModel):
    """Real steps with genuinely dependent conditional scales.

    X_i = sigma_i * eps_i where sigma_i = b_i * |cos(|S_{i-1}|)| is
    measurable with respect to the past and bounded by b_i, so the
    envelope condition holds surely while consecutive steps are dependent.
    (A sine modulation would freeze the walk at S_0 = 0; cosine starts it
    at full scale.)
    """

    kind = "dependent"

    def _simulate_block(self, gen, size, keep_final):
        eps = _signs(gen, (size, self.n))
        s = np.zeros(size)
        xnorm = np.empty((size, self.n))
        for i in range(self.n):
            sigma = self.scale[i] * np.abs(np.cos(np.abs(s)))
            xnorm[:, i] = sigma
            s = s + sigma * eps[:, i]
        return np.abs(s), xnorm, (s[:, None] if keep_final else None)


@dataclass(frozen=True)
class SimulationResult:
    """Samples from two independent streams of one model.

    ``final_norms`` holds ||S_n|| per replication (norm stream) and
    ``increment_norms`` holds ||X_i|| per replication and step (moment
    stream), so moment estimates never share randomness with the norm
    estimate they are compared against.
    """

    final_norms: np.ndarray
    increment_norms: np.ndarray
    final_vectors: np.ndarray | None = None


def _run_stream(
    model: MartingaleModel,
    seed: int,
    label: str,
    replications: int,
    threads: int,
    keep_final: bool,
):
    snorm = np.empty(replications)
    xnorm = np.empty((replications, model.n))
    finals = None
    blocks = iter_blocks(replications)

    def work(task):
        nonlocal finals
        blk, start, stop = task
        gen = block_generator(seed, label, blk)
        s, x, f = model._simulate_block(gen, stop - start, keep_final)
        snorm[start:stop] = s
        xnorm[start:stop] = x
        if keep_final:
            if finals is None:
                finals = np.empty((replications, f.shape[1]))
            finals[start:stop] = f

    if keep_final:
        # Allocate up front from a probe of the final-vector width so the
        # threaded path never races on lazy allocation.
        work(blocks[0])
        blocks = blocks[1:]
    if threads == 1 or len(blocks) <= 1:
        for task in blocks:
            work(task)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, blocks))
    return snorm, xnorm, finals


def simulate(
    model: MartingaleModel,
    seed: int,
    replications: int,
    *,
    threads: int | None = None,
    keep_final: bool = False,
) -> SimulationResult:
    """Draw both streams of a model; deterministic in (model, seed,
    replications) regardless of worker count."""
    if int(replications) != replications or replications < 1:
        raise ValidationError(
            f"replications must be an integer >= 1, got {replications}"
        )
    replications = int(replications)
    nthreads = worker_count(threads)
    snorm, _, finals = _run_stream(
        model, seed, NORM_STREAM, replications, nthreads, keep_final
    )
    _, xnorm, _ = _run_stream(
        model, seed, MOMENT_STREAM, replications, nthreads, False
    )
    return SimulationResult(
        final_norms=snorm, increment_norms=xnorm, final_vectors=finals
    )


MODEL_KINDS = ("rademacher", "uniform", "two_point", "hilbert", "lp", "dependent")


def make_model(kind: str, n: int, scale=1.0, **params) -> MartingaleModel:
    """Factory keyed by model kind; extra parameters per kind:
    ``prob`` (two_point), ``p`` and ``dim`` (lp), ``dim`` (hilbert)."""
    classes = {
        "rademacher": RademacherModel,
        "uniform": UniformModel,
        "two_point": TwoPointModel,
        "hilbert": HilbertModel,
        "lp": LpModel,
        "dependent": DependentModel,
    }
    try:
        cls = classes[kind]
    except KeyError:
        raise ValidationError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}") from None
    return cls(n, scale, **params)


def builtin_models(n: int, scale=1.0) -> list[MartingaleModel]:
    """One default-configured instance of every model kind."""
    return [
        RademacherModel(n, scale),
        UniformModel(n, scale),
        TwoPointModel(n, scale, prob=0.1),
        HilbertModel(n, scale, dim=3),
        LpModel(n, scale, p=3.0, dim=8),
        DependentModel(n, scale),
    ]
