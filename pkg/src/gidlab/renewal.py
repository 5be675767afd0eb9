"""Renewal processes on a finite horizon: simulation, p-thinning and contraction."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from . import rng as rngmod
from . import transforms as tf
from .errors import DegenerateProcessError, InsufficientDataError, ParameterError
from .samplers import ExponentialLaw, Law, MittagLefflerLaw, SampleBatch, generate

# abort when this many epochs have not reached this fraction of the horizon
GUARD_EPOCHS = 1_000_000
GUARD_FRACTION = 0.01


@dataclass(eq=False)
class EpochSequence:
    """Arrival epochs ``0 < t_1 < t_2 < ... <= horizon`` (origin 0 is implicit).

    The sequence is stored as its positive gaps times a scale factor.  Epochs
    are the cumulative sums, so tiny gaps late in a long heavy-tailed run are
    not lost to rounding, and repeated contractions compose exactly:
    ``contract(contract(E, a), b)`` and ``contract(E, a * b)`` agree bit for bit.
    """

    gaps: np.ndarray
    raw_horizon: float
    scale: float = 1.0
    seed: int | None = None

    def __post_init__(self):
        self.gaps = np.ascontiguousarray(self.gaps, dtype=float)
        if self.gaps.ndim != 1:
            raise ParameterError("gaps must be one-dimensional")
        if not (self.raw_horizon > 0 and self.scale > 0):
            raise ParameterError("horizon and scale must be positive")
        if np.any(~(self.gaps > 0)):
            raise ParameterError("epochs must be strictly increasing (all gaps > 0)")
        if self.gaps.size and self.gaps.sum() > self.raw_horizon * (1 + 1e-12):
            raise ParameterError("epochs must not exceed the horizon")

    @classmethod
    def from_epochs(cls, epochs, horizon, seed=None) -> "EpochSequence":
        epochs = np.asarray(epochs, dtype=float)
        if epochs.size and epochs[-1] > horizon:
            raise ParameterError("epochs must not exceed the horizon")
        return cls(np.diff(epochs, prepend=0.0), float(horizon), seed=seed)

    @property
    def epochs(self) -> np.ndarray:
        t = np.cumsum(self.gaps)
        return t * self.scale if self.scale != 1.0 else t

    @property
    def horizon(self) -> float:
        return self.raw_horizon * self.scale

    def __len__(self):
        return int(self.gaps.size)

    def to_csv(self) -> str:
        lines = [f"# horizon={tf.fmt(self.horizon)} seed={self.seed}", "epoch"]
        lines.extend(tf.fmt(t) for t in self.epochs)
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        tf.write_text(path, self.to_csv())


def simulate_renewal(inter: Law, horizon: float, seed: int, workers=1) -> EpochSequence:
    """Renewal epochs ``S_n = X_1 + ... + X_n`` up to ``horizon``.

    Inter-arrivals come in fixed-size chunks from substreams and the running
    total is carried chunk by chunk, so the result does not depend on ``workers``.
    """
    if not (np.isfinite(horizon) and horizon > 0):
        raise ParameterError("horizon must be a positive real")
    workers = rngmod.resolve_workers(workers)
    chunk = rngmod.CHUNK_SIZE
    parts = []
    total = 0.0
    count = 0
    k = 0
    while True:
        batch = rngmod.map_chunks(
            lambda j: inter.draw(rngmod.substream(seed, k + j, rngmod.RENEWAL), chunk), workers, workers
        )
        k += workers
        for gaps in batch:
            sums = np.cumsum(gaps) + total
            if sums[-1] > horizon:
                parts.append(gaps[: int(np.searchsorted(sums, horizon, side="right"))])
                gaps = np.concatenate(parts)
                if np.any(~(gaps > 0)):
                    raise DegenerateProcessError("zero-length inter-arrival")
                return EpochSequence(gaps, float(horizon), seed=seed)
            parts.append(gaps)
            total = float(sums[-1])
            count += gaps.size
            if count >= GUARD_EPOCHS and total < GUARD_FRACTION * horizon:
                raise DegenerateProcessError(
                    f"{count} epochs generated before reaching {GUARD_FRACTION:.0%} of the horizon"
                )


def simulate_renewal_count(inter: Law, n: int, seed: int, workers=1) -> EpochSequence:
    """The first ``n`` epochs of a renewal process; the horizon is ``S_n``.

    Heavy-tailed inter-arrivals make the count on a fixed horizon wildly
    variable, so experiments that need a target sample size use this form.
    """
    n = int(n)
    if n < 1:
        raise ParameterError("n must be >= 1")
    gaps = rngmod.generate(inter.draw, n, seed, workers, stream=rngmod.RENEWAL)
    if np.any(~(gaps > 0)):
        raise DegenerateProcessError("zero-length inter-arrival")
    return EpochSequence(gaps, float(np.sum(gaps)), seed=seed)


def thin(epochs: EpochSequence, p: float, seed: int, workers=1) -> EpochSequence:
    """Keep each epoch independently with probability ``p``; gaps of survivors merge."""
    tf._check_unit("p", p)
    if p == 1.0:
        return EpochSequence(epochs.gaps.copy(), epochs.raw_horizon, epochs.scale, epochs.seed)
    n = len(epochs)
    if n == 0:
        return EpochSequence(epochs.gaps.copy(), epochs.raw_horizon, epochs.scale, epochs.seed)
    keep = rngmod.generate(lambda r, size: r.random(size) < p, n, seed, workers, stream=rngmod.THINNING)
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        return EpochSequence(np.empty(0), epochs.raw_horizon, epochs.scale, epochs.seed)
    counts = np.diff(idx, prepend=-1).astype(np.int64)
    merged = kernels.segment_sums(np.ascontiguousarray(epochs.gaps[: idx[-1] + 1]), counts)
    return EpochSequence(merged, epochs.raw_horizon, epochs.scale, epochs.seed)


def contract(epochs: EpochSequence, c: float) -> EpochSequence:
    """Replace every epoch ``t`` by ``c t`` (horizon too)."""
    tf._check_unit("c", c)
    return EpochSequence(epochs.gaps, epochs.raw_horizon, epochs.scale * c, epochs.seed)


def interarrivals(epochs: EpochSequence) -> SampleBatch:
    """Gaps ``t_1, t_2 - t_1, ...``; the incomplete gap at the horizon is not included."""
    if len(epochs) < 2:
        raise InsufficientDataError("need at least 2 epochs")
    gaps = epochs.gaps * epochs.scale if epochs.scale != 1.0 else epochs.gaps.copy()
    return SampleBatch(gaps, seed=epochs.seed, descriptor="interarrivals")


# ---------------------------------------------------------------------------
# thinning invariance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoissonFamily:
    rate: float = 1.0
    fixed_count = False

    @property
    def alpha(self) -> float:
        return 1.0

    def law(self) -> Law:
        return ExponentialLaw(self.rate)

    def horizon_for(self, n_epochs: int) -> float:
        return n_epochs / self.rate

    @property
    def descriptor(self):
        return f"poisson(rate={self.rate:g})"


@dataclass(frozen=True)
class MLFamily:
    alpha: float = 0.6
    scale: float = 1.0
    fixed_count = True

    def law(self) -> Law:
        return MittagLefflerLaw(self.alpha, self.scale)

    def horizon_for(self, n_epochs: int) -> float:
        """Horizon whose expected epoch count is ``n_epochs``.

        The renewal function of ML(alpha, scale) gaps is ``(t/scale)**alpha / Gamma(1+alpha)``.
        """
        return self.scale * (n_epochs * math.gamma(1.0 + self.alpha)) ** (1.0 / self.alpha)

    @property
    def descriptor(self):
        return f"mittag_leffler(alpha={self.alpha:g},scale={self.scale:g})"


@dataclass
class InvarianceReport:
    family: str
    p: float
    c: float
    n_epochs: int
    n_thinned: int
    statistic: float
    threshold: float
    verdict: bool
    horizon: float

    def to_csv(self) -> str:
        head = "family,p,c,horizon,n_epochs,n_thinned,statistic,threshold,pass"
        row = (
            f"{self.family},{tf.fmt(self.p)},{tf.fmt(self.c)},{tf.fmt(self.horizon)},{self.n_epochs},"
            f"{self.n_thinned},{tf.fmt(self.statistic)},{tf.fmt(self.threshold)},{int(self.verdict)}"
        )
        return head + "\n" + row + "\n"


def invariance_scale(family, p: float) -> float:
    """Contraction factor that undoes p-thinning: ``c = p**(1/alpha)``."""
    return p ** (1.0 / family.alpha)


def verify_thinning_invariance(
    family,
    p: float,
    n_target: int,
    seed: int,
    c: float | None = None,
    level: float = 0.05,
    workers=1,
) -> InvarianceReport:
    """Thin by ``p``, contract by ``c`` and KS-compare gaps against fresh draws of the family.

    ``n_target`` is the number of epochs before thinning: the expected count
    on the horizon for Poisson, the exact count for heavy-tailed families.
    ``c`` defaults to ``p**(1/alpha)``; any other value is a negative control.
    """
    tf._check_unit("p", p, closed_high=False)
    if c is None:
        c = invariance_scale(family, p)
    sim_seed = rngmod.derive_seed(seed, 1)
    if family.fixed_count:
        epochs = simulate_renewal_count(family.law(), n_target, sim_seed, workers)
    else:
        epochs = simulate_renewal(family.law(), family.horizon_for(n_target), sim_seed, workers)
    horizon = epochs.horizon
    thinned = contract(thin(epochs, p, rngmod.derive_seed(seed, 2), workers), c)
    gaps = interarrivals(thinned)
    fresh = generate(family.law(), gaps.n, rngmod.derive_seed(seed, 3), workers, stream=rngmod.FRESH)
    ks = tf.ks_two_sample(gaps, fresh, level)
    return InvarianceReport(
        family=family.descriptor,
        p=p,
        c=c,
        n_epochs=len(epochs),
        n_thinned=len(thinned),
        statistic=ks.statistic,
        threshold=ks.threshold,
        verdict=ks.passed,
        horizon=horizon,
    )
