"""Positive i.d. processes run on a random operational time.

A base process ``X(s)`` with ``E exp(-lambda X(s)) = exp(-s psi(lambda))`` is
evaluated at an independent random time ``G``.  The increment ``X(G)`` has
transform ``E exp(-G psi(lambda))``, i.e. the transform of ``G`` evaluated at
``psi(lambda)``:

=================  ======================  =========================
operational time   law of ``G``            transform of ``X(G)``
=================  ======================  =========================
gamma(t)           Gamma(t, 1)             ``(1 + psi)**-t``
exponential(t)     Exp with mean t         ``1 / (1 + t psi)``
mittag-leffler(t)  ML(t)                   ``1 / (1 + psi**t)``
=================  ======================  =========================
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import transforms as tf
from ._pykernels import kanter, open_uniform
from .errors import ParameterError
from .samplers import ExponentialLaw, GammaLaw, Law, MittagLefflerLaw, SampleBatch, generate


# ---------------------------------------------------------------------------
# base processes
# ---------------------------------------------------------------------------


class BaseProcess:
    psi: tf.PsiExponent

    def increment(self, rng: np.random.Generator, s: np.ndarray) -> np.ndarray:
        """One draw of ``X(s_i)`` for every entry of ``s``."""
        raise NotImplementedError


@dataclass(frozen=True)
class Stable(BaseProcess):
    """``X(s) = s**(1/alpha) S`` with ``S`` positive alpha-stable."""

    alpha: float = 0.5

    def __post_init__(self):
        tf._check_unit("alpha", self.alpha, closed_high=False)

    @property
    def psi(self):
        return tf.Power(1.0, self.alpha)

    def increment(self, rng, s):
        s = np.asarray(s, dtype=float)
        z = kanter(open_uniform(rng, s.size), open_uniform(rng, s.size), self.alpha)
        return s ** (1.0 / self.alpha) * z

    @property
    def descriptor(self):
        return f"stable(alpha={self.alpha:g})"


@dataclass(frozen=True)
class CompoundPoissonExp(BaseProcess):
    """Jumps ~ Exp(rate theta) arriving at rate ``mu``; ``psi = mu lambda / (lambda + theta)``."""

    mu: float = 1.0
    theta: float = 1.0

    def __post_init__(self):
        tf._check_positive("mu", self.mu)
        tf._check_positive("theta", self.theta)

    @property
    def psi(self):
        return tf.CompoundExp(self.mu, self.theta)

    def increment(self, rng, s):
        s = np.asarray(s, dtype=float)
        counts = rng.poisson(self.mu * s)
        # sum of K Exp(theta) jumps is Gamma(K, theta); K can be huge under heavy-tailed time
        total = rng.standard_gamma(np.maximum(counts, 1).astype(float)) / self.theta
        return np.where(counts > 0, total, 0.0)

    @property
    def descriptor(self):
        return f"compound_poisson_exp(mu={self.mu:g},theta={self.theta:g})"


# ---------------------------------------------------------------------------
# operational times
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaTime:
    """Gamma(t, 1) operational time; the g.i.d. claim needs ``t <= 1``."""

    t: float = 1.0

    def __post_init__(self):
        tf._check_positive("t", self.t)

    def law(self) -> Law:
        return GammaLaw(self.t, 1.0)

    def composite(self, psi):
        return tf.GammaComposite(psi, self.t)

    @property
    def within_hypothesis(self) -> bool:
        return self.t <= 1.0

    @property
    def descriptor(self):
        return f"gamma_time(t={self.t:g})"


@dataclass(frozen=True)
class ExponentialTime:
    """Exponential operational time with mean ``t`` (g.i.d. for every ``t``)."""

    t: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.t) and self.t >= 0):
            raise ParameterError(f"t must be >= 0, got {self.t!r}")

    def law(self) -> Law:
        if self.t == 0:
            raise ParameterError("a zero operational time cannot be sampled")
        return ExponentialLaw(1.0 / self.t)

    def composite(self, psi):
        return tf.LinearComposite(psi, self.t)

    @property
    def within_hypothesis(self) -> bool:
        return True

    @property
    def descriptor(self):
        return f"exponential_time(t={self.t:g})"


@dataclass(frozen=True)
class MLTime:
    """Mittag-Leffler operational time with transform ``1 / (1 + lambda**t)``."""

    t: float = 1.0

    def __post_init__(self):
        tf._check_positive("t", self.t)

    def law(self) -> Law:
        if self.t > 1:
            raise ParameterError("Mittag-Leffler time needs t in (0, 1] to be sampled")
        return MittagLefflerLaw(self.t, 1.0)

    def composite(self, psi):
        return tf.PowerComposite(psi, self.t)

    @property
    def within_hypothesis(self) -> bool:
        return self.t <= 1.0

    @property
    def descriptor(self):
        return f"ml_time(t={self.t:g})"


OUTSIDE_HYPOTHESIS = "outside theorem hypothesis"


@dataclass(frozen=True)
class SubordinatedLaw(Law):
    base: BaseProcess
    directing: object

    def draw(self, rng, size):
        s = self.directing.law().draw(rng, size)
        return self.base.increment(rng, s)

    def transform(self):
        return closed_form_subordinated_lt(self.base.psi, self.directing)

    @property
    def descriptor(self):
        return f"subordinated({self.base.descriptor},{self.directing.descriptor})"


@dataclass(frozen=True)
class IncrementLaw(Law):
    base: BaseProcess
    s: float

    def draw(self, rng, size):
        return self.base.increment(rng, np.full(size, self.s))

    def transform(self):
        return tf.IncrementTransform(self.base.psi, self.s)

    @property
    def descriptor(self):
        return f"increment({self.base.descriptor},s={self.s:g})"


def sample_base_increment(base: BaseProcess, s: float, n: int, seed: int, workers=1) -> SampleBatch:
    tf._check_positive("s", s)
    return generate(IncrementLaw(base, float(s)), n, seed, workers)


def sample_subordinated(base: BaseProcess, directing, n: int, seed: int, workers=1) -> SampleBatch:
    return generate(SubordinatedLaw(base, directing), n, seed, workers)


def closed_form_subordinated_lt(psi: tf.PsiExponent, directing) -> tf.Gid:
    """Transform of the subordinated increment, written as ``1 / (1 + h)``."""
    return tf.Gid(directing.composite(psi))


def verify_subordination_gid(
    psi: tf.PsiExponent,
    directing,
    lambda_min=tf.CM_LAMBDA_MIN,
    lambda_max=tf.CM_LAMBDA_MAX,
    points=tf.CM_POINTS,
    K=tf.CM_ORDER,
) -> tf.GridReport:
    """g.i.d. check of the closed form; parameters outside the theorem are flagged in ``notes``."""
    report = tf.gid_check(closed_form_subordinated_lt(psi, directing), lambda_min, lambda_max, points, K)
    if not directing.within_hypothesis:
        report.notes = report.notes + (OUTSIDE_HYPOTHESIS,)
    return report
