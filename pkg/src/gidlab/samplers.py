"""Seeded variate generation for the laws composed by the library.

Each law is a small frozen dataclass with ``draw(rng, size)`` and
``transform()`` (its Laplace transform, used by the verification oracles).
``generate`` produces a :class:`SampleBatch` chunk by chunk from substreams, so
a batch depends only on the law, ``n`` and ``seed``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, rng as rngmod
from . import transforms as tf
from ._pykernels import geometric_counts, kanter, open_uniform
from .errors import ParameterError


@dataclass(eq=False)
class SampleBatch:
    values: np.ndarray
    seed: int | None = None
    descriptor: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim != 1:
            raise ParameterError("sample values must be one-dimensional")
        if np.any(self.values < 0):
            raise ParameterError("sample values must be >= 0")

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def to_csv(self) -> str:
        lines = [f"# descriptor={self.descriptor} n={self.n} seed={self.seed}", "value"]
        if np.issubdtype(self.values.dtype, np.integer):
            lines.extend(str(int(v)) for v in self.values)
        else:
            lines.extend(tf.fmt(v) for v in self.values)
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        tf.write_text(path, self.to_csv())


def read_sample_csv(path) -> SampleBatch:
    """Inverse of :meth:`SampleBatch.to_csv`."""
    meta = {}
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    meta[key] = val
                continue
            if line == "value":
                continue
            values.append(float(line))
    seed = meta.get("seed")
    return SampleBatch(
        np.asarray(values),
        seed=None if seed in (None, "None") else int(seed),
        descriptor=meta.get("descriptor", ""),
    )


# ---------------------------------------------------------------------------
# laws
# ---------------------------------------------------------------------------


class Law:
    """A samplable law on [0, inf)."""

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def transform(self) -> tf.LaplaceTransform | None:
        return None

    @property
    def descriptor(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ExponentialLaw(Law):
    rate: float = 1.0

    def __post_init__(self):
        tf._check_positive("rate", self.rate)

    def draw(self, rng, size):
        return -np.log(open_uniform(rng, size)) / self.rate

    def transform(self):
        return tf.Exponential(self.rate)

    @property
    def descriptor(self):
        return f"exponential(rate={self.rate:g})"


def _marsaglia_tsang(rng, shape, size):
    """Gamma(shape >= 1, 1) by Marsaglia-Tsang squeeze/acceptance."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(size)
    filled = 0
    while filled < size:
        want = size - filled
        m = int(want * 1.1) + 16
        x = rng.standard_normal(m)
        v = (1.0 + c * x) ** 3
        u = open_uniform(rng, m)
        ok = v > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            accept = ok & (np.log(u) < 0.5 * x * x + d - d * v + d * np.log(np.where(ok, v, 1.0)))
        got = (d * v)[accept][:want]
        out[filled:filled + got.size] = got
        filled += got.size
    return out


@dataclass(frozen=True)
class GammaLaw(Law):
    shape: float = 1.0
    rate: float = 1.0

    def __post_init__(self):
        tf._check_positive("shape", self.shape)
        tf._check_positive("rate", self.rate)

    def draw(self, rng, size):
        if self.shape >= 1.0:
            g = _marsaglia_tsang(rng, self.shape, size)
        else:
            # boost: G_s = G_{s+1} * U**(1/s)
            g = _marsaglia_tsang(rng, self.shape + 1.0, size)
            g *= open_uniform(rng, size) ** (1.0 / self.shape)
        return g / self.rate

    def transform(self):
        return tf.Gamma(self.shape, self.rate)

    @property
    def descriptor(self):
        return f"gamma(shape={self.shape:g},rate={self.rate:g})"


@dataclass(frozen=True)
class GeometricLaw(Law):
    """Counts on {1, 2, ...} with ``P(N = n) = p (1-p)**(n-1)``."""

    p: float = 0.5

    def __post_init__(self):
        tf._check_unit("p", self.p)

    def draw(self, rng, size):
        return geometric_counts(rng, self.p, size)

    @property
    def descriptor(self):
        return f"geometric(p={self.p:g})"


@dataclass(frozen=True)
class StableLaw(Law):
    """Positive stable law with transform ``exp(-(scale lambda)**alpha)`` (Kanter's method)."""

    alpha: float = 0.5
    scale: float = 1.0

    def __post_init__(self):
        tf._check_unit("alpha", self.alpha, closed_high=False)
        tf._check_positive("scale", self.scale)

    def draw(self, rng, size):
        s = kanter(open_uniform(rng, size), open_uniform(rng, size), self.alpha)
        return s * self.scale if self.scale != 1.0 else s

    def transform(self):
        return tf.PositiveStable(self.alpha, self.scale)

    @property
    def descriptor(self):
        return f"positive_stable(alpha={self.alpha:g},scale={self.scale:g})"


@dataclass(frozen=True)
class MittagLefflerLaw(Law):
    """``scale * W**(1/alpha) * S``: transform ``1 / (1 + (scale lambda)**alpha)``."""

    alpha: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        tf._check_unit("alpha", self.alpha)
        tf._check_positive("scale", self.scale)

    def draw(self, rng, size):
        if self.alpha == 1.0:
            base = ExponentialLaw(1.0).draw(rng, size)
        else:
            w = -np.log(open_uniform(rng, size))
            s = kanter(open_uniform(rng, size), open_uniform(rng, size), self.alpha)
            base = w ** (1.0 / self.alpha) * s
        return base * self.scale

    def transform(self):
        return tf.MittagLeffler(self.alpha, self.scale)

    @property
    def descriptor(self):
        return f"mittag_leffler(alpha={self.alpha:g},scale={self.scale:g})"


@dataclass(frozen=True)
class ConstantLaw(Law):
    """Degenerate law; a deterministic stub for renewal tests."""

    value: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.value) and self.value >= 0):
            raise ParameterError("constant must be finite and >= 0")

    def draw(self, rng, size):
        return np.full(size, float(self.value))

    def transform(self):
        return tf.PositiveStable(1.0, self.value) if self.value > 0 else None

    @property
    def descriptor(self):
        return f"constant({self.value:g})"


# inner draws per pass of a geometric compound; bounds memory for small p
_COMPOUND_BLOCK = 1 << 21


@dataclass(frozen=True)
class GeometricCompoundLaw(Law):
    """``sum_{j=1}^{N} X_j`` with ``N ~ Geometric(p)`` independent of i.i.d. ``X_j``."""

    inner: Law
    p: float = 0.5

    def __post_init__(self):
        tf._check_unit("p", self.p)
        if not isinstance(self.inner, Law):
            raise ParameterError("inner must be a Law")

    def draw(self, rng, size):
        counts = geometric_counts(rng, self.p, size)
        out = np.empty(size)
        cum = np.cumsum(counts)
        lo = 0
        while lo < size:
            base = cum[lo - 1] if lo else 0
            hi = max(int(np.searchsorted(cum, base + _COMPOUND_BLOCK, side="right")), lo + 1)
            c = np.ascontiguousarray(counts[lo:hi])
            x = np.ascontiguousarray(self.inner.draw(rng, int(c.sum())), dtype=float)
            out[lo:hi] = kernels.segment_sums(x, c)
            lo = hi
        return out

    def transform(self):
        inner = self.inner.transform()
        return None if inner is None else tf.GeometricConvolve(inner, self.p)

    @property
    def descriptor(self):
        return f"geometric_compound({self.inner.descriptor},p={self.p:g})"


def _check_n(n):
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    return int(n)


def generate(law: Law, n: int, seed: int, workers: int | None = 1, stream: int = rngmod.SAMPLES) -> SampleBatch:
    """Draw ``n`` i.i.d. values of ``law``; identical for any worker count."""
    n = _check_n(n)
    values = rngmod.generate(law.draw, n, seed, workers=workers, stream=stream)
    return SampleBatch(values, seed=int(seed), descriptor=law.descriptor)


def sample_exponential(rate: float, n: int, seed: int, workers=1) -> SampleBatch:
    return generate(ExponentialLaw(rate), n, seed, workers)


def sample_gamma(shape: float, rate: float, n: int, seed: int, workers=1) -> SampleBatch:
    return generate(GammaLaw(shape, rate), n, seed, workers)


def sample_geometric(p: float, n: int, seed: int, workers=1) -> SampleBatch:
    return generate(GeometricLaw(p), n, seed, workers)


def sample_positive_stable(alpha: float, n: int, seed: int, workers=1) -> SampleBatch:
    return generate(StableLaw(alpha), n, seed, workers)


def sample_mittag_leffler(alpha: float, scale: float, n: int, seed: int, workers=1) -> SampleBatch:
    return generate(MittagLefflerLaw(alpha, scale), n, seed, workers)


def sample_geometric_compound(inner: Law, p: float, n: int, seed: int, workers=1) -> SampleBatch:
    return generate(GeometricCompoundLaw(inner, p), n, seed, workers)
