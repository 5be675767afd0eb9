"""Exponents, Laplace transforms and their algebra.

A Laplace exponent ``psi`` (a nonnegative function with ``psi(0) = 0``) and a
Laplace transform ``g`` are both plain callables over nonnegative reals.  The
transform ``1 / (1 + psi)`` is geometrically infinitely divisible exactly when
``psi`` has a completely monotone derivative; the checkers in this module test
that numerically with finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .errors import (
    DomainError,
    EvaluationError,
    InvalidTransformError,
    ParameterError,
)

EPS = np.finfo(float).eps

# defaults for the numerical complete-monotonicity check
CM_LAMBDA_MIN = 1e-2
CM_LAMBDA_MAX = 10.0
CM_POINTS = 64
CM_ORDER = 6
CM_SAFETY = 64.0


def _as_lambda(lam):
    arr = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("lambda must be finite")
    if np.any(arr < 0):
        raise DomainError("lambda must be nonnegative")
    return arr


def _unwrap(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _check_positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be a positive real, got {value!r}")


def _check_unit(name, value, *, closed_low=False, closed_high=True):
    ok_low = value >= 0 if closed_low else value > 0
    ok_high = value <= 1 if closed_high else value < 1
    if not (np.isfinite(value) and ok_low and ok_high):
        lo = "[" if closed_low else "("
        hi = "]" if closed_high else ")"
        raise ParameterError(f"{name} must lie in {lo}0, 1{hi}, got {value!r}")


# ---------------------------------------------------------------------------
# Laplace exponents
# ---------------------------------------------------------------------------


class PsiExponent:
    """Base class; subclasses implement ``_eval`` on a float array."""

    def __call__(self, lam):
        arr = _as_lambda(lam)
        return _unwrap(self._eval(arr), lam)

    def _eval(self, lam: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def descriptor(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Power(PsiExponent):
    """``A * lambda**alpha``."""

    A: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        _check_positive("A", self.A)
        _check_unit("alpha", self.alpha)

    def _eval(self, lam):
        return self.A * lam**self.alpha

    @property
    def descriptor(self):
        return f"power(A={self.A:g},alpha={self.alpha:g})"


@dataclass(frozen=True)
class CompoundExp(PsiExponent):
    """Compound Poisson exponent ``mu * lambda / (lambda + theta)``.

    Jumps are exponential with rate ``theta`` and arrive at rate ``mu``.
    """

    mu: float = 1.0
    theta: float = 1.0

    def __post_init__(self):
        _check_positive("mu", self.mu)
        _check_positive("theta", self.theta)

    def _eval(self, lam):
        return self.mu * lam / (lam + self.theta)

    @property
    def descriptor(self):
        return f"compound_exp(mu={self.mu:g},theta={self.theta:g})"


@dataclass(frozen=True)
class FiniteMixture(PsiExponent):
    """``sum_k c_k * (1 - exp(-b_k * lambda))``."""

    weights: tuple = (1.0,)
    scales: tuple = (1.0,)

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        b = tuple(float(x) for x in self.scales)
        if len(w) != len(b) or not w:
            raise ParameterError("weights and scales must be nonempty and of equal length")
        for x in w + b:
            _check_positive("mixture weight/scale", x)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "scales", b)

    def _eval(self, lam):
        c = np.asarray(self.weights)
        b = np.asarray(self.scales)
        flat = lam.reshape(-1, 1)
        out = -np.expm1(-flat * b) @ c
        return out.reshape(lam.shape)

    @property
    def descriptor(self):
        return f"finite_mixture(k={len(self.weights)})"


@dataclass(frozen=True)
class SemiMLPerturbed(PsiExponent):
    """Log-periodic exponent ``lambda**alpha * (1 + eps*cos(2 pi ln(lambda) / ln(1/b)))``.

    It satisfies ``psi(lambda) = a * psi(b * lambda)`` with ``a = b**-alpha``.
    Construction fails unless the derivative passes the numerical CM check.
    """

    alpha: float = 0.6
    b: float = 0.01
    eps: float = 0.0

    def __post_init__(self):
        _check_unit("alpha", self.alpha, closed_high=False)
        _check_unit("b", self.b, closed_high=False)
        if not np.isfinite(self.eps):
            raise ParameterError("eps must be finite")
        if abs(self.eps) >= 1:
            raise ParameterError("|eps| must be < 1 for psi to stay positive")
        report = psi_derivative_cm_check(self)
        if not report.verdict:
            raise ParameterError(
                f"eps={self.eps:g} too large for b={self.b:g}: derivative not completely monotone "
                f"(worst margin {report.worst_margin:.3g} at lambda={report.grid[report.worst_index]:.4g})"
            )

    @property
    def a(self) -> float:
        return self.b ** (-self.alpha)

    def _eval(self, lam):
        out = np.zeros_like(lam)
        pos = lam > 0
        x = lam[pos]
        period = math.log(1.0 / self.b)
        out[pos] = x**self.alpha * (1.0 + self.eps * np.cos(2.0 * np.pi * np.log(x) / period))
        return out

    @property
    def descriptor(self):
        return f"semi_ml(alpha={self.alpha:g},b={self.b:g},eps={self.eps:g})"


@dataclass(frozen=True)
class GammaComposite(PsiExponent):
    """``(1 + psi)**t - 1``: the exponent behind gamma operational time."""

    base: PsiExponent
    t: float = 1.0

    def __post_init__(self):
        _check_positive("t", self.t)

    def _eval(self, lam):
        return np.expm1(self.t * np.log1p(self.base._eval(lam)))

    @property
    def descriptor(self):
        return f"gamma_composite({self.base.descriptor},t={self.t:g})"


@dataclass(frozen=True)
class LinearComposite(PsiExponent):
    """``t * psi``: exponential operational time with mean ``t``."""

    base: PsiExponent
    t: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.t) and self.t >= 0):
            raise ParameterError(f"t must be >= 0, got {self.t!r}")

    def _eval(self, lam):
        return self.t * self.base._eval(lam)

    @property
    def descriptor(self):
        return f"linear_composite({self.base.descriptor},t={self.t:g})"


@dataclass(frozen=True)
class PowerComposite(PsiExponent):
    """``psi**t``: Mittag-Leffler operational time of exponent ``t``."""

    base: PsiExponent
    t: float = 1.0

    def __post_init__(self):
        _check_positive("t", self.t)

    def _eval(self, lam):
        return self.base._eval(lam) ** self.t

    @property
    def descriptor(self):
        return f"power_composite({self.base.descriptor},t={self.t:g})"


def psi_eval(psi: PsiExponent, lam):
    return psi(lam)


# ---------------------------------------------------------------------------
# Laplace transforms
# ---------------------------------------------------------------------------


class LaplaceTransform:
    """Base class for evaluable Laplace transforms of laws on [0, inf)."""

    def __call__(self, lam):
        arr = _as_lambda(lam)
        return _unwrap(self._eval(arr), lam)

    def _eval(self, lam: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def descriptor(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(LaplaceTransform):
    """Exponential law with the given rate: ``rate / (rate + lambda)``."""

    rate: float = 1.0

    def __post_init__(self):
        _check_positive("rate", self.rate)

    def _eval(self, lam):
        return self.rate / (self.rate + lam)

    @property
    def descriptor(self):
        return f"exponential(rate={self.rate:g})"


@dataclass(frozen=True)
class Gamma(LaplaceTransform):
    """``(rate / (rate + lambda))**shape``."""

    shape: float = 1.0
    rate: float = 1.0

    def __post_init__(self):
        _check_positive("shape", self.shape)
        _check_positive("rate", self.rate)

    def _eval(self, lam):
        return np.exp(-self.shape * np.log1p(lam / self.rate))

    @property
    def descriptor(self):
        return f"gamma(shape={self.shape:g},rate={self.rate:g})"


@dataclass(frozen=True)
class MittagLeffler(LaplaceTransform):
    """``1 / (1 + (scale * lambda)**alpha)``."""

    alpha: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        _check_unit("alpha", self.alpha)
        _check_positive("scale", self.scale)

    def _eval(self, lam):
        return 1.0 / (1.0 + (self.scale * lam) ** self.alpha)

    @property
    def descriptor(self):
        return f"mittag_leffler(alpha={self.alpha:g},scale={self.scale:g})"


@dataclass(frozen=True)
class PositiveStable(LaplaceTransform):
    """``exp(-(scale * lambda)**alpha)``."""

    alpha: float = 0.5
    scale: float = 1.0

    def __post_init__(self):
        _check_unit("alpha", self.alpha)
        _check_positive("scale", self.scale)

    def _eval(self, lam):
        return np.exp(-((self.scale * lam) ** self.alpha))

    @property
    def descriptor(self):
        return f"positive_stable(alpha={self.alpha:g},scale={self.scale:g})"


@dataclass(frozen=True)
class Gid(LaplaceTransform):
    """``1 / (1 + psi(lambda))``."""

    psi: PsiExponent

    def _eval(self, lam):
        return 1.0 / (1.0 + self.psi._eval(lam))

    @property
    def descriptor(self):
        return f"gid({self.psi.descriptor})"


@dataclass(frozen=True)
class IncrementTransform(LaplaceTransform):
    """``exp(-s psi(lambda))``: the increment over time ``s`` of the process with exponent ``psi``."""

    psi: PsiExponent
    s: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.s) and self.s >= 0):
            raise ParameterError("s must be >= 0")

    def _eval(self, lam):
        return np.exp(-self.s * self.psi._eval(lam))

    @property
    def descriptor(self):
        return f"increment({self.psi.descriptor},s={self.s:g})"


@dataclass(frozen=True)
class GeometricConvolve(LaplaceTransform):
    """Transform of a Geometric(p) sum of i.i.d. copies: ``p phi / (1 - (1-p) phi)``."""

    phi: LaplaceTransform
    p: float

    def __post_init__(self):
        _check_unit("p", self.p)

    def _eval(self, lam):
        f = self.phi._eval(lam)
        q = 1.0 - self.p
        # 1 - q f written as p + q (1 - f) to keep precision when f ~ 1
        return self.p * f / (self.p + q * (1.0 - f))

    @property
    def descriptor(self):
        return f"geometric_convolve({self.phi.descriptor},p={self.p:g})"


@dataclass(frozen=True)
class PInverse(LaplaceTransform):
    """``g / (p + (1-p) g)``; need not be a Laplace transform (see :func:`cm_check`)."""

    g: LaplaceTransform
    p: float

    def __post_init__(self):
        _check_unit("p", self.p)

    def _eval(self, lam):
        f = self.g._eval(lam)
        return f / (self.p + (1.0 - self.p) * f)

    @property
    def descriptor(self):
        return f"p_inverse({self.g.descriptor},p={self.p:g})"


@dataclass(frozen=True, eq=False)
class Empirical(LaplaceTransform):
    """Sample mean of ``exp(-lambda * x)``."""

    sample: object  # SampleBatch; kept untyped to avoid an import cycle

    def _eval(self, lam):
        flat = np.ascontiguousarray(lam.reshape(-1))
        mean, _ = kernels.empirical_lt(_sample_values(self.sample), flat)
        return mean.reshape(lam.shape)

    @property
    def descriptor(self):
        return f"empirical({getattr(self.sample, 'descriptor', 'sample')})"


def lt_eval(g: LaplaceTransform, lam):
    return g(lam)


def geometric_convolve(phi: LaplaceTransform, p: float) -> GeometricConvolve:
    return GeometricConvolve(phi, p)


def p_inverse(g: LaplaceTransform, p: float) -> PInverse:
    return PInverse(g, p)


def _sample_values(sample) -> np.ndarray:
    values = getattr(sample, "values", sample)
    return np.ascontiguousarray(values, dtype=float)


# ---------------------------------------------------------------------------
# grid reports
# ---------------------------------------------------------------------------


@dataclass
class GridReport:
    """Per-point results of a check on an ascending grid.

    ``worst_margin`` is the smallest margin for checks where negative means a
    violation (CM checks), or the largest standardized deviation for band
    checks.  ``first_violation`` is ``(index, order)`` for CM checks.
    """

    grid: np.ndarray
    values: np.ndarray
    passed: np.ndarray
    verdict: bool
    worst_index: int
    worst_margin: float
    reference: np.ndarray | None = None
    se: np.ndarray | None = None
    first_violation: tuple | None = None
    label: str = ""
    notes: tuple = ()

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.passed = np.asarray(self.passed, dtype=bool)
        if np.any(np.diff(self.grid) <= 0):
            raise ParameterError("grid must be strictly increasing")
        arrays = [self.values, self.passed]
        for name in ("reference", "se"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=float)
                setattr(self, name, arr)
                arrays.append(arr)
        if any(a.shape != self.grid.shape for a in arrays):
            raise ParameterError("all report arrays must match the grid length")

    @property
    def worst_lambda(self) -> float:
        return float(self.grid[self.worst_index]) if self.grid.size else float("nan")

    def to_csv(self) -> str:
        return grid_report_csv(self)

    def write_csv(self, path) -> None:
        write_text(path, self.to_csv())


def fmt(x) -> str:
    """Deterministic 17-significant-digit formatting."""
    return format(float(x), ".17g")


def grid_report_csv(report: GridReport) -> str:
    lines = ["lambda,value,reference,se,pass"]
    for i, lam in enumerate(report.grid):
        ref = "" if report.reference is None else fmt(report.reference[i])
        se = "" if report.se is None else fmt(report.se[i])
        lines.append(f"{fmt(lam)},{fmt(report.values[i])},{ref},{se},{int(report.passed[i])}")
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> None:
    from pathlib import Path

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# complete monotonicity
# ---------------------------------------------------------------------------


def uniform_grid(lambda_min=CM_LAMBDA_MIN, lambda_max=CM_LAMBDA_MAX, points=CM_POINTS) -> np.ndarray:
    if not (0 < lambda_min < lambda_max and np.isfinite(lambda_max)):
        raise ParameterError("need 0 < lambda_min < lambda_max")
    return np.linspace(lambda_min, lambda_max, int(points))


def cm_tolerance(scale: float, order: int) -> float:
    """Rounding allowance for an order-``order`` forward difference of values of size ``scale``."""
    return CM_SAFETY * EPS * scale * 2.0**order


def cm_check_values(grid, values, K: int = CM_ORDER, scale: float | None = None, label="") -> GridReport:
    """Sign test of ``(-1)**k * Delta^k f >= -tol_k`` for ``k = 0..K`` on tabulated values."""
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    n = values.size
    if K < 1 or n < K + 1:
        raise ParameterError(f"need at least K+1={K + 1} points, got {n}")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise EvaluationError("non-finite function value", int(bad[0]))
    if scale is None:
        scale = float(np.max(np.abs(values))) if n else 0.0
    margins = np.full(n, np.inf)
    first = None
    diff = values.copy()
    for k in range(K + 1):
        if k:
            diff = np.diff(diff)
        m = (-1) ** k * diff + cm_tolerance(scale, k)
        margins[: m.size] = np.minimum(margins[: m.size], m)
        viol = np.flatnonzero(m < 0)
        if viol.size and (first is None or viol[0] < first[0]):
            first = (int(viol[0]), k)
    worst = int(np.argmin(margins))
    passed = margins >= 0
    return GridReport(
        grid=grid,
        values=values,
        passed=passed,
        verdict=bool(passed.all()),
        worst_index=worst,
        worst_margin=float(margins[worst]),
        first_violation=first,
        label=label,
    )


def cm_check(
    f: Callable,
    lambda_min: float = CM_LAMBDA_MIN,
    lambda_max: float = CM_LAMBDA_MAX,
    points: int = CM_POINTS,
    K: int = CM_ORDER,
) -> GridReport:
    """Numerical complete-monotonicity check of ``f`` on a uniform grid.

    Forward differences of a completely monotone function alternate in sign for
    any step, so this never rejects a genuinely CM function beyond rounding.
    """
    if K < 2:
        raise ParameterError("order K must be >= 2")
    if points < K + 1:
        raise ParameterError("points must be >= K+1")
    grid = uniform_grid(lambda_min, lambda_max, points)
    try:
        values = np.asarray(f(grid), dtype=float)
    except (EvaluationError, InvalidTransformError):
        raise
    except Exception:
        values = np.empty(grid.size)
        for i, lam in enumerate(grid):
            try:
                values[i] = f(lam)
            except Exception as exc:  # noqa: BLE001
                raise EvaluationError(f"evaluation failed: {exc}", i) from exc
    if values.shape != grid.shape:
        values = np.broadcast_to(values, grid.shape).astype(float)
    return cm_check_values(grid, values, K, label=getattr(f, "descriptor", ""))


def _derivative_report(grid, psi_values, K, label):
    h = grid[1] - grid[0]
    deriv = (psi_values[2:] - psi_values[:-2]) / (2.0 * h)
    # rounding in psi is relative to 1 + psi (psi is often formed as 1/g - 1)
    scale = (1.0 + float(np.max(np.abs(psi_values)))) / h
    return cm_check_values(grid[1:-1], deriv, K - 1, scale=scale, label=label)


def psi_derivative_cm_check(
    psi: PsiExponent,
    lambda_min=CM_LAMBDA_MIN,
    lambda_max=CM_LAMBDA_MAX,
    points=CM_POINTS,
    K=CM_ORDER,
) -> GridReport:
    """CM check of the central-difference derivative proxy of ``psi``."""
    grid = uniform_grid(lambda_min, lambda_max, points)
    if grid.size < K + 2:
        raise ParameterError("too few points for the derivative proxy")
    return _derivative_report(grid, psi._eval(grid), K, label=psi.descriptor)


PSI_ZERO_TOL = 1e-3


def gid_check(
    g: LaplaceTransform,
    lambda_min=CM_LAMBDA_MIN,
    lambda_max=CM_LAMBDA_MAX,
    points=CM_POINTS,
    K=CM_ORDER,
) -> GridReport:
    """Check that ``g = 1/(1+psi)`` with ``psi(0) = 0`` and ``psi'`` completely monotone.

    The reported grid is the interior of the uniform grid, where the central
    difference proxy for ``psi'`` is defined.
    """
    grid = uniform_grid(lambda_min, lambda_max, points)
    if grid.size < K + 2:
        raise ParameterError("too few points for the derivative proxy")
    gv = np.asarray(g(grid), dtype=float)
    bad = np.flatnonzero(~(gv > 0))
    if bad.size:
        raise InvalidTransformError(f"g <= 0 at lambda={grid[bad[0]]:.6g}")
    psi = 1.0 / gv - 1.0
    report = _derivative_report(grid, psi, K, label=getattr(g, "descriptor", ""))
    psi0 = 1.0 / float(g(0.0)) - 1.0
    if abs(psi0) > PSI_ZERO_TOL:
        report.verdict = False
        report.notes = report.notes + (f"psi(0)={psi0:.3g} is not 0",)
    return report


# ---------------------------------------------------------------------------
# empirical transforms and distances
# ---------------------------------------------------------------------------


def empirical_lt(sample, grid) -> GridReport:
    """Empirical transform with per-point standard errors (bands in ``se``)."""
    values = _sample_values(sample)
    if values.size == 0:
        raise ParameterError("sample must be nonempty")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ParameterError("sample values must be finite and >= 0")
    grid = np.ascontiguousarray(_as_lambda(np.atleast_1d(grid)), dtype=float)
    mean, se = kernels.empirical_lt(values, grid)
    return GridReport(
        grid=grid,
        values=mean,
        se=se,
        passed=np.ones(grid.size, dtype=bool),
        verdict=True,
        worst_index=0,
        worst_margin=0.0,
        label=f"empirical({getattr(sample, 'descriptor', 'sample')})",
    )


def band_check(report: GridReport, g: LaplaceTransform, z: float = 4.0) -> GridReport:
    """Attach ``g`` as reference; a point passes when ``|value - ref| <= z * se``."""
    if report.se is None:
        raise ParameterError("report carries no standard errors")
    ref = np.asarray(g(report.grid), dtype=float)
    dev = np.abs(report.values - ref)
    passed = dev <= z * report.se
    with np.errstate(divide="ignore", invalid="ignore"):
        zscore = np.where(report.se > 0, dev / report.se, np.where(dev > 0, np.inf, 0.0))
    worst = int(np.argmax(zscore))
    return GridReport(
        grid=report.grid,
        values=report.values,
        reference=ref,
        se=report.se,
        passed=passed,
        verdict=bool(passed.all()),
        worst_index=worst,
        worst_margin=float(zscore[worst]),
        label=f"{report.label} vs {getattr(g, 'descriptor', 'reference')}",
        notes=report.notes,
    )


def _values_on(obj, grid):
    if isinstance(obj, GridReport):
        if obj.grid.shape != grid.shape or not np.array_equal(obj.grid, grid):
            raise ParameterError("report grid does not match the comparison grid")
        return obj.values
    return np.asarray(obj(grid), dtype=float)


class SupDistance(NamedTuple):
    distance: float
    argmax: float


def lt_sup_distance(a, b, grid=None) -> SupDistance:
    """Sup over ``grid`` of ``|a - b|``; reports are compared by their point values."""
    if grid is None:
        for obj in (a, b):
            if isinstance(obj, GridReport):
                grid = obj.grid
                break
        else:
            raise ParameterError("a grid is required when neither argument is a report")
    grid = _as_lambda(np.atleast_1d(grid))
    diff = np.abs(_values_on(a, grid) - _values_on(b, grid))
    i = int(np.argmax(diff))
    return SupDistance(float(diff[i]), float(grid[i]))


def semi_ml_residual(psi: PsiExponent, p: float, c: float, grid) -> float:
    """Sup of ``|psi(lambda) - psi(c lambda) / p|``; zero means thinning invariance up to scale c."""
    _check_unit("p", p, closed_high=False)
    _check_unit("c", c, closed_high=False)
    grid = _as_lambda(np.atleast_1d(grid))
    return float(np.max(np.abs(psi._eval(grid) - psi._eval(c * grid) / p)))


class PowerLawFit(NamedTuple):
    A: float
    alpha: float
    residual: float


def fit_power_law(psi, grid) -> PowerLawFit:
    """Least-squares fit of ``ln psi = ln A + alpha ln lambda``; residual is the RMS misfit."""
    grid = _as_lambda(np.atleast_1d(grid))
    values = psi._eval(grid) if isinstance(psi, PsiExponent) else np.asarray(psi, dtype=float)
    if values.shape != grid.shape:
        raise ParameterError("values and grid differ in length")
    if np.any(grid <= 0) or np.any(~(values > 0)):
        raise DomainError("power-law fit needs lambda > 0 and psi > 0")
    x = np.log(grid)
    y = np.log(values)
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return PowerLawFit(float(np.exp(coef[0])), float(coef[1]), float(np.sqrt(np.mean(resid**2))))


# ---------------------------------------------------------------------------
# two-sample Kolmogorov-Smirnov
# ---------------------------------------------------------------------------


def ks_critical_value(level: float) -> float:
    """Asymptotic coefficient ``c(level) = sqrt(-ln(level/2) / 2)``; ``c(0.05) ~ 1.358``."""
    _check_unit("level", level, closed_high=False)
    return math.sqrt(-0.5 * math.log(level / 2.0))


class KSResult(NamedTuple):
    statistic: float
    threshold: float
    passed: bool
    n1: int
    n2: int


def ks_two_sample(s1, s2, level: float = 0.05) -> KSResult:
    a = np.sort(_sample_values(s1))
    b = np.sort(_sample_values(s2))
    if a.size == 0 or b.size == 0:
        raise ParameterError("both samples must be nonempty")
    d = float(kernels.ks_statistic(a, b))
    n, m = a.size, b.size
    threshold = ks_critical_value(level) * math.sqrt((n + m) / (n * m))
    return KSResult(d, threshold, d <= threshold, n, m)


def log_grid(lo: float, hi: float, points: int) -> np.ndarray:
    return np.geomspace(lo, hi, int(points))


