"""Cox-and-renewal classification and the geometric-sum limit.

A renewal process with inter-arrival transform ``g`` is the p-thinning of some
renewal process exactly when ``g / (p + (1-p) g)`` is again a Laplace
transform; requiring that for every ``p`` is the same as ``g`` being g.i.d.
The checks here test this on a finite ``p`` grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, nnls

from . import kernels, rng as rngmod
from . import transforms as tf
from .errors import FitError, ParameterError

DEFAULT_P_GRID = (0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95)


@dataclass
class CoxVerdict:
    p_grid: tuple
    reports: list  # one cm_check GridReport per p
    verdict: bool
    worst_p: float
    worst_lambda: float
    worst_margin: float
    gid: tf.GridReport | None = None

    @property
    def per_p(self) -> list[bool]:
        return [r.verdict for r in self.reports]

    @property
    def gid_verdict(self) -> bool | None:
        return None if self.gid is None else self.gid.verdict

    def to_csv(self) -> str:
        lines = ["p,verdict,worst_lambda,worst_margin"]
        for p, r in zip(self.p_grid, self.reports):
            lines.append(f"{tf.fmt(p)},{'PASS' if r.verdict else 'FAIL'},{tf.fmt(r.worst_lambda)},{tf.fmt(r.worst_margin)}")
        return "\n".join(lines) + "\n"


def cox_renewal_check(
    g: tf.LaplaceTransform,
    p_grid=DEFAULT_P_GRID,
    lambda_min=tf.CM_LAMBDA_MIN,
    lambda_max=tf.CM_LAMBDA_MAX,
    points=tf.CM_POINTS,
    K=tf.CM_ORDER,
    workers=1,
) -> CoxVerdict:
    """CM check of every p-inverse of ``g``; the g.i.d. check of ``g`` rides along for comparison.

    The overall verdict is the conjunction of the per-p verdicts only, so the
    agreement with ``gid_check`` is an observable rather than built in.
    """
    p_grid = tuple(float(p) for p in p_grid)
    if not p_grid:
        raise ParameterError("p_grid must be nonempty")
    for p in p_grid:
        tf._check_unit("p", p, closed_high=False)
    reports = rngmod.map_chunks(
        lambda i: tf.cm_check(tf.p_inverse(g, p_grid[i]), lambda_min, lambda_max, points, K),
        len(p_grid),
        workers,
    )
    margins = [r.worst_margin for r in reports]
    w = int(np.argmin(margins))
    return CoxVerdict(
        p_grid=p_grid,
        reports=reports,
        verdict=all(r.verdict for r in reports),
        worst_p=p_grid[w],
        worst_lambda=reports[w].worst_lambda,
        worst_margin=margins[w],
        gid=tf.gid_check(g, lambda_min, lambda_max, points, K),
    )


# ---------------------------------------------------------------------------
# (1/n)-thinning limit
# ---------------------------------------------------------------------------


def thinning_limit_lt(psi: tf.PsiExponent, n: int, lam):
    """Transform of the (1/n)-thinned process whose gaps have transform ``exp(-psi/n)``.

    ``(1/n) e^{-x} / (1 - (1 - 1/n) e^{-x})`` with ``x = psi/n`` equals
    ``1 / (1 + n expm1(x))``, which stays accurate for large ``n``.
    """
    if int(n) != n or n < 1:
        raise ParameterError("n must be a positive integer")
    arr = tf._as_lambda(lam)
    x = psi._eval(arr) / n
    with np.errstate(over="ignore"):
        out = 1.0 / (1.0 + n * np.expm1(x))
    return tf._unwrap(out, lam)


@dataclass
class LimitReport:
    n_schedule: tuple
    sup_errors: tuple
    order: float
    verdict: bool
    final_error: float

    def to_csv(self) -> str:
        lines = ["n,sup_error"]
        lines.extend(f"{n},{tf.fmt(e)}" for n, e in zip(self.n_schedule, self.sup_errors))
        return "\n".join(lines) + "\n"


LIMIT_TOL = 1e-3
LIMIT_MIN_ORDER = 0.9


def verify_thinning_limit(psi: tf.PsiExponent, lambda_grid=None, n_schedule=(100, 1000, 10000)) -> LimitReport:
    """Sup error to ``1/(1+psi)`` along ``n_schedule`` and the fitted log-log convergence order."""
    n_schedule = tuple(int(n) for n in n_schedule)
    if len(n_schedule) < 2 or any(b <= a for a, b in zip(n_schedule, n_schedule[1:])):
        raise ParameterError("n_schedule must be strictly ascending with at least two entries")
    if lambda_grid is None:
        lambda_grid = tf.log_grid(1e-2, 10.0, 200)
    grid = tf._as_lambda(np.atleast_1d(lambda_grid))
    target = 1.0 / (1.0 + psi._eval(grid))
    errors = tuple(float(np.max(np.abs(thinning_limit_lt(psi, n, grid) - target))) for n in n_schedule)
    slope = np.polyfit(np.log(n_schedule), np.log(errors), 1)[0]
    order = float(-slope)
    return LimitReport(
        n_schedule=n_schedule,
        sup_errors=errors,
        order=order,
        verdict=errors[-1] < LIMIT_TOL and order >= LIMIT_MIN_ORDER,
        final_error=errors[-1],
    )


# ---------------------------------------------------------------------------
# geometric sums of small stable summands
# ---------------------------------------------------------------------------

DEMO_GRID = (0.5, 1.0, 2.0)


def geometric_sum_limit_demo(
    alpha: float, n: int, m: int, seed: int, grid=DEMO_GRID, z: float = 4.0, workers=1, target=None
) -> tf.GridReport:
    """Simulate ``m`` draws of ``sum_{j<=N} n**(-1/alpha) S_j`` with ``N ~ Geometric(1/n)``.

    The empirical transform is compared with ``target`` (default
    ``1/(1 + lambda**alpha)``).  The distance from the exact finite-``n``
    transform to the target is recorded in ``notes`` as the bias budget.
    """
    tf._check_unit("alpha", alpha)
    if int(n) != n or n < 1 or int(m) != m or m < 1:
        raise ParameterError("n and m must be positive integers")
    n, m = int(n), int(m)
    p = 1.0 / n
    scale = n ** (-1.0 / alpha)
    values = rngmod.generate(
        lambda r, size: kernels.geometric_stable_sums(r, size, p, alpha, scale), m, seed, workers
    )
    report = tf.empirical_lt(values, np.asarray(grid, dtype=float))
    report = tf.band_check(report, target or tf.MittagLeffler(alpha, 1.0), z)
    exact = thinning_limit_lt(tf.Power(1.0, alpha), n, report.grid)
    bias = float(np.max(np.abs(exact - report.reference)))
    report.label = f"geometric_sum(alpha={alpha:g},n={n},m={m})"
    report.notes = (f"finite-n bias {bias:.3g}", f"backend {kernels.BACKEND}")
    return report


# ---------------------------------------------------------------------------
# finite-mixture discretization of psi
# ---------------------------------------------------------------------------


@dataclass
class MixtureFit:
    mixture: tf.FiniteMixture
    residual: float
    grid: np.ndarray = field(repr=False)

    def to_csv(self) -> str:
        lines = ["weight,scale"]
        lines.extend(f"{tf.fmt(c)},{tf.fmt(b)}" for c, b in zip(self.mixture.weights, self.mixture.scales))
        return "\n".join(lines) + "\n"


def _mixture_values(logc, logb, lam):
    # huge trial b_j saturate to a step, which is the right limit
    with np.errstate(over="ignore"):
        return -np.expm1(-np.outer(lam, np.exp(logb))) @ np.exp(logc)


def discretize_psi(psi: tf.PsiExponent, k: int, lambda_max: float = 10.0, points: int = 256) -> MixtureFit:
    """Approximate ``psi`` by ``sum_j c_j (1 - exp(-b_j lambda))`` with ``c_j >= 0``.

    Nonnegative least squares on log-spaced ``b_j`` gives a start; a joint
    refinement of ``(log c, log b)`` follows and is kept only if it lowers the
    residual.  The fit is on ``[lambda_max/1000, lambda_max]``, weighted by
    ``1/(1+psi)`` so it tracks ``1/(1+psi)``.  The residual is the weighted RMS.
    """
    if int(k) != k or k < 1:
        raise ParameterError("k must be a positive integer")
    tf._check_positive("lambda_max", lambda_max)
    k = int(k)
    lam = tf.log_grid(lambda_max * 1e-3, lambda_max, points)
    target = psi._eval(lam)
    w = 1.0 / (1.0 + target)
    lo, hi = 0.1 / lambda_max, 10.0 / lam[0]
    b0 = np.geomspace(lo, hi, k) if k > 1 else np.array([math.sqrt(lo * hi)])
    basis = -np.expm1(-np.outer(lam, b0))
    c0, _ = nnls(basis * w[:, None], target * w)

    def rms(logc, logb):
        return float(np.sqrt(np.mean((w * (_mixture_values(logc, logb, lam) - target)) ** 2)))

    floor = 1e-12 * max(1.0, float(np.max(target)))
    logc0 = np.log(np.maximum(c0, floor))
    logb0 = np.log(b0)
    best = (logc0, logb0, rms(logc0, logb0))

    def residuals(theta):
        return w * (_mixture_values(theta[:k], theta[k:], lam) - target)

    try:
        sol = least_squares(residuals, np.concatenate([logc0, logb0]), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        cand = rms(sol.x[:k], sol.x[k:])
        if np.all(np.isfinite(sol.x)) and cand < best[2]:
            best = (sol.x[:k], sol.x[k:], cand)
    except (ValueError, np.linalg.LinAlgError):
        pass
    logc, logb, res = best
    if not np.isfinite(res):
        raise FitError("mixture fit diverged", res)
    c = np.exp(logc)
    b = np.exp(logb)
    keep = c > floor
    if not keep.any():
        raise FitError("all mixture weights vanished", res)
    order = np.argsort(b[keep])
    mixture = tf.FiniteMixture(tuple(c[keep][order]), tuple(b[keep][order]))
    return MixtureFit(mixture, res, lam)
