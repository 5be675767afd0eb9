"""Pure numpy versions of the hot kernels (fallback when ``_core`` is not built)."""
import numpy as np

BACKEND = "numpy"

_BLOCK = 1 << 18


def open_uniform(rng, size):
    u = rng.random(size)
    u[u == 0.0] = 2.0**-54
    return u


def kanter(u_angle, u_exp, alpha):
    """Positive alpha-stable variates (LT exp(-lambda**alpha)) from two open uniforms."""
    theta = np.pi * u_angle
    w = -np.log(u_exp)
    c = np.sin(theta)
    return np.sin(alpha * theta) / c * np.exp(
        (1.0 - alpha) / alpha * np.log(np.sin((1.0 - alpha) * theta) / (c * w))
    )


def geometric_counts(rng, p, size):
    """Geometric(p) counts on {1, 2, ...}."""
    if p >= 1.0:
        return np.ones(size, dtype=np.int64)
    if p > 0.99:
        # log1p(-p) loses precision here; count Bernoulli failures directly
        counts = np.ones(size, dtype=np.int64)
        active = np.arange(size)
        while active.size:
            failed = rng.random(active.size) >= p
            active = active[failed]
            counts[active] += 1
        return counts
    x = np.ceil(np.log(open_uniform(rng, size)) / np.log1p(-p))
    return np.maximum(x, 1.0).astype(np.int64)


def empirical_lt(x, grid):
    x = np.ascontiguousarray(x, dtype=float)
    grid = np.ascontiguousarray(grid, dtype=float)
    n = x.size
    mean = np.empty(grid.size)
    se = np.empty(grid.size)
    for j, lam in enumerate(grid):
        shift = np.exp(-lam * x[0])
        s1 = 0.0
        s2 = 0.0
        for start in range(0, n, _BLOCK):
            y = np.exp(-lam * x[start:start + _BLOCK]) - shift
            s1 += y.sum()
            s2 += np.dot(y, y)
        mean[j] = shift + s1 / n
        var = (s2 - s1 * s1 / n) / (n - 1) if n > 1 else 0.0
        se[j] = np.sqrt(var / n) if var > 0.0 else 0.0
    return mean, se


def ks_statistic(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    both = np.concatenate([a, b])
    # integer numerator |i n2 - j n1|, one rounding at the end
    i = np.searchsorted(a, both, side="right").astype(np.int64)
    j = np.searchsorted(b, both, side="right").astype(np.int64)
    return float(np.max(np.abs(i * b.size - j * a.size))) / (a.size * b.size)


def segment_sums(values, counts):
    values = np.asarray(values, dtype=float)
    counts = np.asarray(counts, dtype=np.int64)
    out = np.zeros(counts.size)
    nonempty = counts > 0
    if not nonempty.any():
        return out
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])[nonempty]
    out[nonempty] = np.add.reduceat(values, starts)
    return out


def geometric_stable_sums(rng, m, p, alpha, scale):
    counts = geometric_counts(rng, p, m)
    if alpha >= 1.0:
        return scale * counts.astype(float)
    out = np.empty(m)
    # bounded-memory passes over groups of draws
    cum = np.cumsum(counts)
    lo = 0
    while lo < m:
        base = cum[lo - 1] if lo else 0
        hi = max(int(np.searchsorted(cum, base + _BLOCK * 8, side="right")), lo + 1)
        c = counts[lo:hi]
        total = int(c.sum())
        s = kanter(open_uniform(rng, total), open_uniform(rng, total), alpha)
        out[lo:hi] = segment_sums(s, c)
        lo = hi
    return scale * out
