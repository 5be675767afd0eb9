"""End-to-end acceptance checks, one test per criterion, at full size and pinned seeds.

Each test prints a single ``PASS``/``FAIL`` line; the lines are repeated in
the pytest terminal summary.  Run standalone with ``python tests/test_acceptance.py``.
"""
import time

import numpy as np
import pytest

from gidlab import cli, coxcheck as cx, renewal as rn, samplers as sm, subordination as sb
from gidlab import transforms as tf

SEED = 7
RESULTS = {}


def record(number, title, ok, detail, started):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title} | {detail} | {time.perf_counter() - started:.1f}s"
    RESULTS[number] = line
    print(line)
    return ok


def band(batch, g, grid):
    return tf.band_check(tf.empirical_lt(batch, grid), g, z=4.0)


def test_c01_poisson_fixed_point():
    t0 = time.perf_counter()
    rep = rn.verify_thinning_invariance(rn.PoissonFamily(1.0), 0.3, 100_000, seed=SEED, c=0.3)
    ok = rep.verdict and rep.horizon == 1e5
    detail = f"D={rep.statistic:.5f} <= {rep.threshold:.5f}, {rep.n_thinned} thinned epochs"
    assert record(1, "Poisson thin p=0.3 + contract c=0.3 vs Exp(1)", ok, detail, t0)


def test_c02_mittag_leffler_invariance():
    t0 = time.perf_counter()
    c = 0.4 ** (1 / 0.6)
    good = rn.verify_thinning_invariance(rn.MLFamily(0.6), 0.4, 100_000, seed=SEED, c=c)
    bad = rn.verify_thinning_invariance(rn.MLFamily(0.6), 0.4, 100_000, seed=SEED, c=0.4)
    ok = good.verdict and not bad.verdict
    detail = (
        f"c={c:.4f}: D={good.statistic:.5f} <= {good.threshold:.5f}; "
        f"c=0.4: D={bad.statistic:.5f} > {bad.threshold:.5f}"
    )
    assert record(2, "ML(0.6) thin p=0.4 invariance + wrong-scale control", ok, detail, t0)


def test_c03_geometric_convolution():
    t0 = time.perf_counter()
    p = 0.5
    batch = sm.sample_geometric_compound(sm.ExponentialLaw(1.0), p, 1_000_000, seed=SEED)
    grid = [0.1, 0.5, 1.0, 2.0, 10.0]
    rep = band(batch, tf.geometric_convolve(tf.Exponential(1.0), p), grid)
    closed = 1.0 / (1.0 + np.asarray(grid) / p)
    ok = rep.verdict and np.allclose(rep.reference, closed, rtol=1e-14)
    assert record(3, "geometric compound of Exp(1), p=0.5", ok, f"max |z|={rep.worst_margin:.2f}", t0)


def test_c04_subordination_closed_forms():
    t0 = time.perf_counter()
    base = sb.Stable(0.7)
    grid = tf.log_grid(0.1, 10, 10)
    lam = grid
    cases = [
        (sb.GammaTime(0.5), (1 + lam**0.7) ** -0.5),
        (sb.ExponentialTime(2.0), 1 / (1 + 2 * lam**0.7)),
        (sb.MLTime(0.5), 1 / (1 + lam**0.35)),
    ]
    parts, ok = [], True
    for directing, expected in cases:
        batch = sb.sample_subordinated(base, directing, 1_000_000, seed=SEED)
        rep = band(batch, sb.closed_form_subordinated_lt(base.psi, directing), grid)
        ok &= rep.verdict and np.allclose(rep.reference, expected, rtol=1e-13)
        parts.append(f"{directing.descriptor} |z|<={rep.worst_margin:.2f}")
    assert record(4, "Stable(0.7) under gamma/exponential/ML time", ok, "; ".join(parts), t0)


def test_c05_gid_classifier():
    t0 = time.perf_counter()
    expected = {0.25: True, 0.5: True, 1.0: True, 1.5: False, 2.0: False}
    got = {s: tf.gid_check(tf.Gamma(s, 1.0), K=6).verdict for s in expected}
    h = 1e-3

    def proxy(x):
        return (((1 + x + h) ** 2 - 1) - ((1 + x) ** 2 - 1)) / h

    cm = {
        "exp(-l)": (tf.cm_check(lambda x: np.exp(-x), K=6).verdict, True),
        "1/(1+l)": (tf.cm_check(lambda x: 1 / (1 + x), K=6).verdict, True),
        "d/dl[(1+l)^2-1]": (tf.cm_check(proxy, K=6).verdict, False),
    }
    wrong = [f"gamma({s})" for s in expected if got[s] != expected[s]]
    wrong += [name for name, (v, e) in cm.items() if v != e]
    ok = not wrong
    detail = "0 false results" if ok else "wrong: " + ", ".join(wrong)
    assert record(5, "gid_check on Gamma shapes, cm_check on knowns (K=6)", ok, detail, t0)


def test_c06_cox_biconditional():
    t0 = time.perf_counter()
    matrix = [
        tf.Exponential(1.0),
        tf.Gamma(0.5, 1.0),
        tf.Gamma(2.0, 1.0),
        tf.MittagLeffler(0.6, 1.0),
        tf.Gid(tf.CompoundExp(1.0, 1.0)),
    ]
    rows, ok = [], True
    for g in matrix:
        cox = cx.cox_renewal_check(g).verdict
        gid = tf.gid_check(g).verdict
        ok &= cox == gid
        rows.append(f"{g.descriptor.split('(')[0]}:{'P' if cox else 'F'}/{'P' if gid else 'F'}")
    assert record(6, "cox verdict == gid verdict on family matrix", ok, " ".join(rows), t0)


def test_c07_thinning_limit():
    t0 = time.perf_counter()
    grid = tf.log_grid(1e-2, 10, 200)
    parts, ok = [], True
    for psi in (tf.Power(1.0, 1.0), tf.Power(1.0, 0.5), tf.CompoundExp(1.0, 1.0)):
        rep = cx.verify_thinning_limit(psi, grid, (100, 1000, 10_000))
        ok &= rep.verdict and rep.final_error < 1e-3 and rep.order >= 0.9
        parts.append(f"{psi.descriptor}: err={rep.final_error:.2e} order={rep.order:.3f}")
    assert record(7, "(1/n)-thinning limit to 1/(1+psi)", ok, "; ".join(parts), t0)


@pytest.mark.slow
def test_c08_geometric_sum_limit():
    t0 = time.perf_counter()
    rep = cx.geometric_sum_limit_demo(0.6, 1000, 1_000_000, seed=SEED, grid=(0.5, 1.0, 2.0), z=4.0, workers=0)
    elapsed = time.perf_counter() - t0
    ok = rep.verdict and elapsed <= 120.0
    detail = f"max |z|={rep.worst_margin:.2f}, {'; '.join(rep.notes)}"
    assert record(8, "geometric sums of n^(-1/0.6)-scaled stables -> ML(0.6)", ok, detail, t0)


def test_c09_sampler_oracles():
    t0 = time.perf_counter()
    parts, ok = [], True
    for alpha in (0.3, 0.5, 0.9):
        batch = sm.sample_positive_stable(alpha, 1_000_000, seed=SEED)
        rep = band(batch, tf.PositiveStable(alpha), [0.5, 1.0, 2.0])
        ok &= rep.verdict
        parts.append(f"stable({alpha}) |z|<={rep.worst_margin:.2f}")
    ks = tf.ks_two_sample(
        sm.sample_mittag_leffler(1.0, 1.0, 100_000, seed=SEED), sm.sample_exponential(1.0, 100_000, seed=SEED + 1)
    )
    ok &= ks.passed
    parts.append(f"ML(1) vs Exp(1) D={ks.statistic:.5f} <= {ks.threshold:.5f}")
    assert record(9, "positive-stable LT oracle; ML(1) == Exp(1)", ok, "; ".join(parts), t0)


CLI_RUNS = {
    "sample": ["--family", "ml", "--alpha", "0.6", "--n", "200000"],
    "thin-invariance": ["--family", "ml", "--p", "0.4", "--n", "200000"],
    "lt-compare": ["--family", "geom-compound", "--p", "0.5", "--n", "200000"],
    "gid-check": ["--family", "gamma", "--shape", "0.5"],
    "cox-check": ["--family", "gamma", "--shape", "2"],
    "subordinate": ["--base", "stable", "--directing", "gamma", "--t", "0.5", "--n", "200000"],
    "thinning-limit": ["--psi", "power", "--alpha", "0.5"],
    "geom-sum-limit": ["--alpha", "0.6", "--n", "100", "--m", "200000"],
    "discretize-psi": ["--psi", "power", "--k", "8"],
}


def test_c10_cli_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    assert set(CLI_RUNS) == set(cli.COMMANDS)
    differing = []
    for cmd, args in CLI_RUNS.items():
        blobs = set()
        for workers in (1, 2, 8):
            out = tmp_path / f"{cmd}-{workers}.csv"
            code = cli.run([cmd, *args, "--seed", str(SEED), "--workers", str(workers), "--out", str(out)])
            if code == 2 or not out.exists():
                differing.append(f"{cmd}(exit {code})")
                break
            blobs.add(out.read_bytes())
        else:
            if len(blobs) != 1:
                differing.append(cmd)
    capsys.readouterr()
    ok = not differing
    detail = f"{len(CLI_RUNS)} subcommands x workers 1,2,8" + ("" if ok else "; differ: " + ", ".join(differing))
    assert record(10, "byte-identical CLI CSV across worker counts", ok, detail, t0)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
