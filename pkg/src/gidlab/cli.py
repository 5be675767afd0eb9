"""Experiment runner: ``gidlab <subcommand> [flags]``.

Every subcommand writes one CSV artifact (``--out``) and prints exactly one
verdict line on standard output.  Exit codes: 0 pass, 1 statistical or
criterion failure, 2 usage or runtime error.

Parameters can also come from a flat ``key=value`` file (``--config``);
flags given on the command line override file values.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import coxcheck, renewal, samplers, subordination
from . import transforms as tf
from .errors import GidlabError, ParameterError

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class ConfigError(GidlabError, ValueError):
    pass


def _floats(text):
    return tuple(float(x) for x in str(text).split(",") if x.strip())


def _ints(text):
    return tuple(int(x) for x in str(text).split(",") if x.strip())


# (type, default, help) per key; keys double as flag names with '_' -> '-'
COMMON = {
    "seed": (int, 7, "base seed of all random streams"),
    "workers": (int, 0, "worker threads; 0 means one per processor (output does not depend on it)"),
    "out": (str, None, "CSV output path (default: <subcommand>.csv)"),
}

LAW_KEYS = {
    "rate": (float, 1.0, "rate (exponential / gamma)"),
    "shape": (float, 1.0, "gamma shape"),
    "alpha": (float, 0.6, "stable / Mittag-Leffler exponent"),
    "scale": (float, 1.0, "Mittag-Leffler scale"),
    "p": (float, 0.5, "geometric success probability"),
    "inner": (str, "exponential", "inner law of geom-compound: exponential | ml"),
}

PSI_KEYS = {
    "A": (float, 1.0, "power-law coefficient"),
    "alpha": (float, 0.6, "power-law exponent"),
    "mu": (float, 1.0, "compound-exponential jump rate"),
    "theta": (float, 1.0, "compound-exponential jump-size rate"),
    "b": (float, 0.01, "semi-ML period base"),
    "eps": (float, 0.01, "semi-ML perturbation size"),
}

GRID_KEYS = {
    "lambda_min": (float, tf.CM_LAMBDA_MIN, "smallest lambda"),
    "lambda_max": (float, tf.CM_LAMBDA_MAX, "largest lambda"),
    "points": (int, tf.CM_POINTS, "grid points"),
    "K": (int, tf.CM_ORDER, "highest finite-difference order"),
}

LT_FAMILIES = ("exponential", "gamma", "ml", "gid-power", "gid-compound", "gid-semi-ml")

COMMANDS = {
    "sample": dict(
        help="draw a seeded sample and write it as CSV",
        exercises="geometric compounding of i.i.d. summands; Mittag-Leffler and positive stable laws",
        keys={
            "family": (str, "ml", "exponential | gamma | geometric | stable | ml | geom-compound"),
            **LAW_KEYS,
            "n": (int, 1000, "sample size"),
        },
    ),
    "thin-invariance": dict(
        help="p-thin then contract a renewal process and KS-compare with the original law",
        exercises="Renyi's Poisson characterization and the invariance of semi-Mittag-Leffler renewal "
        "processes under p-thinning with contraction c = p**(1/alpha)",
        keys={
            "family": (str, "poisson", "poisson | ml"),
            "rate": (float, 1.0, "Poisson rate"),
            "alpha": (float, 0.6, "Mittag-Leffler exponent"),
            "p": (float, 0.3, "retention probability"),
            "c": (float, None, "contraction factor (default p**(1/alpha); other values are negative controls)"),
            "n": (int, 100000, "epochs before thinning"),
            "level": (float, 0.05, "KS test level"),
        },
    ),
    "lt-compare": dict(
        help="empirical Laplace transform of a sampled law against its closed form (z*se bands)",
        exercises="the geometric-convolution transform identity and the sampler oracles",
        keys={
            "family": (str, "geom-compound", "exponential | gamma | stable | ml | geom-compound"),
            **LAW_KEYS,
            "n": (int, 100000, "sample size"),
            "lambda_min": (float, 0.1, "smallest lambda (log grid)"),
            "lambda_max": (float, 10.0, "largest lambda (log grid)"),
            "points": (int, 10, "grid points"),
            "z": (float, 4.0, "band half-width in standard errors"),
        },
    ),
    "gid-check": dict(
        help="numerical geometric-infinite-divisibility check of a Laplace transform",
        exercises="the characterization g = 1/(1+psi), psi(0)=0, psi' completely monotone",
        keys={
            "family": (str, "gamma", " | ".join(LT_FAMILIES)),
            "shape": (float, 0.5, "gamma shape"),
            "rate": (float, 1.0, "rate"),
            "scale": (float, 1.0, "Mittag-Leffler scale"),
            **PSI_KEYS,
            **GRID_KEYS,
        },
    ),
    "cox-check": dict(
        help="decide whether a renewal inter-arrival law gives a Cox-and-renewal process",
        exercises="a renewal process is Cox iff its inter-arrival law is g.i.d. "
        "(every p-inverse must be a Laplace transform)",
        keys={
            "family": (str, "gamma", " | ".join(LT_FAMILIES)),
            "shape": (float, 0.5, "gamma shape"),
            "rate": (float, 1.0, "rate"),
            "scale": (float, 1.0, "Mittag-Leffler scale"),
            **PSI_KEYS,
            "p_grid": (_floats, coxcheck.DEFAULT_P_GRID, "comma-separated thinning probabilities"),
            **GRID_KEYS,
        },
    ),
    "subordinate": dict(
        help="subordinate a stable or compound-Poisson process by a random operational time",
        exercises="gamma (t<=1), exponential (any t) and Mittag-Leffler (t<=1) operational times "
        "give g.i.d. increments with transforms (1+psi)^-t, 1/(1+t psi), 1/(1+psi^t)",
        keys={
            "base": (str, "stable", "stable | cpe"),
            "alpha": (float, 0.7, "stable exponent"),
            "mu": (float, 1.0, "compound-Poisson rate"),
            "theta": (float, 1.0, "exponential jump rate"),
            "directing": (str, "gamma", "gamma | exponential | ml"),
            "t": (float, 0.5, "operational-time parameter"),
            "check": (str, "simulate", "simulate (empirical vs closed form) | gid (closed-form g.i.d. check)"),
            "n": (int, 100000, "sample size for --check simulate"),
            "z": (float, 4.0, "band half-width in standard errors"),
            "lambda_min": (float, 0.1, "smallest lambda"),
            "lambda_max": (float, 10.0, "largest lambda"),
            "points": (int, 10, "grid points"),
            "K": (int, tf.CM_ORDER, "CM order for --check gid"),
        },
    ),
    "thinning-limit": dict(
        help="(1/n)-thinning of a renewal process with gaps exp(-psi/n): convergence to 1/(1+psi)",
        exercises="the (1/n)-thinning limit defines a Cox-and-renewal process",
        keys={
            "psi": (str, "power", "power | compound-exp"),
            **{k: PSI_KEYS[k] for k in ("A", "alpha", "mu", "theta")},
            "n_schedule": (_ints, (100, 1000, 10000), "ascending comma-separated n values"),
            "lambda_min": (float, 1e-2, "smallest lambda"),
            "lambda_max": (float, 10.0, "largest lambda"),
            "points": (int, 200, "log-grid points"),
        },
    ),
    "geom-sum-limit": dict(
        help="simulate geometric sums of n**(-1/alpha)-scaled stable summands",
        exercises="limits of geometric sums of negligible summands are exactly the g.i.d. laws",
        keys={
            "alpha": (float, 0.6, "stable exponent"),
            "n": (int, 1000, "mean of the geometric count"),
            "m": (int, 100000, "number of simulated sums"),
            "grid": (_floats, coxcheck.DEMO_GRID, "comma-separated lambda values"),
            "z": (float, 4.0, "band half-width in standard errors"),
        },
    ),
    "discretize-psi": dict(
        help="approximate psi by a finite mixture sum c_j (1 - exp(-b_j lambda))",
        exercises="g.i.d. laws on [0, inf) are limits of 1/(1 + finite compound-Poisson exponents)",
        keys={
            "psi": (str, "power", "power | compound-exp | semi-ml"),
            **PSI_KEYS,
            "k": (int, 8, "number of mixture terms"),
            "lambda_max": (float, 10.0, "upper end of the fit range"),
            "tol": (float, 1e-2, "pass when the sup distance of the g.i.d. transforms is below this"),
        },
    ),
}


@dataclass
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)

    def get(self, key):
        return self.params[key]


def _spec(command):
    return {**COMMON, **COMMANDS[command]["keys"]}


def _normalize(key):
    return key.strip().replace("-", "_")


def load_config(path) -> dict:
    """Parse a flat ``key=value`` file; '#' starts a comment.  Returns raw text values."""
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        key = _normalize(key)
        if key in out:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def resolve_config(command: str, file_values: dict, flag_values: dict) -> ExperimentConfig:
    """Defaults, then file values, then flags; every value is converted and checked."""
    spec = _spec(command)
    unknown = sorted(set(file_values) - set(spec))
    if unknown:
        raise ConfigError(f"unknown key(s) {', '.join(unknown)}; valid keys: {', '.join(sorted(spec))}")
    params = {k: default for k, (_, default, _) in spec.items()}
    for source in (file_values, flag_values):
        for key, value in source.items():
            conv = spec[key][0]
            try:
                params[key] = conv(value) if isinstance(value, str) else value
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {value!r}") from exc
    if params["out"] is None:
        params["out"] = f"{command}.csv"
    config = ExperimentConfig(command, params)
    validate(config)
    return config


def validate(config: ExperimentConfig) -> None:
    """Build the domain objects once so preconditions fail before any work starts."""
    c = config.params
    cmd = config.command
    if c["seed"] < 0:
        raise ParameterError("seed must be >= 0")
    for key in ("n", "m", "points", "k"):
        if key in c and c[key] is not None and c[key] < 1:
            raise ParameterError(f"{key} must be >= 1")
    if cmd in ("sample", "lt-compare"):
        _law(c)
    elif cmd == "thin-invariance":
        _renewal_family(c)
        tf._check_unit("p", c["p"], closed_high=False)
        if c["c"] is not None:
            tf._check_unit("c", c["c"])
    elif cmd in ("gid-check", "cox-check"):
        _transform(c)
    elif cmd == "subordinate":
        _base(c), _directing(c)
        if c["check"] not in ("simulate", "gid"):
            raise ParameterError("check must be simulate or gid")
    elif cmd in ("thinning-limit", "discretize-psi"):
        _psi(c)
    elif cmd == "geom-sum-limit":
        tf._check_unit("alpha", c["alpha"])


# ---------------------------------------------------------------------------
# object builders
# ---------------------------------------------------------------------------


def _law(c) -> samplers.Law:
    fam = c["family"]
    if fam == "exponential":
        return samplers.ExponentialLaw(c["rate"])
    if fam == "gamma":
        return samplers.GammaLaw(c["shape"], c["rate"])
    if fam == "geometric":
        return samplers.GeometricLaw(c["p"])
    if fam == "stable":
        return samplers.StableLaw(c["alpha"])
    if fam == "ml":
        return samplers.MittagLefflerLaw(c["alpha"], c["scale"])
    if fam == "geom-compound":
        inner = {"exponential": lambda: samplers.ExponentialLaw(c["rate"]),
                 "ml": lambda: samplers.MittagLefflerLaw(c["alpha"], c["scale"])}.get(c["inner"])
        if inner is None:
            raise ParameterError("inner must be exponential or ml")
        return samplers.GeometricCompoundLaw(inner(), c["p"])
    raise ParameterError(f"unknown family {fam!r}")


def _psi(c) -> tf.PsiExponent:
    name = c.get("psi", "power")
    if name == "power":
        return tf.Power(c["A"], c["alpha"])
    if name == "compound-exp":
        return tf.CompoundExp(c["mu"], c["theta"])
    if name == "semi-ml":
        return tf.SemiMLPerturbed(c["alpha"], c["b"], c["eps"])
    raise ParameterError(f"unknown psi {name!r}")


def _transform(c) -> tf.LaplaceTransform:
    fam = c["family"]
    if fam == "exponential":
        return tf.Exponential(c["rate"])
    if fam == "gamma":
        return tf.Gamma(c["shape"], c["rate"])
    if fam == "ml":
        return tf.MittagLeffler(c["alpha"], c["scale"])
    if fam == "gid-power":
        return tf.Gid(tf.Power(c["A"], c["alpha"]))
    if fam == "gid-compound":
        return tf.Gid(tf.CompoundExp(c["mu"], c["theta"]))
    if fam == "gid-semi-ml":
        return tf.Gid(tf.SemiMLPerturbed(c["alpha"], c["b"], c["eps"]))
    raise ParameterError(f"unknown family {fam!r}; choose from {', '.join(LT_FAMILIES)}")


def _renewal_family(c):
    if c["family"] == "poisson":
        tf._check_positive("rate", c["rate"])
        return renewal.PoissonFamily(c["rate"])
    if c["family"] == "ml":
        tf._check_unit("alpha", c["alpha"])
        return renewal.MLFamily(c["alpha"])
    raise ParameterError("family must be poisson or ml")


def _base(c):
    if c["base"] == "stable":
        return subordination.Stable(c["alpha"])
    if c["base"] == "cpe":
        return subordination.CompoundPoissonExp(c["mu"], c["theta"])
    raise ParameterError("base must be stable or cpe")


def _directing(c):
    kinds = {"gamma": subordination.GammaTime, "exponential": subordination.ExponentialTime,
             "ml": subordination.MLTime}
    if c["directing"] not in kinds:
        raise ParameterError("directing must be gamma, exponential or ml")
    return kinds[c["directing"]](c["t"])


# ---------------------------------------------------------------------------
# subcommands: each returns (passed, verdict text, csv text)
# ---------------------------------------------------------------------------


def _run_sample(c, workers):
    law = _law(c)
    batch = samplers.generate(law, c["n"], c["seed"], workers)
    return True, f"n={batch.n} {law.descriptor} mean={np.mean(batch.values):.6g}", batch.to_csv()


def _run_thin_invariance(c, workers):
    fam = _renewal_family(c)
    rep = renewal.verify_thinning_invariance(fam, c["p"], c["n"], c["seed"], c=c["c"], level=c["level"], workers=workers)
    text = f"{fam.descriptor} p={rep.p:g} c={rep.c:.6g} D={rep.statistic:.5f} threshold={rep.threshold:.5f}"
    return rep.verdict, text, rep.to_csv()


def _run_lt_compare(c, workers):
    law = _law(c)
    batch = samplers.generate(law, c["n"], c["seed"], workers)
    grid = tf.log_grid(c["lambda_min"], c["lambda_max"], c["points"])
    rep = tf.band_check(tf.empirical_lt(batch, grid), law.transform(), c["z"])
    return rep.verdict, f"{law.descriptor} worst |z|={rep.worst_margin:.3f} at lambda={rep.worst_lambda:.4g}", rep.to_csv()


def _run_gid_check(c, workers):
    g = _transform(c)
    rep = tf.gid_check(g, c["lambda_min"], c["lambda_max"], c["points"], c["K"])
    extra = f" ({'; '.join(rep.notes)})" if rep.notes else ""
    return rep.verdict, f"{g.descriptor} worst margin={rep.worst_margin:.3g} at lambda={rep.worst_lambda:.4g}{extra}", rep.to_csv()


def _run_cox_check(c, workers):
    g = _transform(c)
    v = coxcheck.cox_renewal_check(g, c["p_grid"], c["lambda_min"], c["lambda_max"], c["points"], c["K"], workers)
    text = (f"{g.descriptor} worst p={v.worst_p:g} lambda={v.worst_lambda:.4g} margin={v.worst_margin:.3g} "
            f"gid={'PASS' if v.gid_verdict else 'FAIL'}")
    return v.verdict, text, v.to_csv()


def _run_subordinate(c, workers):
    base, directing = _base(c), _directing(c)
    if c["check"] == "gid":
        rep = subordination.verify_subordination_gid(base.psi, directing, K=c["K"])
    else:
        batch = subordination.sample_subordinated(base, directing, c["n"], c["seed"], workers)
        grid = tf.log_grid(c["lambda_min"], c["lambda_max"], c["points"])
        target = subordination.closed_form_subordinated_lt(base.psi, directing)
        rep = tf.band_check(tf.empirical_lt(batch, grid), target, c["z"])
        if not directing.within_hypothesis:
            rep.notes = rep.notes + (subordination.OUTSIDE_HYPOTHESIS,)
    extra = f" ({'; '.join(rep.notes)})" if rep.notes else ""
    text = f"{base.descriptor} under {directing.descriptor} [{c['check']}] worst={rep.worst_margin:.3g}{extra}"
    return rep.verdict, text, rep.to_csv()


def _run_thinning_limit(c, workers):
    psi = _psi(c)
    grid = tf.log_grid(c["lambda_min"], c["lambda_max"], c["points"])
    rep = coxcheck.verify_thinning_limit(psi, grid, c["n_schedule"])
    return rep.verdict, f"{psi.descriptor} final sup error={rep.final_error:.3g} order={rep.order:.3f}", rep.to_csv()


def _run_geom_sum_limit(c, workers):
    rep = coxcheck.geometric_sum_limit_demo(c["alpha"], c["n"], c["m"], c["seed"], c["grid"], c["z"], workers)
    return rep.verdict, f"{rep.label} worst |z|={rep.worst_margin:.3f} ({'; '.join(rep.notes)})", rep.to_csv()


def _run_discretize_psi(c, workers):
    psi = _psi(c)
    fit = coxcheck.discretize_psi(psi, c["k"], c["lambda_max"])
    grid = tf.log_grid(c["lambda_max"] * 1e-3, c["lambda_max"], 200)
    dist = tf.lt_sup_distance(tf.Gid(fit.mixture), tf.Gid(psi), grid)
    ok = dist.distance <= c["tol"]
    text = f"{psi.descriptor} k={len(fit.mixture.weights)} residual={fit.residual:.3g} sup|gid diff|={dist.distance:.3g}"
    return ok, text, fit.to_csv()


RUNNERS = {
    "sample": _run_sample,
    "thin-invariance": _run_thin_invariance,
    "lt-compare": _run_lt_compare,
    "gid-check": _run_gid_check,
    "cox-check": _run_cox_check,
    "subordinate": _run_subordinate,
    "thinning-limit": _run_thinning_limit,
    "geom-sum-limit": _run_geom_sum_limit,
    "discretize-psi": _run_discretize_psi,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _fmt_default(value):
    if isinstance(value, tuple):
        return ",".join(f"{v:g}" if isinstance(v, float) else str(v) for v in value)
    return "none" if value is None else str(value)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gidlab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    for name, info in COMMANDS.items():
        desc = f"{info['help']}.\n\nExercises: {info['exercises']}."
        p = sub.add_parser(
            name,
            help=info["help"],
            description=desc,
            formatter_class=argparse.RawDescriptionHelpFormatter,
            argument_default=argparse.SUPPRESS,
        )
        p.add_argument("--config", metavar="PATH", help="flat key=value file (flags override it)")
        for key, (_, default, text) in _spec(name).items():
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, metavar=key.upper(),
                           help=f"{text} [default: {_fmt_default(default)}]")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return EXIT_PASS if exc.code in (0, None) else EXIT_ERROR
    if not ns.command:
        parser.print_usage(sys.stderr)
        return EXIT_ERROR
    cmd = ns.command
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    try:
        file_values = load_config(ns.config) if getattr(ns, "config", None) else {}
        config = resolve_config(cmd, file_values, flags)
    except (GidlabError, OSError) as exc:
        print(f"{cmd}: ERROR {exc}")
        print(f"gidlab {cmd}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    c = config.params
    workers = c["workers"]
    try:
        passed, text, csv_text = RUNNERS[cmd](c, workers)
        tf.write_text(c["out"], csv_text)
    except (GidlabError, OSError, ValueError, ArithmeticError) as exc:
        print(f"{cmd}: ERROR {exc}")
        print(f"gidlab {cmd}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"{cmd}: {'PASS' if passed else 'FAIL'} {text}")
    return EXIT_PASS if passed else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
