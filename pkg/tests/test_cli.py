import subprocess
import sys

import pytest

from gidlab import cli
from gidlab.errors import ParameterError

# small but non-trivial runs of every subcommand; several span more than one RNG chunk
SMALL_RUNS = {
    "sample": ["--family", "geom-compound", "--inner", "ml", "--p", "0.3", "--n", "140000"],
    "thin-invariance": ["--family", "ml", "--p", "0.4", "--n", "150000"],
    "lt-compare": ["--family", "ml", "--n", "140000"],
    "gid-check": ["--family", "gamma", "--shape", "0.5"],
    "cox-check": ["--family", "gamma", "--shape", "2"],
    "subordinate": ["--base", "cpe", "--directing", "ml", "--t", "0.5", "--n", "140000"],
    "thinning-limit": ["--psi", "compound-exp"],
    "geom-sum-limit": ["--alpha", "0.6", "--n", "50", "--m", "140000"],
    "discretize-psi": ["--psi", "power", "--k", "4"],
}


def run(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestExitCodes:
    def test_gid_pass(self, tmp_path, capsys):
        code, out, _ = run(["gid-check", "--family", "gamma", "--shape", "0.5", "--out", str(tmp_path / "g.csv")], capsys)
        assert code == 0
        assert out.count("\n") == 1 and out.startswith("gid-check: PASS")

    def test_cox_fail(self, tmp_path, capsys):
        code, out, _ = run(["cox-check", "--family", "gamma", "--shape", "2", "--out", str(tmp_path / "c.csv")], capsys)
        assert code == 1
        assert out.startswith("cox-check: FAIL")
        assert (tmp_path / "c.csv").read_text().startswith("p,verdict,worst_lambda,worst_margin\n")

    def test_unknown_flag(self, capsys):
        code, _, err = run(["sample", "--bogus", "1"], capsys)
        assert code == 2 and "usage" in err

    def test_unknown_subcommand(self, capsys):
        code, _, err = run(["nope"], capsys)
        assert code == 2 and "usage" in err

    def test_missing_subcommand(self, capsys):
        assert run([], capsys)[0] == 2

    def test_bad_number(self, tmp_path, capsys):
        code, out, _ = run(["sample", "--n", "ten", "--out", str(tmp_path / "s.csv")], capsys)
        assert code == 2 and "ERROR" in out

    def test_precondition(self, tmp_path, capsys):
        code, out, err = run(["sample", "--family", "ml", "--alpha", "2", "--out", str(tmp_path / "s.csv")], capsys)
        assert code == 2 and "alpha" in err
        assert not (tmp_path / "s.csv").exists()

    def test_help(self, capsys):
        code, out, _ = run(["cox-check", "--help"], capsys)
        assert code == 0

    @pytest.mark.parametrize("cmd", list(cli.COMMANDS))
    def test_help_lists_flags_defaults_and_result(self, cmd, capsys):
        cli.run([cmd, "--help"])
        text = capsys.readouterr().out
        assert "Exercises:" in text
        for key, (_, default, _) in cli._spec(cmd).items():
            assert f"--{key.replace('_', '-')}" in text
        assert text.count("[default:") == len(cli._spec(cmd))

    def test_thin_invariance_negative_control(self, tmp_path, capsys):
        argv = ["thin-invariance", "--family", "ml", "--p", "0.4", "--c", "0.4", "--n", "100000", "--out", str(tmp_path / "t.csv")]
        assert run(argv, capsys)[0] == 1

    def test_subordinate_outside_hypothesis(self, tmp_path, capsys):
        argv = ["subordinate", "--check", "gid", "--directing", "gamma", "--t", "2", "--out", str(tmp_path / "s.csv")]
        code, out, _ = run(argv, capsys)
        assert code == 1 and "outside theorem hypothesis" in out

    def test_output_directories_created(self, tmp_path, capsys):
        path = tmp_path / "deep" / "er" / "x.csv"
        assert run(["thinning-limit", "--out", str(path)], capsys)[0] == 0
        assert path.exists()

    def test_console_script(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "gidlab.cli", "gid-check", "--family", "exponential", "--out", str(tmp_path / "e.csv")],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0 and proc.stdout.startswith("gid-check: PASS")


class TestConfig:
    def test_flag_overrides_file(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("alpha=0.6\nseed=7\n")
        config = cli.resolve_config("sample", cli.load_config(cfg), {"seed": "9"})
        assert config.get("seed") == 9 and config.get("alpha") == 0.6

    def test_flag_override_through_run(self, tmp_path, capsys):
        cfg = tmp_path / "c.txt"
        cfg.write_text("alpha=0.6\nseed=7\nn=5\nfamily=ml\n")
        out = tmp_path / "s.csv"
        assert run(["sample", "--config", str(cfg), "--seed", "9", "--out", str(out)], capsys)[0] == 0
        assert out.read_text().splitlines()[0].endswith("seed=9")

    def test_empty_file_gives_defaults(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("")
        config = cli.resolve_config("sample", cli.load_config(cfg), {})
        defaults = {k: d for k, (_, d, _) in cli._spec("sample").items()}
        defaults["out"] = "sample.csv"
        assert config.params == defaults

    def test_alpha_out_of_range(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("family=ml\nalpha=2\n")
        with pytest.raises(ParameterError):
            cli.resolve_config("sample", cli.load_config(cfg), {})

    def test_comments_and_dashes(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("# header\n\nlambda-max = 5  # trailing\n")
        assert cli.load_config(cfg) == {"lambda_max": "5"}

    def test_duplicate_key(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("seed=1\nseed=2\n")
        with pytest.raises(cli.ConfigError, match="duplicate"):
            cli.load_config(cfg)

    def test_unknown_key_lists_valid(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("colour=red\n")
        with pytest.raises(cli.ConfigError, match="valid keys: .*alpha"):
            cli.resolve_config("sample", cli.load_config(cfg), {})

    def test_malformed_line(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("seed\n")
        with pytest.raises(cli.ConfigError):
            cli.load_config(cfg)

    def test_config_errors_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "c.txt"
        cfg.write_text("colour=red\n")
        assert run(["sample", "--config", str(cfg)], capsys)[0] == 2
        assert run(["sample", "--config", str(tmp_path / "missing.txt")], capsys)[0] == 2

    def test_list_values(self, tmp_path):
        cfg = tmp_path / "c.txt"
        cfg.write_text("p_grid=0.1,0.5\n")
        assert cli.resolve_config("cox-check", cli.load_config(cfg), {}).get("p_grid") == (0.1, 0.5)


class TestDeterminism:
    def test_sample_twice_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            assert run(["sample", "--family", "ml", "--alpha", "0.6", "--n", "1000", "--seed", "7", "--out", str(p)], capsys)[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    @pytest.mark.parametrize("cmd", list(SMALL_RUNS))
    def test_workers_byte_identical(self, cmd, tmp_path, capsys):
        blobs = []
        for w in (1, 2, 8):
            out = tmp_path / f"{cmd}-{w}.csv"
            code, _, _ = run([cmd, *SMALL_RUNS[cmd], "--seed", "7", "--workers", str(w), "--out", str(out)], capsys)
            assert code in (0, 1)
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]
