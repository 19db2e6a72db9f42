import io
import json
import math

import numpy as np
import pytest

from gompertz_kl.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, main
from gompertz_kl.gompertz import GompertzParams, Sampler, cdf
from gompertz_kl.numeric_oracle import ks_distance


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    assert code == EXIT_OK, text
    return json.loads(text)


class TestEval:
    def test_origin(self):
        (row,) = run_json("eval", "--b", "1", "--q", "1", "--x", "0")
        assert set(row) == {"x", "pdf", "log_pdf", "cdf"}
        assert row["pdf"] == 1.0 and row["cdf"] == 0.0

    def test_ln2(self):
        (row,) = run_json("eval", "--b", "1", "--q", "1", "--x", "0.6931472")
        assert row["cdf"] == pytest.approx(1 - math.exp(-1), abs=1e-7)

    def test_range_and_csv(self):
        code, text = run("eval", "--b", "2", "--q", "0.5", "--x-range", "0", "1", "--steps", "5",
                         "--format", "csv")
        lines = text.strip().splitlines()
        assert code == EXIT_OK
        assert lines[0] == "x,pdf,log_pdf,cdf"
        assert len(lines) == 6
        # 12 significant digits
        assert lines[1].split(",")[1] == "1"
        assert len(lines[3].split(",")[1].replace(".", "").lstrip("0")) <= 12

    def test_json_round_trips_doubles(self):
        (row,) = run_json("eval", "--b", "2", "--q", "0.5", "--x", "0.3")
        from gompertz_kl.gompertz import pdf

        assert row["pdf"] == pdf(GompertzParams(2, 0.5), 0.3)

    def test_negative_x(self, capsys):
        code, _ = run("eval", "--b", "1", "--q", "1", "--x", "-0.5")
        assert code == EXIT_INPUT
        assert "-0.5" in capsys.readouterr().err

    def test_bad_params(self):
        assert run("eval", "--b", "0", "--q", "1", "--x", "1")[0] == EXIT_INPUT

    def test_past_guard_is_null(self):
        (row,) = run_json("eval", "--b", "1", "--q", "1", "--x", "800")
        assert row["log_pdf"] is None and row["pdf"] == 0.0

    def test_usage_error(self):
        assert run("eval", "--b", "1")[0] == EXIT_INPUT
        assert run("nonsense")[0] == EXIT_INPUT


class TestKL:
    def test_pair(self):
        d = run_json("kl", "--b1", "1", "--q1", "1", "--b2", "1", "--q2", "2")
        assert set(d) == {"term_const", "term_ei", "term_gamma", "term_linear", "total"}
        assert d["total"] == pytest.approx(0.3068528194400547, abs=1e-12)

    def test_identical(self):
        d = run_json("kl", "--b1", "1.7", "--q1", "0.3", "--b2", "1.7", "--q2", "0.3")
        assert abs(d["total"]) <= 1e-12

    def test_oracle(self):
        d = run_json("kl", "--b1", "0.5", "--q1", "2", "--b2", "4", "--q2", "0.25", "--oracle")
        assert d["abs_diff"] < 1e-8
        assert {"oracle", "oracle_error_estimate", "oracle_evaluations"} <= set(d)

    def test_oracle_disagreement_exit_3(self, monkeypatch):
        import gompertz_kl.cli as cli

        class Shifted:
            value = 1.0
            error_estimate = 0.0
            evaluations = 15

        monkeypatch.setattr(cli, "kl_numeric", lambda p1, p2, tol: Shifted())
        code, _ = run("kl", "--b1", "1", "--q1", "1", "--b2", "1", "--q2", "2", "--oracle")
        assert code == EXIT_NUMERIC

    def test_overflow_exit_3(self):
        code, _ = run("kl", "--b1", "1", "--q1", "0.001", "--b2", "400", "--q2", "1000")
        assert code == EXIT_NUMERIC

    def test_bad_tol(self):
        assert run("kl", "--b1", "1", "--q1", "1", "--b2", "1", "--q2", "2", "--oracle",
                   "--tol", "1e-3")[0] == EXIT_INPUT

    def test_csv(self):
        code, text = run("kl", "--b1", "1", "--q1", "1", "--b2", "1", "--q2", "2", "--format", "csv")
        header, row = text.strip().splitlines()
        assert header == "term_const,term_ei,term_gamma,term_linear,total"
        assert float(row.split(",")[-1]) == pytest.approx(0.306852819440, abs=1e-12)


class TestSample:
    def test_deterministic(self):
        a = run("sample", "--b", "1", "--q", "1", "--n", "50", "--seed", "3")
        b = run("sample", "--b", "1", "--q", "1", "--n", "50", "--seed", "3")
        assert a == b
        assert a[1] != run("sample", "--b", "1", "--q", "1", "--n", "50", "--seed", "4")[1]

    def test_default_seed_and_env(self, monkeypatch):
        monkeypatch.delenv("GOMPERTZ_SEED", raising=False)
        values = run_json("sample", "--b", "1", "--q", "1", "--n", "5")
        np.testing.assert_array_equal(values, Sampler(GompertzParams(1, 1), seed=42).sample(5))
        monkeypatch.setenv("GOMPERTZ_SEED", "9")
        values = run_json("sample", "--b", "1", "--q", "1", "--n", "5")
        np.testing.assert_array_equal(values, Sampler(GompertzParams(1, 1), seed=9).sample(5))
        # an explicit flag beats the environment
        values = run_json("sample", "--b", "1", "--q", "1", "--n", "5", "--seed", "42")
        np.testing.assert_array_equal(values, Sampler(GompertzParams(1, 1), seed=42).sample(5))

    def test_bad_env_seed(self, monkeypatch):
        monkeypatch.setenv("GOMPERTZ_SEED", "abc")
        assert run("sample", "--b", "1", "--q", "1", "--n", "5")[0] == EXIT_INPUT

    def test_zero_n(self):
        assert run("sample", "--b", "1", "--q", "1", "--n", "0")[0] == EXIT_INPUT

    def test_ks(self):
        n = 100_000
        code, text = run("sample", "--b", "2", "--q", "0.5", "--n", str(n), "--format", "csv")
        x = np.sort(np.array(text.split(), dtype=float))
        assert code == EXIT_OK and x.size == n
        assert ks_distance(x, lambda t: cdf(GompertzParams(2, 0.5), t)) < 1.36 / math.sqrt(n)


class TestFit:
    @pytest.fixture
    def datafile(self, tmp_path):
        x = Sampler(GompertzParams(1.5, 0.7), seed=8).sample(100_000)
        path = tmp_path / "data.txt"
        path.write_text("# seeded draws\n" + "\n".join(repr(float(v)) for v in x) + "\n")
        return path

    def test_round_trip(self, datafile):
        d = run_json("fit", str(datafile))
        assert set(d) == {"params", "log_likelihood", "iterations", "converged", "bracket"}
        assert d["params"]["b"] == pytest.approx(1.5, rel=0.05)
        assert d["params"]["q"] == pytest.approx(0.7, rel=0.05)

    def test_stdin(self, monkeypatch):
        x = Sampler(GompertzParams(1, 1), seed=2).sample(2000)
        monkeypatch.setattr("sys.stdin", io.StringIO("\n".join(map(str, x))))
        d = run_json("fit", "-")
        assert d["converged"]

    def test_csv_with_header(self, tmp_path):
        x = Sampler(GompertzParams(1, 1), seed=2).sample(2000)
        path = tmp_path / "data.csv"
        path.write_text("duration\n" + "\n".join(map(str, x)) + "\n")
        assert run_json("fit", str(path), "--format", "csv")["converged"]

    def test_empty(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# nothing\n\n")
        assert run("fit", str(path))[0] == EXIT_INPUT

    def test_line_number(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("1.0\n2.0\nabc\n")
        assert run("fit", str(path))[0] == EXIT_INPUT
        assert "line 3" in capsys.readouterr().err

    def test_negative_value(self, tmp_path):
        path = tmp_path / "neg.txt"
        path.write_text("1.0\n-2.0\n")
        assert run("fit", str(path))[0] == EXIT_INPUT

    def test_degenerate(self, tmp_path):
        path = tmp_path / "zeros.txt"
        path.write_text("0\n0\n")
        assert run("fit", str(path))[0] == EXIT_INPUT

    def test_missing_file(self, tmp_path):
        assert run("fit", str(tmp_path / "absent.txt"))[0] == EXIT_INPUT


class TestDecompose:
    def test_schema_and_origin(self):
        rows = run_json("decompose", "--b", "1", "--q", "1", "--x-range", "0", "5", "--steps", "50")
        assert set(rows[0]) == {"x", "f_g", "f_d", "f"}
        assert rows[0]["f_d"] == 0.0
        ratios = [r["f_d"] / r["f_g"] for r in rows]
        assert all(b >= a for a, b in zip(ratios, ratios[1:]))

    def test_matches_eval(self):
        args = ("--b", "0.5", "--q", "2", "--x-range", "0", "5", "--steps", "20")
        rows = run_json("decompose", *args)
        evals = run_json("eval", *args)
        for r, e in zip(rows, evals):
            assert abs(r["f"] - e["pdf"]) <= 1e-12


class TestCheck:
    def test_passes(self):
        code, text = run("check")
        assert code == EXIT_OK
        lines = text.strip().splitlines()
        assert lines[-1].endswith("checks passed")
        assert all(line.startswith("[PASS]") for line in lines[:-1])
        assert all("stat=" in line for line in lines[:-1])

    def test_perturbation_fails(self):
        code, text = run("check", "--perturb", "1e-3")
        assert code == EXIT_NUMERIC
        assert "[FAIL]" in text
