import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from reflectode import kernel as K
from reflectode.cli import PROBLEM_SCHEMA, green_lattice, main

from conftest import eqej1_exact

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
EQEJ1 = str(PROBLEMS / "eqej1.json")


def write_problem(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


class TestSolve:
    def test_eqej1_csv(self, capsys):
        code, out, err = run(["solve", "--problem", EQEJ1, "--grid", "100"], capsys)
        assert code == 0
        rows = read_csv(out)
        assert rows[0] == ["t", "u"]
        assert len(rows) == 102
        t = np.array([float(r[0]) for r in rows[1:]])
        u = np.array([float(r[1]) for r in rows[1:]])
        assert t[0] == -0.5 and t[-1] == 0.5
        np.testing.assert_allclose(u, eqej1_exact(t, 1.0), atol=1e-6)
        assert "residual" in err and "residual" not in out

    def test_seventeen_digits(self, capsys):
        _, out, _ = run(["solve", "--problem", EQEJ1, "--grid", "4"], capsys)
        for _, u in read_csv(out)[1:]:
            assert float(repr(float(u))) == float(u)

    def test_overrides(self, capsys):
        _, out, _ = run(["solve", "--problem", EQEJ1, "--grid", "4", "--c", "5"], capsys)
        u = np.array([float(r[1]) for r in read_csv(out)[1:]])
        np.testing.assert_allclose(u, eqej1_exact(np.linspace(-0.5, 0.5, 5), 5.0), atol=1e-8)

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "u.csv"
        code, out, _ = run(["solve", "--problem", EQEJ1, "--grid", "10", "--out", str(target)], capsys)
        assert code == 0 and out == ""
        assert len(read_csv(target.read_text())) == 12

    @pytest.mark.parametrize("name", ["periodic_exp", "antiperiodic_exp", "lambda_homogeneous", "two_point"])
    def test_shipped_problems(self, name, capsys):
        code, out, _ = run(["solve", "--problem", str(PROBLEMS / f"{name}.json"), "--grid", "8"], capsys)
        assert code == 0
        assert len(read_csv(out)) == 10

    def test_functional_resonance_exit_3(self, tmp_path, capsys):
        doc = {"m": 1.0, "T": 1.0, "h": "1",
               "bc": {"type": "functional", "F": {"atoms": [{"t": math.pi / 4, "a": 1.0}]}, "c": 1.0}}
        code, out, err = run(["solve", "--problem", write_problem(tmp_path, doc)], capsys)
        assert code == 3
        assert "F(cos mt) = F(sin mt)" in err and out == ""

    def test_periodic_resonance_exit_3(self, tmp_path, capsys):
        doc = {"m": math.pi, "T": 1.0, "h": "1", "bc": {"type": "periodic"}}
        assert run(["solve", "--problem", write_problem(tmp_path, doc)], capsys)[0] == 3

    def test_bad_expression_exit_2(self, tmp_path, capsys):
        doc = {"m": 1.0, "T": 0.5, "h": "2**t", "bc": {"type": "periodic"}}
        code, _, err = run(["solve", "--problem", write_problem(tmp_path, doc)], capsys)
        assert code == 2
        assert "2" in err and "position" in err

    @pytest.mark.parametrize("doc", [
        {"m": 1.0, "T": 0.5, "h": "t", "bc": {"type": "periodic"}, "extra": 1},
        {"m": 1.0, "T": 0.5, "h": "t", "bc": {"type": "lambda"}},
        {"m": 1.0, "T": 0.5, "h": "t", "bc": {"type": "functional", "c": 1.0}},
        {"m": 1.0, "T": -0.5, "h": "t", "bc": {"type": "periodic"}},
        {"m": 1.0, "h": "t", "bc": {"type": "periodic"}},
        {"m": 1.0, "T": 0.5, "h": "t", "bc": {"type": "dirichlet"}},
    ])
    def test_schema_errors_exit_2(self, doc, tmp_path, capsys):
        assert run(["solve", "--problem", write_problem(tmp_path, doc)], capsys)[0] == 2

    def test_missing_file_exit_2(self, tmp_path, capsys):
        assert run(["solve", "--problem", str(tmp_path / "nope.json")], capsys)[0] == 2

    def test_unknown_identifier_exit_2(self, tmp_path, capsys):
        doc = {"m": 1.0, "T": 0.5, "h": "foo(t)", "bc": {"type": "periodic"}}
        assert run(["solve", "--problem", write_problem(tmp_path, doc)], capsys)[0] == 2

    def test_bad_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--problem", EQEJ1, "--grid", "0"])
        assert exc.value.code == 2


class TestGreen:
    def test_smoke(self, capsys):
        code, out, _ = run(["green", "--kind", "gbar", "--m", "1", "--T", "0.5", "--grid", "4"], capsys)
        assert code == 0
        rows = read_csv(out)
        assert rows[0] == ["t", "s", "value"]
        assert len(rows) == 26
        assert all(math.isfinite(float(r[2])) for r in rows[1:])

    def test_bounded_by_sup(self, capsys):
        _, out, _ = run(["green", "--kind", "gbar", "--m", "1", "--T", "0.5", "--grid", "40"], capsys)
        vals = [float(r[2]) for r in read_csv(out)[1:]]
        assert max(vals) <= K.kernel_sup(0.5) + 1e-6

    def test_lattice_avoids_diagonals(self):
        t, s = green_lattice(0.5, 10)
        assert len(t) == len(s) == 11
        assert np.all(np.abs(s) <= 0.5)
        tt, ss = np.meshgrid(t, s)
        assert np.min(np.abs(tt - ss)) > 1e-3 and np.min(np.abs(tt + ss)) > 1e-3

    @pytest.mark.parametrize("kind", ["hbar", "h"])
    def test_antiperiodic_resonance(self, kind, capsys):
        argv = ["green", "--kind", kind, "--m", repr(math.pi), "--T", "0.5", "--grid", "4"]
        assert run(argv, capsys)[0] == 3


class TestPositivity:
    def test_eqej1(self, capsys):
        code, out, _ = run(["positivity", "--problem", EQEJ1], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["computed"]["k2"] == pytest.approx(4.91464, abs=1e-4)
        assert doc["computed"]["empirical_threshold"] is None
        assert doc["published"] == {"k2": 4.91464, "positivity_threshold": 0.850502}

    def test_threshold(self, capsys):
        code, out, _ = run(["positivity", "--problem", EQEJ1, "--threshold"], capsys)
        assert code == 0
        doc = json.loads(out)
        cstar = doc["computed"]["empirical_threshold"]
        assert 0 < cstar <= doc["computed"]["k2"]
        assert doc["published"]["positivity_threshold"] == 0.850502

    def test_other_problems_have_no_published_block(self, capsys):
        _, out, _ = run(["positivity", "--problem", str(PROBLEMS / "eqej1.json"), "--c", "7"], capsys)
        assert "published" in json.loads(out)
        _, out, _ = run(["positivity", "--problem", str(PROBLEMS / "two_point.json"), "--m", "0.5"], capsys)
        assert "published" not in json.loads(out)

    def test_alpha_out_of_range_exit_3(self, capsys):
        assert run(["positivity", "--problem", EQEJ1, "--m", "1.8"], capsys)[0] == 3

    def test_needs_functional(self, capsys):
        argv = ["positivity", "--problem", str(PROBLEMS / "periodic_exp.json")]
        assert run(argv, capsys)[0] == 2


class TestVerify:
    @pytest.mark.parametrize("kind", ["periodic", "antiperiodic"])
    def test_passes(self, kind, capsys):
        code, out, err = run(["verify", "--kind", kind, "--m", "1", "--T", "0.5"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert "PASS" in err

    def test_reports_row_integral(self, capsys):
        _, out, _ = run(["verify", "--kind", "periodic", "--m", "1", "--T", "0.5"], capsys)
        names = [c["name"] for c in json.loads(out)["checks"]]
        assert any("1/m" in n for n in names)

    def test_near_resonance_exit_3(self, capsys):
        argv = ["verify", "--kind", "periodic", "--m", repr(math.pi - 1e-12), "--T", "1"]
        assert run(argv, capsys)[0] == 3


def test_schema_rejects_unknown_keys():
    assert PROBLEM_SCHEMA["additionalProperties"] is False


def test_module_entry_point_is_deterministic(tmp_path):
    argv = [sys.executable, "-m", "reflectode", "solve", "--problem", EQEJ1, "--grid", "20"]
    a = subprocess.run(argv, capture_output=True, check=True)
    b = subprocess.run(argv, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout.startswith(b"t,u\n")
