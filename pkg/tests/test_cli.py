import csv
import json

from opsf.cli import main



def test_schur_exit_zero(tmp_path):
    out = tmp_path / "s.json"
    assert main(["schur", "--json", str(out), "--quiet"]) == 0
    rep = json.loads(out.read_text())
    assert rep["schur"]["sos_exact_equality"] is True
    assert rep["version"] and rep["run_config"]["command"] == "schur"
    assert "wall_time_s" not in rep


def test_multisum_all_exit_zero():
    assert main(["multisum", "--check", "all", "--max", "20", "--quiet"]) == 0


def test_laguerre_strict_mismatch_exit_one(tmp_path, capsys):
    out = tmp_path / "l.json"
    code = main(["identity-check", "--kind", "laguerre-lin", "--alpha", "0", "--max", "4", "--mode", "strict",
                 "--json", str(out)])
    assert code == 1
    printed = capsys.readouterr().out
    assert "(1, 1)" in printed and "formula 2 vs oracle -2" in printed
    rep = json.loads(out.read_text())
    assert rep["first_failure"]["index"] == [1, 1]
    assert main(["identity-check", "--kind", "laguerre-lin", "--alpha", "0", "--max", "4", "--mode", "survey",
                 "--quiet"]) == 0


def test_usage_errors_exit_two(tmp_path):
    assert main(["identity-check", "--kind", "gegenbauer-lin", "--max", "3", "--quiet"]) == 2
    assert main(["spectra", "--family", "hermite", "--quiet"]) == 2
    assert main(["nonsense"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("unknown_key = 3\n")
    assert main(["schur", "--config", str(bad), "--quiet"]) == 2


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("# positivity run\nlambda = 2\ndelta = 3   # proved case\nnmax = 3\ntgrid = 8\n")
    out = tmp_path / "p.json"
    assert main(["positivity", "--config", str(cfg), "--delta", "4", "--json", str(out), "--quiet"]) == 0
    rep = json.loads(out.read_text())
    assert rep["scan"]["lambda"] == 2.0 and rep["scan"]["delta"] == 4.0


def test_positivity_csv_rows(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["positivity", "--lambda", "1", "--delta", "1/2", "--nmax", "3", "--tgrid", "10",
                 "--csv", str(out), "--quiet"])
    # a negative value below lambda + 1 is not a counterexample
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "t", "value", "err", "sign"]
    assert len(rows) == 1 + 4 * 10


def test_reports_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path, workers in ((a, "1"), (b, "2")):
        assert main(["bernoulli", "--n", "8", "--samples", "300", "--seed", "5", "--json", str(path),
                     "--workers", workers, "--quiet"]) == 0
    ta = a.read_text().replace(str(a), "X")
    tb = b.read_text().replace(str(b), "X")
    assert ta == tb


def test_bernoulli_histogram_csv(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["bernoulli", "--n", "3", "--exhaustive", "--csv", str(out), "--quiet"]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["bin_lo", "bin_hi", "count"]
    assert sum(int(r[2]) for r in rows[1:]) == 3 * 64


def test_mzv_and_spectra_commands(tmp_path):
    out = tmp_path / "m.json"
    assert main(["mzv", "--family", "B", "--alpha", "1", "--n", "8", "--zeros", "--json", str(out), "--quiet"]) == 0
    rep = json.loads(out.read_text())
    assert rep["polynomials"][2] == {"variable": "x=t^3", "coeffs": ["1", "1/4"]}
    assert rep["zero_findings"] == []
    assert main(["mzv", "--identity", "2,1=3", "--N", "10000", "--quiet"]) == 0
    assert main(["spectra", "--family", "meixner:beta=1,c=1/2", "--sizes", "10,20", "--quiet"]) == 0
    assert main(["zeros", "--constant", "0,1/4", "--n", "5", "--quiet"]) == 0
    assert main(["connect", "--from", "gegenbauer:lambda=1/3", "--to", "chebyshev-u", "--n", "4", "--quiet"]) == 0
    assert main(["linearize", "--family", "laguerre:alpha=0", "--m", "1", "--n", "1", "--quiet"]) == 0


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "identity-check" in capsys.readouterr().out
