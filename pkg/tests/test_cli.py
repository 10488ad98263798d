import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from econreg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_correlate_text(capsys, appendix_csv):
    code, out, _ = run(capsys, "correlate", str(appendix_csv), "--vars", "NYSE,DJ,SP500")
    assert code == 0
    assert ".997**" in out and "Sum of Squares and Cross-products" in out


def test_correlate_json(capsys, appendix_csv):
    code, out, _ = run(capsys, "correlate", str(appendix_csv), "--vars", "GPDI,TB3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["matrix"]["variables"] == ["GPDI", "TB3"]
    assert doc["table"]["rows"][0][3] == ".046"


def test_correlate_arity_is_usage_error(capsys, appendix_csv):
    code, _, err = run(capsys, "correlate", str(appendix_csv), "--vars", "NYSE")
    assert code == 2
    assert "at least two" in err


def test_regress(capsys, appendix_csv):
    code, out, _ = run(capsys, "regress", str(appendix_csv), "--dep", "TB3", "--pred", "SP500,CPIU")
    assert code == 0
    assert "ANOVA^b" in out and "Coefficients^a" in out
    assert "TB3 = " in out
    assert "RejectH0" in out


def test_regress_paper_wording(capsys, appendix_csv):
    code, out, _ = run(
        capsys, "regress", str(appendix_csv), "--dep", "GPDI", "--pred", "TB3", "--paper-wording"
    )
    assert code == 0
    assert "Accept H0" in out


def test_regress_json(capsys, appendix_csv):
    code, out, _ = run(capsys, "regress", str(appendix_csv), "--dep", "CPIU", "--pred", "SP500", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["model"]["predictors"] == ["SP500"]
    assert [v["kind"] for v in doc["verdicts"]] == ["F", "t", "t"]


def test_regress_unknown_column(capsys, appendix_csv):
    code, _, err = run(capsys, "regress", str(appendix_csv), "--dep", "TB3", "--pred", "NOPE")
    assert code == 1
    assert err.startswith("UnknownVariable")


def test_regress_bad_alpha(capsys, appendix_csv):
    code, _, _ = run(capsys, "regress", str(appendix_csv), "--dep", "TB3", "--pred", "CPIU", "--alpha", "1.5")
    assert code == 2


def test_unreadable_csv(capsys, tmp_path):
    code, _, err = run(capsys, "correlate", str(tmp_path / "none.csv"), "--vars", "a,b")
    assert code == 1 and "UnreadableFile" in err


def test_no_subcommand(capsys):
    assert run(capsys)[0] == 2


def test_paper_verify(capsys):
    code, out, _ = run(capsys, "paper-verify")
    assert code == 0
    assert "130/130 checks passed" in out
    assert "GROSS PRIVATE DOMESTIC INVESTMENT (GPGDI)" in out
    assert "GPDI = -162.815 + .574 * SP500 + 6.031 * CPI-U + 10.144 * TB3" in out


def test_paper_verify_json(capsys):
    code, out, _ = run(capsys, "paper-verify", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert "Table 2-5" in doc["published_tables"]


def test_paper_verify_detects_bad_fixture(capsys, tmp_path, published):
    bad = published.with_value("m4.anova.f", "1000.000")
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad.doc))
    code, out, _ = run(capsys, "paper-verify", "--fixture", str(p), "--no-tables")
    assert code == 3
    assert "FAIL" in out


def test_paper_run(capsys, tmp_path, appendix_csv):
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "paper-run", str(appendix_csv), "--out", str(out_dir))
    assert code == 0
    names = {p.name for p in out_dir.iterdir()}
    expected_tables = {"table-1-1", "table-2-1", "table-2-2", "table-appendix"} | {
        f"table-{c}-{k}" for c, ks in ((2, (3, 4, 5)), (3, (1, 2, 3)), (4, (1, 2, 3))) for k in ks
    }
    assert {f"{t}.txt" for t in expected_tables} <= names
    assert {f"fig-1-{k}.svg" for k in range(1, 7)} <= names
    assert {"results.json", "report.txt"} <= names
    results = json.loads((out_dir / "results.json").read_text())
    assert results["stages"][0]["selected"] == ["DJ", "SP500"]
    assert results["stages"][1]["selected"] == ["SP500"]
    assert set(results["tables"]) == expected_tables
    for fig in results["figures"]:
        ET.fromstring((out_dir / fig).read_bytes())
    assert "selected SP500" in out


def test_paper_run_env_output_dir(capsys, tmp_path, appendix_csv, monkeypatch):
    monkeypatch.setenv("ECONREG_OUTPUT_DIR", str(tmp_path / "env-out"))
    code, _, _ = run(capsys, "paper-run", str(appendix_csv))
    assert code == 0
    assert (tmp_path / "env-out" / "results.json").exists()


def test_paper_run_missing_role(capsys, tmp_path, appendix_csv):
    code, _, err = run(capsys, "paper-run", str(appendix_csv), "--var", "tb3=RATE", "--out", str(tmp_path))
    assert code == 1
    assert "StageError" in err and "RATE" in err


def test_paper_run_bad_role(capsys, tmp_path, appendix_csv):
    code, _, _ = run(capsys, "paper-run", str(appendix_csv), "--var", "gdp=X", "--out", str(tmp_path))
    assert code == 2


def test_plot(capsys, tmp_path, appendix_csv):
    code, out, _ = run(capsys, "plot", str(appendix_csv), "--x", "GPDI", "--y", "SP500", "--kind", "scatter")
    assert code == 0
    assert out.count('class="mark"') == 43
    target = tmp_path / "cpi.svg"
    code, _, _ = run(capsys, "plot", str(appendix_csv), "--y", "CPIU", "--kind", "line", "--out", str(target))
    assert code == 0 and target.read_text().count("<polyline") == 1
    assert run(capsys, "plot", str(appendix_csv), "--y", "CPIU")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "econreg", "paper-verify", "--no-tables"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip().endswith("checks passed")


@pytest.mark.parametrize("argv", [["--version"], ["correlate", "--help"]])
def test_help_and_version(capsys, argv):
    assert run(capsys, *argv)[0] == 0
