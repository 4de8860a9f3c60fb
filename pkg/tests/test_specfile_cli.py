from pathlib import Path

import pytest
import yaml

from fintri.cli import main
from fintri.specfile import SpecError, dump_spec, load_automorphism, load_spec, parse_spec

SPECS = Path(__file__).resolve().parent.parent / "specs"


def machine(capsys, *argv):
    code = main(["--output", "machine", *argv])
    out = capsys.readouterr().out
    rec = dict(line.split("=", 1) for line in out.splitlines() if "=" in line)
    return code, rec


def test_load_spec_files():
    a, sigma = load_spec(SPECS / "dual_numbers.yaml")
    assert a.dim == 2 and sigma is None
    g, _ = load_spec(SPECS / "graded_dual_numbers.yaml")
    assert g.is_graded
    s = load_automorphism(SPECS / "minus_x.yaml", a)
    assert s.describe() == {"x": "2*x"}


@pytest.mark.parametrize("data", [
    [],
    {"vertices": [1]},
    {"field": 3, "vertices": [1], "colour": "red"},
    {"field": 3, "vertices": [1], "arrows": [["x", 1, 7]]},
    {"field": 3, "vertices": [1], "arrows": [["x", 1]]},
    {"field": 3, "vertices": [1], "arrows": [["x", 1, 1]], "relations": ["x*x"], "automorphism": {"x": "0"}},
])
def test_bad_specs(data):
    with pytest.raises(SpecError):
        parse_spec(data)


def test_dump_roundtrip(tmp_path):
    from fintri.algebra import QuiverPresentation

    pres = QuiverPresentation(3, ["1"], [("x", "1", "1")], ["x*x"], bound=1)
    path = tmp_path / "a.yaml"
    path.write_text(dump_spec(pres, {"x": "-x"}))
    a, sigma = load_spec(path)
    assert a.dim == 2 and sigma.describe() == {"x": "2*x"}


def test_cli_build(capsys):
    code, rec = machine(capsys, "build", str(SPECS / "nakayama_2_2.yaml"))
    assert code == 0 and rec["dim"] == "6" and rec["selfinjective"] == "true"


def test_cli_hh(capsys):
    code, rec = machine(capsys, "hh", str(SPECS / "dual_numbers.yaml"), "--n", "2")
    assert code == 0 and rec["hh.2.0"] == "1" and rec["resolution_check"] == "1"
    code, rec = machine(capsys, "hh", str(SPECS / "dual_numbers.yaml"), "--n", "3", "--q", "-1",
                        "--coefficients", str(SPECS / "minus_x.yaml"))
    assert code == 0 and rec["hh.3.-1"] == "1"


def test_cli_resolve(capsys):
    code, rec = machine(capsys, "resolve", str(SPECS / "nakayama_2_2.yaml"), "--length", "2", "--bimodule")
    assert code == 0 and rec["P0"] == "18" and rec["exact"] == "true"


def test_cli_check_enhancement(capsys):
    code, rec = machine(capsys, "check-enhancement", str(SPECS / "dual_numbers.yaml"))
    assert code == 0 and rec["enhancement"] == "true" and rec["sigma.x"] == "2*x"
    code, rec = machine(capsys, "check-enhancement", str(SPECS / "nakayama_2_2.yaml"))
    assert code == 0 and rec["enhancement"] == "false"


def test_cli_lambda_sigma(capsys):
    code, rec = machine(capsys, "lambda-sigma", str(SPECS / "dual_numbers.yaml"), "--sigma",
                        str(SPECS / "minus_x.yaml"), "--p", "2", "--q", "1")
    assert code == 0 and rec["les"].startswith("exact")


def test_cli_verify_identities(capsys):
    code, rec = machine(capsys, "verify-identities", str(SPECS / "graded_dual_numbers.yaml"), "--trials", "8")
    assert code == 0 and rec["all_passed"] == "true"


def test_cli_example_text(capsys):
    code = main(["example", "nakayama", "--params", "3", "1", "--check"])
    out = capsys.readouterr().out
    assert code == 0 and "enhancement: true" in out


def test_cli_errors(capsys, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({"field": 3}))
    assert main(["build", str(bad)]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["build", str(tmp_path / "missing.yaml")]) == 1
    with pytest.raises(SystemExit):
        main(["example", "nope"])
