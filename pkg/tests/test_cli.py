import subprocess
import sys

import pytest

from conftest import CORPUS

from ccbox.frontend.cli import main


def test_check_identity(capsys):
    assert main(["check", str(CORPUS / "identity.ccbox")]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_selfapp_trace(capsys):
    assert main(["eval", str(CORPUS / "selfapp.ccbox"), "--trace"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [ln.split()[2] for ln in lines[:3]] == ["[LET]", "[LIFT]", "[APP]"]
    assert lines[0].startswith("step 1 [LET] ⟨")
    assert lines[3].startswith("answer after 3 steps")
    assert len(lines) == 4


def test_leak_reports_escape(capsys):
    assert main(["check", str(CORPUS / "leak.ccbox")]) == 1
    assert "E_ESCAPING_VARIABLE" in capsys.readouterr().err


def test_type_prints_type(capsys):
    assert main(["type", str(CORPUS / "identity.ccbox")]) == 0
    assert capsys.readouterr().out.strip() == "{} (x : {} Top) -> {x} Top"


def test_eval_out_of_fuel(capsys):
    assert main(["eval", str(CORPUS / "selfapp.ccbox"), "--fuel", "1"]) == 1
    assert "out of fuel" in capsys.readouterr().out


def test_fuzz_small(capsys, tmp_path):
    assert main(["fuzz", "--count", "20", "--only", "subtype_reflexivity", "--out", str(tmp_path)]) == 0
    assert "1/1 properties passed" in capsys.readouterr().out


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "ccbox", "check", str(CORPUS / "identity.ccbox")],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and out.stdout.strip() == "ok"


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["check"], ["eval", "x.ccbox", "--bogus"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
