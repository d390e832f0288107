"""The impcirc command line: subcommands, formats, exit codes."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from impcirc.cli import DIAGNOSTIC, OK, USAGE, main

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def test_run_pretty(capsys):
    assert main(["run", str(PROGRAMS / "guarded_coin.imp")]) == OK
    out = capsys.readouterr().out
    assert "type: B" in out
    assert "grade: 1" in out
    assert "branch 1: mass 1" in out
    assert "0: 1/2  (normalized 1/2)" in out


def test_run_json(capsys):
    assert main(["run", str(PROGRAMS / "guarded_coin.imp"), "--format", "json"]) == OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["grade"] == 1
    assert payload["branches"][1]["dist"] == {"0": "1/2", "1": "1/2"}


def test_run_rejects_bad_program(tmp_path, capsys):
    bad = tmp_path / "bad.imp"
    bad.write_text("let x = flip 1/2 in y")
    assert main(["run", str(bad)]) == DIAGNOSTIC
    assert "unbound variable" in capsys.readouterr().err


def test_run_missing_file():
    with pytest.raises(SystemExit) as exc:
        main(["run", "no-such-file.imp"])
    assert exc.value.code == USAGE


def test_typecheck(capsys):
    assert main(["typecheck", str(PROGRAMS / "boy_or_girl_2.imp")]) == OK
    out = capsys.readouterr().out
    assert "type: (B * B)" in out
    assert "grade: 1" in out


def test_typecheck_reports_type_errors(tmp_path, capsys):
    bad = tmp_path / "bad.imp"
    bad.write_text("if (flip 1, flip 1) then flip 1 else flip 0")
    assert main(["typecheck", str(bad)]) == DIAGNOSTIC
    assert "guard" in capsys.readouterr().err


def test_check_eq_equal(capsys):
    code = main(
        [
            "check-eq",
            str(PROGRAMS / "discarded_knight_lhs.term"),
            str(PROGRAMS / "discarded_knight_rhs.term"),
        ]
    )
    assert code == OK
    assert capsys.readouterr().out.strip() == "equal"


def test_check_eq_not_equal(tmp_path, capsys):
    a = tmp_path / "a.term"
    b = tmp_path / "b.term"
    a.write_text("(flip 1/2)")
    b.write_text("(flip 1/3)")
    assert main(["check-eq", str(a), str(b)]) == OK
    assert capsys.readouterr().out.strip() == "not-equal"


def test_check_eq_not_comparable(tmp_path, capsys):
    a = tmp_path / "a.term"
    b = tmp_path / "b.term"
    a.write_text("knight")
    b.write_text("id1")
    assert main(["check-eq", str(a), str(b)]) == OK
    assert capsys.readouterr().out.startswith("not-comparable")


def test_check_eq_up_to_regrading(tmp_path, capsys):
    a = tmp_path / "a.term"
    b = tmp_path / "b.term"
    a.write_text("knight")
    b.write_text("(regrade (inj 2->1 [0]) knight)")
    assert main(["check-eq", str(a), str(b), "--up-to-regrading"]) == OK
    assert capsys.readouterr().out.strip() == "equal-up-to-regrading: inj 2->1 [0]"


def test_check_eq_malformed_term(tmp_path, capsys):
    a = tmp_path / "a.term"
    a.write_text("(seq knight)")
    b = tmp_path / "b.term"
    b.write_text("id1")
    assert main(["check-eq", str(a), str(b)]) == DIAGNOSTIC
    assert "error" in capsys.readouterr().err


def test_normalize(tmp_path, capsys):
    f = tmp_path / "t.term"
    f.write_text("(seq knight del)")
    assert main(["normalize", str(f)]) == OK
    prefix, zero = capsys.readouterr().out.strip().splitlines()
    assert "knight" in prefix
    assert "knight" not in zero
    assert "del" in zero


def test_verify_laws_small(capsys):
    assert main(["verify-laws", "--seed", "1", "--size", "2"]) == OK
    out = capsys.readouterr().out
    assert "all laws hold" in out
    assert "seq-assoc: 2/2 pass" in out
    assert "interchange-strict-fails: 1/1 pass" in out


def test_verify_laws_size_zero(capsys):
    assert main(["verify-laws", "--size", "0"]) == OK
    assert "vacuously OK" in capsys.readouterr().out


def test_render_term(tmp_path, capsys):
    out = tmp_path / "d.dot"
    f = tmp_path / "t.term"
    f.write_text("(seq knight copy)")
    assert main(["render", str(f), "-o", str(out)]) == OK
    dot = out.read_text()
    assert dot.startswith("digraph")
    assert 'label="knight"' in dot


def test_render_program(tmp_path):
    out = tmp_path / "p.dot"
    assert main(["render", str(PROGRAMS / "guarded_coin.imp"), "-o", str(out)]) == OK
    assert 'label="cond"' not in out.read_text()  # no observe in this program


def test_report_writes_files(tmp_path, capsys):
    assert main(["report", str(PROGRAMS / "guarded_coin.imp"), "-o", str(tmp_path)]) == OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    for line in lines:
        assert Path(line).exists()
    assert (tmp_path / "guarded_coin_branches.csv").exists()
    assert (tmp_path / "guarded_coin_distribution.png").exists()


def test_console_script_entry_point():
    # the installed `impcirc` executable, end to end
    proc = subprocess.run(
        [sys.executable, "-m", "impcirc.cli", "typecheck", str(PROGRAMS / "guarded_coin.imp")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == OK
    assert "type: B" in proc.stdout
