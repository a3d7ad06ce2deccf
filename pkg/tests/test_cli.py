import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from lambdacube.cli import main

G0 = str(Path(__file__).parent / "data" / "g0.ctx")


def run(*argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    status = main(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def test_check_prints_the_type():
    assert run("check", "--system", "stlc", "--context", G0, "(f a)") == (0, "type: P\n", "")


def test_check_reports_normal_type():
    status, out, _ = run("check", "--context", G0, "[x:([y:Prop] y) P] x")
    assert status == 0
    assert out == "type: (([y:Prop] y) P) -> (([y:Prop] y) P)\nnormal type: P -> P\n"


def test_type_errors_exit_1():
    status, out, err = run("check", "--system", "stlc", "[A:Prop][x:A]x")
    assert status == 1 and out == ""
    assert "RuleNotInSystem(Type,Prop)" in err
    status, _, err = run("check", "--system", "cc", "Type")
    assert status == 1 and "TypeHasNoType" in err


def test_parse_errors_exit_2():
    status, _, err = run("check", "--context", G0, "(f a")
    assert status == 2 and "1:5" in err
    assert run("check", "--system", "nonsense", "Prop")[0] == 2
    assert run("check", "--context", "P : Prop;;; f", "Prop")[0] == 2


def test_fuel_exhaustion_exits_3(monkeypatch):
    monkeypatch.setenv("CUBE_FUEL", "1")
    status, _, err = run("nf", "--context", G0, "([x:P] x) (([y:P] y) a)")
    assert status == 3 and "fuel" in err
    monkeypatch.delenv("CUBE_FUEL")
    assert run("nf", "--context", G0, "([x:P] x) (([y:P] y) a)") == (0, "a\n", "")
    assert run("nf", "--fuel", "1", "--context", G0, "([x:P] x) (([y:P] y) a)")[0] == 3


def test_verbs(g0):
    assert run("eta-long", "--context", G0, "f")[1] == "[y:P] (f y)\n"
    assert run("measure", "--context", G0, "f")[1] == "5\n"
    assert run("measure", "--marked", "--context", G0, "f")[1] == "5\n"
    assert run("nf", "--context", G0, "[x:P] f x")[1] == "f\n"
    assert run("mark", "--context", G0, "f")[1] == "f^(P^(Prop) -> P^(Prop))\n"
    plus = "([y:P^(Prop)] (f^(P^(Prop) -> P^(Prop)) y^(P^(Prop)))^(P^(Prop)))^(P^(Prop) -> P^(Prop))\n"
    assert run("mark", "--plus", "--context", G0, "f")[1] == plus
    assert run("eta-long", "--marked", "--context", G0, "f")[1] == plus
    assert run("contents", "--context", G0, plus.strip())[1] == "[y:P] (f y)\n"


def test_descend():
    status, out, _ = run("descend", "--context", G0, "(f a)")
    assert status == 0
    assert out.splitlines() == [
        "  P", "  a", "  f", "  P -> P", "  P  under _ : P",
        "size: 5", "depth: 3", "mu-descent: OK",
    ]
    status, out, _ = run("descend", "--prime", "--context", G0, "(f a)")
    assert status == 0 and "size: 5" in out


def test_rules_flag_selects_a_system():
    assert run("check", "--rules", "PP", "[A:Prop][x:A]x")[0] == 1
    assert run("check", "--rules", "PP,TP", "[A:Prop][x:A]x")[0] == 0


def test_structured_output():
    status, out, _ = run("check", "--format", "structured", "--system", "stlc", "--context", G0, "(f a)")
    assert status == 0
    assert out == ('{"command": "check", "system": "stlc", "input": "(f a)", '
                   '"result": {"type": "P", "normal_type": "P"}, "diagnostics": []}\n')
    status, out, _ = run("check", "--format", "structured", "--rules", "PP", "[A:Prop][x:A]x")
    record = json.loads(out)
    assert status == 1 and record["result"] is None
    assert record["diagnostics"] == [{
        "kind": "RuleNotInSystem", "message": "RuleNotInSystem(Type,Prop)", "path": [], "rule": ["Type", "Prop"],
    }]
    assert set(record) == {"command", "system", "input", "result", "diagnostics"}


def test_fuzz_is_deterministic():
    first = run("fuzz", "--system", "cc", "--count", "6", "--seed", "7")
    second = run("fuzz", "--system", "cc", "--count", "6", "--seed", "7")
    assert first == second and first[0] == 0
    assert first[1].startswith("fuzz: 6 case(s), seed 7, systems cc\n")
    assert first[1].endswith("0 failure(s)\n")
    status, out, _ = run("fuzz", "--system", "stlc", "--count", "1", "--seed", "1")
    assert status == 0 and "subject-reduction" in out
    assert run("fuzz", "--count", "0")[0] == 2


def test_fuzz_all_systems():
    status, out, _ = run("fuzz", "--system", "all", "--count", "2", "--seed", "0")
    assert status == 0 and out.startswith("fuzz: 16 case(s)")


def test_term_from_file(tmp_path):
    src = tmp_path / "t.term"
    src.write_text("(f a)\n")
    assert run("check", "--context", G0, f"@{src}")[1] == "type: P\n"
    assert run("check", "--context", G0, f"@{tmp_path / 'missing'}")[0] == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "lambdacube.cli", "eta-long", "--context", G0, "f"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "[y:P] (f y)\n"
