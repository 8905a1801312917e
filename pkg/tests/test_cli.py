import json
import subprocess
import sys

import pytest

from fickle.cli import EXIT_CONFLICT, EXIT_OK, EXIT_PARSE, main
from fickle.fixtures import fixture_path


def fx(name):
    return str(fixture_path(name))


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_lattice(capsys):
    code, out, _ = call(capsys, "validate", fx("m3.lat"))
    assert code == EXIT_OK and out.splitlines()[0] == "lattice, 5 elements"


def test_validate_usl(capsys):
    code, out, _ = call(capsys, "validate", fx("m3_usl.lat"))
    assert out.splitlines()[0] == "upper-semilattice; missing meets: (A,B),(A,C),(B,C)"


def test_validate_poset(capsys):
    code, out, _ = call(capsys, "validate", fx("b0.lat"))
    assert code == EXIT_OK and out.startswith("poset-only; missing joins: ")


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.lat"
    bad.write_text("elem a\nthis is not a directive\n")
    code, _, err = call(capsys, "validate", str(bad))
    assert code == EXIT_PARSE and "line 2" in err


def test_conflict_exit(capsys):
    code, _, err = call(capsys, "analyze", fx("m3_usl.lat"))
    assert code == EXIT_CONFLICT and err.startswith("error:")
    code, _, _ = call(capsys, "requirements", fx("m3.lat"))
    assert code == EXIT_CONFLICT


def test_missing_file_exit(capsys):
    code, _, _ = call(capsys, "validate", "/nonexistent/x.lat")
    assert code not in (EXIT_OK, EXIT_PARSE, EXIT_CONFLICT)


def test_ord(capsys):
    assert call(capsys, "ord", "w*2*w")[1] == "w^2\n"
    code, _, _ = call(capsys, "ord", "w^^2")
    assert code == EXIT_PARSE


def test_classify_lempp(capsys):
    code, out, _ = call(capsys, "classify", fx("lempp.lat"))
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0].startswith("omega-omega-necessary; triple: ")
    assert any(line.startswith("rejected as >ω² candidate; witness sublattice: oo3 {") for line in lines)


def test_classify_structured(capsys):
    code, out, _ = call(capsys, "classify", fx("lerman.lat"), "--format", "structured")
    data = json.loads(out)
    assert data["classification"]["embedding"]["pattern"] == "m3"


def test_enumerate(capsys):
    code, out, _ = call(capsys, "enumerate", "--direct", "3")
    lines = out.splitlines()
    assert lines[0].startswith("12 lattices")
    names = {line.split()[2] for line in lines[1:]}
    assert {"diamond", "m3", "l7", "oo1", "oo2", "oo3", "a3", "b1"} <= names


def test_requirements_text(capsys):
    code, out, _ = call(capsys, "requirements", fx("a3.lat"))
    assert out.splitlines()[0] == "Join:        B ≤ ACD"


def test_analyze(capsys):
    code, out, _ = call(capsys, "analyze", fx("n5.lat"))
    assert "distributive: no" in out and "irreducible but not prime: b ≤ a0 ∨ a1" in out


def test_simulate_and_bound(capsys):
    code, out, _ = call(capsys, "simulate", "--config", fx("two_joins.cfg"), "--script", fx("two_joins_run.script"))
    assert code == EXIT_OK and "partition @AB_low abababa|b" in out and "permissions used: 28" in out
    code, out, _ = call(capsys, "bound", "--config", fx("three_joins.cfg"))
    assert out.splitlines()[0] == "bound: w^3"
    code, out, _ = call(capsys, "bound", "--config", fx("alternating.cfg"), "--format=structured")
    assert json.loads(out)["bound"]["bound"] == "5"


def test_dot_to_stdout_and_file(capsys, tmp_path):
    code, out, _ = call(capsys, "validate", fx("m3_usl.lat"), "--dot", "-")
    assert code == EXIT_OK and 'digraph "structure"' in out
    target = tmp_path / "m3.dot"
    code, _, _ = call(capsys, "--dot", str(target), "classify", fx("m3.lat"))
    assert target.read_text().count("->") == 6
    code, _, _ = call(capsys, "ord", "w", "--dot", "-")
    assert code == EXIT_CONFLICT


@pytest.mark.parametrize("argv", [
    ["classify", fx("cholak.lat")],
    ["requirements", fx("m3_usl.lat"), "--format", "structured"],
    ["enumerate", "--direct", "3"],
])
def test_deterministic(capsys, argv):
    first = call(capsys, *argv)[1]
    assert first == call(capsys, *argv)[1]


def test_subprocess_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fickle.cli", "validate", fx("diamond.lat")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("lattice, 4 elements")
    proc = subprocess.run([sys.executable, "-m", "fickle.cli", "ord", "w+"], capture_output=True, text=True)
    assert proc.returncode == EXIT_PARSE
