import io
import re
from pathlib import Path

import pytest

from cyksz.circuit import eval_circuit, import_circuit
from cyksz.cli import run
from cyksz.grammar import parse_grammar

DATA = Path(__file__).resolve().parents[1] / "data" / "grammars"
AB, BA, P3 = str(DATA / "ab.cnf"), str(DATA / "ba.cnf"), str(DATA / "p3.cnf")
DYCK_L, DYCK_R, ANBN = str(DATA / "dyck_left.cnf"), str(DATA / "dyck_right.cnf"), str(DATA / "anbn.cfg")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_eq_slice_identical_files():
    code, out, _ = cli("eq-slice", "--g1", AB, "--g2", AB, "--n", "5", "--seed", "0")
    assert code == 0
    assert re.fullmatch(r"EQUAL_WHP rounds=2 error<=\d\.\d{3}e[+-]\d+\n", out)


def test_eq_slice_ab_ba():
    assert cli("eq-slice", "--g1", AB, "--g2", BA, "--n", "2") == (1, "NOT_EQUAL round=1\n", "")


def test_eq_slice_dyck_fixtures():
    code, out, _ = cli("eq-slice", "--g1", DYCK_L, "--g2", DYCK_R, "--n", "40", "--rounds", "3", "--seed", "0x2a")
    assert code == 0 and out.startswith("EQUAL_WHP rounds=3 ")


def test_eq_upto(tmp_path):
    a = write(tmp_path, "a.cnf", "start S\nS -> 'a'\n")
    a_aaa = write(tmp_path, "b.cnf", "start S\nS -> 'a' | A T\nT -> A A\nA -> 'a'\n")
    assert cli("eq-upto", "--g1", a, "--g2", a_aaa, "--n", "2")[0] == 0
    assert cli("eq-upto", "--g1", a, "--g2", a_aaa, "--n", "3")[:2] == (1, "NOT_EQUAL round=1\n")


def test_verbose_detail_goes_to_stderr():
    code, out, err = cli("-v", "eq-slice", "--g1", AB, "--g2", AB, "--n", "2")
    assert code == 0 and out.count("\n") == 1 and err.startswith("# seed=0 n=2")


def test_parse():
    assert cli("parse", "--g", AB, "--word", "a b") == (0, "MEMBER\n", "")
    assert cli("parse", "--g", AB, "--word", "b a") == (1, "NOT_MEMBER\n", "")
    assert cli("parse", "--g", P3, "--word", "3 1 2")[:2] == (0, "MEMBER\n")


def test_parse_multichar_tokens(tmp_path):
    g = write(tmp_path, "kw.cnf", "start S\nS -> I X\nI -> 'if'\nX -> 'x1'\n")
    assert cli("parse", "--g", g, "--word", "if x1")[0] == 0
    assert cli("parse", "--g", g, "--word", "x1 if")[0] == 1


def test_parse_unknown_letter_is_input_error():
    code, out, err = cli("parse", "--g", AB, "--word", "a c")
    assert code == 3 and out == "" and "not in the grammar's alphabet" in err


def test_gf2_empty(tmp_path):
    even = write(tmp_path, "even.cnf", "start S\nS -> A B | B A\nA -> 'a'\nB -> 'a'\n")
    code, out, _ = cli("gf2-empty", "--g", even, "--n", "2")
    assert code == 0 and out.startswith("EMPTY_WHP rounds=2 error<=")
    assert cli("gf2-empty", "--g", AB, "--n", "2")[:2] == (1, "NONEMPTY round=1\n")


def test_extract_circuit_to_stdout_and_file(tmp_path):
    code, out, _ = cli("extract-circuit", "--g", P3, "--n", "3")
    assert code == 0 and out.startswith("circuit ")
    c = import_circuit(out)
    path = tmp_path / "p3.circ"
    code, line, _ = cli("extract-circuit", "--g", P3, "--n", "3", "--out", str(path))
    assert code == 0 and line == f"CIRCUIT gates={len(c.gates)} output=g{c.output}\n"
    assert path.read_text() == out
    x = {(a, i): a == "123"[i - 1] for a in "123" for i in (1, 2, 3)}
    assert eval_circuit(c, x)


def test_oracle_check():
    assert cli("oracle-check", "--g1", DYCK_L, "--g2", DYCK_R, "--n", "6") == (0, "EQUAL words=5\n", "")
    assert cli("oracle-check", "--g1", AB, "--g2", BA, "--n", "2") == (1, 'NOT_EQUAL word="a b"\n', "")


def test_oracle_check_budget():
    code, out, err = cli("oracle-check", "--g1", AB, "--g2", BA, "--n", "20")
    assert code == 3 and out == "" and "budget" in err
    assert cli("oracle-check", "--g1", AB, "--g2", BA, "--n", "3", "--budget", "4")[0] == 3


def test_ambiguity_check(tmp_path):
    catalan = write(tmp_path, "cat.cnf", "start S\nS -> S S | 'a'\n")
    assert cli("ambiguity-check", "--g", catalan, "--n", "3") == (1, 'AMBIGUOUS word="a a a" derivations=2\n', "")
    assert cli("ambiguity-check", "--g", DYCK_R, "--n", "8") == (0, "UNAMBIGUOUS\n", "")


def test_normalize(tmp_path):
    code, out, _ = cli("normalize", "--g", ANBN)
    head, body = out.split("\n", 1)
    assert code == 0 and re.fullmatch(r"CNF rules=\d+ epsilon=true", head)
    g = parse_grammar(body)
    assert int(head.split()[1].split("=")[1]) == g.size
    path = tmp_path / "out.cnf"
    assert cli("normalize", "--g", ANBN, "--out", str(path)) == (0, head + "\n", "")
    assert path.read_text() == body
    assert cli("oracle-check", "--g1", str(path), "--g2", str(path), "--n", "6")[1] == "EQUAL words=1\n"


def test_normalize_rejects_cycles(tmp_path):
    g = write(tmp_path, "cyc.cfg", "start S\nS -> S | 'a'\n")
    code, out, err = cli("normalize", "--g", g)
    assert code == 3 and out == "" and "error:" in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["eq-slice", "--g1", AB, "--n", "2"],
    ["eq-slice", "--g1", AB, "--g2", AB, "--n", "0"],
    ["eq-slice", "--g1", AB, "--g2", AB, "--n", "two"],
    ["eq-slice", "--g1", AB, "--g2", AB, "--n", "2", "--rounds", "0"],
    ["eq-slice", "--g1", AB, "--g2", AB, "--n", "2", "--seed", "-1"],
    ["eq-slice", "--g1", AB, "--g2", AB, "--n", "2", "--seed", str(2**64)],
    ["parse", "--g", AB],
    ["gf2-empty", "--g1", AB, "--n", "2"],
])
def test_usage_errors_exit_2(argv):
    code, out, err = cli(*argv)
    assert code == 2 and out == "" and err


@pytest.mark.parametrize("text", [
    "S -> 'a'\n",  # no start line
    "start S\nS -> A B C\nA -> 'a'\nB -> 'a'\nC -> 'a'\n",  # not CNF
    "start S\nS -> 'a\n",  # unterminated terminal
])
def test_bad_grammar_files_exit_3(tmp_path, text):
    g = write(tmp_path, "bad.cnf", text)
    code, out, err = cli("eq-slice", "--g1", g, "--g2", AB, "--n", "2")
    assert code == 3 and out == "" and err.startswith("error: ")


def test_missing_file_exits_3(tmp_path):
    code, _, err = cli("parse", "--g", str(tmp_path / "nope.cnf"), "--word", "a")
    assert code == 3 and "nope.cnf" in err


def test_help_exits_0():
    code, out, _ = cli("--help")
    assert code == 0 and "eq-slice" in out


@pytest.mark.parametrize("argv", [
    ["eq-slice", "--g1", DYCK_L, "--g2", DYCK_R, "--n", "12", "--seed", "7"],
    ["eq-upto", "--g1", AB, "--g2", BA, "--n", "3", "--seed", "123"],
    ["gf2-empty", "--g", P3, "--n", "3", "--seed", "5"],
    ["extract-circuit", "--g", DYCK_R, "--n", "6"],
    ["normalize", "--g", ANBN],
])
def test_output_is_byte_identical(argv):
    first = cli(*argv)
    for _ in range(9):
        assert cli(*argv) == first
