import json

import jsonschema
import pytest
from hypothesis import given

from qosc import quantumgroup as qg
from qosc.calculus import FORMS, MIXED, X_ALPHABET
from qosc.cli import main
from qosc.freealg import format_ncpoly
from qosc.parser import ParseError, parse, parse_scalar
from qosc.report import REPORT_SCHEMA

from strategies import ncpolys, q, s, u

T = qg.T_ALPHABET


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_xx_relation():
    x1, x2, x3 = (X_ALPHABET.gen(n) for n in ("x1", "x2", "x3"))
    assert parse("x1*x2 - q*x2*x1 - s*x3^2", X_ALPHABET) == x1 * x2 - q * (x2 * x1) - s * (x3 * x3)


def test_parse_rtt_row():
    t11, t12 = T.gen("t11"), T.gen("t12")
    assert parse("t12*t11 - q^2/u^2*t11*t12", T) == t12 * t11 - (q**2 / u**2) * (t11 * t12)


def test_bracket_generator_syntax():
    assert parse("t[1,2]*t[3,3]", T) == parse("t12*t33", T)


def test_syntax_error_column():
    with pytest.raises(ParseError, match="column 4"):
        parse("x1*(", X_ALPHABET)


def test_unknown_generator():
    with pytest.raises(ParseError):
        parse("x1*y7", X_ALPHABET)


def test_division_by_generator_rejected():
    with pytest.raises(ParseError):
        parse("q/x1", X_ALPHABET)


def test_leading_minus_sugar():
    assert parse("-x1 + x2", X_ALPHABET) == parse("0 - x1 + x2", X_ALPHABET)
    assert parse_scalar("-(u^2-q)/q^2") == (q - u**2) / q**2


@pytest.mark.parametrize("alphabet", [X_ALPHABET, FORMS, MIXED, T, qg.TD_ALPHABET],
                         ids=["x", "forms", "mixed", "t", "t+Dinv"])
def test_round_trip(alphabet):
    @given(ncpolys(alphabet, max_terms=4, max_len=4))
    def check(p):
        assert parse(format_ncpoly(p), alphabet) == p

    check()


def test_verify_yang_baxter(capsys):
    code, out, _ = run(capsys, "verify", "yang-baxter")
    assert code == 0
    assert "Omega" in out and "Omega^-1" in out


def test_verify_subgroup_at_q_u2(capsys):
    code, out, _ = run(capsys, "verify", "subgroup", "--substitute", "q=u^2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass"
    assert all(c["witness"] is None for c in doc["checks"])


def test_missing_fixture_exit_2(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "rtt", "--fixture", str(tmp_path / "missing.txt"), "--format", "json")
    assert code == 2
    assert json.loads(out)["status"] == "error"


def test_failing_suite_exit_1(capsys):
    code, _, _ = run(capsys, "verify", "tprime")
    assert code == 1


def test_invalid_binding_exit_2(capsys):
    code, _, err = run(capsys, "verify", "subgroup", "--substitute", "w=3")
    assert code == 2 and "invalid binding" in err


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "no-such-suite"])
    assert exc.value.code == 2


def test_normal_form_command(capsys):
    code, out, _ = run(capsys, "normal-form", "x1*x2*x3", "--system", "xx")
    assert code == 0
    assert parse(out.strip(), X_ALPHABET) == parse("q*x3*x2*x1 + s*x3*x3*x3", X_ALPHABET)


def test_normal_form_syntax_error(capsys):
    code, _, err = run(capsys, "normal-form", "x1*(", "--system", "xx")
    assert code == 2 and "column 4" in err


@pytest.mark.parametrize("suite", ["yang-baxter", "subgroup", "tprime", "calculus"])
def test_json_schema(capsys, suite):
    _, out, _ = run(capsys, "verify", suite, "--format", "json")
    jsonschema.validate(json.loads(out), REPORT_SCHEMA)


def test_json_is_bit_stable(capsys):
    _, first, _ = run(capsys, "verify", "determinant", "--format", "json")
    _, second, _ = run(capsys, "verify", "determinant", "--format", "json")
    assert first == second


def test_json_timings_flag(capsys):
    _, out, _ = run(capsys, "verify", "uniqueness", "--format", "json", "--timings")
    assert any(c["elapsed_ms"] > 0 for c in json.loads(out)["checks"])


def test_latex_xxi_table(capsys):
    code, out, _ = run(capsys, "derive", "calculus", "--matrix", "omega", "--format", "latex")
    assert code == 0
    block = out.split("% xxi")[1].split("% ")[0]
    rows = [line for line in block.splitlines() if line.rstrip().endswith("\\\\")]
    assert len(rows) + 1 >= 9
    assert "\\xi^{2}" in block


def test_latex_report(capsys):
    code, out, _ = run(capsys, "verify", "eigenspaces", "--format", "latex")
    assert code == 0 and "\\begin{tabular}" in out


def test_witness_reparses(capsys):
    _, out, _ = run(capsys, "verify", "tprime", "--format", "json")
    check = next(c for c in json.loads(out)["checks"] if c["status"] == "fail")
    loc = qg.subgroup_localization()
    a = loc.alphabet
    inv = a.gen(qg.T33INV)
    x, y = a.gen("t13") * inv, a.gen("t23") * inv
    assert parse(check["witness"], a) == loc.normal_form(x * y - y * x)


def test_rtt_witness_reparses():
    from qosc.rewrite import reduces_to_zero
    ok, witness = reduces_to_zero(parse("x1*x2 - x2*x1", X_ALPHABET), qg._calculus(None, "", None).subsystem(("xx",), X_ALPHABET))
    assert not ok and parse(format_ncpoly(witness), X_ALPHABET) == witness


def test_dump_matrix_json(capsys):
    from qosc.rmatrix import RMatrix, build_omega

    code, out, _ = run(capsys, "dump-matrix", "omega", "--format", "json")
    assert code == 0 and RMatrix.from_json(out).dense() == build_omega().dense()


def test_derive_rtt_36_rows(capsys):
    code, out, _ = run(capsys, "derive", "rtt")
    assert code == 0
    assert len([line for line in out.splitlines() if " = " in line]) == 36
