import pytest
from hypothesis import given, settings

from qosc.calculus import (MIXED, CalculusPresentation, DerivativeLetterError, FixtureError, apply_d,
                           compare_with_fixture, forms_words, generate_calculus, printed_dd_relations,
                           verify_d_of_relations, verify_d_squared, verify_partial_consistency)
from qosc.freealg import NCPoly
from qosc.parser import parse
from qosc.rewrite import check_unique_normal_forms, orient_relations
from qosc.rmatrix import PAIRS, RMatrix, build_omega
from qosc.scalar import Scalar

from strategies import nonzero_rationals
from systems import calculus


def P(text):
    return parse(text, MIXED)


def rule(pres, section, head):
    return pres.rules(section)[P(head).leading_word()]


def test_xxi_row():
    assert rule(calculus("omega"), "xxi", "x1*xi2") == P("q^2/u^2*xi2*x1 + q*s/u^2*xi3*x3")


def test_xd_row():
    assert rule(calculus("omega"), "xd", "d3*x2") == P("1/u*x2*d3 - s/q*x3*d1")


def test_dxi_row_inverse_calculus():
    assert rule(calculus("omega-inv"), "dxi", "d2*xi3") == P("q/u*xi3*d2")


def test_xixi_reduced_to_six():
    assert len(calculus("omega").relations["xixi"]) == 6


def test_xd_rules_are_inhomogeneous():
    assert rule(calculus("omega"), "xd", "d1*x1").coeff(()) == 1


@pytest.mark.parametrize("key,fixture", [("omega", "R_omega"), ("omega-inv", "R_omega_inv")])
def test_fixture_matches(key, fixture):
    report = compare_with_fixture(calculus(key), fixture)
    assert report.ok, [c.name for c in report.failures()]


def test_omega_against_inverse_tables_fails_on_x1_xi2():
    report = compare_with_fixture(calculus("omega"), "R_omega_inv")
    names = [c.name for c in report.failures()]
    assert names[0].endswith("R_omega_inv_xxi: x1*xi2")


def test_unknown_fixture():
    with pytest.raises(FixtureError):
        compare_with_fixture(calculus("omega"), "R_nonexistent")


@pytest.mark.parametrize("key", ["omega", "omega-inv"])
def test_partial_consistency(key):
    report = verify_partial_consistency(calculus(key))
    assert report.ok and len(report.checks) == 9


def test_named_consistency_examples():
    assert calculus("omega").system.normal_form(P("d3*(x1*x2 - q*x2*x1 - s*x3*x3)")).is_zero()
    assert calculus("omega-inv").system.normal_form(P("d1*(x1*x3 - u*x3*x1)")).is_zero()


def test_perturbed_entry_breaks_consistency():
    c = build_omega()
    rows = {i: dict(r) for i, r in c.rows.items()}
    rows[PAIRS.index((2, 1))][PAIRS.index((1, 2))] = 2 / Scalar.var("q")
    report = verify_partial_consistency(generate_calculus(RMatrix(rows), "perturbed"))
    assert not report.ok
    assert any(not c.ok and c.witness for c in report.checks)


def test_apply_d_leibniz():
    assert apply_d(P("x1*x2")) == P("xi1*x2 + x1*xi2")


def test_apply_d_sign():
    assert apply_d(P("xi1*x2")) == P("-xi1*xi2")


def test_apply_d_rejects_derivatives():
    with pytest.raises(DerivativeLetterError):
        apply_d(P("d1*x2"))


@pytest.mark.parametrize("key", ["omega", "omega-inv"])
def test_d_of_relations(key):
    assert verify_d_of_relations(calculus(key)).ok


def test_d_of_xx_relation_example():
    d = apply_d(P("x1*x2 - q*x2*x1 - s*x3*x3"))
    assert calculus("omega").system.normal_form(d).is_zero()


@pytest.mark.parametrize("text", ["x1", "x1*x3", "x1*x2*x3"])
def test_d_squared_examples(text):
    assert calculus("omega").system.normal_form(apply_d(apply_d(P(text)))).is_zero()


@pytest.mark.parametrize("key", ["omega", "omega-inv"])
def test_d_squared_exhaustive(key):
    samples = (NCPoly.from_word(w, MIXED) for w in forms_words(3))
    assert verify_d_squared(samples, calculus(key).system).ok


def _replace(key, section, new_row):
    pres = calculus(key)
    new = P(new_row)
    head = new.leading_word()
    rels = dict(pres.relations)
    rels[section] = [r for r in rels[section] if orient_relations([r], MIXED).rules[0].lhs != head] + [new]
    return CalculusPresentation(pres.c_matrix, rels, key)


def test_printed_d3_xi3_row_is_not_confluent():
    pres = _replace("omega", "dxi", "d3*xi3 - (u^2/q - 1)*xi2*d2 - u^2/q*xi3*d2")
    assert not check_unique_normal_forms(pres.system, 3).ok


def test_printed_d3_x2_row_breaks_consistency():
    pres = _replace("omega-inv", "xd", "d3*x2 - u/q*x2*d3 + s*u^2/q*x3*d1")
    assert not verify_partial_consistency(pres).ok


def test_printed_derivative_relations_are_not_confluent():
    pres = calculus("omega")
    rels = dict(pres.relations)
    rels["dd"] = printed_dd_relations()
    assert not check_unique_normal_forms(CalculusPresentation(pres.c_matrix, rels).system, 3).ok


@settings(max_examples=5)
@given(nonzero_rationals, nonzero_rationals, nonzero_rationals)
def test_specialisation_stability(vq, vu, vs):
    env = {"q": vq, "u": vu, "s": vs}
    for key, fixture in (("omega", "R_omega"), ("omega-inv", "R_omega_inv")):
        pres = calculus(key).substitute(env)
        assert compare_with_fixture(pres, fixture, bindings=env).ok
        assert verify_partial_consistency(pres).ok
        assert verify_d_of_relations(pres).ok
        samples = (NCPoly.from_word(w, MIXED) for w in forms_words(2))
        assert verify_d_squared(samples, pres.system).ok
