import pytest
from hypothesis import given

from qosc import quantumgroup as qg
from qosc.calculus import X_ALPHABET, XI_ALPHABET
from qosc.freealg import Alphabet, Generator, NCPoly
from qosc.parser import parse
from qosc.rewrite import (FuelExhausted, OrientationError, RewriteRule, RewriteSystem,
                          check_unique_normal_forms, normal_form, orient_relations, reduces_to_zero)

from qosc.scalar import Scalar

from strategies import ncpolys, q
from systems import calculus, dd, xixi, xx

X = X_ALPHABET


def P(text, alphabet=X):
    return parse(text, alphabet)


def test_xx_rule():
    assert xx().normal_form(P("x1*x2")) == P("q*x2*x1 + s*x3*x3")


def test_normal_word_is_fixed():
    assert xx().normal_form(P("x2*x1")) == P("x2*x1")


def test_three_step_reduction():
    assert xx().normal_form(P("x1*x2*x3")) == P("q*x3*x2*x1 + s*x3*x3*x3")


def test_xi_square_vanishes():
    assert reduces_to_zero(P("xi1*xi1", XI_ALPHABET), xixi()) == (True, XI_ALPHABET.zero())


def test_relation_itself_reduces_to_zero():
    ok, _ = reduces_to_zero(P("x1*x2 - q*x2*x1 - s*x3*x3"), xx())
    assert ok


def test_witness_for_non_member():
    ok, witness = reduces_to_zero(P("x1*x2 - x2*x1"), xx())
    assert not ok
    assert witness == P("(q-1)*x2*x1 + s*x3*x3")


def test_orient_xx():
    system = orient_relations([P("x1*x2 - q*x2*x1 - s*x3*x3")])
    (rule,) = system.rules
    assert rule.lhs == X.word("x1", "x2")
    assert rule.rhs == P("q*x2*x1 + s*x3*x3")


def test_orient_xixi_uses_xi_precedence():
    system = orient_relations([P("xi2*xi1 + u^2/q^2*xi1*xi2", XI_ALPHABET)])
    (rule,) = system.rules
    assert rule.lhs == XI_ALPHABET.word("xi2", "xi1")
    assert rule.rhs == P("-u^2/q^2*xi1*xi2", XI_ALPHABET)


def test_orient_tie_is_error():
    # equal precedence makes a*b and b*a tie under deg-lex
    ab = Alphabet([Generator(0, "a", 0, 1), Generator(1, "b", 0, 1)])
    rel = NCPoly.from_word(ab.word("a", "b"), ab) - NCPoly.from_word(ab.word("b", "a"), ab, q)
    with pytest.raises(OrientationError, match="tied"):
        orient_relations([rel])


def _engineered():
    ab = Alphabet.build(["a", "b"])
    one = ab.one()
    rules = [RewriteRule(ab.word("a", "b"), one + NCPoly.from_word(ab.word("b", "a"), ab)),
             RewriteRule(ab.word("b", "a"), NCPoly.from_word(ab.word("a", "b"), ab).scale(Scalar.coerce(2)))]
    return RewriteSystem(ab, rules, fuel=2000, name="engineered")


def test_engineered_system_fails_sweep():
    report = check_unique_normal_forms(_engineered(), max_degree=2)
    assert not report.ok


def test_engineered_system_runs_out_of_fuel():
    system = _engineered()
    with pytest.raises(FuelExhausted):
        system.normal_form(NCPoly.from_word(system.alphabet.word("a", "b"), system.alphabet))


def test_traced_reduction_replays():
    p = P("x1*x2*x3 + u*x1*x3*x2")
    nf, trace = normal_form(p, xx(), trace=True)
    assert nf == xx().normal_form(p)
    assert xx().replay(p, trace) == nf
    assert trace.steps


@pytest.mark.parametrize("system", [xx, xixi, dd], ids=["xx", "xixi", "dd"])
def test_uniqueness_small_alphabets(system):
    assert check_unique_normal_forms(system(), max_degree=4).ok


def test_uniqueness_mixed_calculus():
    assert check_unique_normal_forms(calculus("omega").system, max_degree=3).ok


def test_uniqueness_t_system():
    report = check_unique_normal_forms(qg.default_rtt_system(), max_degree=3, sample_degree=4, samples=200)
    assert report.ok, report.failures()


@pytest.mark.parametrize("key", ["omega", "omega-inv"])
def test_generating_relations_reduce_to_zero(key):
    system = calculus(key).system
    for rel in system.relations():
        assert system.normal_form(rel).is_zero()


@given(ncpolys(X, max_len=4))
def test_normal_form_idempotent(p):
    nf = xx().normal_form(p)
    assert xx().normal_form(nf) == nf


@given(ncpolys(X, max_len=4))
def test_replay_soundness(p):
    trace = xx().normal_form_traced(p)
    assert xx().replay(p, trace) == trace.result == xx().normal_form(p)
