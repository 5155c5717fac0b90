import pytest
from hypothesis import assume, given, settings

from qosc import quantumgroup as qg
from qosc.calculus import fixture_path
from qosc.freealg import apply_morphism
from qosc.parser import parse
from qosc.rewrite import check_unique_normal_forms
from qosc.rmatrix import build_omega, build_omega_inverse
from qosc.scalar import Scalar

from strategies import nonzero_rationals, q, u

T = qg.T_ALPHABET
FLAT = {"q": 1, "u": 1, "s": 0}


def P(text, alphabet=T):
    return parse(text, alphabet)


def generated(head):
    return qg.default_rtt_system().rule_for(P(head).leading_word()).as_relation()


def test_81_instances():
    assert len(qg.rtt_instances(build_omega())) == 81


def test_36_independent_relations():
    assert len(qg.generate_rtt(build_omega())) == 36


def test_t12_t11_row():
    assert generated("t12*t11") == P("t12*t11 - q^2/u^2*t11*t12")


def test_t22_t11_row():
    assert generated("t22*t11") == P("t22*t11 - t11*t22 + (u^2-q)/q^2*t12*t21 + q*s/u^2*t31*t32")


def test_classical_limit_is_commutative():
    report = qg.classical_limit_check()
    assert report.ok


def test_rtt_table():
    report = qg.verify_rtt_table()
    assert report.ok and len(report.checks) == 40


def test_sign_flipped_fixture_fails_on_that_row(tmp_path):
    text = fixture_path("rtt_relations").read_text()
    lines = text.splitlines()
    i = next(k for k, line in enumerate(lines) if line.startswith("t13*t11"))
    lines[i] = lines[i].replace("= q/u*", "= -q/u*")
    assert lines[i] != text.splitlines()[i]
    (tmp_path / "flipped.txt").write_text("\n".join(lines))
    report = qg.verify_rtt_table("flipped", tmp_path)
    assert [c.name for c in report.failures()] == ["Omega vs flipped: t13*t11"]


def test_t_system_uniqueness_degree_3():
    assert check_unique_normal_forms(qg.default_rtt_system(), 3).ok


def test_determinant_row_one():
    tm = qg.matmul(qg.t_matrix(), qg.adjugate(), T.zero())
    system = qg.default_rtt_system()
    d = P("t11*t22*t33 + t13*t21*t32 + u^3/q^3*t12*t23*t31 - q/u*t11*t23*t32"
          " - u^2/q^2*t12*t21*t33 - u^2/q^2*t13*t22*t31")
    assert d == qg.determinant()
    assert system.normal_form(tm[1, 1] - d).is_zero()
    assert system.normal_form(tm[1, 2]).is_zero()


def test_classical_adjugate():
    flat = qg.default_rtt_system(FLAT)
    m = qg.adjugate(bindings=FLAT)
    t = {(i, j): f"t{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)}

    def cofactor(i, j):
        r = [k for k in (1, 2, 3) if k != j]
        c = [k for k in (1, 2, 3) if k != i]
        sign = "" if (i + j) % 2 == 0 else "-"
        return P(f"{sign}({t[r[0], c[0]]}*{t[r[1], c[1]]} - {t[r[0], c[1]]}*{t[r[1], c[0]]})")

    for (i, j), v in m.items():
        assert flat.normal_form(v - cofactor(i, j)).is_zero(), (i, j)
    det = P("t11*t22*t33 - t11*t23*t32 - t12*t21*t33 + t12*t23*t31 + t13*t21*t32 - t13*t22*t31")
    assert flat.normal_form(qg.determinant(bindings=FLAT) - det).is_zero()


def test_inverse_report():
    report = qg.verify_inverse()
    assert report.ok and len(report.checks) == 36


def test_d_commutation():
    report = qg.verify_D_commutation()
    assert report.ok


def test_d_t12_factor():
    system = qg.default_rtt_system()
    d, t12 = qg.determinant(), T.gen("t12")
    assert system.normal_form(d * t12 - (u**2 / q**4) * (t12 * d)).is_zero()
    assert system.normal_form(d * T.gen("t11") - T.gen("t11") * d).is_zero()


def test_d_is_not_central():
    system = qg.default_rtt_system()
    d, t21 = qg.determinant(), T.gen("t21")
    assert not system.normal_form(d * t21 - t21 * d).is_zero()


def test_computed_factors_match_corrected_table():
    assert qg.d_factors() == qg.read_dinv_table()


def test_printed_dinv_table_fails_on_two_generators():
    table = qg.read_dinv_table()
    table["t21"] = q**2
    table["t23"] = u / q**2
    report = qg.verify_D_commutation(table)
    assert sorted(c.name.split(" ")[0] for c in report.failures()) == ["D*t21", "D*t23"]


def test_factor_product_over_determinant_is_one():
    table = qg.read_dinv_table()
    for _, pairs in qg.DETERMINANT:
        prod = Scalar.coerce(1)
        for i, j in pairs:
            prod = prod * table[f"t{i}{j}"]
        assert prod == 1


def test_localized_sweep_degree_3():
    assert check_unique_normal_forms(qg.localized_dinv().system, 3).ok


def test_hopf_axioms():
    report = qg.verify_hopf_axioms()
    assert report.ok, [c.name for c in report.failures()]


def test_coproduct_example():
    two = qg.two_copy_system()
    a = two.alphabet
    rel = P("t13*t11 - q/u*t11*t13")
    assert two.normal_form(apply_morphism(rel, qg.coproduct_images(a), a)).is_zero()


def test_counit_example():
    eps = qg.counit_images(T)
    rel = generated("t22*t11")
    assert apply_morphism(rel, eps, T).is_zero()


def test_antipode_row_one():
    loc = qg.localized_dinv()
    a = loc.alphabet
    s_ = qg.antipode(loc)
    acc = a.zero()
    for k in (1, 2, 3):
        acc = acc + s_[1, k] * a.gen(f"t{k}1")
    assert loc.normal_form(acc) == a.one()


def test_star_closure():
    report = qg.verify_star_closure()
    assert report.ok and len(report.checks) == 37


def test_star_involutive_on_t31():
    t31 = T.gen("t31")
    assert qg.star(qg.star(t31)) == t31


def test_star_reverses_words():
    assert qg.star(P("q*t13*t11")) == P("q*t22*t23")


def test_wrong_star_map_fails():
    pairs = [p for p in qg.STAR_PAIRS if p != ("t12", "t21")]
    assert not qg.verify_star_closure(pairs).ok


@pytest.mark.parametrize("sector", ["xx", "xixi", "xxi"])
@pytest.mark.parametrize("key", ["omega", "omega-inv"])
def test_coaction(sector, key):
    c = build_omega() if key == "omega" else build_omega_inverse()
    assert qg.verify_coaction_invariance(sector, c, key).ok


def test_coaction_classical():
    assert qg.verify_coaction_invariance("xx", bindings=FLAT).ok


def test_coaction_unknown_sector():
    with pytest.raises(ValueError):
        qg.verify_coaction_invariance("dd")


def test_subgroup_residuals():
    res = dict(qg.subgroup_residuals())
    assert set(res) == {"t31*t23", "t32*t13"}
    assert res["t32*t13"] == P("-(u^2-q)/(u*q)*t12*t33")
    assert res["t31*t23"] == P("(u^2-q)/u*t21*t33")


def test_subgroup_check():
    assert qg.subgroup_constraint_check().ok


def test_subgroup_residuals_vanish_at_q_u2():
    assert qg.subgroup_residuals({"q": u**2}) == []
    assert qg.subgroup_constraint_check({"q": u**2}).ok


def test_special_case():
    report = qg.special_case_q_u2()
    assert report.ok
    assert "(q^2 - u^4)/u^4" in report["Omega^2 != I for generic q (specialisation is necessary)"].detail


def test_omega_squared_generic_entry():
    sq = build_omega() @ build_omega()
    assert sq.entry((2, 1), (2, 1)) != 1


def test_tprime_first_pair():
    report = qg.tprime_commutativity_check()
    assert report["[t11', t12'] = 0"].ok


def test_tprime_unit():
    loc = qg.subgroup_localization()
    a = loc.alphabet
    t33p = a.gen("t33") * a.gen(qg.T33INV)
    assert loc.normal_form(t33p) == a.one()
    t11p = a.gen("t11") * a.gen(qg.T33INV)
    assert loc.normal_form(t11p * t33p - t33p * t11p).is_zero()


def test_tprime_generic_parameters_out_of_scope():
    report = qg.tprime_commutativity_check({"q": 2})
    assert report.status == "error"


def test_tprime_t13_t23_residual():
    # the literal claim fails on one pair; the residual vanishes once
    # t33^2 = t11 t22 - u^-2 t12 t21 is imposed
    report = qg.tprime_commutativity_check(constrained=True)
    assert [c.name for c in report.failures()] == ["[t13', t23'] = 0"]
    witness = report["[t13', t23'] = 0"].witness
    assert "s" in witness and "t33inv*t33inv" in witness


def test_t33_square_constraint_is_consistent():
    loc = qg.subgroup_localization(constrained=True)
    # the quotient with t33^2 = t11 t22 - u^-2 t12 t21 stays confluent
    assert check_unique_normal_forms(loc.base, 4).ok
    # and that element q-commutes with each generator exactly as t33^2 does
    a = loc.base.alphabet
    x = a.gen("t11") * a.gen("t22") - u**-2 * (a.gen("t12") * a.gen("t21"))
    x = x.substitute({"q": u**2})
    quotient = qg._quotient_subgroup({"q": u**2})
    for n, c in qg.t33_factors(quotient).items():
        g = a.gen(n)
        assert quotient.normal_form(g * x - c**2 * (x * g)).is_zero(), n


@settings(max_examples=3)
@given(nonzero_rationals, nonzero_rationals, nonzero_rationals)
def test_specialisations(vq, vu, vs):
    b = {"q": vq, "u": vu, "s": vs}
    # at q = u^2 the subgroup residuals vanish; at q^4 = u^2 or q^2 = u every D factor is 1
    assume(vq != vu**2 and vq**4 != vu**2 and vq**2 != vu)
    assert qg.verify_rtt_table(bindings=b).ok
    assert qg.verify_D_commutation(bindings=b).ok
    assert qg.verify_inverse(bindings=b).ok
    assert qg.verify_hopf_axioms(bindings=b).ok
    assert qg.verify_star_closure(bindings=b).ok
    assert qg.subgroup_constraint_check(bindings=b).ok


@pytest.mark.parametrize("row", ["t32*t11 - q/u*t11*t32 + (u^2 - q)/u*t12*t31",
                                 "t33*t23 - u*t23*t33 - s*q/u*t21*t32 + s*u*t22*t31"],
                         ids=["t32*t11", "t33*t23"])
def test_printed_rtt_rows_are_not_in_the_ideal(row):
    assert not qg.default_rtt_system().normal_form(P(row)).is_zero()
