import pytest

import oracle
from helpers import random_poly, rng
from scatterlab import scatter
from scatterlab.ff_tower import FieldError, build_field
from scatterlab.linpoly import LinPoly
from scatterlab.scatter import (
    ClassificationReport,
    FamilySpec,
    MethodDisagreement,
    build_family,
    check_construction_rules,
    classify,
    classify_definitional,
    classify_frho,
    max_kernel_qt_line_dim,
    solve_norm_condition,
)


def binomial(F, delta, s=1):
    return build_family(FamilySpec("binomial_2t", {"s": s, "delta": delta}), F)


def norm_classes(F, m, l):
    reps = {}
    for d in range(1, F.order):
        reps.setdefault(F.rel_norm(d, m, l), d)
    return reps


# -- reports ------------------------------------------------------------------------


def test_report_enforces_conjunction():
    with pytest.raises(AssertionError):
        ClassificationReport(scattered=True, L_ps=True, R_ps=False, method="f_rho", t=2)


def test_report_json(f81):
    rep = classify(LinPoly.identity(f81), 2)
    out = rep.to_json(f81, {"f": "x"})
    assert out["verdicts"] == {"scattered": False, "L_ps": False, "R_ps": False}
    assert out["params"] == {"f": "x", "t": 2}
    assert out["witness"]["L_ps_pair"][0] == f81.format_element(1)
    assert "timing_ms" not in out


# -- basic verdicts --------------------------------------------------------------------


@pytest.mark.parametrize("method", ["definitional", "f_rho", "both"])
def test_trivial_verdicts(f81, method):
    x_q = LinPoly.monomial(f81, 1)
    x_qt = LinPoly.monomial(f81, 2)
    x = LinPoly.identity(f81)
    assert classify(x_q, 2, method).verdicts == {"scattered": True, "L_ps": True, "R_ps": True}
    assert classify(x_qt, 2, method).verdicts == {"scattered": False, "L_ps": True, "R_ps": False}
    assert classify(x, 2, method).verdicts == {"scattered": False, "L_ps": False, "R_ps": False}


def test_witnesses_falsify(f81):
    f = LinPoly.identity(f81)
    rep = classify_definitional(f, 2)
    y, z = rep.witness["L_ps"]
    assert f81.div(f(y), y) == f81.div(f(z), z)
    assert not f81.in_subfield(f81.div(y, z), 2)
    assert y < z
    rep = classify_frho(f, 2)
    assert not f.f_rho(rep.witness["R_ps"]).is_bijective()


def test_methods_agree_on_binomials_f81(f81):
    for delta in range(f81.order):
        classify(binomial(f81, delta), 2, "both")


@pytest.mark.parametrize("spec, t", [((2, 1, 4, 2), 2), ((2, 1, 6, 3), 3), ((2, 1, 6, 2), 2), ((3, 1, 4, 2), 2)])
def test_classifiers_match_pairwise_oracle(spec, t):
    F = build_field(*spec)
    gen = rng(30 + F.order)
    polys = [random_poly(F, gen, 0.4) for _ in range(12)]
    polys += [LinPoly.monomial(F, i) for i in range(F.n)]
    seen = set()
    for f in polys:
        expected = oracle.classify_pairs(F, f.values, t)
        assert classify_definitional(f, t).verdicts == expected
        assert classify_frho(f, t).verdicts == expected
        assert classify_frho(f, t, reduce=False).verdicts == expected
        seen.add(tuple(expected.values()))
    assert len(seen) >= 2


def test_methods_agree_on_random_polys_f729(f729):
    gen = rng(31)
    for _ in range(10):
        f = random_poly(f729, gen, 0.5)
        classify(f, 3, "both")


def test_q9_tower_classification():
    F = build_field(3, 2, 4, 2)
    gen = rng(32)
    for _ in range(4):
        classify(random_poly(F, gen, 0.5), 2, "both")
    assert classify(LinPoly.monomial(F, 1), 2).scattered


def test_disagreement_is_raised(f81, monkeypatch):
    real = scatter.classify_frho

    def flipped(f, t=None, **kw):
        rep = real(f, t, **kw)
        return ClassificationReport(False, False, not rep.R_ps, "f_rho", rep.t)

    monkeypatch.setattr(scatter, "classify_frho", flipped)
    with pytest.raises(MethodDisagreement):
        classify(LinPoly.monomial(f81, 1), 2, "both")


def test_sampling_is_labelled_and_seeded(f81):
    f = binomial(f81, f81.element(1))
    a = classify_definitional(f, 2, budget=40, seed=3)
    b = classify_definitional(f, 2, budget=40, seed=3)
    assert a.sampled and a.verdicts == b.verdicts
    c = classify_frho(f, 2, budget=2, seed=3)
    assert c.sampled
    assert not classify_frho(f, 2).sampled


def test_bad_divisor_and_method(f81):
    with pytest.raises(FieldError):
        classify(LinPoly.identity(f81), 3)
    with pytest.raises(ValueError):
        classify(LinPoly.identity(f81), 2, "guess")


def test_definitional_needs_tables():
    F = build_field(2, 1, 24, 12)
    with pytest.raises(FieldError):
        classify_definitional(LinPoly.monomial(F, 1), 12)


# -- the binomial family ---------------------------------------------------------------


def test_binomial_norm_criterion(f81):
    for delta in range(1, f81.order):
        rep = classify(binomial(f81, delta), 2, "f_rho")
        if f81.rel_norm(delta, 4, 2) == 1:
            assert rep.L_ps and not rep.R_ps
        else:
            assert rep.R_ps


def test_binomial_verdicts_constant_on_norm_classes(f81):
    by_norm = {}
    for delta in range(1, f81.order):
        v = tuple(classify(binomial(f81, delta), 2, "f_rho").verdicts.values())
        by_norm.setdefault(f81.rel_norm(delta, 4, 2), set()).add(v)
    assert len(by_norm) == 8
    assert all(len(v) == 1 for v in by_norm.values())


def test_verdicts_preserved_by_adjoint(f81, f64):
    for delta in range(1, f81.order, 3):
        f = binomial(f81, delta)
        a, b = classify(f, 2, "f_rho"), classify(f.adjoint(), 2, "f_rho")
        assert (a.L_ps, a.R_ps) == (b.L_ps, b.R_ps)
    gen = rng(33)
    for _ in range(20):
        f = random_poly(f64, gen, 0.5)
        a, b = classify(f, 3, "f_rho"), classify(f.adjoint(), 3, "f_rho")
        assert (a.L_ps, a.R_ps) == (b.L_ps, b.R_ps)


def test_scan_agrees_with_classification(f81):
    for norm, delta in norm_classes(f81, 4, 2).items():
        f = binomial(f81, delta)
        rep = solve_norm_condition(3, 2, 1, norm, method="scan", tower=f81)
        assert classify(f, 2).scattered == (not rep.has_solution)


# -- families -------------------------------------------------------------------------


def test_binomial_literal(f81):
    assert binomial(f81, f81.g).coeffs == (0, f81.g, 0, 1)


def test_trace_kernel_special_case(f81):
    t = 2
    minus = f81.neg(1)
    for k in (1, 3):
        s = (t - k) % (2 * t)
        f = build_family(FamilySpec("trace_kernel_fsk", {"s": s, "k": k}), f81)
        expected = LinPoly.from_terms(f81, [(k, 1), (t - k, 1), (t + k, minus), (2 * t - k, 1)])
        assert f == expected
        assert classify(f, t).R_ps


def test_gax_shape_expands_to_literal_polynomial(f64):
    f = build_family(FamilySpec("gax_shape", {"a": [1, 1], "s": 1, "k": 0, "m": 0}), f64)
    low = list(f64.modulus)
    for x in range(f64.order):
        assert f(x) == oracle.add(oracle.power(x, 2, low, 2), oracle.power(x, 16, low, 2), low, 2)


def test_trinomial_literal(f64):
    d = f64.element(9)
    f = build_family(FamilySpec("trinomial_3t", {"s": 1, "delta": d}), build_field(2, 1, 6, 2))
    assert f.coeffs == (0, 1, 0, 1, 0, d)


@pytest.mark.parametrize(
    "family, params, tower, message",
    [
        ("binomial_2t", {"s": 2, "delta": 1}, (3, 1, 4, 2), "gcd(s, n) = 1"),
        ("binomial_2t", {"s": 1, "delta": 1}, (2, 1, 6, 2), "n = 2t"),
        ("trinomial_3t", {"s": 1, "delta": 1}, (3, 1, 4, 2), "n = 3t"),
        ("trace_kernel_fsk", {"s": 1, "k": 1}, (2, 1, 4, 2), "q odd"),
        ("trace_kernel_fsk", {"s": 1, "k": 2}, (3, 1, 4, 2), "gcd(k, 2t) = 1"),
        ("gax_shape", {"a": [1]}, (2, 1, 6, 3), "len(a) = n/t"),
        ("gax_shape", {"a": [1, 1], "s": 3}, (2, 1, 6, 3), "gcd(s, t) = 1"),
        ("nosuch", {}, (2, 1, 6, 3), "unknown family"),
    ],
)
def test_family_constraints(family, params, tower, message):
    with pytest.raises(FieldError, match=message.replace("(", r"\(").replace(")", r"\)")):
        build_family(FamilySpec(family, params), build_field(*tower))


def test_family_spec_from_json(f81):
    spec = FamilySpec.from_json({"family": "binomial_2t", "params": {"s": 1, "delta": ["g", 1]}}, f81)
    assert spec.params["delta"] == f81.g


# -- construction rules ---------------------------------------------------------------


def test_adding_qt_polynomials_keeps_R(f81):
    f = LinPoly.monomial(f81, 1)
    gen = rng(34)
    for _ in range(50):
        g = LinPoly.qt_polynomial(f81, gen.integers(0, 81, size=2).tolist())
        chk = check_construction_rules(f, 2, "add_qt_keeps_R", g=g)
        assert chk.premise and chk.conclusion


def test_adding_scalar_keeps_L(f81):
    f = LinPoly.monomial(f81, 2)
    for m in range(0, 81, 5):
        chk = check_construction_rules(f, 2, "add_scalar_keeps_L", m=m)
        assert chk.premise and chk.conclusion


def test_composition_with_qt_polynomial(f81):
    f = LinPoly.monomial(f81, 1)
    gen = rng(35)
    kinds = set()
    for _ in range(40):
        g = LinPoly.qt_polynomial(f81, gen.integers(0, 81, size=2).tolist())
        chk = check_construction_rules(f, 2, "compose_qt_R_iff_bijective", g=g)
        assert chk.conforms and chk.premise
        kinds.add(chk.details["g_bijective"])
    assert kinds == {True, False}


def test_twisted_qt_polynomials(f81):
    gen = rng(36)
    singular = bijective = 0
    for _ in range(40):
        g = LinPoly.qt_polynomial(f81, gen.integers(0, 81, size=2).tolist())
        if g.is_zero():
            continue
        bad = check_construction_rules(g, 2, "singular_qt_not_R", s=1)
        good = check_construction_rules(g, 2, "twist_gives_R", s=1)
        assert bad.conforms and good.conforms
        singular += bad.premise
        bijective += good.premise
    assert singular and bijective


def test_coprime_transfer(f64):
    gen = rng(37)
    polys = [LinPoly.monomial(f64, 3), LinPoly.monomial(f64, 1)]
    polys += [random_poly(f64, gen, 0.4) for _ in range(30)]
    premises = 0
    for f in polys:
        chk = check_construction_rules(f, 3, "coprime_L_gives_R")
        assert chk.conforms
        premises += chk.premise
    assert premises >= 2


def test_rule_shape_errors(f81):
    f = LinPoly.monomial(f81, 1)
    with pytest.raises(FieldError):
        check_construction_rules(f, 2, "add_qt_keeps_R", g=LinPoly.monomial(f81, 1))
    with pytest.raises(FieldError):
        check_construction_rules(f, 2, "add_scalar_keeps_L")
    with pytest.raises(FieldError):
        check_construction_rules(f, 2, "twist_gives_R", s=1)
    with pytest.raises(FieldError, match="gcd"):
        check_construction_rules(f, 2, "coprime_L_gives_R")
    with pytest.raises(FieldError, match="unknown rule"):
        check_construction_rules(f, 2, "nosuch")


# -- norm condition ----------------------------------------------------------------------


@pytest.mark.parametrize("q", [3, 5, 7])
def test_value_sets_t4_disjoint(q):
    rep = solve_norm_condition(q, 4, method="value_set")
    assert not rep.has_solution and rep.count == 0


def test_value_sets_t5_q3_meet():
    rep = solve_norm_condition(3, 5, method="value_set")
    assert rep.has_solution
    assert rep.details["direct"]["common"] == rep.count


def test_value_set_scan_agree_t5_q3():
    T = build_field(3, 1, 10, 5)
    scan = solve_norm_condition(3, 5, 1, T.neg(1), method="scan", tower=T)
    assert scan.has_solution


def test_norm_solver_errors(f81):
    with pytest.raises(FieldError):
        solve_norm_condition(3, 2, 2, 1, method="scan", tower=f81)
    with pytest.raises(FieldError):
        solve_norm_condition(3, 2, 1, None, method="scan", tower=f81)
    with pytest.raises(FieldError):
        solve_norm_condition(2, 4, method="value_set")
    with pytest.raises(FieldError):
        solve_norm_condition(3, 4, s=3, method="value_set")
    with pytest.raises(ValueError):
        solve_norm_condition(3, 4, method="guess")


# -- kernels --------------------------------------------------------------------------


def test_kernel_lines_of_R_ps_polynomials(f81):
    for delta in range(1, f81.order, 4):
        f = binomial(f81, delta)
        for extra in range(0, 81, 20):
            h = f + LinPoly.qt_polynomial(f81, [extra, 1])
            if classify(h, 2, "f_rho").R_ps:
                assert max_kernel_qt_line_dim(h, 2) <= 1
                assert h.kernel_dim() <= 2


def test_exploratory_trace_kernel_t5_runs():
    T = build_field(3, 1, 10, 5)
    f = build_family(FamilySpec("trace_kernel_fsk", {"s": 1, "k": 3}), T)
    rep = classify(f, 5, "f_rho")
    assert rep.R_ps in (True, False)
    assert rep.scattered == (rep.L_ps and rep.R_ps)


def test_definitional_witness_is_smallest_pair(f16):
    gen = rng(38)
    sub_t = set(f16.subfield_elements(2).tolist())
    checked = 0
    for _ in range(20):
        f = random_poly(f16, gen, 0.5)
        rep = classify_definitional(f, 2)
        if "L_ps" not in rep.witness:
            continue
        ratio = {x: f16.div(f(x), x) for x in range(1, 16)}
        pairs = [
            (y, z)
            for y in range(1, 16)
            for z in range(y + 1, 16)
            if ratio[y] == ratio[z] and f16.div(y, z) not in sub_t
        ]
        assert rep.witness["L_ps"] == min(pairs)
        checked += 1
    assert checked
