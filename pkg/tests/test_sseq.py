import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redshift.algebra import (AlgebraSpec, BigradedProfile, ContractViolation, Element,
                              Family, Kind, Monomial, Window, enumerate_bigraded,
                              family_run, monomial_product)
from redshift.bokstedt import bokstedt_rule, bokstedt_window, e2_spec
from redshift.sseq import (BigradedPage, DegreeError, DifferentialRule,
                           DifferentialSquareError, PageClass, check_degree_homogeneity,
                           check_square_zero, compare_profiles, euler_lines,
                           extend_leibniz, page_from_spec, page_records, reachability,
                           turn_page)
from redshift.tate import TateWindow, tate_rule, tate_spec


def toy_page(classes, diff=None, r=2, window=None):
    spec = AlgebraSpec(3, ())
    one = Element(spec, {Monomial(): 1})
    cl = {bd: tuple(PageClass(name, one) for name in names) for bd, names in classes.items()}
    window = window or Window(0, 10, 0, 10)
    return BigradedPage(r, spec, window, cl,
                        {bd: np.array(m, dtype=np.int64) for bd, m in (diff or {}).items()})


# extend_leibniz -----------------------------------------------------------------

def test_d_of_unit_is_zero():
    spec = e2_spec(3, 1)
    rule = bokstedt_rule(spec, bokstedt_window(60))
    assert rule.apply(spec.one()).is_zero()


def test_bokstedt_gamma3_differential():
    spec = e2_spec(3, 1)
    f = spec.find(Family.SIGMA_TAU_BAR, 2)
    rule = bokstedt_rule(spec, bokstedt_window(120))
    assert rule.apply(spec.monomial({f: 3})) == spec.gen(Family.SIGMA_XI_BAR, 3)
    assert rule.apply(spec.monomial({f: 2})).is_zero()
    assert str(rule.apply(spec.monomial({f: 5}))) == "s_xi(3)*g(2,s_tau(2))"


def test_tate_d2_on_tau2():
    spec = tate_spec(3, 1)
    rule = tate_rule(spec, 60)
    expected = spec.gen(Family.TATE_T) * spec.gen(Family.SIGMA_TAU_BAR, 2)
    assert rule.apply(spec.gen(Family.TAU_BAR, 2)) == expected
    assert rule.apply(spec.gen(Family.TATE_T)).is_zero()


def test_tate_xi_examples():
    spec = tate_spec(3, 1)
    rule = tate_rule(spec, 60)
    xi1 = spec.gen(Family.XI_BAR, 1)
    s_xi1 = spec.gen(Family.SIGMA_XI_BAR, 1)
    assert rule.apply(xi1 ** 3).is_zero()
    assert rule.apply(xi1) == spec.gen(Family.TATE_T) * s_xi1
    assert rule.apply(xi1 ** 2 * s_xi1).is_zero()


def test_uncovered_class_is_a_contract_violation():
    spec = e2_spec(3, 1)
    page = page_from_spec(spec, bokstedt_window(30), r=2)
    empty = DifferentialRule(2, {}, frozenset(), name="empty")
    with pytest.raises(ContractViolation, match="not covered"):
        extend_leibniz(empty, page)


def test_rule_page_mismatch():
    spec = e2_spec(3, 1)
    page = page_from_spec(spec, bokstedt_window(20), r=3)
    with pytest.raises(ContractViolation):
        extend_leibniz(bokstedt_rule(spec, bokstedt_window(20)), page)


E2_SPEC = e2_spec(3, 1)
E2_RULE = bokstedt_rule(E2_SPEC, bokstedt_window(120))
E2_POOL = [m for ms in enumerate_bigraded(E2_SPEC, bokstedt_window(120)).values() for m in ms
           if len(m) >= 2]


@settings(max_examples=1_000)
@given(st.lists(st.tuples(st.integers(0, len(E2_POOL) - 1), st.integers(1, 10)),
                min_size=10, max_size=10))
def test_leibniz_independent_of_factorisation(batch):
    for i, cut in batch:
        m = E2_POOL[i]
        k = 1 + cut % (len(m) - 1)
        a, b = Monomial(m[:k]), Monomial(m[k:])
        c, prod = monomial_product(a, b, 3)
        assert prod == m
        ea, eb = Element(E2_SPEC, {a: 1}), Element(E2_SPEC, {b: 1})
        sign = -1 if a.degree % 2 else 1
        split = E2_RULE.apply(ea) * eb + (ea * E2_RULE.apply(eb)).scale(sign)
        assert E2_RULE.apply(Element(E2_SPEC, {m: 1})).scale(c) == split


# turn_page ---------------------------------------------------------------------------

def test_zero_differential_leaves_page_unchanged():
    page = toy_page({(0, 0): ["a"], (2, 1): ["b", "c"]})
    page = BigradedPage(page.r, page.spec, page.window, page.classes,
                        {(2, 1): np.zeros((0, 2), dtype=np.int64)})
    assert turn_page(page).profile() == page.profile()


def test_acyclic_pair_vanishes():
    page = toy_page({(2, 0): ["x"], (0, 1): ["y"]}, {(2, 0): [[1]]})
    assert turn_page(page).profile().as_dict() == {}


def test_square_nonzero_is_a_hard_failure():
    page = toy_page({(4, 0): ["x"], (2, 1): ["y"], (0, 2): ["z"]},
                    {(4, 0): [[1]], (2, 1): [[1]]})
    with pytest.raises(DifferentialSquareError, match="witness x"):
        check_square_zero(page)
    with pytest.raises(DifferentialSquareError):
        turn_page(page)


def test_tate_subcomplex_p_stau_e_tau():
    # P(s_tau_2) (x) E(tau_2) (x) P(t^+-1) under d^2 = t*sigma: only t-powers survive
    spec = AlgebraSpec(3, (family_run(Kind.LAURENT, Family.TATE_T, 0, 0),
                           family_run(Kind.EXTERIOR, Family.TAU_BAR, 2, 2),
                           family_run(Kind.POLYNOMIAL, Family.SIGMA_TAU_BAR, 2, 2)))
    tw = TateWindow(3, 80)
    page = extend_leibniz(tate_rule(spec, 80), page_from_spec(spec, tw.window, r=2))
    e3 = turn_page(page)
    got = {bd: d for bd, d in e3.profile().as_dict().items() if tw.is_interior(*bd)}
    assert got == {(s, 0): 1 for s in tw.interior_columns()}


def test_turn_page_never_increases_dimensions():
    spec = e2_spec(3, 1)
    page = extend_leibniz(bokstedt_rule(spec, bokstedt_window(120)),
                          page_from_spec(spec, bokstedt_window(120), r=2))
    nxt = turn_page(page)
    for bd, d in nxt.profile(False).as_dict().items():
        assert d <= page.dim(*bd)


@pytest.mark.parametrize("p,n,D", [(3, 0, 60), (3, 1, 162), (5, 0, 150)])
def test_euler_lines_preserved(p, n, D):
    spec = e2_spec(p, n)
    page = extend_leibniz(bokstedt_rule(spec, bokstedt_window(D)),
                          page_from_spec(spec, bokstedt_window(D), r=p - 1))
    nxt = turn_page(page)
    before = euler_lines(page, p - 1)
    after = euler_lines(BigradedPage(p - 1, nxt.spec, nxt.window, nxt.classes, {}, nxt.edge), p - 1)
    # a line whose classes all cancel disappears from the later page
    assert before and set(after) <= set(before)
    assert {k: v for k, v in before.items() if v} == {k: v for k, v in after.items() if v}


# homogeneity -----------------------------------------------------------------------

def test_homogeneity_examples():
    spec = e2_spec(3, 1)
    report = check_degree_homogeneity(bokstedt_rule(spec, bokstedt_window(54)))
    assert report.passed
    assert any("(3, 51)" in c.name and "(1, 52)" in c.name for c in report.checks)
    tate = check_degree_homogeneity(tate_rule(tate_spec(3, 1), 60))
    assert tate.passed and tate.checks
    assert check_degree_homogeneity(DifferentialRule(2, {})).passed


def test_homogeneity_violation_raises():
    spec = e2_spec(3, 1)
    f = spec.find(Family.XI_BAR, 1)
    bad = DifferentialRule(2, {(f, 1): spec.gen(Family.XI_BAR, 2)}, name="bad")
    with pytest.raises(DegreeError):
        check_degree_homogeneity(bad)


# comparisons and edges ------------------------------------------------------------

def test_compare_page_with_itself_and_perturbed():
    spec = e2_spec(3, 0)
    page = page_from_spec(spec, bokstedt_window(40), r=2)
    assert compare_profiles(page, page.profile()).matched
    dims = page.profile().as_dict()
    key = sorted(dims)[5]
    dims[key] += 1
    cmp_ = compare_profiles(page, BigradedProfile.of(dims))
    assert not cmp_.matched and cmp_.first_mismatch == key


def test_edge_bidegrees_flagged():
    spec = e2_spec(3, 1)
    w = bokstedt_window(54)
    page = extend_leibniz(bokstedt_rule(spec, w), page_from_spec(spec, w, r=2))
    assert page.edge
    for s, t in page.edge:
        src = (s + 2, t - 1)
        assert not w.determined(*src) or not w.determined(s - 2, t + 1)


def test_reachability():
    dims = {(0, 4): 1, (-3, 6): 1}
    assert reachability(dims, range(3, 4)) == [(3, (0, 4), (-3, 6))]
    assert reachability(dims, range(4, 6)) == []


def test_page_dump_records():
    page = toy_page({(2, 0): ["x"], (0, 1): ["y"]}, {(2, 0): [[2]]})
    rec = page_records(page)
    assert rec["classes"][0] == {"s": 0, "t": 1, "label": "y", "provenance": [], "edge": False}
    assert rec["differentials"] == [{"r": 2, "source": "x", "source_bidegree": [2, 0],
                                     "target": "y", "target_bidegree": [0, 1], "coefficient": 2}]
