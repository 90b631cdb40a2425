import pytest

from redshift.algebra import (AlgebraSpec, BigradedProfile, ContractViolation, Family,
                              Kind, ResourceError, Window, bigraded_profile, enumerate_basis,
                              family_run)
from redshift.hochschild import (bar_differential, closed_form_profile, hh_bar_oracle,
                                 hh_closed_form, monogenic_factors, _bar_basis)
from redshift.steenrod import homology_BPn


def test_ground_field():
    fp = AlgebraSpec(3, ())
    assert hh_closed_form(fp).families == ()
    assert hh_bar_oracle(fp, 4, 10).as_dict() == {(0, 0): 1}


def test_closed_form_of_bp_matches_e2_display():
    spec = hh_closed_form(homology_BPn(3, 1))
    kinds = {(f.family, f.kind, f.start, f.s) for f in spec.families}
    assert (Family.SIGMA_XI_BAR, Kind.EXTERIOR, 1, 1) in kinds
    assert (Family.SIGMA_TAU_BAR, Kind.DIVIDED, 2, 1) in kinds


def test_exterior_tau2_gives_divided_tower():
    spec = AlgebraSpec(3, (family_run(Kind.EXTERIOR, Family.TAU_BAR, 2, 2),))
    prof = bigraded_profile(hh_closed_form(spec), Window(0, 6, 0, 200))
    for j in range(7):
        # homological degree j, total degree 18j
        assert prof[(j, 17 * j)] == 1


def test_bar_oracle_e_tau0():
    spec = AlgebraSpec(3, (family_run(Kind.EXTERIOR, Family.TAU_BAR, 0, 0),))
    got = hh_bar_oracle(spec, s_max=3, t_max=10).as_dict()
    want = {}
    for j in range(4):
        # gamma_j(s tau_0) at (s, total) = (j, 2j); times tau_0 at (j, 2j + 1)
        want[(j, j)] = 1
        want[(j, j + 1)] = 1
    assert {k: v for k, v in got.items() if k[1] <= 10} == want


def test_bar_complex_squares_to_zero():
    spec = AlgebraSpec(3, (family_run(Kind.POLYNOMIAL, Family.XI_BAR, 1, 1),
                           family_run(Kind.EXTERIOR, Family.TAU_BAR, 0, 0)))
    by_degree = enumerate_basis(spec, 0, 14)
    for t in range(0, 15):
        c3, c2, c1 = (_bar_basis(by_degree, s, t, 10**6) for s in (3, 2, 1))
        d3, d2 = bar_differential(c3, c2, 3), bar_differential(c2, c1, 3)
        if d3.size and d2.size:
            assert not ((d2 @ d3) % 3).any()


@pytest.mark.parametrize("p", [3, 5])
def test_oracle_equals_closed_form_on_monogenic_factors(p):
    for spec in monogenic_factors(p, 40):
        got = hh_bar_oracle(spec, s_max=4, t_max=40, total_max=40)
        want = closed_form_profile(spec, s_max=4, t_max=40, total_max=40)
        assert got == want, spec.label()


def test_kunneth_basis_bijection():
    a = AlgebraSpec(3, (family_run(Kind.POLYNOMIAL, Family.XI_BAR, 1, 1),))
    b = AlgebraSpec(3, (family_run(Kind.EXTERIOR, Family.TAU_BAR, 1, 1),))
    w = Window(0, 6, 0, 60, 60)
    lhs = bigraded_profile(hh_closed_form(a.tensor(b)), w).as_dict()
    pa, pb = bigraded_profile(hh_closed_form(a), w).as_dict(), bigraded_profile(hh_closed_form(b), w).as_dict()
    conv = {}
    for (s1, t1), d1 in pa.items():
        for (s2, t2), d2 in pb.items():
            k = (s1 + s2, t1 + t2)
            if w.contains(*k):
                conv[k] = conv.get(k, 0) + d1 * d2
    assert lhs == BigradedProfile.of(conv).as_dict()


def test_oracle_matches_product_spec():
    spec = AlgebraSpec(3, (family_run(Kind.POLYNOMIAL, Family.XI_BAR, 1, 1),
                           family_run(Kind.EXTERIOR, Family.TAU_BAR, 0, 0)))
    assert hh_bar_oracle(spec, 3, 16, 18) == closed_form_profile(spec, 3, 16, 18)


def test_rejects_non_free_input():
    spec = AlgebraSpec(3, (family_run(Kind.TRUNCATED, Family.SIGMA_TAU_BAR, 1, 1, height=3),))
    with pytest.raises(ContractViolation):
        hh_closed_form(spec)


def test_oracle_cap():
    spec = AlgebraSpec(3, (family_run(Kind.POLYNOMIAL, Family.XI_BAR, 1, 1),))
    with pytest.raises(ResourceError):
        hh_bar_oracle(spec, 4, 40, cap=3)
