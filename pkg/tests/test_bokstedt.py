import pytest

from redshift.algebra import (AlgebraSpec, ContractViolation, Family, Kind, Monomial,
                              family_run)
from redshift.bokstedt import (bokstedt_run, default_max_degree, e2_spec, ep_spec,
                               example_differential, rebraid)
from redshift.hochschild import hh_closed_form
from redshift.sseq import compare_profiles
from redshift.steenrod import homology_BPn, thh_abutment


@pytest.fixture(scope="module")
def run30():
    return bokstedt_run(3, 0, max_degree=40)


def test_default_degree():
    assert default_max_degree(3, 1) == 54
    assert default_max_degree(5, 0) == 50


def test_e2_is_hochschild_homology():
    assert e2_spec(3, 1).families == hh_closed_form(homology_BPn(3, 1)).families


@pytest.mark.parametrize("n,j,image", [(1, 3, "s_xi(3)"), (0, 3, "s_xi(2)"),
                                         (1, 4, "s_xi(3)*s_tau(2)"), (1, 2, "0")])
def test_gamma_p_differential(n, j, image):
    x, dx = example_differential(3, n, j)
    assert str(dx) == image


def test_gamma_p_bidegrees():
    x, dx = example_differential(3, 1, 3)
    (m, _), = x.terms.items()
    (tm, _), = dx.terms.items()
    assert m.bidegree == (3, 51)
    assert tm.bidegree == (1, 52)


def test_truncated_tower(run30):
    # n = 0: only gamma_1, gamma_2 of s_tau_1 survive; gamma_3 at (3, 15) is hit away
    labels = {bd: [c.label for c in cl] for bd, cl in run30.ep.classes.items()
              if run30.ep.is_interior(*bd)}
    assert "s_tau(1)" in labels[(1, 5)]
    assert "g(2,s_tau(1))" in labels[(2, 10)]
    assert not any("g(3,s_tau(1))" in x for xs in labels.values() for x in xs)
    assert run30.e2.dim(3, 15) == 1 and run30.ep.dim(3, 15) == 0


def test_bockstein_image_killed(run30):
    # s_xi(2) at (1, 16) is the target of gamma_3(s_tau(1))
    assert [c.label for c in run30.e2.classes[(1, 16)]] == ["xi(1)^3*s_xi(1)", "s_xi(2)"]
    assert [c.label for c in run30.ep.classes[(1, 16)]] == ["xi(1)^3*s_xi(1)"]


@pytest.mark.parametrize("p,n,D", [(3, 0, 40), (3, 1, 60), (5, 0, 60), (3, 2, 60)])
def test_pipeline_passes(p, n, D):
    res = bokstedt_run(p, n, max_degree=D)
    assert res.report.passed, res.report.text()


def test_wrong_target_is_detected(run30):
    # negative control: E^p as a full polynomial algebra on s_tau must not match
    wrong = AlgebraSpec(3, homology_BPn(3, 0).families + (
        family_run(Kind.EXTERIOR, Family.SIGMA_XI_BAR, 1, 1, s=1),
        family_run(Kind.POLYNOMIAL, Family.SIGMA_TAU_BAR, 1, None, s=1)))
    cmp_ = compare_profiles(run30.ep, wrong)
    assert not cmp_.matched
    assert cmp_.first_mismatch == (3, 15)


def test_rebraiding_example():
    ep = ep_spec(3, 1)
    abut = thh_abutment(3, 1)
    a, b = ep.find(Family.SIGMA_TAU_BAR, 2), ep.find(Family.SIGMA_TAU_BAR, 3)
    m = Monomial.build({a: 1, b: 1})
    out = rebraid(m, abut, 1)
    assert out.degree == m.degree == 72
    assert out == Monomial.build({abut.find(Family.SIGMA_TAU_BAR, 2): 4})


def test_rebraid_carries_other_factors():
    ep = ep_spec(3, 0)
    abut = thh_abutment(3, 0)
    m = Monomial.build({ep.find(Family.XI_BAR, 1): 2, ep.find(Family.SIGMA_TAU_BAR, 2): 2})
    out = rebraid(m, abut, 0)
    assert out == Monomial.build({abut.find(Family.XI_BAR, 1): 2,
                                  abut.find(Family.SIGMA_TAU_BAR, 1): 6})


def test_empty_window_passes_vacuously():
    res = bokstedt_run(3, 1, max_degree=0)
    assert res.report.passed
    assert res.ep.profile().as_dict() == {(0, 0): 1}


def test_filtration_cap_window():
    res = bokstedt_run(3, 0, max_degree=40, s_max=2)
    assert res.report.passed
    assert max(s for s, _ in res.ep.profile().as_dict()) <= 2


def test_bad_height():
    with pytest.raises(ContractViolation):
        bokstedt_run(3, -1, max_degree=10)
    with pytest.raises(ContractViolation):
        bokstedt_run(4, 0, max_degree=10)
