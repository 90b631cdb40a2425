import pytest

from redshift.algebra import (ContractViolation, Family, derivation_sigma, enumerate_basis,
                              hilbert_series)
from redshift.steenrod import (DegreeError, RuleInstance, RuleTable, check_height,
                               check_rule_degrees, dual_steenrod,
                               exterior_tau_low, free_sigma_algebra, homology_BPn,
                               impose_extensions, tau_prime, thh_abutment)


def dims(spec, hi):
    return hilbert_series(spec, hi).coeffs


def test_dual_steenrod_low_degrees():
    assert dims(dual_steenrod(3), 5) == (1, 1, 0, 0, 1, 2)
    basis = enumerate_basis(dual_steenrod(3), 5, 5)[5]
    assert sorted(m.label() for m in basis) == sorted(["tau(1)", "xi(1)*tau(0)"])
    assert dims(dual_steenrod(5), 8)[8] == 1


def test_bp_minus_one_is_dual_steenrod():
    assert homology_BPn(3, -1) == dual_steenrod(3)


def test_bp0_and_bp1_profiles():
    assert dims(homology_BPn(3, 0), 5) == (1, 0, 0, 0, 1, 1)
    assert dims(homology_BPn(3, 1), 17)[17] == 1
    assert [m.label() for m in enumerate_basis(homology_BPn(3, 1), 17, 17)[17]] == ["tau(2)"]


def test_height_bounds():
    with pytest.raises(ContractViolation):
        check_height(5)
    with pytest.raises(ContractViolation):
        homology_BPn(3, -2)
    with pytest.raises(ContractViolation):
        thh_abutment(3, -1)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_bp_nesting_is_basis_inclusion(p, n):
    top = 2 * p ** 3
    small = enumerate_basis(homology_BPn(p, n), 0, top)
    big = enumerate_basis(homology_BPn(p, n - 1), 0, top)
    for d in small:
        assert {m.label() for m in small[d]} <= {m.label() for m in big[d]}


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_dual_steenrod_splits_as_convolution(p, n):
    top = 2 * p ** 3
    conv = hilbert_series(homology_BPn(p, n), top).convolve(
        hilbert_series(exterior_tau_low(p, n), top), top)
    assert hilbert_series(dual_steenrod(p), top) == conv


def test_thh_abutment_examples():
    assert dims(thh_abutment(3, 1), 9) == (1, 0, 0, 0, 1, 1, 0, 0, 1, 1)
    d = dims(thh_abutment(3, 0), 12)
    assert d[0] == 1 and d[6] >= 1 and d[12] >= 1
    labels6 = [m.label() for m in enumerate_basis(thh_abutment(3, 0), 6, 6)[6]]
    assert "s_tau(1)" in labels6
    assert "s_tau(1)^2" in [m.label() for m in enumerate_basis(thh_abutment(3, 0), 12, 12)[12]]


def test_registered_extensions_drive_sigma():
    abut = thh_abutment(3, 1)
    assert str(derivation_sigma(abut.gen(Family.TAU_BAR, 3))) == "s_tau(2)^3"
    assert derivation_sigma(abut.gen(Family.XI_BAR, 3)).is_zero()
    assert str(derivation_sigma(abut.gen(Family.TAU_BAR, 2))) == "s_tau(2)"


def test_tau_prime_sigma_before_and_after_extension():
    free = free_sigma_algebra(3, 1)
    raw = derivation_sigma(tau_prime(free, 3))
    expected = free.gen(Family.SIGMA_TAU_BAR, 3) - free.gen(Family.SIGMA_TAU_BAR, 2, 3)
    assert raw == expected and not raw.is_zero()
    assert impose_extensions(raw, thh_abutment(3, 1)).is_zero()
    assert derivation_sigma(tau_prime(thh_abutment(3, 1), 3)).is_zero()


def test_rule_degree_examples():
    by_name = {(i.rule, i.source): i for i in RuleTable().instances(3, 0, 60)}
    beta = by_name[("bockstein", "beta(s_tau(2))")]
    assert (beta.source_degree, beta.target_degree) == (18, 17)
    ext = by_name[("mult-extension", "s_tau(2)^3")]
    assert (3 * ext.source_degree, ext.target_degree) == (54, 54)
    dl = by_name[("dyer-lashof", "Q^3(tau(1))")]
    assert (dl.source_degree, dl.target_degree) == (5, 17)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_every_rule_instance_is_homogeneous(p, n):
    report = check_rule_degrees(RuleTable(), p, n, 4 * p ** (n + 2))
    assert report.passed and report.instances


def test_degree_violation_is_a_hard_failure():
    bad = RuleInstance("bockstein", "x", "y", 18, 18, -1)
    assert not bad.ok

    class Broken(RuleTable):
        def instances(self, p, n, max_degree):
            return [bad]

    with pytest.raises(DegreeError, match="bockstein"):
        check_rule_degrees(Broken(), 3, 1, 60)
