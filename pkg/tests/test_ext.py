import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redshift.algebra import ContractViolation, ResourceError
from redshift.ext import (ExteriorAlgebra, adams_e2_oracle, compare_tables, convolve_tables,
                          ext_exterior, ext_minimal_resolution, polynomial_counts, q_degree,
                          vn_wavelength)


def test_q_degrees():
    assert [q_degree(3, i) for i in range(3)] == [1, 5, 17]


@pytest.mark.parametrize("p,n,stem", [(3, 0, 0), (3, 1, 4), (3, 2, 16), (5, 1, 8)])
def test_vn_wavelength(p, n, stem):
    assert vn_wavelength(p, n) == stem


def test_vn_wavelength_rejects_negative():
    with pytest.raises(ContractViolation):
        vn_wavelength(3, -1)


def test_height_zero_is_a_diagonal():
    table = ext_minimal_resolution(3, 0, 8, 20)
    assert table.dims == {(s, s): 1 for s in range(9)}


def test_height_one_small():
    table = ext_minimal_resolution(3, 1, 3, 8)
    assert set(table.dims) == {(0, 0), (1, 1), (2, 2), (3, 3), (1, 5), (2, 6), (3, 7)}
    assert all(d == 1 for d in table.dims.values())


def test_vn_class_at_its_stem():
    for n in (1, 2):
        table = ext_minimal_resolution(3, n, 2, 40)
        stem = vn_wavelength(3, n)
        assert table[(1, stem + 1)] == 1


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_matches_polynomial_oracle(p, n):
    table = ext_minimal_resolution(p, n, 10, 80)
    assert compare_tables(table.dims, adams_e2_oracle(p, n, 10, 80)) is None


def test_oracle_negative_control():
    table = ext_minimal_resolution(3, 1, 4, 20)
    want = adams_e2_oracle(3, 1, 4, 20)
    want[(2, 10)] = 2
    assert compare_tables(table.dims, want) == (2, 10)


def test_polynomial_counts_by_hand():
    assert polynomial_counts([1, 5], 2, 10) == {(0, 0): 1, (1, 1): 1, (2, 2): 1, (1, 5): 1,
                                                (2, 6): 1, (2, 10): 1}


def test_even_generator_rejected():
    with pytest.raises(ContractViolation):
        ExteriorAlgebra([1, 4], 3)


def test_resource_cap():
    with pytest.raises(ResourceError):
        ext_minimal_resolution(3, 2, 10, 80, cap=5)


ODD = st.integers(0, 8).map(lambda k: 2 * k + 1)


@settings(max_examples=100)
@given(a=ODD, b=ODD)
def test_kunneth(a, b):
    s_max, t_max = 5, 40
    both = ext_exterior([a, b], 3, s_max, t_max).dims
    conv = convolve_tables(ext_exterior([a], 3, s_max, t_max).dims,
                           ext_exterior([b], 3, s_max, t_max).dims, s_max, t_max)
    assert compare_tables(both, conv) is None


ALG = ExteriorAlgebra([1, 5, 17, 53], 3)
SUBSETS = st.sampled_from(ALG.basis)


@settings(max_examples=1_000)
@given(st.lists(st.tuples(SUBSETS, SUBSETS, SUBSETS), min_size=10, max_size=10))
def test_product_sign_associative(batch):
    for a, b, c in batch:
        ab = ALG.product(a, b)
        bc = ALG.product(b, c)
        left = None if ab is None else ALG.product(ab[1], c)
        right = None if bc is None else ALG.product(a, bc[1])
        if left is None or right is None:
            assert left is None and right is None
            continue
        assert ab[0] * left[0] == bc[0] * right[0] and left[1] == right[1]


@settings(max_examples=1_000)
@given(st.lists(st.tuples(SUBSETS, SUBSETS), min_size=10, max_size=10))
def test_product_graded_commutative(batch):
    for a, b in batch:
        ab, ba = ALG.product(a, b), ALG.product(b, a)
        if ab is None:
            assert ba is None
            continue
        assert ab[1] == ba[1]
        assert ab[0] == ba[0] * (-1) ** (len(a) * len(b))


def test_json_document():
    doc = ext_minimal_resolution(3, 1, 2, 6).to_json(1)
    assert doc["schema"] == "redshift/ext-chart/1"
    assert doc["generator_degrees"] == [1, 5]
    assert doc["classes"][-1] == {"s": 2, "t": 6, "stem": 4, "dim": 1}
