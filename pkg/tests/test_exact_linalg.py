from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symembed.exact_linalg import (
    LatticeBasis, int_mat, int_vec, integer_kernel, lattice_coordinates, lattice_index,
    lattice_member, mat_mul, normal_form, nullspace, primitive, primitive_on_ray, rank,
    rows_of, smith_invariants, solve_rational, determinant,
)

small = st.integers(min_value=-5, max_value=5)
square3 = st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3)


def test_int_vec_rejects_fractions():
    assert int_vec([Fraction(4, 2), 3]) == (2, 3)
    with pytest.raises(ValueError):
        int_vec([Fraction(1, 2)])


def test_primitive():
    assert primitive((2, 4, -6)) == (1, 2, -3)
    assert primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    assert primitive((0, 0)) == (0, 0)


def test_solve_rational():
    assert solve_rational([[1, 1], [1, -1]], [2, 0]) == (1, 1)
    assert solve_rational([[2]], [1]) == (Fraction(1, 2),)
    assert solve_rational([[1], [1]], [1, 2]) is None


def test_nullspace_is_canonical():
    assert nullspace([[1, 1]], 2) == [(1, -1)]
    assert nullspace([], 2) == [(1, 0), (0, 1)]


def test_smith_of_diagonal():
    assert smith_invariants(int_mat([[2, 0], [0, 3]])) == [1, 6]
    assert smith_invariants(int_mat([[2, 4], [4, 8]])) == [2]


@settings(max_examples=60, deadline=None)
@given(rows=square3)
def test_smith_form_is_unimodular_transform(rows):
    m = int_mat(rows)
    u, v, d = normal_form(m, "smith")
    assert rows_of(mat_mul(mat_mul(u, m), v)) == rows_of(d)
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    inv = smith_invariants(m)
    assert all(x > 0 for x in inv)
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    if rank(rows, 3) == 3:
        product = 1
        for x in inv:
            product *= x
        assert product == abs(determinant(m))


@settings(max_examples=60, deadline=None)
@given(rows=st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_hermite_basis_spans_the_same_lattice(rows):
    lat = LatticeBasis.span(3, rows)
    assert lat.rank == rank(rows, 3)
    for r in rows:
        assert lattice_member(lat, r)
        assert lattice_coordinates(lat, r) is not None


def test_even_lattice():
    lat = LatticeBasis.span(2, [(2, 0), (0, 2), (1, 1)])
    assert lattice_member(lat, (1, 1))
    assert not lattice_member(lat, (1, 0))
    assert not lattice_member(lat, (Fraction(1, 2), 0))
    assert lattice_index(lat, LatticeBasis.standard(2)) == 2


def test_root_lattice_index_of_a2():
    roots = LatticeBasis.span(2, [(2, -1), (-1, 2)])
    assert lattice_index(roots, LatticeBasis.standard(2)) == 3
    assert lattice_index(LatticeBasis.span(2, [(1, 0)]), LatticeBasis.standard(2)) == 0


def test_integer_kernel():
    kernel = integer_kernel(int_mat([[1, 1, 1]]))
    assert len(kernel) == 2
    assert all(sum(v) == 0 for v in kernel)
    assert lattice_index(LatticeBasis(3, tuple(kernel)),
                         LatticeBasis.span(3, [(1, -1, 0), (0, 1, -1)])) == 1


def test_primitive_on_ray():
    assert primitive_on_ray(LatticeBasis.span(1, [(2,)]), (1,)) == (2,)
    assert primitive_on_ray(LatticeBasis.span(2, [(2, 0), (0, 2)]), (4, -2)) == (4, -2)
    with pytest.raises(ValueError):
        primitive_on_ray(LatticeBasis.span(2, [(1, 0)]), (0, 1))


def test_dependent_basis_is_rejected():
    with pytest.raises(ValueError):
        LatticeBasis(2, ((1, 0), (2, 0)))
