import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symembed.catalog import get, list_names
from symembed.errors import NotFiniteTypeError, RankMismatchError, ValidationError
from symembed.exact_linalg import apply, identity, mat_mul, rows_of, scale
from symembed.root_datum import (
    RootDatum, Weight, classify_type, dominance_leq, fundamental_weights, is_dominant,
    parabolic_longest,
)

A2 = [[2, -1], [-1, 2]]
A3 = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
FINITE_TYPES = [
    [[2]],
    A2,
    [[2, 0], [0, 2]],
    [[2, -2], [-1, 2]],
    [[2, -1], [-3, 2]],
    [[2, -1, 0], [-1, 2, -1], [0, -2, 2]],
    [[2, -1, 0], [-1, 2, -2], [0, -1, 2]],
    [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]],
    [[2, 0, 0], [0, 2, -1], [0, -3, 2]],
]


@pytest.mark.parametrize("cartan,expected", [
    ([[2]], "A1"),
    (A2, "A2"),
    ([[2, 0], [0, 2]], "A1xA1"),
    ([[2, -2], [-1, 2]], "B2"),
    ([[2, -1], [-3, 2]], "G2"),
    ([[2, -1, 0], [-1, 2, -1], [0, -2, 2]], "B3"),
    ([[2, -1, 0], [-1, 2, -2], [0, -1, 2]], "C3"),
    ([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]], "D4"),
    ([], "trivial"),
])
def test_classify(cartan, expected):
    assert str(classify_type(cartan)) == expected


@pytest.mark.parametrize("cartan", [
    [[2, -2], [-2, 2]],
    [[2, 1], [1, 2]],
    [[2, -1], [0, 2]],
    [[3, -1], [-1, 2]],
])
def test_classify_rejects(cartan):
    with pytest.raises(NotFiniteTypeError):
        classify_type(cartan)


def test_rational_rescale():
    assert str(classify_type([[2, -2], [-2, 4]], allow_rational_rescale=True)) == "B2"
    with pytest.raises(NotFiniteTypeError):
        classify_type([[2, -2], [-2, 4]])
    with pytest.raises(NotFiniteTypeError, match="non-crystallographic"):
        classify_type([[2, -1], [-1, 4]], allow_rational_rescale=True)


def test_simply_connected_and_adjoint_share_cartan():
    sc, ad = RootDatum.simply_connected(A3), RootDatum.adjoint(A3)
    assert rows_of(sc.cartan) == rows_of(ad.cartan) == [tuple(r) for r in A3]
    assert sc.labels == (1, 2, 3)
    assert sc.root(2) == (-1, 2, -1)
    assert ad.coroot(1) == (2, -1, 0)


def test_invalid_data():
    with pytest.raises(ValidationError):
        RootDatum(2, ((1, 0), (2, 0)), ((1, 0), (0, 1)))
    with pytest.raises(RankMismatchError):
        RootDatum(2, ((1, 0),), ((1, 0), (0, 1)))
    with pytest.raises(RankMismatchError):
        Weight(RootDatum.simply_connected(A2), (1, 2, 3))


def test_reflections_and_longest_element():
    d = RootDatum.simply_connected(A2)
    assert apply(d.reflection(1), d.root(1)) == scale(-1, d.root(1))
    w0 = parabolic_longest(d, {1, 2})
    assert apply(w0, d.root(1)) == scale(-1, d.root(2))
    assert apply(w0, d.root(2)) == scale(-1, d.root(1))
    assert rows_of(mat_mul(w0, w0)) == rows_of(identity(2))
    assert rows_of(parabolic_longest(d, set())) == rows_of(identity(2))


def test_longest_element_of_a3_parabolic():
    d = RootDatum.simply_connected(A3)
    w = parabolic_longest(d, {1, 3})
    assert apply(w, d.root(1)) == scale(-1, d.root(1))
    assert apply(w, d.root(2)) == tuple(a + b + c for a, b, c in zip(d.root(1), d.root(2), d.root(3)))


def test_fundamental_weights():
    assert fundamental_weights(RootDatum.simply_connected(A2)) == [(1, 0), (0, 1)]
    omegas = fundamental_weights(RootDatum.adjoint(A2))
    d = RootDatum.adjoint(A2)
    for i, w in enumerate(omegas):
        assert d.pairings(w) == tuple(int(i == j) for j in range(2))


def test_dominance():
    d = RootDatum.simply_connected(A2)
    zero, rho = Weight(d, (0, 0)), Weight(d, (1, 1))
    assert dominance_leq(zero, rho)
    assert not dominance_leq(rho, zero)
    assert not dominance_leq(zero, Weight(d, (1, 0)))
    assert is_dominant(rho) and not is_dominant(Weight(d, (-1, 2)))
    with pytest.raises(ValueError):
        dominance_leq(zero, Weight(RootDatum.simply_connected([[2]]), (0,)))


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_classification_ignores_the_labelling(data):
    cartan = data.draw(st.sampled_from(FINITE_TYPES))
    p = data.draw(st.permutations(range(len(cartan))))
    permuted = [[cartan[p[i]][p[j]] for j in range(len(cartan))] for i in range(len(cartan))]
    assert classify_type(permuted) == classify_type(cartan)


@settings(max_examples=100, deadline=None)
@given(start=st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
       up=st.tuples(st.integers(0, 2), st.integers(0, 2)),
       further=st.tuples(st.integers(0, 2), st.integers(0, 2)),
       other=st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_dominance_is_a_partial_order(start, up, further, other):
    d = RootDatum.simply_connected(A2)

    def raise_by(x, cs):
        for label, c in zip(d.labels, cs):
            x = tuple(a + c * b for a, b in zip(x, d.root(label)))
        return x

    a = Weight(d, start)
    b = Weight(d, raise_by(start, up))
    c = Weight(d, raise_by(raise_by(start, up), further))
    assert dominance_leq(a, a)
    assert dominance_leq(a, b) and dominance_leq(b, c) and dominance_leq(a, c)
    assert dominance_leq(b, a) == (not any(up))
    x = Weight(d, other)
    if dominance_leq(a, x) and dominance_leq(x, a):
        assert x.coords == a.coords


@pytest.mark.parametrize("name", list_names())
def test_parabolic_longest_elements_are_involutions(name):
    datum = get(name).datum
    for k in range(len(datum.labels) + 1):
        for subset in itertools.combinations(datum.labels, k):
            w = parabolic_longest(datum, subset)
            assert rows_of(mat_mul(w, w)) == rows_of(identity(datum.rank_x))
            for j in subset:
                image = apply(w, datum.root(j))
                assert any(image == scale(-1, datum.root(i)) for i in subset)
