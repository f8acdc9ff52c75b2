import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from conftest import SEMISIMPLE_SPACES
from symembed.catalog import get, list_names
from symembed.embeddings import (
    abelianization, all_pairs, canonical_embedding, cross_check, embedding_report,
    enveloping_ideal, enveloping_monoid, essential, essential_pairs, is_smooth_canonical,
    is_very_flat, minimal_elements, preceq, spherical_dynkin_graph, validate_embedding,
    valuation_cone, wonderful_check,
)
from symembed.errors import ValidationError
from symembed.monoids import SphericalMonoid, closure, generates_lattice, member
from symembed.satake import is_semisimple


@pytest.fixture(scope="module")
def envelope_rank_one(lattice):
    return enveloping_monoid(lattice("AI.sl.2"))


def test_valuation_cone_rank_one(lattice):
    vc = valuation_cone(lattice("AI.sl.2"))
    assert vc.normals == ((2,),)
    assert vc.cone.rays == ((-1,),)
    assert vc.contains((-3,))
    assert not vc.contains((1,))


def test_valuation_cone_is_simplicial_for_split_rank_two(lattice):
    vc = valuation_cone(lattice("AI.ad.2"))
    assert vc.cone.dim == 2
    assert len(vc.cone.extreme_rays) == 2
    assert vc.contains((-1, -1))
    assert not vc.contains((1, 0))


def test_preceq(lattice):
    sl = lattice("AI.sl.3")
    assert preceq(sl, (0, 0), (4, -2))
    assert preceq(sl, (0, 0), (2, 2))
    assert not preceq(sl, (4, -2), (0, 0))
    with pytest.raises(ValidationError):
        preceq(sl, (1, 0), (2, 0))


def test_validate_embedding_accepts_the_dominant_monoid(lattice):
    emb = validate_embedding(lattice("AI.sl.3"), [(2, 0), (0, 2)])
    assert emb.report.valid
    assert emb.report.closed.exact


def test_validate_embedding_lists_every_failure():
    with pytest.raises(ValidationError) as info:
        validate_embedding(get("AI.sl.2"), [(4,)])
    assert info.value.failed == ["closed", "saturated", "generating"]
    assert info.value.axiom == "affine embedding"


def test_embedding_report_on_a_saturated_ray(lattice):
    L = SphericalMonoid(lattice("AI.sl.3"), [(2, 2)])
    report = embedding_report(L)
    assert report.saturated
    assert report.closed.exact and not report.closed.verdict
    assert report.failed == ["closed", "generating"]


@settings(max_examples=30, deadline=None)
@given(gens=st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4))
def test_semisimple_space_has_only_the_trivial_affine_embedding(lattice, gens):
    assume(any(a or b for a, b in gens))
    sl = lattice("AI.sl.3")
    gens = [(2 * a, 2 * b) for a, b in gens]
    L = SphericalMonoid(sl, gens)
    if member(L, (2, 0)) and member(L, (0, 2)):
        assert validate_embedding(sl, gens).report.valid
    else:
        with pytest.raises(ValidationError):
            validate_embedding(sl, gens)


def test_enveloping_generators(envelope_rank_one):
    assert envelope_rank_one.generators == ((0, 2), (2, 2))
    assert envelope_rank_one.psi((2, 2)) == (2, 0)
    assert envelope_rank_one.psi((0, 2)) == (0, 2)


def test_enveloping_needs_semisimple(lattice):
    with pytest.raises(ValidationError) as info:
        enveloping_monoid(lattice("AI.sl.2+T"))
    assert info.value.axiom == "semisimple"


def test_essential_pairs_rank_one(lattice):
    pairs = essential_pairs(lattice("AI.sl.2"))
    assert [p.label() for p in pairs] == ["(∅, ∅)", "({1}, ∅)", "({1}, {1})"]
    assert len(all_pairs(lattice("AI.sl.2"))) == 4


def test_essential_pairs_connected_rank_two(lattice):
    sl = lattice("AI.sl.3")
    assert spherical_dynkin_graph(sl).number_of_edges() == 1
    assert len(all_pairs(sl)) == 16
    assert len(essential_pairs(sl)) == 11
    assert not essential(sl, [], [1, 2]).essential
    assert not essential(sl, [1], [2]).essential
    assert essential(sl, [1], [1]).essential
    with pytest.raises(ValidationError):
        essential(sl, [3], [])


def test_spherical_dynkin_graph(lattice):
    assert spherical_dynkin_graph(lattice("AI.ad.2")).number_of_edges() == 1
    assert spherical_dynkin_graph(lattice("group.A1")).number_of_nodes() == 1
    assert spherical_dynkin_graph(lattice("AII.sl.4")).number_of_edges() == 0


def test_enveloping_ideal_for_a_nonessential_pair(envelope_rank_one):
    row = enveloping_ideal(envelope_rank_one, [], [1])
    assert not row.pair.essential
    assert not row.closed
    assert row.agrees
    assert not row.integral_check
    assert row.ideal.witness == ((2, 2), (0, 2))


def test_cross_check_rank_one(envelope_rank_one):
    report = cross_check(envelope_rank_one)
    assert report.all_agree
    assert report.essential_count == 3
    assert report.closed_nonzero_count == 2
    assert len(report.to_dict()["rows"]) == 4


def test_cross_check_rank_two(lattice):
    report = cross_check(enveloping_monoid(lattice("AI.sl.3")))
    assert report.all_agree
    assert report.essential_count == 11
    assert report.closed_nonzero_count == 10


@pytest.mark.parametrize("name", list_names())
def test_cross_check_on_the_catalog(lattice, name):
    sl = lattice(name)
    if not is_semisimple(sl) or len(sl.i_circ_prime) > 3:
        pytest.skip("cross-check needs a semisimple space of rank at most 3")
    report = cross_check(enveloping_monoid(sl))
    assert report.all_agree
    assert report.closed_nonzero_count == report.essential_count - 1
    assert len(report.rows) == 4 ** len(sl.i_circ_prime)


def test_canonical_embedding_rank_one(lattice):
    ce = canonical_embedding(lattice("AI.sl.2"))
    assert len(ce.orbits) == 2
    assert ce.chart_hilbert.elements == ((-2,),)
    assert ce.smooth and ce.index == 1
    assert ce.to_dict()["orbits"] == 2


def test_canonical_embedding_of_sl3_mod_so3_is_singular(lattice):
    sl = lattice("AI.sl.3")
    ce = canonical_embedding(sl)
    assert not ce.smooth
    assert ce.index == 3
    assert sorted(ce.chart_hilbert) == [(-4, 2), (-2, 0), (0, -2), (2, -4)]
    assert len(ce.orbits) == 4
    assert ce.orbits.maximal() == [3]
    assert not wonderful_check(sl)


@pytest.mark.parametrize("name", ["AI.ad.1", "AI.ad.2", "AI.ad.3", "group.A1"])
def test_wonderful_cases(lattice, name):
    sl = lattice(name)
    assert is_smooth_canonical(sl)
    assert wonderful_check(sl)
    assert len(canonical_embedding(sl).orbits) == 2 ** len(sl.i_circ_prime)


@pytest.mark.parametrize("name", SEMISIMPLE_SPACES)
def test_canonical_orbits_are_subsets(lattice, name):
    sl = lattice(name)
    ce = canonical_embedding(sl)
    assert len(ce.orbit_subsets) == 2 ** len(sl.i_circ_prime)
    assert ce.chart_cone.dim == sl.rank
    assert len(ce.chart_cone.extreme_rays) == len(sl.i_circ_prime)


def test_canonical_needs_semisimple(lattice):
    with pytest.raises(ValidationError):
        canonical_embedding(lattice("AI.sl.3+T"))


def test_abelianization_of_the_enveloping_monoid(envelope_rank_one):
    ab = abelianization(envelope_rank_one)
    assert ab.l_z.generators == ((0, 2),)
    assert ab.m_0.rank == 0
    assert ab.non_units == [(0, 2)]
    assert ab.le_z((2, 2), (2, 6))
    assert not ab.le_z((2, 2), (4, 4))
    assert minimal_elements(ab, 3) == [(0, 0), (2, 2), (4, 4), (6, 6)]


def test_enveloping_monoid_is_very_flat(envelope_rank_one):
    report = is_very_flat(envelope_rank_one, 3)
    assert report.verdict
    assert not report.bounded
    assert report.diagonal is True
    assert report.condition_3 and report.submonoid


def test_dominant_monoid_flatness_is_bounded(lattice):
    report = is_very_flat(SphericalMonoid.dominant(lattice("AI.sl.2")), 3)
    assert report.verdict
    assert report.bounded
    assert report.diagonal is None
    assert report.minimal_count == 4


def test_rank_zero_space_is_a_point(lattice):
    sl = lattice("compact.sl.3")
    assert [p.label() for p in essential_pairs(sl)] == ["(∅, ∅)"]
    ce = canonical_embedding(sl)
    assert len(ce.orbits) == 1
    assert ce.smooth and ce.index == 1
    assert ce.chart_hilbert.elements == ()


@pytest.mark.parametrize("name", SEMISIMPLE_SPACES)
@settings(max_examples=50, deadline=None,
          suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(data=st.data())
def test_closure_of_a_generating_monoid_is_the_dominant_monoid(lattice, name, data):
    sl = lattice(name)
    hb = sl.dominant_hilbert.elements
    rows = data.draw(st.lists(st.lists(st.integers(0, 2), min_size=len(hb), max_size=len(hb)),
                              min_size=1, max_size=4))
    gens = [tuple(sum(c * h[k] for c, h in zip(row, hb)) for k in range(sl.datum.rank_x))
            for row in rows]
    L = SphericalMonoid(sl, gens)
    assume(generates_lattice(L))
    closed, rounds, stable = closure(L)
    assert stable and rounds <= 6
    assert closed == SphericalMonoid.dominant(sl)


def test_validate_embedding_over_a_central_torus(lattice):
    sl = lattice("AI.sl.2+T")
    emb = validate_embedding(sl, [(2, 0), (0, 2), (0, -2)])
    assert emb.report.valid and emb.report.closed.exact
    assert validate_embedding(sl, [(2, 0), (0, 2)]).report.valid
    with pytest.raises(ValidationError):
        validate_embedding(sl, [(4, 0), (0, 2), (0, -2)])


def test_abelianization_with_central_units(lattice):
    L = SphericalMonoid.dominant(lattice("AI.sl.2+T"))
    ab = abelianization(L)
    assert ab.l_z.generators == ((0, -2), (0, 2))
    assert ab.m_0.rank == 1
    assert ab.non_units == []
    assert ab.le_z((2, 0), (2, -4))
    assert not ab.le_z((0, 0), (2, 0))
    assert minimal_elements(ab, 2) == [(0, -4), (0, -2), (0, 0), (0, 2), (0, 4),
                                       (2, -2), (2, 0), (2, 2), (4, 0)]
    report = is_very_flat(L, 2)
    assert report.verdict and report.bounded
    assert report.minimal_count == 9


def test_flatness_failures_carry_witnesses(lattice):
    L = SphericalMonoid(lattice("AI.sl.2+T"), [(2, 0), (2, 2), (0, 4), (0, 6)])
    ab = abelianization(L)
    assert ab.m_0.rank == 0
    assert ab.non_units == [(0, 4), (0, 6)]
    assert minimal_elements(ab, 2) == [(0, 0), (2, 0), (2, 2), (4, 0), (4, 2)]
    report = is_very_flat(L, 2)
    assert not report.verdict
    assert not report.condition_3 and not report.submonoid
    assert report.witnesses == (((2, 0), (2, 2)), ((2, 2), (2, 2), (4, 4)))


def test_enveloping_monoid_of_rank_two_is_very_flat(lattice):
    report = is_very_flat(enveloping_monoid(lattice("AI.sl.3")), 4)
    assert report.verdict
    assert report.diagonal is True
    assert not report.bounded
