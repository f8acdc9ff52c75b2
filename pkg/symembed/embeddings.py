"""Embedding-level objects assembled from spherical monoids.

Affine embeddings are classified by closed, saturated, lattice-generating
submonoids of X̆⁺. This module validates such monoids, builds the valuation
cone, the enveloping monoid L̃ with its essential pairs, the canonical
embedding with its chart monoid, and the abelianization checks for flatness.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .config import Config
from .cones import (
    Cone, HilbertBasis, contains, dual_description, faces, from_inequalities, hilbert_basis,
)
from .errors import ValidationError
from .exact_linalg import (
    IntVec, LatticeBasis, add, int_vec, lattice_index, lattice_member, primitive, scale, sub,
)
from .monoids import (
    ClosednessReport, MonoidIdealFace, OrbitPoset, SphericalMonoid, elements_up_to,
    generates_lattice, ideal_generator_check, is_closed, is_saturated, member, prime_ideal,
)
from .satake import (
    IRootDatum, SphericalLattice, _coords, doubled, is_semisimple, spherical_lattice,
)

logger = logging.getLogger(__name__)


def _as_lattice(x: Union[IRootDatum, SphericalLattice]) -> SphericalLattice:
    return spherical_lattice(x) if isinstance(x, IRootDatum) else x


def _subset_label(subset) -> str:
    return "{" + ",".join(str(i) for i in sorted(subset)) + "}" if subset else "∅"


def _subsets(labels: Sequence[int]) -> List[FrozenSet[int]]:
    out = []
    for k in range(len(labels) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(labels, k))
    return out


def _require_semisimple(sl: SphericalLattice):
    if not is_semisimple(sl):
        raise ValidationError("the bar roots do not span the spherical lattice rationally",
                              axiom="semisimple")


# ----------------------------------------------------------------------
# affine embeddings

@dataclass(frozen=True)
class EmbeddingReport:
    generating: bool
    saturated: bool
    closed: ClosednessReport

    @property
    def failed(self) -> List[str]:
        out = []
        if not self.closed.verdict:
            out.append("closed")
        if not self.saturated:
            out.append("saturated")
        if not self.generating:
            out.append("generating")
        return out

    @property
    def valid(self) -> bool:
        return not self.failed

    def to_dict(self):
        return {"closed": self.closed.to_dict(), "saturated": self.saturated,
                "generating": self.generating, "valid": self.valid}


@dataclass(frozen=True, eq=False)
class AffineEmbedding:
    sl: SphericalLattice
    monoid: SphericalMonoid
    report: EmbeddingReport


def embedding_report(L: SphericalMonoid, bound: Optional[int] = None) -> EmbeddingReport:
    saturated = is_saturated(L)
    if saturated:
        closed = is_closed(L, "exact")
    else:
        closed = is_closed(L, "generator_downsets")
        if closed.verdict and bound is not None:
            closed = is_closed(L, "bruteforce", bound)
    return EmbeddingReport(generates_lattice(L), saturated, closed)


def validate_embedding(ird: Union[IRootDatum, SphericalLattice], generators,
                       bound: Optional[int] = None) -> AffineEmbedding:
    """The monoid classifies an affine embedding iff it is closed, saturated and generating."""
    sl = _as_lattice(ird)
    L = SphericalMonoid(sl, generators)
    report = embedding_report(L, bound)
    if not report.valid:
        logger.warning(f"monoid {L} rejected: {report.failed}")
        raise ValidationError(f"not an affine embedding: fails {', '.join(report.failed)}",
                              axiom="affine embedding", failed=report.failed)
    return AffineEmbedding(sl, L, report)


# ----------------------------------------------------------------------
# valuation cone and the rational order

@dataclass(frozen=True, eq=False)
class ValuationCone:
    """{t ∈ Hom(X̆, Q) : t(ᾱ_i) ≤ 0}, in coordinates dual to the basis of X̆."""
    sl: SphericalLattice
    cone: Cone
    normals: Tuple[IntVec, ...]

    def contains(self, t: Sequence) -> bool:
        return contains(self.cone, t)


def valuation_cone(sl: SphericalLattice) -> ValuationCone:
    coords = tuple(int_vec(sl.lattice.rational_coordinates(b)) for b in sl.bar_alpha)
    cone = from_inequalities(sl.rank, [scale(-1, c) for c in coords])
    return ValuationCone(sl, cone, coords)


def preceq(sl: SphericalLattice, mu, lam) -> bool:
    """μ ⪯ λ: λ − μ lies in the rational cone of the ᾱ_i."""
    mu, lam = _coords(sl.datum, mu), _coords(sl.datum, lam)
    for name, x in (("mu", mu), ("lambda", lam)):
        if not sl.contains(x):
            raise ValidationError(f"{name} = {x} is not in the spherical lattice", axiom="membership")
    return contains(sl.root_cone, sub(lam, mu))


# ----------------------------------------------------------------------
# enveloping monoid

@dataclass(frozen=True, eq=False)
class EnvelopingMonoid:
    base: SphericalLattice
    doubled: SphericalLattice
    monoid: SphericalMonoid

    @property
    def generators(self) -> Tuple[IntVec, ...]:
        return self.monoid.generators

    def psi(self, v: Sequence[int]) -> IntVec:
        """(μ, λ) ↦ (μ, λ − μ)."""
        n = self.base.datum.rank_x
        return tuple(v[:n]) + sub(v[n:], v[:n])


def enveloping_monoid(sl: SphericalLattice) -> EnvelopingMonoid:
    """L̃ = {(μ, λ) : μ ∈ X̆⁺, μ ⪯ λ} over the doubled datum."""
    _require_semisimple(sl)
    sl2 = spherical_lattice(doubled(sl.parent))
    diagonal = [g + g for g in sl.dominant_hilbert]
    zero = (0,) * sl.datum.rank_x
    vertical = [zero + h for h in hilbert_basis(sl.root_cone, sl.lattice)]
    L = SphericalMonoid(sl2, diagonal + vertical)
    report = embedding_report(L)
    if not report.valid:
        raise ValidationError(f"enveloping monoid fails {', '.join(report.failed)}",
                              axiom="enveloping monoid", failed=report.failed)
    return EnvelopingMonoid(sl, sl2, L)


# ----------------------------------------------------------------------
# essential pairs

@dataclass(frozen=True)
class EssentialPair:
    j1: FrozenSet[int]
    j2: FrozenSet[int]
    essential: bool

    def label(self) -> str:
        return f"({_subset_label(self.j1)}, {_subset_label(self.j2)})"


def spherical_dynkin_graph(sl: SphericalLattice) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(sl.i_circ_prime)
    for a, i in enumerate(sl.i_circ_prime):
        for b, j in enumerate(sl.i_circ_prime):
            if a != b and sl.spherical_cartan[a, b] != 0:
                graph.add_edge(i, j)
    return graph


def essential(sl: SphericalLattice, j1, j2) -> EssentialPair:
    """No connected component of I_circ' ∖ J1 lies inside J2."""
    j1, j2 = frozenset(j1), frozenset(j2)
    nodes = set(sl.i_circ_prime)
    if not j1 <= nodes or not j2 <= nodes:
        raise ValidationError(f"pair {sorted(j1)}, {sorted(j2)} is not over {sorted(nodes)}",
                              axiom="essential pair")
    rest = spherical_dynkin_graph(sl).subgraph(nodes - j1)
    ok = not any(set(comp) <= j2 for comp in nx.connected_components(rest))
    return EssentialPair(j1, j2, ok)


def all_pairs(sl: SphericalLattice) -> List[EssentialPair]:
    subsets = _subsets(sl.i_circ_prime)
    return [essential(sl, a, b) for a in subsets for b in subsets]


def essential_pairs(sl: SphericalLattice) -> List[EssentialPair]:
    return [p for p in all_pairs(sl) if p.essential]


@dataclass(frozen=True, eq=False)
class EnvelopingIdeal:
    pair: EssentialPair
    ideal: MonoidIdealFace
    integral_check: bool

    @property
    def closed(self) -> bool:
        return self.ideal.closed

    @property
    def agrees(self) -> bool:
        return self.closed == self.pair.essential

    def to_dict(self):
        return {"pair": [sorted(self.pair.j1), sorted(self.pair.j2)],
                "essential": self.pair.essential, "closed": self.closed,
                "integral_generator_check": self.integral_check,
                "zero_ideal": self.ideal.is_zero, "agrees": self.agrees,
                "witness": None if self.ideal.witness is None else [list(w) for w in self.ideal.witness]}


def enveloping_ideal(em: EnvelopingMonoid, j1, j2) -> EnvelopingIdeal:
    """L̃_{J1,J2}: the complement of the face spanned by (ω̄_j, ω̄_j), j ∈ J1, and (0, ᾱ_j), j ∈ J2."""
    sl = em.base
    pair = essential(sl, j1, j2)
    n = sl.datum.rank_x
    zero = (0,) * n
    gens = []
    for j, w in zip(sl.i_circ_prime, sl.bar_fundamental_weights):
        if j in pair.j1:
            gens.append(tuple(w) + tuple(w))
    for j, b in zip(sl.i_circ_prime, sl.bar_alpha):
        if j in pair.j2:
            gens.append(zero + tuple(b))
    c = em.monoid.cone()
    spanned = dual_description(gens, 2 * n)
    ray_set = tuple(k for k, r in enumerate(c.rays) if contains(spanned, r))
    face = next((f for f in faces(c) if f.span_rays == ray_set and f.dim == spanned.dim), None)
    if face is None:
        raise ValidationError(f"pair {pair.label()} does not cut out a face of cone(L̃)", axiom="face")
    ideal = prime_ideal(em.monoid, face)
    return EnvelopingIdeal(pair, ideal, ideal_generator_check(ideal))


@dataclass(frozen=True)
class CrossCheckReport:
    rows: Tuple[EnvelopingIdeal, ...]

    @property
    def all_agree(self) -> bool:
        return all(r.agrees for r in self.rows)

    @property
    def essential_count(self) -> int:
        return sum(1 for r in self.rows if r.pair.essential)

    @property
    def closed_nonzero_count(self) -> int:
        return sum(1 for r in self.rows if r.closed and not r.ideal.is_zero)

    def to_dict(self):
        return {"all_agree": self.all_agree, "pairs": len(self.rows),
                "essential": self.essential_count, "closed_nonzero_ideals": self.closed_nonzero_count,
                "rows": [r.to_dict() for r in self.rows]}


def cross_check(em: EnvelopingMonoid) -> CrossCheckReport:
    """Closed prime ideal of L̃ ⟺ essential pair, over every pair."""
    rows = tuple(enveloping_ideal(em, p.j1, p.j2) for p in all_pairs(em.base))
    report = CrossCheckReport(rows)
    if not report.all_agree:
        mismatched = [r.pair.label() for r in rows if not r.agrees]
        logger.warning(f"essential/closed mismatch on {mismatched}")
    return report


# ----------------------------------------------------------------------
# canonical embedding

@dataclass(frozen=True, eq=False)
class CanonicalEmbedding:
    sl: SphericalLattice
    orbits: OrbitPoset
    orbit_subsets: Tuple[FrozenSet[int], ...]
    chart_cone: Cone
    chart_hilbert: HilbertBasis
    smooth: bool
    index: int

    def to_dict(self):
        return {"orbits": len(self.orbits), "smooth": self.smooth, "index": self.index,
                "orbit_poset": self.orbits.to_dict(),
                "chart_rays": [list(r) for r in self.chart_cone.extreme_rays],
                "chart_hilbert_basis": [list(h) for h in self.chart_hilbert],
                "spherical_roots": [list(a) for a in self.sl.spherical_roots]}


def canonical_embedding(sl: SphericalLattice) -> CanonicalEmbedding:
    """Orbits indexed by subsets of I_circ', chart monoid C = {μ ∈ X̆ : μ ⪯ 0}."""
    _require_semisimple(sl)
    top = frozenset(sl.i_circ_prime)
    subsets = [p.j2 for p in essential_pairs(sl) if p.j1 == top]
    orbits = OrbitPoset.from_order([_subset_label(s) for s in subsets],
                                   lambda i, j: subsets[i] < subsets[j])
    n = sl.datum.rank_x
    chart_cone = dual_description([scale(-1, b) for b in sl.bar_alpha], n)
    chart_hilbert = hilbert_basis(chart_cone, sl.lattice)
    expected = sorted(primitive(scale(-1, a)) for a in sl.spherical_roots)
    if sorted(chart_cone.extreme_rays) != expected:
        raise ValidationError("chart cone rays are not the negative spherical roots", axiom="chart")
    index = lattice_index(LatticeBasis.span(n, sl.spherical_roots), sl.lattice)
    smooth = index == 1
    if smooth and sorted(chart_hilbert) != sorted(scale(-1, a) for a in sl.spherical_roots):
        raise ValidationError("smooth chart monoid is not free on the negative spherical roots",
                              axiom="chart")
    logger.info(f"canonical embedding: {len(orbits)} orbits, index {index}")
    return CanonicalEmbedding(sl, orbits, tuple(subsets), chart_cone, chart_hilbert, smooth, index)


def is_smooth_canonical(sl: SphericalLattice) -> bool:
    return canonical_embedding(sl).smooth


def wonderful_check(sl: SphericalLattice) -> bool:
    """Smooth canonical embedding whose chart monoid is free on the −α_i'."""
    ce = canonical_embedding(sl)
    free = sorted(scale(-1, a) for a in sl.spherical_roots)
    return ce.smooth and sorted(ce.chart_hilbert) == free and len(ce.orbits) == 2 ** len(sl.i_circ_prime)


# ----------------------------------------------------------------------
# abelianization and flatness

@dataclass(frozen=True, eq=False)
class Abelianization:
    monoid: SphericalMonoid
    l_z: SphericalMonoid
    m_0: LatticeBasis

    @property
    def non_units(self) -> List[IntVec]:
        return [g for g in self.l_z.generators if not lattice_member(self.m_0, g)]

    def le_z(self, a: Sequence[int], b: Sequence[int]) -> bool:
        """a ≤_Z b: b − a ∈ L_Z."""
        return member(self.l_z, sub(b, a))

    def is_minimal(self, x: Sequence[int]) -> bool:
        return not any(member(self.monoid, sub(x, g)) for g in self.non_units)


def abelianization(L: Union[SphericalMonoid, EnvelopingMonoid]) -> Abelianization:
    L = L.monoid if isinstance(L, EnvelopingMonoid) else L
    datum = L.sl.datum
    central = [g for g in L.generators if not any(datum.pairings(g))]
    l_z = SphericalMonoid(L.sl, central, check=False)
    cone = l_z.cone()
    units = [g for g in central if contains(cone, scale(-1, g))]
    return Abelianization(L, l_z, LatticeBasis.span(datum.rank_x, units))


def minimal_elements(ab: Abelianization, bound: Optional[int] = None) -> List[IntVec]:
    bound = Config.DEFAULT_BOUND if bound is None else bound
    return [x for x in elements_up_to(ab.monoid, bound) if ab.is_minimal(x)]


@dataclass(frozen=True)
class VeryFlatReport:
    verdict: bool
    bounded: bool
    bound: int
    minimal_count: int
    condition_3: bool
    submonoid: bool
    diagonal: Optional[bool] = None
    witnesses: Tuple[Tuple[IntVec, ...], ...] = ()

    def to_dict(self):
        return {"verdict": self.verdict, "bounded": self.bounded, "bound": self.bound,
                "minimal_elements": self.minimal_count, "condition_3": self.condition_3,
                "submonoid": self.submonoid, "diagonal": self.diagonal,
                "witnesses": [[list(v) for v in w] for w in self.witnesses]}


def is_very_flat(L: Union[SphericalMonoid, EnvelopingMonoid], bound: Optional[int] = None) -> VeryFlatReport:
    """Bounded flatness checks; exact for enveloping monoids, where M is the diagonal."""
    bound = Config.DEFAULT_BOUND if bound is None else bound
    em = L if isinstance(L, EnvelopingMonoid) else None
    ab = abelianization(L)
    elements = elements_up_to(ab.monoid, bound)
    mins = [x for x in elements if ab.is_minimal(x)]
    min_set = set(mins)
    group = LatticeBasis.span(ab.monoid.rank, ab.l_z.generators)
    witnesses = []

    condition_3 = True
    for a, b in itertools.combinations(mins, 2):
        d = sub(a, b)
        if lattice_member(group, d) and not lattice_member(ab.m_0, d):
            condition_3 = False
            witnesses.append((a, b))
            break

    submonoid = True
    for a, b in itertools.combinations_with_replacement(mins, 2):
        s = add(a, b)
        if not ab.is_minimal(s):
            submonoid = False
            witnesses.append((a, b, s))
            break

    diagonal = None
    exact = False
    if em is not None:
        n = em.base.datum.rank_x
        bounded_diagonal = {x for x in elements if x[:n] == x[n:]}
        structural = (ab.m_0.rank == 0 and all(not any(g[:n]) for g in ab.l_z.generators))
        diagonal = structural and min_set == bounded_diagonal
        exact = True
    verdict = condition_3 and submonoid and (diagonal is not False)
    return VeryFlatReport(verdict, not exact, bound, len(mins), condition_3, submonoid,
                          diagonal, tuple(witnesses))
