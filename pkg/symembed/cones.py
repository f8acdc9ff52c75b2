"""Rational polyhedral cones: double description, faces, Hilbert bases.

The double description itself is delegated to cdd in exact fraction
arithmetic. Everything is then canonicalized here: rays and facets become
primitive integer vectors, sorted lexicographically, so results are stable
across runs and across the side (rays or inequalities) a cone was built from.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import cdd

from .errors import RankMismatchError
from .exact_linalg import (
    IntMat, IntVec, LatticeBasis, Number, canonical_span, columns_of, dot, int_mat,
    int_vec, integer_kernel, inverse, normal_form, nullspace, primitive,
    project_away, rank, scale, add,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cone:
    """Cone with both descriptions.

    `rays` holds the extreme rays of the pointed part (taken orthogonal to the
    lineality space) followed by ± a basis of the lineality space; `facets`
    holds the inner normals of the facets (taken inside the linear span)
    followed by ± a basis of the equations cutting out the span.
    """
    ambient_rank: int
    rays: Tuple[IntVec, ...]
    facets: Tuple[IntVec, ...]
    dim: int
    lineality: Tuple[IntVec, ...] = ()
    equations: Tuple[IntVec, ...] = ()

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def inequalities(self) -> Tuple[IntVec, ...]:
        """Facets that are genuine inequalities (no equation pairs)."""
        eqs = set(self.equations) | {scale(-1, e) for e in self.equations}
        return tuple(f for f in self.facets if f not in eqs)

    @property
    def extreme_rays(self) -> Tuple[IntVec, ...]:
        lines = set(self.lineality) | {scale(-1, l) for l in self.lineality}
        return tuple(r for r in self.rays if r not in lines)

    def __contains__(self, v) -> bool:
        return contains(self, v)


@dataclass(frozen=True)
class Face:
    defining_facet_subset: FrozenSet[int]
    span_rays: Tuple[int, ...]
    dim: int

    def rays_of(self, cone: Cone) -> List[IntVec]:
        return [cone.rays[k] for k in self.span_rays]


@dataclass(frozen=True)
class HilbertBasis:
    lattice: LatticeBasis
    elements: Tuple[IntVec, ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


# ----------------------------------------------------------------------
# cdd plumbing

def _cdd_inequalities(rank_: int, generators: Sequence[Sequence[Number]]):
    rows = [[1] + [0] * rank_] + [[0] + list(g) for g in generators]
    mat = cdd.Matrix(rows, number_type="fraction")
    mat.rep_type = cdd.RepType.GENERATOR
    h = cdd.Polyhedron(mat).get_inequalities()
    ineqs, eqs = [], []
    for i in range(h.row_size):
        normal = tuple(Fraction(x) for x in h[i][1:])
        if not any(normal):
            continue
        (eqs if i in h.lin_set else ineqs).append(normal)
    return ineqs, eqs


def _cdd_generators(rank_: int, ineqs: Sequence[Sequence[Number]],
                    eqs: Sequence[Sequence[Number]]):
    if not ineqs and not eqs:
        return [], [tuple(int(i == j) for j in range(rank_)) for i in range(rank_)]
    if ineqs:
        mat = cdd.Matrix([[0] + list(a) for a in ineqs], number_type="fraction")
        if eqs:
            mat.extend([[0] + list(e) for e in eqs], linear=True)
    else:
        mat = cdd.Matrix([[0] + list(e) for e in eqs], linear=True, number_type="fraction")
    mat.rep_type = cdd.RepType.INEQUALITY
    g = cdd.Polyhedron(mat).get_generators()
    rays, lines = [], []
    for i in range(g.row_size):
        row = g[i]
        if Fraction(row[0]) != 0:
            continue  # the apex
        direction = tuple(Fraction(x) for x in row[1:])
        if not any(direction):
            continue
        (lines if i in g.lin_set else rays).append(direction)
    return rays, lines


def _canonical(rank_: int, rays, lines, ineqs) -> Cone:
    span = canonical_span(list(rays) + list(lines), rank_)
    dim = len(span)
    lineality = canonical_span(lines, rank_)
    equations = nullspace(span, rank_) if span else [
        tuple(int(i == j) for j in range(rank_)) for i in range(rank_)]

    pointed = set()
    for r in rays:
        p = primitive(project_away(r, lineality))
        if any(p):
            pointed.add(p)
    # keep only extreme rays: tight facets must have rank dim - lin - 1
    facet_set = set()
    for a in ineqs:
        p = primitive(project_away(a, equations))
        if any(p):
            facet_set.add(p)
    lin_dim = len(lineality)
    extreme = sorted(r for r in pointed
                     if rank([f for f in facet_set if dot(f, r) == 0] + equations, rank_)
                     >= rank_ - lin_dim - 1)
    # and only genuine facets: tight rays span a hyperplane of the cone
    facets = sorted(f for f in facet_set
                    if rank([r for r in extreme if dot(f, r) == 0] + lineality, rank_) == dim - 1)
    ray_list = sorted(set(extreme) | set(lineality) | {scale(-1, l) for l in lineality})
    facet_list = sorted(set(facets) | set(equations) | {scale(-1, e) for e in equations})
    return Cone(rank_, tuple(ray_list), tuple(facet_list), dim,
                tuple(lineality), tuple(equations))


def zero_cone(rank_: int) -> Cone:
    eqs = [tuple(int(i == j) for j in range(rank_)) for i in range(rank_)]
    facets = sorted(set(eqs) | {scale(-1, e) for e in eqs})
    return Cone(rank_, (), tuple(facets), 0, (), tuple(eqs))


def dual_description(generators: Iterable[Sequence[Number]], ambient_rank: Optional[int] = None) -> Cone:
    """Cone spanned by the generators, with its facets computed."""
    generators = [tuple(Fraction(x) for x in g) for g in generators]
    if ambient_rank is None:
        if not generators:
            raise ValueError("the zero cone needs an explicit ambient rank")
        ambient_rank = len(generators[0])
    for g in generators:
        if len(g) != ambient_rank:
            raise RankMismatchError(f"generator {g} is not of rank {ambient_rank}")
    generators = [g for g in generators if any(g)]
    if not generators:
        return zero_cone(ambient_rank)
    ineqs, eqs = _cdd_inequalities(ambient_rank, generators)
    return _from_h(ambient_rank, ineqs, eqs)


def from_inequalities(ambient_rank: int, normals: Iterable[Sequence[Number]],
                      equations: Iterable[Sequence[Number]] = ()) -> Cone:
    """Cone {x : n·x ≥ 0 for normals, e·x = 0 for equations}."""
    normals = [tuple(Fraction(x) for x in n) for n in normals]
    equations = [tuple(Fraction(x) for x in e) for e in equations]
    for n in normals + equations:
        if len(n) != ambient_rank:
            raise RankMismatchError(f"normal {n} is not of rank {ambient_rank}")
    if ambient_rank == 0:
        return Cone(0, (), (), 0)
    return _from_h(ambient_rank, [n for n in normals if any(n)], [e for e in equations if any(e)])


def _from_h(rank_: int, ineqs, eqs) -> Cone:
    rays, lines = _cdd_generators(rank_, ineqs, eqs)
    if not rays and not lines:
        return zero_cone(rank_)
    both_ways = rays + lines + [scale(-1, l) for l in lines]
    ineqs, _ = _cdd_inequalities(rank_, both_ways)
    return _canonical(rank_, rays, lines, ineqs)


def contains(c: Cone, v: Sequence[Number]) -> bool:
    if len(v) != c.ambient_rank:
        raise RankMismatchError(f"vector of rank {len(v)} tested against a rank {c.ambient_rank} cone")
    return all(dot(f, v) >= 0 for f in c.facets)


def faces(c: Cone) -> List[Face]:
    """All faces, from the minimal one up to the cone itself."""
    tight = [frozenset(k for k, r in enumerate(c.rays) if dot(f, r) == 0) for f in c.facets]
    top = frozenset(range(len(c.rays)))
    seen = {top}
    frontier = [top]
    while frontier:
        current = frontier.pop()
        for t in tight:
            smaller = current & t
            if smaller not in seen:
                seen.add(smaller)
                frontier.append(smaller)
    out = []
    for ray_set in seen:
        subset = frozenset(j for j, t in enumerate(tight) if ray_set <= t)
        dim = rank([c.rays[k] for k in ray_set], c.ambient_rank)
        out.append(Face(subset, tuple(sorted(ray_set)), dim))
    return sorted(out, key=lambda f: (f.dim, [c.rays[k] for k in f.span_rays]))


def face_cone(c: Cone, face: Face) -> Cone:
    return dual_description(face.rays_of(c), c.ambient_rank)


def face_functional(c: Cone, face: Face) -> IntVec:
    """Sum of the facet inequalities vanishing on the face.

    Nonnegative on the cone, zero exactly on the face.
    """
    out = tuple(0 for _ in range(c.ambient_rank))
    ineqs = set(c.inequalities)
    for j in face.defining_facet_subset:
        if c.facets[j] in ineqs:
            out = add(out, c.facets[j])
    return out


def _unit_splitting(lines: Sequence[Sequence[Number]], n: int):
    """Split Z^n as Z^r ⊕ (Z^n ∩ span(lines)).

    Returns the r projection rows (onto Z^r, kernel the line lattice), the r
    section columns lifting the standard basis of Z^r, and a basis of the
    line lattice.
    """
    complement = nullspace(lines, n) if lines else [
        tuple(int(i == j) for j in range(n)) for i in range(n)]
    if not complement:
        return [], [], [tuple(int(i == j) for j in range(n)) for i in range(n)]
    r = len(complement)
    nf = normal_form(int_mat(complement, ncols=n), "smith")
    cols = columns_of(nf.v)
    proj = [int_vec(row) for row in inverse(nf.v)[:r]]
    return proj, cols[:r], cols[r:]


def quotient_by_lineality(c: Cone) -> Tuple[Cone, IntMat]:
    """Pointed image of c under an integral projection P whose kernel is Z^n ∩ lineality.

    P maps Z^n onto Z^r, so lattice points of the image lift to lattice points.
    """
    proj, _, _ = _unit_splitting(c.lineality, c.ambient_rank)
    images = [tuple(dot(row, r) for row in proj) for r in c.rays]
    return dual_description(images, len(proj)), int_mat(proj, ncols=c.ambient_rank)


# ----------------------------------------------------------------------
# Hilbert bases

def _span_sublattice(c: Cone, lat: LatticeBasis) -> List[IntVec]:
    """Basis of lat ∩ span(c)."""
    if not c.equations:
        return list(lat.basis_vectors)
    m = int_mat([[dot(e, b) for b in lat.basis_vectors] for e in c.equations],
                ncols=lat.rank)
    return [lat.to_ambient(k) for k in integer_kernel(m)]


def _triangulate(rays: List[IntVec], dim: int) -> List[Tuple[IntVec, ...]]:
    """Cover a pointed cone by simplicial cones on its own rays (pulling order)."""
    if len(rays) == dim:
        return [tuple(rays)]
    apex = rays[0]
    cone = dual_description(rays)
    out = []
    for f in cone.inequalities:
        if dot(f, apex) == 0:
            continue
        on_facet = [r for r in rays if dot(f, r) == 0]
        for simplex in _triangulate(on_facet, dim - 1):
            out.append((apex,) + simplex)
    return out


def _parallelepiped_points(gens: Tuple[IntVec, ...]) -> List[IntVec]:
    """Lattice points Σ λ_i g_i with 0 ≤ λ_i < 1 (gens a basis of Q^d)."""
    d = len(gens)
    m = int_mat(gens, ncols=d)
    nf = normal_form(m, "smith")
    diag = [int(nf.d[i, i]) for i in range(d)]
    v_inv = inverse(nf.v)
    m_inv = inverse(m)
    points = []
    for a in itertools.product(*(range(x) for x in diag)):
        x = [sum((a[i] * v_inv[i][j] for i in range(d)), Fraction(0)) for j in range(d)]
        lam = [sum((x[i] * m_inv[i][j] for i in range(d)), Fraction(0)) for j in range(d)]
        frac = [l - (l.numerator // l.denominator) for l in lam]
        y = [sum((frac[i] * gens[i][j] for i in range(d)), Fraction(0)) for j in range(d)]
        points.append(int_vec(y))
    return points


def _pointed_hilbert(rays: List[IntVec], dim: int) -> List[IntVec]:
    """Hilbert basis of a full-dimensional pointed cone in Z^dim.

    Candidates are scanned by increasing degree under a positive functional;
    x is reducible iff x − h lies in the cone for an irreducible h found earlier.
    """
    local = dual_description(rays)
    degree = tuple(0 for _ in range(dim))
    for f in local.inequalities:
        degree = add(degree, f)
    candidates = set(rays)
    for simplex in _triangulate(rays, dim):
        candidates.update(p for p in _parallelepiped_points(simplex) if any(p))
    irreducible = []
    for x in sorted(candidates, key=lambda p: (dot(degree, p), p)):
        if not any(contains(local, tuple(a - b for a, b in zip(x, h))) for h in irreducible):
            irreducible.append(x)
    logger.debug(f"pointed Hilbert basis in rank {dim}: {len(irreducible)} of {len(candidates)} candidates")
    return sorted(irreducible)


def hilbert_basis(c: Cone, lat: LatticeBasis) -> HilbertBasis:
    """Generating set of the monoid c ∩ lat.

    For a pointed cone this is the unique minimal one. With lineality it is
    the lifted Hilbert basis of the pointed quotient plus ± a basis of the
    unit lattice lat ∩ lineality(c).
    """
    if c.ambient_rank != lat.ambient_rank:
        raise RankMismatchError("cone and lattice live in different ambient ranks")
    if c.dim == 0:
        return HilbertBasis(lat, ())
    sub = _span_sublattice(c, lat)
    if len(sub) != c.dim:
        raise ValueError("lattice does not fill the span of the cone")
    sub_lat = LatticeBasis(c.ambient_rank, tuple(sub))

    def to_sub(v):
        return primitive(sub_lat.rational_coordinates(v))

    if c.is_pointed:
        local = _pointed_hilbert(sorted({to_sub(r) for r in c.extreme_rays}), c.dim)
    else:
        proj, section, units = _unit_splitting([to_sub(l) for l in c.lineality], c.dim)
        images = sorted({primitive([dot(row, to_sub(r)) for row in proj]) for r in c.extreme_rays})
        quotient = _pointed_hilbert(images, len(proj)) if images else []
        local = [tuple(sum(y[i] * section[i][j] for i in range(len(y))) for j in range(c.dim))
                 for y in quotient]
        local += units + [scale(-1, u) for u in units]
    elements = sorted({int_vec(sub_lat.to_ambient(x)) for x in local})
    logger.debug(f"Hilbert basis of {c.dim}-dim cone with {len(c.lineality)} lines: {len(elements)} elements")
    return HilbertBasis(lat, tuple(elements))
