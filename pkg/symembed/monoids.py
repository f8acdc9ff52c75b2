"""Finitely generated submonoids of X̆⁺, their prime ideals and orbit posets."""
import itertools
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import sympy as sp

from .config import Config
from .cones import (
    Cone, Face, HilbertBasis, contains, dual_description, face_functional, faces,
    from_inequalities, hilbert_basis,
)
from .errors import ValidationError
from .exact_linalg import (
    IntVec, LatticeBasis, add, dot, int_vec, lattice_member, primitive, scale, sub,
)
from .satake import SphericalLattice, _coords

logger = logging.getLogger(__name__)


class SphericalMonoid:
    """Submonoid of X̆⁺ generated by finitely many vectors.

    Cone and Hilbert basis are computed lazily, once, under a lock.
    """

    def __init__(self, sl: SphericalLattice, generators: Iterable[Sequence[int]], check: bool = True):
        self.sl = sl
        gens = sorted({int_vec(g) for g in generators})
        self.generators: Tuple[IntVec, ...] = tuple(g for g in gens if any(g))
        if check:
            for k, g in enumerate(self.generators):
                sl.datum.check_rank(g)
                if not sl.in_dominant_part(g):
                    raise ValidationError(f"generator {g} is not in the dominant spherical lattice",
                                          axiom="generators in X̆⁺", index=k)
        self._lock = threading.RLock()
        self._cone: Optional[Cone] = None
        self._hilbert: Optional[HilbertBasis] = None
        self._members: Dict[IntVec, bool] = {}
        self._search = None

    @classmethod
    def dominant(cls, sl: SphericalLattice) -> "SphericalMonoid":
        """X̆⁺ itself, generated by its Hilbert basis."""
        return cls(sl, sl.dominant_hilbert.elements, check=False)

    def __repr__(self):
        return f"SphericalMonoid({list(self.generators)})"

    def __eq__(self, other):
        if not isinstance(other, SphericalMonoid):
            return NotImplemented
        return (self.sl is other.sl
                and all(member(other, g) for g in self.generators)
                and all(member(self, g) for g in other.generators))

    __hash__ = object.__hash__

    @property
    def rank(self) -> int:
        return self.sl.datum.rank_x

    def cone(self) -> Cone:
        with self._lock:
            if self._cone is None:
                self._cone = dual_description(self.generators, self.rank)
            return self._cone

    def hilbert(self) -> HilbertBasis:
        """Hilbert basis of cone(L) ∩ X̆."""
        with self._lock:
            if self._hilbert is None:
                self._hilbert = hilbert_basis(self.cone(), self.sl.lattice)
            return self._hilbert

    def search_data(self):
        """Group lattice, positive functional, non-unit generators, unit lattice."""
        with self._lock:
            if self._search is None:
                h = self.positive_functional()
                units = [g for g in self.generators if dot(h, g) == 0]
                others = sorted((g for g in self.generators if dot(h, g) > 0),
                                key=lambda g: (-dot(h, g), g))
                self._search = (LatticeBasis.span(self.rank, self.generators), h, others,
                                LatticeBasis.span(self.rank, units))
            return self._search

    def positive_functional(self) -> IntVec:
        c = self.cone()
        out = tuple(0 for _ in range(self.rank))
        for f in c.inequalities:
            out = add(out, f)
        return out


def member(L: SphericalMonoid, mu: Sequence[int]) -> bool:
    """μ is a nonnegative integer combination of the generators."""
    mu = _coords(L.sl.datum, mu)
    with L._lock:
        if mu in L._members:
            return L._members[mu]
    result = _member(L, mu)
    with L._lock:
        L._members[mu] = result
    return result


def _member(L: SphericalMonoid, mu: IntVec) -> bool:
    if not any(mu):
        return True
    cone = L.cone()
    if not contains(cone, mu):
        return False
    group, h, others, unit_lattice = L.search_data()
    if not lattice_member(group, mu):
        return False
    memo: Dict[Tuple[int, IntVec], bool] = {}

    def search(k: int, rest: IntVec) -> bool:
        key = (k, rest)
        if key in memo:
            return memo[key]
        if k == len(others):
            found = lattice_member(unit_lattice, rest)
        else:
            g = others[k]
            found = False
            for c in range(dot(h, rest) // dot(h, g), -1, -1):
                nxt = sub(rest, scale(c, g))
                if contains(cone, nxt) and search(k + 1, nxt):
                    found = True
                    break
        memo[key] = found
        return found

    return search(0, mu)


def generates_lattice(L: SphericalMonoid) -> bool:
    """The group generated by L equals X̆."""
    return LatticeBasis.span(L.rank, L.generators) == L.sl.lattice.hermite()


def is_saturated(L: SphericalMonoid) -> bool:
    return all(member(L, h) for h in L.hilbert())


def saturate(L: SphericalMonoid) -> SphericalMonoid:
    return SphericalMonoid(L.sl, L.hilbert().elements, check=False)


def down_set(sl: SphericalLattice, mu: Sequence[int]) -> List[IntVec]:
    """All λ ∈ X̆⁺ with λ ≤ μ.

    With p the coroot pairings of μ, every such λ is μ − Σ n_i α_i with
    0 ≤ n ≤ A⁻¹p, since the inverse Cartan matrix is nonnegative.
    """
    datum = sl.datum
    mu = _coords(datum, mu)
    if not sl.in_dominant_part(mu):
        raise ValidationError(f"{mu} is not in the dominant spherical lattice", axiom="down_set input")
    n = len(datum.simple_roots)
    if n == 0:
        return [mu]
    bound = sp.Matrix([list(r) for r in datum.cartan.tolist()]).inv() * sp.Matrix(list(datum.pairings(mu)))
    limits = [int(sp.floor(x)) for x in bound]
    size = 1
    for x in limits:
        size *= x + 1
    if size > Config.ENUM_LIMIT:
        raise ValidationError(f"down set of {mu} needs {size} candidates, above the enumeration limit",
                              axiom="enumeration limit")
    out = []
    for coeffs in itertools.product(*(range(x + 1) for x in limits)):
        lam = mu
        for c, root in zip(coeffs, datum.simple_roots):
            if c:
                lam = sub(lam, scale(c, root))
        if datum.is_dominant(lam) and lattice_member(sl.lattice, lam):
            out.append(lam)
    return sorted(out)


def elements_up_to(L: SphericalMonoid, degree: int) -> List[IntVec]:
    """Sums of at most `degree` generators."""
    seen = {tuple(0 for _ in range(L.rank))}
    layer = set(seen)
    for _ in range(degree):
        layer = {add(x, g) for x in layer for g in L.generators} - seen
        seen |= layer
        if len(seen) > Config.ENUM_LIMIT:
            raise ValidationError(f"more than {Config.ENUM_LIMIT} elements up to degree {degree}",
                                  axiom="enumeration limit")
    return sorted(seen)


@dataclass(frozen=True)
class ClosednessReport:
    verdict: bool
    mode: str
    exact: bool
    bound: Optional[int] = None
    witness: Optional[Tuple[IntVec, IntVec]] = None

    def __bool__(self):
        return self.verdict

    def to_dict(self):
        return {"verdict": self.verdict, "mode": self.mode, "exact": self.exact,
                "caveat": not self.exact, "bound": self.bound,
                "witness": None if self.witness is None else [list(w) for w in self.witness]}


def _downsets_inside(L: SphericalMonoid, elements: Iterable[IntVec], mode: str,
                     bound: Optional[int]) -> ClosednessReport:
    for g in elements:
        for lam in down_set(L.sl, g):
            if not member(L, lam):
                return ClosednessReport(False, mode, True, bound, (g, lam))
    return ClosednessReport(True, mode, False, bound)


def _rational_to_pair(sl: SphericalLattice, mu, lam) -> Tuple[IntVec, IntVec]:
    """Scale a rational pair so both lie in X̆ and μ − λ is an integral ᾱ-combination."""
    dens = [Fraction(x).denominator for x in mu + lam]
    for x in (mu, lam):
        coords = sl.lattice.rational_coordinates(x)
        dens += [c.denominator for c in coords]
    diff = sl.datum.alpha_coordinates(tuple(Fraction(a) - Fraction(b) for a, b in zip(mu, lam)))
    if diff is not None:
        dens += [c.denominator for c in diff]
    k = lcm(*dens)
    return int_vec(scale(k, mu)), int_vec(scale(k, lam))


def _exact_closed(L: SphericalMonoid) -> ClosednessReport:
    """Cone certificate for a saturated L.

    L = C ∩ X̆ fails to be closed iff some μ ∈ C and β ∈ Σ Q≥0 ᾱ_i have
    μ − β dominant and outside C. Those (μ, β) form a polyhedral cone and a
    violation shows up on one of its generators.
    """
    sl = L.sl
    n = L.rank
    c = L.cone()
    b = sl.root_cone
    zero = (0,) * n
    normals, equations = [], []
    for f in c.inequalities:
        normals.append(tuple(f) + zero)
    for e in c.equations:
        equations.append(tuple(e) + zero)
    for f in b.inequalities:
        normals.append(zero + tuple(f))
    for e in b.equations:
        equations.append(zero + tuple(e))
    for coroot in sl.datum.simple_coroots:
        normals.append(tuple(coroot) + scale(-1, coroot))
    pairs = from_inequalities(2 * n, normals, equations)
    for ray in pairs.rays:
        mu, beta = ray[:n], ray[n:]
        lam = sub(mu, beta)
        for f in c.facets:
            if dot(f, lam) < 0:
                witness = _rational_to_pair(sl, mu, lam)
                return ClosednessReport(False, "exact", True, None, witness)
    return ClosednessReport(True, "exact", True)


def is_closed(L: SphericalMonoid, mode: str = "auto", bound: Optional[int] = None) -> ClosednessReport:
    """Closedness under the dominance order inside X̆⁺.

    Modes: "generator_downsets" (sound for False, caveat on True),
    "bruteforce" (all elements up to generator degree `bound`), "exact"
    (cone certificate, saturated L only) and "auto" (exact when saturated).
    """
    if mode == "auto":
        mode = "exact" if is_saturated(L) else "generator_downsets"
    if mode == "exact":
        if not is_saturated(L):
            raise ValueError("exact closedness needs a saturated monoid")
        return _exact_closed(L)
    if mode == "generator_downsets":
        elements = set(L.generators) | {h for h in L.hilbert() if member(L, h)}
        return _downsets_inside(L, sorted(elements), mode, None)
    if mode == "bruteforce":
        bound = Config.DEFAULT_BOUND if bound is None else bound
        report = _downsets_inside(L, elements_up_to(L, bound), mode, bound)
        return report
    raise ValueError(f"unknown closedness mode {mode!r}")


def closure(L: SphericalMonoid, rounds: Optional[int] = None) -> Tuple[SphericalMonoid, int, bool]:
    """Alternate down-set completion and saturation until nothing changes.

    Returns the monoid reached, the rounds used and whether it stabilized.
    """
    rounds = Config.CLOSURE_ROUNDS if rounds is None else rounds
    current = saturate(L)
    for k in range(1, rounds + 1):
        hb = list(current.hilbert())
        seeds = set(hb) | {add(a, b) for a, b in itertools.combinations_with_replacement(hb, 2)}
        gens = set(current.generators)
        for s in seeds:
            gens.update(down_set(L.sl, s))
        grown = saturate(SphericalMonoid(L.sl, gens, check=False))
        if grown.generators == current.generators:
            return current, k, True
        current = grown
    return current, rounds, False


# ----------------------------------------------------------------------
# prime ideals

@dataclass(frozen=True, eq=False)
class MonoidIdealFace:
    """The prime ideal L ∖ F of L for a face F of cone(L)."""
    monoid: SphericalMonoid
    face: Face
    closed: bool
    witness: Optional[Tuple[IntVec, IntVec]] = None

    @property
    def face_rays(self) -> List[IntVec]:
        return self.face.rays_of(self.monoid.cone())

    @property
    def is_zero(self) -> bool:
        return self.face.dim == self.monoid.cone().dim

    def functional(self) -> IntVec:
        return face_functional(self.monoid.cone(), self.face)

    def contains(self, mu: Sequence[int]) -> bool:
        return member(self.monoid, mu) and dot(self.functional(), mu) > 0

    def label(self) -> str:
        rays = self.face_rays
        if not rays:
            return "{0}"
        return "cone(" + ", ".join("(" + ",".join(str(x) for x in r) + ")" for r in rays) + ")"


def ideal_is_closed(L: SphericalMonoid, face: Face) -> Tuple[bool, Optional[Tuple[IntVec, IntVec]]]:
    """Exact closedness of L ∖ F for saturated, closed L.

    The ideal fails to be closed iff λ ∈ F, β ∈ Σ Q≥0 ᾱ_i with λ + β ∈ C and
    h(β) > 0, h being the sum of the facets through F. Returns the verdict and
    an integral witness (μ in the ideal, λ ≤ μ outside it) when it fails.
    """
    sl = L.sl
    n = L.rank
    c = L.cone()
    h = face_functional(c, face)
    if not any(h):
        return True, None
    b = sl.root_cone
    zero = (0,) * n
    normals, equations = [], []
    for f in c.inequalities:
        normals.append(tuple(f) + zero)
        normals.append(tuple(f) + tuple(f))
    for e in c.equations:
        equations.append(tuple(e) + zero)
        equations.append(zero + tuple(e))
    for j in face.defining_facet_subset:
        equations.append(tuple(c.facets[j]) + zero)
    for f in b.inequalities:
        normals.append(zero + tuple(f))
    for e in b.equations:
        equations.append(zero + tuple(e))
    pairs = from_inequalities(2 * n, normals, equations)
    for ray in pairs.rays:
        lam, beta = ray[:n], ray[n:]
        if dot(h, beta) > 0:
            mu, lam = _rational_to_pair(sl, add(lam, beta), lam)
            return False, (mu, lam)
    return True, None


def ideal_generator_check(ideal: MonoidIdealFace) -> bool:
    """Integral check on the Hilbert basis elements inside the ideal (sound for False)."""
    L = ideal.monoid
    h = ideal.functional()
    for g in L.hilbert():
        if dot(h, g) > 0:
            for lam in down_set(L.sl, g):
                if dot(h, lam) == 0:
                    return False
    return True


def valuation_witness(ideal: MonoidIdealFace) -> Optional[IntVec]:
    """A strictly positive combination t of the facets through F with t(ᾱ_i) ≤ 0.

    Exists for every closed prime ideal; None otherwise.
    """
    L = ideal.monoid
    c = L.cone()
    ineqs = set(c.inequalities)
    through = [c.facets[j] for j in sorted(ideal.face.defining_facet_subset) if c.facets[j] in ineqs]
    if not through:
        return None
    k = len(through)
    normals = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    for b in L.sl.bar_alpha:
        normals.append(tuple(-dot(f, b) for f in through))
    weights = from_inequalities(k, normals)
    total = tuple(sum((r[i] for r in weights.rays), 0) for i in range(k))
    if not all(x > 0 for x in total):
        return None
    out = tuple(0 for _ in range(L.rank))
    for w, f in zip(total, through):
        out = add(out, scale(w, f))
    return primitive(out)


def _validate_for_ideals(L: SphericalMonoid):
    failed = []
    if not generates_lattice(L):
        failed.append("generating")
    saturated = is_saturated(L)
    if not saturated:
        failed.append("saturated")
    elif not is_closed(L, "exact"):
        failed.append("closed")
    if failed:
        raise ValidationError(f"monoid is not {', '.join(failed)}", axiom="closed saturated generating",
                              failed=failed)


def prime_ideal(L: SphericalMonoid, face: Face) -> MonoidIdealFace:
    closed, witness = ideal_is_closed(L, face)
    return MonoidIdealFace(L, face, closed, witness)


def closed_prime_ideals(L: SphericalMonoid) -> List[MonoidIdealFace]:
    """Nonzero closed prime ideals, one per qualifying proper face."""
    _validate_for_ideals(L)
    c = L.cone()
    out = []
    for face in faces(c):
        if face.dim == c.dim:
            continue
        ideal = prime_ideal(L, face)
        if ideal.closed:
            out.append(ideal)
    logger.info(f"{len(out)} closed prime ideals among {len(faces(c))} faces")
    return out


# ----------------------------------------------------------------------
# posets

@dataclass(frozen=True, eq=False)
class OrbitPoset:
    """Orbit closures ordered by containment; covers are (smaller, larger)."""
    labels: Tuple[str, ...]
    covers: Tuple[Tuple[int, int], ...]
    ideals: Tuple[Optional[MonoidIdealFace], ...] = ()

    @classmethod
    def from_order(cls, labels: Sequence[str], leq, ideals: Sequence = ()) -> "OrbitPoset":
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(labels)))
        for i, j in itertools.permutations(range(len(labels)), 2):
            if leq(i, j):
                graph.add_edge(i, j)
        if not nx.is_directed_acyclic_graph(graph):
            raise ValidationError("orbit order is not antisymmetric", axiom="poset")
        closure = nx.transitive_closure_dag(graph)
        if set(closure.edges) != set(graph.edges):
            raise ValidationError("orbit order is not transitive", axiom="poset")
        hasse = nx.transitive_reduction(graph)
        return cls(tuple(labels), tuple(sorted(hasse.edges)), tuple(ideals))

    def __len__(self):
        return len(self.labels)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.labels)))
        g.add_edges_from(self.covers)
        return g

    def leq(self, i: int, j: int) -> bool:
        return i == j or nx.has_path(self.graph(), i, j)

    def maximal(self) -> List[int]:
        g = self.graph()
        return [v for v in g.nodes if g.out_degree(v) == 0]

    def minimal(self) -> List[int]:
        g = self.graph()
        return [v for v in g.nodes if g.in_degree(v) == 0]

    def to_dict(self):
        return {"nodes": list(self.labels), "covers": [list(e) for e in self.covers]}

    def to_dot(self, name: str = "orbits") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, label in enumerate(self.labels):
            lines.append(f'  n{i} [label="{label}"];')
        for a, b in self.covers:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def orbit_poset(L: SphericalMonoid) -> OrbitPoset:
    """Closed prime ideals plus the zero ideal, ordered by orbit-closure containment."""
    ideals = closed_prime_ideals(L)
    c = L.cone()
    top = next(f for f in faces(c) if f.dim == c.dim)
    nodes = ideals + [MonoidIdealFace(L, top, True)]
    ray_sets = [set(node.face.span_rays) for node in nodes]
    labels = [node.label() for node in nodes]
    poset = OrbitPoset.from_order(labels, lambda i, j: ray_sets[i] < ray_sets[j], nodes)
    if poset.maximal() != [len(nodes) - 1]:
        raise ValidationError("open orbit is not the unique maximal element", axiom="poset")
    return poset
