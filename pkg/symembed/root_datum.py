"""Root data in an explicit basis of the character lattice X.

Simple roots live in X-coordinates, simple coroots in the dual
Y-coordinates, and the pairing <y, x> is the plain dot product, so the
Cartan matrix is A[i][j] = <coroot_i, root_j>. Labels of the index set are
1..n in the order the roots are given.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import sympy as sp

from .errors import NotFiniteTypeError, RankMismatchError, ValidationError
from .exact_linalg import (
    IntMat, IntVec, Number, RatVec, combination_coefficients, dot, identity,
    int_mat, mat_mul, rank, rows_of,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CartanType:
    components: Tuple[Tuple[str, int], ...]

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.components)

    def __str__(self):
        if not self.components:
            return "trivial"
        return "x".join(f"{family}{r}" for family, r in self.components)


@dataclass(frozen=True)
class RootDatum:
    rank_x: int
    simple_roots: Tuple[IntVec, ...]
    simple_coroots: Tuple[IntVec, ...]

    def __post_init__(self):
        if len(self.simple_roots) != len(self.simple_coroots):
            raise RankMismatchError("as many simple roots as simple coroots are required")
        for v in self.simple_roots + self.simple_coroots:
            if len(v) != self.rank_x:
                raise RankMismatchError(f"{v} does not have rank {self.rank_x}")
        if rank(self.simple_roots, self.rank_x) != len(self.simple_roots):
            raise ValidationError("simple roots are linearly dependent", axiom="independence")
        classify_type(self.cartan)

    @classmethod
    def simply_connected(cls, cartan: Sequence[Sequence[int]]) -> "RootDatum":
        """X with the fundamental weight basis: roots are the columns of A."""
        n = len(cartan)
        roots = tuple(tuple(int(cartan[i][j]) for i in range(n)) for j in range(n))
        return cls(n, roots, tuple(rows_of(identity(n))))

    @classmethod
    def adjoint(cls, cartan: Sequence[Sequence[int]]) -> "RootDatum":
        """X with the simple root basis: coroots are the rows of A."""
        n = len(cartan)
        return cls(n, tuple(rows_of(identity(n))), tuple(tuple(int(x) for x in row) for row in cartan))

    @classmethod
    def product(cls, a: "RootDatum", b: "RootDatum") -> "RootDatum":
        pad_a = (0,) * b.rank_x
        pad_b = (0,) * a.rank_x
        return cls(a.rank_x + b.rank_x,
                   tuple(r + pad_a for r in a.simple_roots) + tuple(pad_b + r for r in b.simple_roots),
                   tuple(r + pad_a for r in a.simple_coroots) + tuple(pad_b + r for r in b.simple_coroots))

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(range(1, len(self.simple_roots) + 1))

    @property
    def cartan(self) -> IntMat:
        return int_mat([[dot(c, r) for r in self.simple_roots] for c in self.simple_coroots],
                       ncols=len(self.simple_roots))

    def root(self, label: int) -> IntVec:
        return self.simple_roots[label - 1]

    def coroot(self, label: int) -> IntVec:
        return self.simple_coroots[label - 1]

    def pairings(self, x: Sequence[Number]) -> tuple:
        return tuple(dot(c, x) for c in self.simple_coroots)

    def check_rank(self, x: Sequence[Number]):
        if len(x) != self.rank_x:
            raise RankMismatchError(f"weight {tuple(x)} does not have rank {self.rank_x}")

    def alpha_coordinates(self, x: Sequence[Number]) -> Optional[RatVec]:
        """Rational c with x = Σ c_i α_i, or None if x is off the root span."""
        self.check_rank(x)
        return combination_coefficients(self.simple_roots, x)

    def leq(self, lam: Sequence[Number], mu: Sequence[Number]) -> bool:
        coeffs = self.alpha_coordinates(tuple(m - l for m, l in zip(mu, lam)))
        return coeffs is not None and all(c.denominator == 1 and c >= 0 for c in coeffs)

    def is_dominant(self, x: Sequence[Number]) -> bool:
        self.check_rank(x)
        return all(p >= 0 for p in self.pairings(x))

    def reflection(self, label: int) -> IntMat:
        """s_i = I - α_i (α_i^∨)^T acting on column vectors of X-coordinates."""
        a, c = self.root(label), self.coroot(label)
        return int_mat([[int(i == j) - a[i] * c[j] for j in range(self.rank_x)]
                        for i in range(self.rank_x)], ncols=self.rank_x)


@dataclass(frozen=True)
class Weight:
    datum: RootDatum
    coords: IntVec

    def __post_init__(self):
        self.datum.check_rank(self.coords)


def _same_datum(lam: Weight, mu: Weight):
    if lam.datum != mu.datum:
        raise ValueError("weights belong to different root data")


def dominance_leq(lam: Weight, mu: Weight) -> bool:
    """λ ≤ μ: μ − λ is a nonnegative integer combination of simple roots."""
    _same_datum(lam, mu)
    return lam.datum.leq(lam.coords, mu.coords)


def is_dominant(lam: Weight) -> bool:
    return lam.datum.is_dominant(lam.coords)


def fundamental_weights(datum: RootDatum) -> List[RatVec]:
    """ω_i inside the rational root span with <α_j^∨, ω_i> = δ_ij."""
    n = len(datum.simple_roots)
    if n == 0:
        return []
    a = sp.Matrix(rows_of(datum.cartan))
    inv = a.inv()
    out = []
    for i in range(n):
        coeffs = [Fraction(int(sp.Rational(inv[k, i]).p), int(sp.Rational(inv[k, i]).q)) for k in range(n)]
        out.append(tuple(sum((coeffs[k] * datum.simple_roots[k][m] for k in range(n)), Fraction(0))
                         for m in range(datum.rank_x)))
    return out


def parabolic_longest(datum: RootDatum, subset: Iterable[int]) -> IntMat:
    """Longest element of the parabolic subgroup W_J, as a matrix on X.

    Greedy descent: track the pairings p_j = <α_j^∨, x> of a point x that is
    regular dominant for W_J and reflect while some p_j is positive.
    """
    subset = sorted(set(subset))
    a = datum.cartan
    p = {j: 1 for j in subset}
    word = []
    while True:
        j = next((j for j in subset if p[j] > 0), None)
        if j is None:
            break
        pj = p[j]
        for k in subset:
            p[k] -= pj * a[k - 1, j - 1]
        word.append(j)
    w = identity(datum.rank_x)
    for j in word:
        w = mat_mul(datum.reflection(j), w)
    logger.debug(f"longest element of W_{subset} has length {len(word)}")
    return w


# ----------------------------------------------------------------------
# Cartan type classification

def _symmetrizer(a: List[List[int]], nodes: List[int]) -> Optional[Dict[int, Fraction]]:
    d = {nodes[0]: Fraction(1)}
    stack = [nodes[0]]
    while stack:
        i = stack.pop()
        for j in nodes:
            if j != i and a[i][j] != 0 and j not in d:
                d[j] = d[i] * a[i][j] / a[j][i]
                stack.append(j)
    for i in nodes:
        for j in nodes:
            if d[i] * a[i][j] != d[j] * a[j][i]:
                return None
    return d


def _arms(graph: nx.Graph, branch: int) -> List[int]:
    arms = []
    for start in graph.neighbors(branch):
        length, prev, cur = 1, branch, start
        while True:
            nxt = [v for v in graph.neighbors(cur) if v != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def _family(a: List[List[int]], graph: nx.Graph) -> str:
    n = graph.number_of_nodes()
    if n == 1:
        return "A"
    mult = {(i, j): a[i][j] * a[j][i] for i, j in graph.edges}
    if 3 in mult.values():
        return "G"
    if 2 in mult.values():
        (i, j), = [e for e, m in mult.items() if m == 2]
        if n == 2:
            return "B"
        if graph.degree(i) == 2 and graph.degree(j) == 2:
            return "F"
        end, other = (i, j) if graph.degree(i) == 1 else (j, i)
        return "B" if a[end][other] == -2 else "C"
    degrees = dict(graph.degree)
    branches = [v for v, deg in degrees.items() if deg == 3]
    if not branches:
        return "A"
    arms = _arms(graph, branches[0])
    if arms[:2] == [1, 1]:
        return "D"
    return "E"


def classify_type(cartan, allow_rational_rescale: bool = False) -> CartanType:
    """Finite-type classification of a (possibly rescaled) Cartan matrix."""
    rows = [[Fraction(x) for x in row] for row in (rows_of(cartan) if hasattr(cartan, "shape") else cartan)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise RankMismatchError("Cartan matrix must be square")
    if allow_rational_rescale:
        for i in range(n):
            if rows[i][i] <= 0:
                raise NotFiniteTypeError(f"row {i + 1} has nonpositive diagonal {rows[i][i]}")
            factor = Fraction(2) / rows[i][i]
            rows[i] = [x * factor for x in rows[i]]
    if any(x.denominator != 1 for r in rows for x in r):
        raise NotFiniteTypeError("non-crystallographic after normalization")
    a = [[int(x) for x in r] for r in rows]
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for i in range(n):
        if a[i][i] != 2:
            raise NotFiniteTypeError(f"diagonal entry {i + 1} is {a[i][i]}, not 2")
        for j in range(n):
            if i == j:
                continue
            if a[i][j] > 0:
                raise NotFiniteTypeError(f"positive off-diagonal entry at ({i + 1},{j + 1})")
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise NotFiniteTypeError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) disagree on zero")
            if a[i][j]:
                graph.add_edge(i, j)
    components = []
    for comp in sorted(nx.connected_components(graph), key=min):
        nodes = sorted(comp)
        d = _symmetrizer(a, nodes)
        if d is None:
            raise NotFiniteTypeError(f"component {[k + 1 for k in nodes]} is not symmetrizable")
        sym = sp.Matrix([[sp.Rational(d[i].numerator, d[i].denominator) * a[i][j] for j in nodes]
                         for i in nodes])
        if not sym.is_positive_definite:
            raise NotFiniteTypeError(f"component {[k + 1 for k in nodes]} is not of finite type")
        family = _family(a, graph.subgraph(nodes))
        components.append((family, len(nodes)))
    return CartanType(tuple(sorted(components)))
