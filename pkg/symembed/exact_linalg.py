"""Exact integer and rational linear algebra.

Vectors are tuples of Python ints (IntVec) or Fractions (RatVec); matrices
are numpy object arrays holding Python ints, so nothing ever overflows.
Normal forms follow the usual row/column reduction with unimodular
transforms tracked alongside.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from .errors import RankMismatchError

logger = logging.getLogger(__name__)

IntVec = Tuple[int, ...]
RatVec = Tuple[Fraction, ...]
IntMat = np.ndarray
Number = Union[int, Fraction]


def int_vec(xs: Iterable[Number]) -> IntVec:
    out = []
    for x in xs:
        f = Fraction(x)
        if f.denominator != 1:
            raise ValueError(f"non-integral coordinate {f}")
        out.append(f.numerator)
    return tuple(out)


def rat_vec(xs: Iterable[Number]) -> RatVec:
    return tuple(Fraction(x) for x in xs)


def int_mat(rows: Sequence[Sequence[Number]], ncols: Optional[int] = None) -> IntMat:
    rows = [int_vec(r) for r in rows]
    if not rows:
        return np.empty((0, ncols or 0), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise RankMismatchError("ragged matrix rows")
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = x
    return out


def identity(n: int) -> IntMat:
    return int_mat([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)


def rows_of(m: IntMat) -> List[IntVec]:
    return [tuple(int(x) for x in m[i]) for i in range(m.shape[0])]


def columns_of(m: IntMat) -> List[IntVec]:
    return [tuple(int(x) for x in m[:, j]) for j in range(m.shape[1])]


def mat_mul(a: IntMat, b: IntMat) -> IntMat:
    if a.shape[1] != b.shape[0]:
        raise RankMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return int_mat([[sum((a[i, k] * b[k, j] for k in range(a.shape[1])), 0)
                     for j in range(b.shape[1])] for i in range(a.shape[0])],
                   ncols=b.shape[1])


def apply(m: IntMat, v: Sequence[Number]) -> tuple:
    """Matrix times column vector; keeps Fractions if v has them."""
    if m.shape[1] != len(v):
        raise RankMismatchError(f"matrix with {m.shape[1]} columns applied to rank {len(v)}")
    return tuple(sum((m[i, j] * v[j] for j in range(m.shape[1])), 0)
                 for i in range(m.shape[0]))


def dot(a: Sequence[Number], b: Sequence[Number]) -> Number:
    if len(a) != len(b):
        raise RankMismatchError(f"rank {len(a)} paired with rank {len(b)}")
    return sum((x * y for x, y in zip(a, b)), 0)


def add(a: Sequence[Number], b: Sequence[Number]) -> tuple:
    if len(a) != len(b):
        raise RankMismatchError(f"rank {len(a)} added to rank {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[Number], b: Sequence[Number]) -> tuple:
    if len(a) != len(b):
        raise RankMismatchError(f"rank {len(a)} minus rank {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def scale(c: Number, a: Sequence[Number]) -> tuple:
    return tuple(c * x for x in a)


def primitive(v: Sequence[Number]) -> IntVec:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    fr = [Fraction(x) for x in v]
    den = lcm(*(f.denominator for f in fr)) if fr else 1
    ints = [int(f * den) for f in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# ----------------------------------------------------------------------
# sympy bridge

def _to_sympy(rows: Sequence[Sequence[Number]], ncols: int) -> sp.Matrix:
    if not rows:
        return sp.zeros(0, ncols)
    if ncols == 0:
        return sp.zeros(len(rows), 0)
    return sp.Matrix([[sp.Rational(Fraction(x).numerator, Fraction(x).denominator)
                       for x in r] for r in rows])


def _from_sympy(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


def rank(rows: Sequence[Sequence[Number]], ncols: Optional[int] = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return _to_sympy(rows, ncols if ncols is not None else len(rows[0])).rank()


def solve_rational(a: Sequence[Sequence[Number]], b: Sequence[Number],
                   ncols: Optional[int] = None) -> Optional[RatVec]:
    """One exact solution x of a·x = b, or None when inconsistent.

    Free parameters are set to zero.
    """
    a = list(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if len(a) != len(b):
        raise RankMismatchError(f"{len(a)} equations with {len(b)} right-hand sides")
    if n == 0:
        return () if all(Fraction(x) == 0 for x in b) else None
    if not a:
        return tuple(Fraction(0) for _ in range(n))
    try:
        sol, params = _to_sympy(a, n).gauss_jordan_solve(_to_sympy([[x] for x in b], 1))
    except ValueError:
        return None
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    return tuple(_from_sympy(x) for x in sol)


def combination_coefficients(vectors: Sequence[Sequence[Number]],
                             v: Sequence[Number]) -> Optional[RatVec]:
    """Rational c with sum c_i vectors_i = v, or None."""
    if not vectors:
        return () if all(Fraction(x) == 0 for x in v) else None
    cols = [[vec[k] for vec in vectors] for k in range(len(v))]
    return solve_rational(cols, v, ncols=len(vectors))


def nullspace(rows: Sequence[Sequence[Number]], ncols: int) -> List[IntVec]:
    """Canonical basis (primitive integer rref rows) of {x : rows·x = 0}."""
    basis = _to_sympy(list(rows), ncols).nullspace() if rows else [
        sp.Matrix([int(i == j) for i in range(ncols)]) for j in range(ncols)]
    return canonical_span([[_from_sympy(x) for x in vec] for vec in basis], ncols)


def canonical_span(vectors: Sequence[Sequence[Number]], ncols: int) -> List[IntVec]:
    """Reduced row echelon basis of the rational span, rows made primitive."""
    vectors = [v for v in vectors if any(Fraction(x) != 0 for x in v)]
    if not vectors:
        return []
    reduced, pivots = _to_sympy(vectors, ncols).rref()
    return [primitive([_from_sympy(x) for x in reduced.row(i)]) for i in range(len(pivots))]


def project_away(v: Sequence[Number], basis: Sequence[Sequence[Number]]) -> RatVec:
    """Orthogonal projection of v onto the complement of span(basis)."""
    v = rat_vec(v)
    if not basis:
        return v
    w = _to_sympy(list(basis), len(v))
    gram = w * w.T
    coeffs = gram.inv() * (w * _to_sympy([[x] for x in v], 1))
    shift = w.T * coeffs
    return tuple(x - _from_sympy(shift[i]) for i, x in enumerate(v))


def inverse(m: IntMat) -> List[List[Fraction]]:
    inv = _to_sympy(rows_of(m), m.shape[1]).inv()
    return [[_from_sympy(inv[i, j]) for j in range(inv.shape[1])] for i in range(inv.shape[0])]


def determinant(m: IntMat) -> int:
    if m.shape[0] == 0:
        return 1
    return int(_to_sympy(rows_of(m), m.shape[1]).det())


# ----------------------------------------------------------------------
# normal forms

class NormalForm(NamedTuple):
    u: IntMat
    v: IntMat
    d: IntMat


def _swap_rows(m: IntMat, i: int, j: int):
    if i != j:
        m[[i, j]] = m[[j, i]]


def _swap_cols(m: IntMat, i: int, j: int):
    if i != j:
        m[:, [i, j]] = m[:, [j, i]]


def _smith(m: IntMat) -> NormalForm:
    d = m.copy()
    r, c = d.shape
    u, v = identity(r), identity(c)
    for t in range(min(r, c)):
        while True:
            nonzero = [(abs(d[i, j]), i, j) for i in range(t, r) for j in range(t, c) if d[i, j] != 0]
            if not nonzero:
                return NormalForm(u, v, d)
            _, pi, pj = min(nonzero)
            _swap_rows(d, t, pi)
            _swap_rows(u, t, pi)
            _swap_cols(d, t, pj)
            _swap_cols(v, t, pj)
            p = d[t, t]
            cleared = True
            for i in range(t + 1, r):
                q = d[i, t] // p
                if q:
                    d[i] = d[i] - q * d[t]
                    u[i] = u[i] - q * u[t]
                if d[i, t] != 0:
                    cleared = False
            for j in range(t + 1, c):
                q = d[t, j] // p
                if q:
                    d[:, j] = d[:, j] - q * d[:, t]
                    v[:, j] = v[:, j] - q * v[:, t]
                if d[t, j] != 0:
                    cleared = False
            if not cleared:
                continue
            bad = next((i for i in range(t + 1, r) for j in range(t + 1, c)
                        if d[i, j] % p != 0), None)
            if bad is None:
                break
            # divisibility chain: pull the offending row up and reduce again
            d[t] = d[t] + d[bad]
            u[t] = u[t] + u[bad]
        if d[t, t] < 0:
            d[t] = -d[t]
            u[t] = -u[t]
    return NormalForm(u, v, d)


def _hermite(m: IntMat) -> NormalForm:
    d = m.copy()
    r, c = d.shape
    u = identity(r)
    row = 0
    for col in range(c):
        if row >= r:
            break
        while True:
            nonzero = [(abs(d[i, col]), i) for i in range(row, r) if d[i, col] != 0]
            if not nonzero:
                break
            _, pi = min(nonzero)
            _swap_rows(d, row, pi)
            _swap_rows(u, row, pi)
            again = False
            for i in range(row + 1, r):
                q = d[i, col] // d[row, col]
                if q:
                    d[i] = d[i] - q * d[row]
                    u[i] = u[i] - q * u[row]
                if d[i, col] != 0:
                    again = True
            if not again:
                break
        if d[row, col] == 0:
            continue
        if d[row, col] < 0:
            d[row] = -d[row]
            u[row] = -u[row]
        for i in range(row):
            q = d[i, col] // d[row, col]
            if q:
                d[i] = d[i] - q * d[row]
                u[i] = u[i] - q * u[row]
        row += 1
    return NormalForm(u, identity(c), d)


def normal_form(m: IntMat, kind: str = "smith") -> NormalForm:
    """Unimodular U, V and D = U·m·V in Smith or (row) Hermite form."""
    m = np.asarray(m, dtype=object)
    if kind == "smith":
        return _smith(m)
    if kind == "hermite":
        return _hermite(m)
    raise ValueError(f"unknown normal form kind {kind!r}")


def smith_invariants(m: IntMat) -> List[int]:
    d = normal_form(m, "smith").d
    return [int(d[i, i]) for i in range(min(d.shape)) if d[i, i] != 0]


def integer_kernel(m: IntMat) -> List[IntVec]:
    """Basis of the saturated lattice {x ∈ Z^n : m·x = 0}."""
    nf = normal_form(m, "smith")
    nonzero = len(smith_invariants(m))
    return columns_of(nf.v)[nonzero:]


# ----------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class LatticeBasis:
    ambient_rank: int
    basis_vectors: Tuple[IntVec, ...]

    def __post_init__(self):
        for b in self.basis_vectors:
            if len(b) != self.ambient_rank:
                raise RankMismatchError(
                    f"basis vector {b} does not have ambient rank {self.ambient_rank}")
        if rank(self.basis_vectors, self.ambient_rank) != len(self.basis_vectors):
            raise ValueError("lattice basis vectors are linearly dependent")

    @classmethod
    def span(cls, ambient_rank: int, vectors: Iterable[Sequence[Number]]) -> "LatticeBasis":
        """Lattice generated by arbitrary integer vectors, in Hermite basis."""
        vectors = [int_vec(v) for v in vectors]
        if not vectors:
            return cls(ambient_rank, ())
        d = normal_form(int_mat(vectors, ncols=ambient_rank), "hermite").d
        return cls(ambient_rank, tuple(r for r in rows_of(d) if any(r)))

    @classmethod
    def standard(cls, ambient_rank: int) -> "LatticeBasis":
        return cls(ambient_rank, tuple(rows_of(identity(ambient_rank))))

    @property
    def rank(self) -> int:
        return len(self.basis_vectors)

    def matrix(self) -> IntMat:
        return int_mat(self.basis_vectors, ncols=self.ambient_rank)

    @cached_property
    def hermite_rows(self) -> Tuple[IntVec, ...]:
        if not self.basis_vectors:
            return ()
        d = normal_form(self.matrix(), "hermite").d
        return tuple(r for r in rows_of(d) if any(r))

    def hermite(self) -> "LatticeBasis":
        return LatticeBasis.span(self.ambient_rank, self.basis_vectors)

    def to_ambient(self, coords: Sequence[Number]) -> tuple:
        out = tuple(0 for _ in range(self.ambient_rank))
        for c, b in zip(coords, self.basis_vectors):
            out = add(out, scale(c, b))
        return out

    def rational_coordinates(self, v: Sequence[Number]) -> Optional[RatVec]:
        return combination_coefficients(self.basis_vectors, v)


def _hermite_reduce(basis: Sequence[IntVec], v: IntVec) -> Tuple[IntVec, List[int]]:
    residual = list(v)
    coeffs = []
    for h in basis:
        pivot = next(k for k, x in enumerate(h) if x != 0)
        q = residual[pivot] // h[pivot]
        coeffs.append(q)
        residual = [a - q * b for a, b in zip(residual, h)]
    return tuple(residual), coeffs


def lattice_member(lat: LatticeBasis, v: Sequence[Number]) -> bool:
    if len(v) != lat.ambient_rank:
        raise RankMismatchError(f"vector of rank {len(v)} tested against rank {lat.ambient_rank}")
    try:
        v = int_vec(v)
    except ValueError:
        return False
    residual, _ = _hermite_reduce(lat.hermite_rows, v)
    return not any(residual)


def lattice_coordinates(lat: LatticeBasis, v: Sequence[Number]) -> Optional[IntVec]:
    """Integer coordinates of v in lat's own basis, or None if v ∉ lat."""
    if len(v) != lat.ambient_rank:
        raise RankMismatchError(f"vector of rank {len(v)} tested against rank {lat.ambient_rank}")
    coords = lat.rational_coordinates(v)
    if coords is None or any(c.denominator != 1 for c in coords):
        return None
    return int_vec(coords)


def lattice_index(sub: LatticeBasis, sup: LatticeBasis) -> int:
    """[sup : sub] for sub ⊆ sup of equal rank; 0 when the index is infinite."""
    if sub.ambient_rank != sup.ambient_rank:
        raise RankMismatchError("lattices live in different ambient ranks")
    if sub.rank != sup.rank:
        return 0
    coords = []
    for b in sub.basis_vectors:
        c = lattice_coordinates(sup, b)
        if c is None:
            raise ValueError(f"{b} is not in the containing lattice")
        coords.append(c)
    out = 1
    for x in smith_invariants(int_mat(coords, ncols=sup.rank)):
        out *= x
    return out


def primitive_on_ray(lat: LatticeBasis, r: Sequence[Number]) -> IntVec:
    """Generator of the monoid lat ∩ Q≥0·r."""
    if len(r) != lat.ambient_rank:
        raise RankMismatchError(f"ray of rank {len(r)} in lattice of rank {lat.ambient_rank}")
    if all(Fraction(x) == 0 for x in r):
        raise ValueError("zero vector does not span a ray")
    step = primitive(r)
    coords = lat.rational_coordinates(step)
    if coords is None:
        raise ValueError(f"ray through {tuple(r)} meets the lattice only at 0")
    k = lcm(*(c.denominator for c in coords)) if coords else 1
    return scale(k, step)
