"""ı-root data: Satake axioms, the involution θ_X and the spherical lattice."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .cones import Cone, dual_description, from_inequalities, hilbert_basis, HilbertBasis
from .errors import NotFiniteTypeError, ValidationError
from .exact_linalg import (
    IntMat, IntVec, LatticeBasis, Number, RatVec, apply, identity,
    int_mat, int_vec, lattice_member, mat_mul, nullspace, primitive_on_ray, rank,
    rows_of, scale, sub,
)
from .root_datum import CartanType, RootDatum, classify_type, fundamental_weights, parabolic_longest

logger = logging.getLogger(__name__)


def _coords(datum: RootDatum, x) -> tuple:
    coords = tuple(getattr(x, "coords", x))
    datum.check_rank(coords)
    return coords


@dataclass(frozen=True, eq=False)
class SatakeData:
    i_bullet: FrozenSet[int]
    tau: Tuple[int, ...]
    tau_x: IntMat

    def __post_init__(self):
        n = len(self.tau)
        if sorted(self.tau) != list(range(1, n + 1)):
            raise ValidationError(f"tau {self.tau} is not a permutation of 1..{n}", axiom="tau")
        for i in range(1, n + 1):
            if self.image(self.image(i)) != i:
                raise ValidationError(f"tau is not an involution at {i}", axiom="tau involution", index=i)
        for i in self.i_bullet:
            if not 1 <= i <= n:
                raise ValidationError(f"I_bullet label {i} out of range", axiom="I_bullet", index=i)
            if self.image(i) not in self.i_bullet:
                raise ValidationError(f"tau does not preserve I_bullet at {i}",
                                      axiom="tau(I_bullet) = I_bullet", index=i)

    def image(self, label: int) -> int:
        return self.tau[label - 1]


@dataclass(frozen=True, eq=False)
class IRootDatum:
    datum: RootDatum
    satake: SatakeData
    theta_x: IntMat
    w_bullet: IntMat
    i_circ: Tuple[int, ...]
    i_circ_prime: Tuple[int, ...]

    def theta(self, x: Sequence[Number]) -> tuple:
        return apply(self.theta_x, x)

    @property
    def rank_x(self) -> int:
        return self.datum.rank_x


def build_iroot_datum(datum: RootDatum, satake: SatakeData,
                      i_circ_prime: Optional[Sequence[int]] = None) -> IRootDatum:
    """Derive w_bullet and θ_X = −w_bullet∘tau_X and check the axioms."""
    n = len(datum.simple_roots)
    if len(satake.tau) != n:
        raise ValidationError(f"tau acts on {len(satake.tau)} labels, datum has {n}", axiom="tau")
    if satake.tau_x.shape != (datum.rank_x, datum.rank_x):
        raise ValidationError(f"tau_X has shape {satake.tau_x.shape}", axiom="tau_X")
    for i in datum.labels:
        if apply(satake.tau_x, datum.root(i)) != datum.root(satake.image(i)):
            raise ValidationError(f"tau_X(alpha_{i}) != alpha_{satake.image(i)}",
                                  axiom="tau_X(alpha_i) = alpha_tau(i)", index=i)
    if (mat_mul(satake.tau_x, satake.tau_x) != identity(datum.rank_x)).any():
        raise ValidationError("tau_X is not an involution", axiom="tau_X involution")

    w_bullet = parabolic_longest(datum, satake.i_bullet)
    for i in sorted(satake.i_bullet):
        if apply(w_bullet, datum.root(i)) != scale(-1, datum.root(satake.image(i))):
            raise ValidationError(f"w_bullet(alpha_{i}) != -alpha_{satake.image(i)}",
                                  axiom="(i)", index=i)
    theta = mat_mul(-w_bullet, satake.tau_x)
    square = mat_mul(theta, theta)
    for k in range(datum.rank_x):
        if (square[:, k] != identity(datum.rank_x)[:, k]).any():
            raise ValidationError(f"theta_X^2 moves basis vector {k + 1}",
                                  axiom="theta_X involution", index=k + 1)
    for i in datum.labels:
        expected = scale(-1, apply(w_bullet, datum.root(satake.image(i))))
        if apply(theta, datum.root(i)) != expected:
            raise ValidationError(f"theta_X(alpha_{i}) != -w_bullet alpha_tau({i})",
                                  axiom="(ii)", index=i)
        if i in satake.i_bullet and apply(theta, datum.root(i)) != datum.root(i):
            raise ValidationError(f"theta_X does not fix alpha_{i}", axiom="(ii)", index=i)

    i_circ = tuple(i for i in datum.labels if i not in satake.i_bullet)
    if i_circ_prime is None:
        i_circ_prime = tuple(i for i in i_circ if i <= satake.image(i))
    else:
        i_circ_prime = tuple(sorted(i_circ_prime))
        orbits = {frozenset((i, satake.image(i))) for i in i_circ}
        chosen = [frozenset((i, satake.image(i))) for i in i_circ_prime]
        if any(i not in i_circ for i in i_circ_prime) or sorted(chosen, key=sorted) != sorted(orbits, key=sorted):
            raise ValidationError("I_circ_prime must pick one label per tau-orbit of I_circ",
                                  axiom="I_circ_prime")
    ird = IRootDatum(datum, satake, theta, w_bullet, i_circ, tuple(i_circ_prime))
    logger.debug(f"built i-root datum: I_bullet={sorted(satake.i_bullet)}, I_circ'={i_circ_prime}")
    return ird


def doubled(ird: IRootDatum) -> IRootDatum:
    """The datum of G×T acting on X×X, with θ×θ as involution.

    Roots and coroots sit in the first factor; tau_X is tau_X ⊕ (−θ_X) so
    that the derived involution is θ_X ⊕ θ_X.
    """
    n = ird.rank_x
    pad = (0,) * n
    datum2 = RootDatum(2 * n,
                       tuple(r + pad for r in ird.datum.simple_roots),
                       tuple(c + pad for c in ird.datum.simple_coroots))
    tau_x2 = np.zeros((2 * n, 2 * n), dtype=object)
    tau_x2[:n, :n] = ird.satake.tau_x
    tau_x2[n:, n:] = -ird.theta_x
    satake2 = SatakeData(ird.satake.i_bullet, ird.satake.tau, int_mat(rows_of(tau_x2), ncols=2 * n))
    return build_iroot_datum(datum2, satake2, ird.i_circ_prime)


def bar(ird: IRootDatum, mu) -> tuple:
    """μ − θ_X(μ); dominant inputs land in the dominant part of X̆."""
    mu = _coords(ird.datum, mu)
    out = sub(mu, ird.theta(mu))
    if ird.datum.is_dominant(mu) and not ird.datum.is_dominant(out):
        raise ValidationError(f"bar({mu}) = {out} is not dominant", axiom="bar of dominant")
    return out


@dataclass(frozen=True)
class TCoeffs:
    t: Dict[Tuple[int, int], int]

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.t.get(key, 0)


def t_coefficients(ird: IRootDatum) -> TCoeffs:
    """Solve θ_X(α_i) + α_τi = −Σ_{j ∈ I_bullet} t_ij α_j for i ∈ I_circ."""
    datum, satake = ird.datum, ird.satake
    t = {}
    for i in ird.i_circ:
        target = scale(-1, ird.theta(datum.root(i)))
        target = sub(target, datum.root(satake.image(i)))
        coeffs = datum.alpha_coordinates(target)
        if coeffs is None:
            raise ValidationError(f"theta_X(alpha_{i}) leaves the root span", axiom="t-coefficients", index=i)
        for j in datum.labels:
            c = coeffs[j - 1]
            if j not in satake.i_bullet:
                if c != 0:
                    raise ValidationError(f"theta_X(alpha_{i}) has a component on alpha_{j}",
                                          axiom="t-coefficients", index=i)
                continue
            if c.denominator != 1 or c < 0:
                raise ValidationError(f"t_{i},{j} = {c} is not a nonnegative integer",
                                      axiom="t-coefficients", index=i)
            t[(i, j)] = int(c)
    for (i, j), value in t.items():
        if t.get((satake.image(i), j)) != value:
            raise ValidationError(f"t_{i},{j} != t_tau({i}),{j}", axiom="t-coefficients", index=i)
    return TCoeffs(t)


@dataclass(frozen=True, eq=False)
class SphericalLattice:
    parent: IRootDatum
    lattice: LatticeBasis
    i_circ_prime: Tuple[int, ...]
    bar_alpha: Tuple[IntVec, ...]
    spherical_roots: Tuple[IntVec, ...]
    spherical_cartan: IntMat
    spherical_type: CartanType

    @property
    def datum(self) -> RootDatum:
        return self.parent.datum

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def contains(self, x) -> bool:
        return lattice_member(self.lattice, _coords(self.datum, x))

    def in_dominant_part(self, x) -> bool:
        x = _coords(self.datum, x)
        return self.datum.is_dominant(x) and lattice_member(self.lattice, x)

    def bar_alpha_of(self, label: int) -> IntVec:
        return self.bar_alpha[self.i_circ_prime.index(label)]

    @cached_property
    def equations(self) -> List[IntVec]:
        """Normals cutting X̆ ⊗ Q out of X ⊗ Q."""
        return nullspace(self.lattice.basis_vectors, self.datum.rank_x)

    @cached_property
    def root_cone(self) -> Cone:
        """Σ Q≥0 ᾱ_i."""
        return dual_description(self.bar_alpha, self.datum.rank_x)

    @cached_property
    def dominant_cone(self) -> Cone:
        """Rational cone of X̆⁺."""
        return from_inequalities(self.datum.rank_x, self.datum.simple_coroots, self.equations)

    @cached_property
    def dominant_hilbert(self) -> HilbertBasis:
        return hilbert_basis(self.dominant_cone, self.lattice)

    @cached_property
    def bar_fundamental_weights(self) -> Tuple[RatVec, ...]:
        """ω̄_j = ω_j − θ_X ω_j for j ∈ I_circ_prime."""
        omegas = fundamental_weights(self.datum)
        return tuple(sub(omegas[j - 1], self.parent.theta(omegas[j - 1])) for j in self.i_circ_prime)


def is_semisimple(sl: SphericalLattice) -> bool:
    """X̆ ⊗ Q is spanned by the ᾱ_i."""
    return rank(sl.bar_alpha, sl.datum.rank_x) == sl.rank


def spherical_lattice(ird: IRootDatum) -> SphericalLattice:
    datum = ird.datum
    n = datum.rank_x
    images = [sub(e, ird.theta(e)) for e in rows_of(identity(n))]
    lattice = LatticeBasis.span(n, images)
    bar_alpha = tuple(int_vec(sub(datum.root(i), ird.theta(datum.root(i)))) for i in ird.i_circ_prime)
    if rank(bar_alpha, n) != len(bar_alpha):
        raise ValidationError("the vectors alpha_i - theta_X(alpha_i) are linearly dependent",
                              axiom="spherical independence")
    spherical_roots = tuple(primitive_on_ray(lattice, b) for b in bar_alpha)
    cartan = int_mat([[sum(c * x for c, x in zip(datum.coroot(j), b)) for j in ird.i_circ_prime]
                      for b in bar_alpha], ncols=len(ird.i_circ_prime))
    try:
        kind = classify_type(cartan, allow_rational_rescale=True)
    except NotFiniteTypeError as e:
        raise ValidationError(f"spherical Cartan matrix is not of finite type: {e}",
                              axiom="spherical finite type") from e
    logger.debug(f"spherical lattice of rank {lattice.rank}, spherical type {kind}")
    return SphericalLattice(ird, lattice, ird.i_circ_prime, bar_alpha, spherical_roots, cartan, kind)


def decompose_difference(sl: SphericalLattice, lam, mu) -> Dict[int, Fraction]:
    """c_i with μ − λ = Σ c_i ᾱ_i, for λ ≤ μ in X̆."""
    datum = sl.datum
    lam, mu = _coords(datum, lam), _coords(datum, mu)
    for name, x in (("lambda", lam), ("mu", mu)):
        if not sl.contains(x):
            raise ValidationError(f"{name} = {x} is not in the spherical lattice", axiom="membership")
    if not datum.leq(lam, mu):
        raise ValidationError(f"{lam} is not below {mu} in the dominance order", axiom="dominance")
    n = datum.alpha_coordinates(sub(mu, lam))
    tau = sl.parent.satake
    out = {}
    for i in sl.i_circ_prime:
        out[i] = n[i - 1] / 2 if tau.image(i) == i else n[i - 1]
    rebuilt = tuple(Fraction(0) for _ in mu)
    for i, b in zip(sl.i_circ_prime, sl.bar_alpha):
        rebuilt = tuple(r + out[i] * x for r, x in zip(rebuilt, b))
    if rebuilt != tuple(Fraction(x) for x in sub(mu, lam)):
        raise ValidationError(f"no decomposition of {sub(mu, lam)} along the bar roots",
                              axiom="decomposition")
    return out
