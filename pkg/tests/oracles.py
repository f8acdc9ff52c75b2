"""Brute-force references for the exact algorithms."""
import itertools

from symembed.cones import contains


def box(rank, radius):
    return itertools.product(range(-radius, radius + 1), repeat=rank)


def hilbert_basis_bruteforce(cone, radius):
    """Irreducible nonzero points of cone ∩ Z^d inside [-radius, radius]^d."""
    points = [p for p in box(cone.ambient_rank, radius) if any(p) and contains(cone, p)]
    out = []
    for x in points:
        if not any(y != x and contains(cone, tuple(a - b for a, b in zip(x, y))) for y in points):
            out.append(x)
    return sorted(out)


def down_set_bruteforce(sl, mu, radius):
    """λ ∈ X̆⁺ within the box with μ − λ a nonnegative integer root combination."""
    return sorted(lam for lam in box(sl.datum.rank_x, radius)
                  if sl.in_dominant_part(lam) and sl.datum.leq(lam, mu))


def monoid_contains(cone, gens, x):
    """x is a nonnegative integer combination of gens (nonzero points of a pointed cone)."""
    seen = {}

    def reach(y):
        if not any(y):
            return True
        if y not in seen:
            seen[y] = any(contains(cone, rest) and reach(rest)
                          for rest in (tuple(a - b for a, b in zip(y, g)) for g in gens))
        return seen[y]

    return reach(tuple(x))
