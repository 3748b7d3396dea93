"""Shared builders for seeded test instances."""

from functools import lru_cache

from symmid.construction import lift_alpha, orbit_span, random_alpha
from symmid.invariants import ArtinianQuotient

GRID = ((3, 2, 1), (4, 2, 1), (5, 2, 1), (3, 2, 2), (5, 3, 1), (5, 3, 2), (5, 3, 3), (6, 3, 1))


@lru_cache(maxsize=None)
def general_instance(n, d, r, seed=0, bound=100):
    """(alpha, V, I_d, A) for a seeded random alpha lifted to n variables."""
    alpha = random_alpha(d, r, seed, bound)
    V = [lift_alpha(row, n, seed=seed + k, bound=bound, d=d)[0] for k, row in enumerate(alpha)]
    I = orbit_span(V, n, d, seed=seed)
    return alpha, V, I, ArtinianQuotient(I)
