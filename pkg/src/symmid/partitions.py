"""Integer partitions: enumeration, subpartitions and box-adding counts.

Partitions are plain tuples of positive integers in weakly decreasing order.
The empty partition ``()`` has weight 0.  Ordering is lexicographic on the
zero-padded part vectors, which for partitions of a common weight coincides
with Python's tuple ordering.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Sequence, Set, Tuple

Partition = Tuple[int, ...]


def as_partition(parts: Iterable[int]) -> Partition:
    """Validate and normalise ``parts`` into a partition tuple."""
    lam = tuple(int(p) for p in parts)
    for i, p in enumerate(lam):
        if p < 1:
            raise ValueError(f"partition parts must be positive, got {lam}")
        if i and lam[i - 1] < p:
            raise ValueError(f"partition parts must be weakly decreasing, got {lam}")
    return lam


def weight(lam: Partition) -> int:
    return sum(lam)


def num_parts(lam: Partition) -> int:
    return len(lam)


def lex_key(lam: Partition, length: int) -> Tuple[int, ...]:
    """Zero-padded part vector used for lexicographic comparison."""
    return tuple(lam) + (0,) * (length - len(lam))


def lex_less(lam: Partition, mu: Partition) -> bool:
    """True when the leftmost nonzero entry of ``mu - lam`` is positive."""
    length = max(len(lam), len(mu))
    return lex_key(lam, length) < lex_key(mu, length)


@dataclass(frozen=True)
class PartitionTable:
    d: int
    max_parts: int
    entries: Tuple[Partition, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def index(self, lam: Partition) -> int:
        return self.entries.index(tuple(lam))


def _generate(d: int, max_parts: int, largest: int) -> Iterable[Partition]:
    if d == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(d, largest), 0, -1):
        for rest in _generate(d - first, max_parts - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _enumerate(d: int, max_parts: int) -> Tuple[Partition, ...]:
    parts = list(_generate(d, max_parts, d))
    parts.sort(key=lambda lam: lex_key(lam, d))
    return tuple(parts)


def enumerate_partitions(d: int, max_parts: int | None = None) -> PartitionTable:
    """All partitions of ``d`` with at most ``max_parts`` parts, lex ascending.

    >>> list(enumerate_partitions(3, 3))
    [(1, 1, 1), (2, 1), (3,)]
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    if max_parts is None:
        max_parts = d
    if max_parts < 0:
        raise ValueError("max_parts must be non-negative")
    return PartitionTable(d, max_parts, _enumerate(d, max_parts))


def count_partitions(d: int, max_parts: int | None = None) -> int:
    """P_n(d), the number of partitions of ``d`` with at most ``max_parts`` parts."""
    return len(enumerate_partitions(d, max_parts))


def P(d: int) -> int:
    """Number of partitions of ``d`` (no bound on the number of parts)."""
    return count_partitions(d, d)


def is_subpartition(gamma: Partition, lam: Partition) -> bool:
    """Multiset containment of parts."""
    need = Counter(gamma)
    have = Counter(lam)
    return all(have[p] >= c for p, c in need.items())


def subpartitions(lam: Partition) -> List[Partition]:
    """Every ``gamma`` whose parts form a submultiset of ``lam``'s parts.

    The result includes ``()`` and ``lam`` and is sorted by weight, then lex.
    """
    counts = sorted(Counter(lam).items(), reverse=True)
    found: List[Partition] = [()]
    for part, mult in counts:
        found = [g + (part,) * k for g in found for k in range(mult + 1)]
    found = sorted(set(found), key=lambda g: (sum(g), lex_key(g, len(lam))))
    return found


def t_indices(lam: Partition, gamma: Partition) -> Set[int]:
    """1-based positions of ``lam`` that host the parts of ``gamma``.

    Parts of ``gamma`` are matched in order, each time taking the smallest
    still-unused position of ``lam`` carrying the same value.
    """
    used: Set[int] = set()
    for g in gamma:
        for k, part in enumerate(lam, start=1):
            if part == g and k not in used:
                used.add(k)
                break
        else:
            raise ValueError(f"{gamma} is not a subpartition of {lam}")
    return used


def part_multiplicities(lam: Partition, n: int) -> List[int]:
    """[p_0, p_1, ..., p_d] with p_i the number of parts equal to i, p_0 = n - #lam."""
    if len(lam) > n:
        raise ValueError(f"partition {lam} has more than {n} parts")
    d = sum(lam)
    mult = [0] * (d + 1)
    mult[0] = n - len(lam)
    for p in lam:
        mult[p] += 1
    return mult


def stabilizer_multinomial(lam: Partition, n: int) -> int:
    """Number of distinct monomials of type ``lam`` in ``n`` variables."""
    out = factorial(n)
    for c in part_multiplicities(lam, n):
        out //= factorial(c)
    return out


def box_coefficients(mu: Partition, n: int) -> Dict[Partition, int]:
    """Coefficients c^lam_mu of ``m_mu * (x_1 + ... + x_n)`` in the m-basis.

    Computed from the product itself: the coefficient of ``m_lam`` equals
    the coefficient of the representative monomial ``x^lam`` in the product.
    """
    from .polyring import m_basis, linear_form, monomial_type

    mu = as_partition(mu)
    if n < 1:
        raise ValueError("n must be positive")
    if len(mu) > n:
        raise ValueError(f"partition {mu} has more than {n} parts")
    product = m_basis(mu, n) * linear_form([1] * n)
    out: Dict[Partition, int] = {}
    for exps, coef in product.terms.items():
        lam = monomial_type(exps)
        rep = tuple(lam) + (0,) * (n - len(lam))
        if exps == rep:
            out[lam] = int(coef)
    return out


def partition_to_json(lam: Partition) -> list:
    return list(lam)


def partition_from_json(data: Sequence[int]) -> Partition:
    return as_partition(data)
