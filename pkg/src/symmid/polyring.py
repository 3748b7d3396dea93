"""Sparse polynomials over Q in R = Q[x_1..x_n] and its graded dual S.

A single :class:`Polynomial` type covers both rings; ``dual=True`` marks an
element of S (divided-power variables y_i, degree -1 each).  Because the
contraction rule is factorial free in characteristic zero, dual monomials
are stored as plain exponent vectors.

Permutations are 0-based tuples: ``sigma[i]`` is the image of variable i.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .partitions import (
    Partition,
    as_partition,
    enumerate_partitions,
    stabilizer_multinomial,
)

Monomial = Tuple[int, ...]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c)
    return Fraction(c)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("n", "dual", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None, dual: bool = False):
        self.n = int(n)
        self.dual = bool(dual)
        clean: Dict[Monomial, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n:
                raise ValueError(f"monomial {exps} does not have {self.n} exponents")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _frac(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: Dict[Monomial, Fraction], dual: bool) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.n = n
        obj.dual = dual
        obj.terms = terms
        obj._hash = None
        return obj

    # -- basic protocol ---------------------------------------------------
    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {self.to_string()!r}, dual={self.dual})"

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        var = "y" if self.dual else "x"
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"{var}{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e
            )
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.n == other.n and self.dual == other.dual and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.dual, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: "Polynomial") -> None:
        if self.n != other.n or self.dual != other.dual:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial._raw(self.n, out, self.dual)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.n, {k: -c for k, c in self.terms.items()}, self.dual)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial._raw(self.n, {}, self.dual)
        return Polynomial._raw(self.n, {k: v * c for k, v in self.terms.items()}, self.dual)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.dual or other.dual:
                raise ValueError("products are only defined in R; use contract() for R x S")
            self._check(other)
            out: Dict[Monomial, Fraction] = {}
            for a, ca in self.terms.items():
                for b, cb in other.terms.items():
                    k = tuple(x + y for x, y in zip(a, b))
                    v = out.get(k, 0) + ca * cb
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
            return Polynomial._raw(self.n, out, False)
        return self.scale(other)

    __rmul__ = scale

    def __truediv__(self, c) -> "Polynomial":
        return self.scale(1 / _frac(c))

    # -- grading -------------------------------------------------------------
    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous polynomial; negative for elements of S."""
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError("degree is only defined for nonzero homogeneous polynomials")
        d = degs.pop()
        return -d if self.dual else d

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def support_variables(self) -> List[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return sorted(used)

    # -- symmetric group -------------------------------------------------------
    def permute(self, sigma: Sequence[int]) -> "Polynomial":
        return permute(self, sigma)

    # -- serialisation ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dual": self.dual,
            "terms": [
                {"exp": list(e), "coef": f"{c.numerator}/{c.denominator}"}
                for e, c in sorted(self.terms.items(), reverse=True)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polynomial":
        terms = {tuple(t["exp"]): Fraction(t["coef"]) for t in data["terms"]}
        return cls(data["n"], terms, dual=data.get("dual", False))


# -- constructors -------------------------------------------------------------
def zero(n: int, dual: bool = False) -> Polynomial:
    return Polynomial._raw(n, {}, dual)


def monomial(exps: Sequence[int], coef=1, dual: bool = False) -> Polynomial:
    exps = tuple(exps)
    return Polynomial(len(exps), {exps: coef}, dual)


def variable(i: int, n: int, dual: bool = False) -> Polynomial:
    """The variable x_{i+1} (0-based ``i``)."""
    e = [0] * n
    e[i] = 1
    return monomial(e, 1, dual)


def linear_form(coeffs: Sequence, dual: bool = False) -> Polynomial:
    n = len(coeffs)
    terms = {}
    for i, c in enumerate(coeffs):
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = c
    return Polynomial(n, terms, dual)


def x_power_partition(lam: Partition, n: int, dual: bool = False) -> Polynomial:
    """The representative monomial x^lam = x_1^{lam_1} ... x_p^{lam_p}."""
    if len(lam) > n:
        raise ValueError(f"partition {lam} has more than {n} parts")
    return monomial(tuple(lam) + (0,) * (n - len(lam)), 1, dual)


# -- monomials -----------------------------------------------------------------
def monomial_type(exps: Sequence[int]) -> Partition:
    return tuple(sorted((e for e in exps if e), reverse=True))


def _compositions(d: int, n: int) -> Iterable[Monomial]:
    # lex descending with x_1 > x_2 > ...: x_1^d first
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> Tuple[Monomial, ...]:
    """Monomials of degree ``d`` in ``n`` variables, graded lex, x_1 > x_2 > ..."""
    if d < 0 or n < 0:
        raise ValueError("need n, d >= 0")
    if n == 0:
        return ((),) if d == 0 else ()
    return tuple(_compositions(d, n))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(n, d))}


@lru_cache(maxsize=None)
def monomials_of_type(lam: Partition, n: int) -> Tuple[Monomial, ...]:
    """All distinct exponent vectors of type ``lam`` (lex descending)."""
    lam = tuple(lam)
    if len(lam) > n:
        return ()
    found = []

    def place(values: List[int], free: Tuple[int, ...], exps: List[int]) -> None:
        if not values:
            found.append(tuple(exps))
            return
        v = values[0]
        k = values.count(v)
        for pos in itertools.combinations(free, k):
            for i in pos:
                exps[i] = v
            chosen = set(pos)
            place(values[k:], tuple(i for i in free if i not in chosen), exps)
            for i in pos:
                exps[i] = 0

    place(list(lam), tuple(range(n)), [0] * n)
    return tuple(sorted(found, reverse=True))


def coordinates(f: Polynomial, basis: Sequence[Monomial]) -> List[Fraction]:
    """Coefficient vector of ``f`` in a monomial basis; raises if f leaves the span."""
    idx = {m: i for i, m in enumerate(basis)}
    vec = [Fraction(0)] * len(basis)
    for e, c in f.terms.items():
        if e not in idx:
            raise ValueError(f"monomial {e} outside the given basis")
        vec[idx[e]] = c
    return vec


def from_coordinates(vec: Sequence, basis: Sequence[Monomial], dual: bool = False) -> Polynomial:
    n = len(basis[0]) if basis else 0
    return Polynomial(n, {m: c for m, c in zip(basis, vec) if c}, dual)


# -- group action and duality ---------------------------------------------------
def permute(f: Polynomial, sigma: Sequence[int]) -> Polynomial:
    """sigma . f(x_1..x_n) = f(x_sigma(1), .., x_sigma(n)), 0-based ``sigma``."""
    sigma = tuple(sigma)
    n = f.n
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma} is not a permutation of range({n})")
    out: Dict[Monomial, Fraction] = {}
    for e, c in f.terms.items():
        new = [0] * n
        for i, x in enumerate(e):
            if x:
                new[sigma[i]] = x
        out[tuple(new)] = c
    return Polynomial._raw(n, out, f.dual)


def contract(f: Polynomial, g: Polynomial) -> Polynomial:
    """The contraction f o g of f in R on g in S."""
    if f.dual or not g.dual:
        raise ValueError("contract expects f in R and g in S")
    if f.n != g.n:
        raise ValueError("f and g have different numbers of variables")
    out: Dict[Monomial, Fraction] = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            diff = tuple(y - x for x, y in zip(a, b))
            if min(diff, default=0) < 0:
                continue
            v = out.get(diff, 0) + ca * cb
            if v:
                out[diff] = v
            else:
                out.pop(diff, None)
    return Polynomial._raw(f.n, out, True)


def pairing(f: Polynomial, g: Polynomial) -> Fraction:
    """Scalar value of f o g when deg f + deg g = 0."""
    h = contract(f, g)
    return h.terms.get((0,) * f.n, Fraction(0)) if h.terms else Fraction(0)


def m_basis(lam: Sequence[int], n: int, dual: bool = False) -> Polynomial:
    """m_lam: sum of all distinct monomials of type ``lam``."""
    lam = as_partition(lam)
    if len(lam) > n:
        raise ValueError(f"partition {lam} has more than {n} parts")
    return Polynomial._raw(n, {e: Fraction(1) for e in monomials_of_type(lam, n)}, dual)


def M_basis(lam: Sequence[int], n: int, dual: bool = False) -> Polynomial:
    """M_lam = m_lam / (number of monomials of type lam)."""
    lam = as_partition(lam)
    if len(lam) > n:
        raise ValueError(f"partition {lam} has more than {n} parts")
    c = Fraction(1, stabilizer_multinomial(lam, n))
    return Polynomial._raw(n, {e: c for e in monomials_of_type(lam, n)}, dual)


def reynolds_coordinates(f: Polynomial) -> Dict[Partition, Fraction]:
    """Coefficients of rho(f) in the M-basis: each term c*m contributes c to M_type(m)."""
    out: Dict[Partition, Fraction] = {}
    for e, c in f.terms.items():
        lam = monomial_type(e)
        out[lam] = out.get(lam, 0) + c
    return {k: v for k, v in out.items() if v}


def reynolds(f: Polynomial) -> Polynomial:
    """Average of f over S_n, computed term-wise via rho(c*m) = c*M_type(m)."""
    result = zero(f.n, f.dual)
    for lam, c in reynolds_coordinates(f).items():
        result = result + M_basis(lam, f.n, f.dual).scale(c)
    return result


def is_symmetric(f: Polynomial) -> bool:
    """Invariance check: coefficients are constant along each monomial type."""
    seen: Dict[Partition, Fraction] = {}
    counts: Dict[Partition, int] = {}
    for e, c in f.terms.items():
        lam = monomial_type(e)
        if seen.setdefault(lam, c) != c:
            return False
        counts[lam] = counts.get(lam, 0) + 1
    return all(counts[lam] == stabilizer_multinomial(lam, f.n) for lam in counts)


def delta_restrict(g: Polynomial, d: int) -> Polynomial:
    """Set y_{d+1}, ..., y_n to zero, landing in d variables."""
    if g.n < d:
        raise ValueError(f"need n >= d, got n={g.n}, d={d}")
    out = {e[:d]: c for e, c in g.terms.items() if not any(e[d:])}
    return Polynomial._raw(d, out, g.dual)


def invariant_coordinates(g: Polynomial, d: int, basis: str = "m") -> List[Fraction]:
    """Coordinates of a symmetric form of degree d in the m- or M-basis.

    Indexed by partitions of d with at most n parts, lex ascending.
    """
    if not is_symmetric(g):
        raise ValueError("polynomial is not symmetric")
    parts = enumerate_partitions(d, g.n)
    vec = []
    for lam in parts:
        rep = tuple(lam) + (0,) * (g.n - len(lam))
        c = g.coefficient(rep)
        if basis == "M":
            c = c * stabilizer_multinomial(lam, g.n)
        vec.append(c)
    return vec
