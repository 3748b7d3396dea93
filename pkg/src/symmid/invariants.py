"""Invariants of an artinian quotient A = R/I with I generated in degree d.

Every number here comes from a rank computation over Q: Hilbert function,
socle, multiplication maps for the Weak Lefschetz Property, and graded
Betti numbers via Koszul homology.  The closed-form predictions live next
to the oracles (:func:`betti_formula`, :func:`socle_formula`) so that
callers can compare the two.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .duality import GradedIdealSlice, InverseSystemSlice, invariant_polynomials
from .exactla import (
    Echelon,
    Subspace,
    integer_row,
    kernel_basis_rows,
    modular_echelon,
    rank_rows,
    sparse_integer_row,
)
from .partitions import P, count_partitions
from .polyring import Polynomial, contract, monomial_basis, monomial_index


class CostGuardError(ValueError):
    """Raised when an oracle computation exceeds its default size limits."""


def dim_R(n: int, i: int) -> int:
    return comb(n + i - 1, i) if i >= 0 else 0


def expected_a(n: int, d: int, r: int) -> int:
    return max(count_partitions(d, n) - r, 0)


def expected_ell(n: int, d: int, r: int) -> int:
    return max(count_partitions(d, n) - count_partitions(d - 1, n) - r, 0)


def noah_bound(d: int, r: int) -> int:
    """Smallest n with n >= d+1 and n >= 1 + (1/r) * sum_{i<d} P(i)."""
    total = sum(P(i) for i in range(d))
    return max(d + 1, -(-(r + total) // r))


# -- the quotient ring ---------------------------------------------------------------
@dataclass
class _Piece:
    """Degree-k piece of I in reduced echelon form.

    ``pivots`` maps a pivot column to the non-pivot entries of its unit row;
    ``standard`` lists the non-pivot columns, which index a basis of A_k.
    """

    degree: int
    pivots: Dict[int, Dict[int, Fraction]]
    standard: List[int]

    def __post_init__(self):
        self.std_index = {c: i for i, c in enumerate(self.standard)}


class ArtinianQuotient:
    """A = R/I for an ideal I generated by its degree-d slice.

    Pieces I_k for k > d are generated as R_1 * I_{k-1}; nothing about them
    is assumed.  ``max_degree`` caps the search for the top degree.
    """

    def __init__(self, ideal_slice: GradedIdealSlice, max_degree: Optional[int] = None,
                 mode: str = "exact"):
        self.ideal_slice = ideal_slice
        self.n = ideal_slice.n
        self.d = ideal_slice.d
        self.mode = mode
        self.max_degree = max_degree if max_degree is not None else self.d + 1 + self.n * self.d
        self._pieces: Dict[int, _Piece] = {}

    # pieces -------------------------------------------------------------------
    def piece(self, k: int) -> _Piece:
        if k in self._pieces:
            return self._pieces[k]
        n, d = self.n, self.d
        size = dim_R(n, k)
        if k < d:
            p = _Piece(k, {}, list(range(size)))
        elif k == d:
            pivots = {}
            for row in self.ideal_slice.space.basis:
                pc = next(j for j, v in enumerate(row) if v)
                pivots[pc] = {j: v for j, v in enumerate(row) if v and j != pc}
            p = _Piece(k, pivots, [c for c in range(size) if c not in pivots])
        else:
            prev = self.piece(k - 1)
            if not prev.standard:
                p = _Piece(k, {c: {} for c in range(size)}, [])
            else:
                p = self._next_piece(prev, k)
        self._pieces[k] = p
        return p

    def _next_piece(self, prev: _Piece, k: int) -> _Piece:
        n = self.n
        lower = monomial_basis(n, k - 1)
        idx = monomial_index(n, k)
        size = len(idx)
        rows = []
        for pc, rest in prev.pivots.items():
            for t in range(n):
                row = {}
                for c, v in [(pc, Fraction(1))] + list(rest.items()):
                    e = list(lower[c])
                    e[t] += 1
                    row[idx[tuple(e)]] = v
                rows.append(sparse_integer_row(row))
        full = rank_rows(rows, size, mode=self.mode) == size if rows else False
        if full:
            return _Piece(k, {c: {} for c in range(size)}, [])
        ech = Echelon(size)
        for r in rows:
            ech.add(r)
        rref = ech.rref()
        pivots = {}
        for row in rref:
            pc = next(j for j, v in enumerate(row) if v)
            pivots[pc] = {j: v for j, v in enumerate(row) if v and j != pc}
        return _Piece(k, pivots, [c for c in range(size) if c not in pivots])

    # Hilbert function ---------------------------------------------------------------
    def hf_at(self, k: int) -> int:
        return len(self.piece(k).standard)

    def top_degree(self) -> int:
        """Largest k with A_k != 0; raises if A does not vanish by ``max_degree``."""
        k = self.d
        while self.hf_at(k):
            k += 1
            if k > self.max_degree:
                raise ValueError(f"A_k is nonzero up to degree {self.max_degree}; not artinian within cap")
        return k - 1

    # normal forms ----------------------------------------------------------------
    def normal_form(self, k: int, exps: Tuple[int, ...]) -> Dict[int, Fraction]:
        """Coordinates of the class of x^exps in A_k (standard-monomial basis)."""
        p = self.piece(k)
        c = monomial_index(self.n, k)[tuple(exps)]
        if c in p.std_index:
            return {p.std_index[c]: Fraction(1)}
        return {p.std_index[q]: -v for q, v in p.pivots[c].items()}

    def multiplication_rows(self, k: int, coeffs: Sequence) -> List[Dict[int, Fraction]]:
        """Rows of multiplication by sum c_t x_t from A_k to A_{k+1}."""
        src = self.piece(k)
        tgt = self.piece(k + 1)
        basis = monomial_basis(self.n, k)
        rows = []
        for c in src.standard:
            row: Dict[int, Fraction] = {}
            if tgt.standard:
                for t, ct in enumerate(coeffs):
                    if not ct:
                        continue
                    e = list(basis[c])
                    e[t] += 1
                    for j, v in self.normal_form(k + 1, tuple(e)).items():
                        row[j] = row.get(j, 0) + Fraction(ct) * v
            rows.append({j: v for j, v in row.items() if v})
        return rows


def hilbert_function(A: ArtinianQuotient, upto: Optional[int] = None) -> List[int]:
    """[dim A_0, ..., dim A_upto]; by default through degree d+1."""
    if upto is None:
        upto = A.d + 1
    return [A.hf_at(k) for k in range(upto + 1)]


def full_hilbert_function(A: ArtinianQuotient) -> List[int]:
    top = A.top_degree()
    return [A.hf_at(k) for k in range(top + 1)]


def expected_hilbert_function(n: int, d: int, r: int) -> List[int]:
    return [dim_R(n, i) for i in range(d)] + [expected_a(n, d, r), 0]


def multiplicity(A: ArtinianQuotient) -> int:
    return sum(full_hilbert_function(A))


def expected_multiplicity(n: int, d: int, r: int) -> int:
    return comb(n + d - 1, d - 1) + P(d) - r


# -- socle -----------------------------------------------------------------------
def _rank_of(rows: List[Dict[int, Fraction]], ncols: int, mode: str = "exact") -> int:
    return rank_rows([sparse_integer_row(r) for r in rows], ncols, mode=mode)


def socle(A: ArtinianQuotient) -> Dict[int, int]:
    """Socle dimensions by degree: common kernel of multiplication by every x_t."""
    top = A.top_degree()
    out = {}
    for k in range(top + 1):
        hk = A.hf_at(k)
        h1 = A.hf_at(k + 1)
        if h1 == 0:
            dim = hk
        else:
            rows = []
            per_var = [A.multiplication_rows(k, [int(s == t) for s in range(A.n)]) for t in range(A.n)]
            for i in range(hk):
                row = {}
                for t in range(A.n):
                    for j, v in per_var[t][i].items():
                        row[t * h1 + j] = v
                rows.append(row)
            dim = hk - _rank_of(rows, A.n * h1, A.mode)
        if dim:
            out[k] = dim
    return out


def socle_formula(n: int, d: int, a: int, dim_L: int) -> Dict[int, int]:
    out = {}
    low = dim_R(n, d - 1) - a * n + dim_L
    if low:
        out[d - 1] = low
    if a:
        out[d] = a
    return out


def socle_polynomial(soc: Dict[int, int]) -> str:
    if not soc:
        return "0"
    return " + ".join(f"{v}*z^{k}" for k, v in sorted(soc.items()))


# -- linear syzygies -------------------------------------------------------------
@dataclass
class SyzygyReport:
    dim_L: int
    dim_L_tilde: int
    property_P: bool
    property_Q: bool
    dim_W: int = 0
    lower_bound: int = 0

    def inequalities_hold(self) -> bool:
        return self.dim_L >= self.dim_L_tilde >= self.lower_bound

    def to_json(self) -> dict:
        return {
            "dim_W": self.dim_W,
            "dim_L": self.dim_L,
            "dim_L_tilde": self.dim_L_tilde,
            "lower_bound": self.lower_bound,
            "property_P": self.property_P,
            "property_Q": self.property_Q,
        }


def _dual_forms(W, n: Optional[int], d: Optional[int]) -> Tuple[List[Polynomial], int, int]:
    if isinstance(W, InverseSystemSlice):
        return W.polynomials(), W.n, W.d
    if isinstance(W, Subspace):
        if n is None:
            raise ValueError("n is required for invariant subspaces")
        lam = W.labels[0] if W.labels else None
        d = d if d is not None else sum(lam)
        return invariant_polynomials(W, n, basis="M", dual=True), n, d
    forms = list(W)
    if not forms:
        raise ValueError("n and d are required for an empty list of forms")
    return forms, forms[0].n, -forms[0].degree()


def _contract_rows(ell: Sequence, forms: Sequence[Polynomial], n: int, d: int) -> List[Dict[int, Fraction]]:
    idx = monomial_index(n, d - 1)
    lin = Polynomial(n, {tuple(int(s == t) for s in range(n)): c for t, c in enumerate(ell) if c})
    rows = []
    for F in forms:
        h = contract(lin, F)
        rows.append({idx[e]: v for e, v in h.terms.items()})
    return rows


def syzygy_report(W, n: Optional[int] = None, d: Optional[int] = None) -> SyzygyReport:
    """L_W, its invariant part, and properties P and Q for W in S_{-d}.

    ``W`` may be an :class:`InverseSystemSlice`, an invariant subspace in
    M-coordinates, or a list of dual forms.
    """
    forms, n, d = _dual_forms(W, n, d)
    a = len(forms)
    low = max(a - count_partitions(d - 1, n), 0)
    if a == 0:
        return SyzygyReport(0, 0, True, True, 0, 0)
    idx = monomial_index(n, d - 1)
    m = len(idx)
    # equations indexed by monomials of S_{-d+1}; unknowns c_{ij} at column j*n + i
    eqs: List[Dict[int, Fraction]] = [dict() for _ in range(m)]
    for j, F in enumerate(forms):
        for i in range(n):
            for e, v in F.terms.items():
                if e[i]:
                    b = list(e)
                    b[i] -= 1
                    eqs[idx[tuple(b)]][j * n + i] = v
    ker = kernel_basis_rows([sparse_integer_row(r) for r in eqs], n * a)
    dim_L = len(ker)
    property_P = all(len(set(vec[j * n:(j + 1) * n])) == 1 for vec in ker for j in range(a))

    x_rows = _contract_rows([1] * n, forms, n, d)
    tilde_eqs: List[Dict[int, Fraction]] = [dict() for _ in range(m)]
    for j, row in enumerate(x_rows):
        for c, v in row.items():
            tilde_eqs[c][j] = v
    dim_L_tilde = a - _rank_of(tilde_eqs, a)

    diff = [1, -1] + [0] * (n - 2) if n >= 2 else [1]
    q_rows = _contract_rows(diff, forms, n, d)
    property_Q = _rank_of(q_rows, m) == a if n >= 2 else False
    return SyzygyReport(dim_L, dim_L_tilde, property_P, property_Q, a, low)


# -- weak Lefschetz --------------------------------------------------------------
def wlp_check(A: ArtinianQuotient, ell) -> dict:
    """Ranks of multiplication by ``ell`` from A_{i-1} to A_i for every i up to top+1."""
    if isinstance(ell, Polynomial):
        if not ell.is_homogeneous() or (ell.terms and ell.degree() != 1):
            raise ValueError("ell must be a linear form")
        coeffs = [ell.coefficient(tuple(int(s == t) for s in range(A.n))) for t in range(A.n)]
    else:
        coeffs = [Fraction(c) for c in ell]
    top = A.top_degree()
    ranks = []
    ok = True
    for i in range(1, top + 2):
        src, tgt = A.hf_at(i - 1), A.hf_at(i)
        rk = _rank_of(A.multiplication_rows(i - 1, coeffs), tgt, A.mode) if src and tgt else 0
        exp = min(src, tgt)
        ranks.append({"degree": i, "rank": rk, "max": exp})
        ok = ok and rk == exp
    return {"coefficients": [str(c) for c in coeffs], "ranks": ranks, "maximal_rank": ok}


def standard_lines(n: int, seed: int, count: int = 5, bound: int = 100) -> List[List[int]]:
    """x_1 + 2x_2 + ... + n x_n followed by ``count`` seeded random lines other than multiples of x.

    For n = 1 the random lines are nonzero multiples of x_1.
    """
    import numpy as np

    rng = np.random.default_rng(seed)
    lines = [list(range(1, n + 1))]
    while len(lines) < count + 1:
        c = [int(v) for v in rng.integers(-bound, bound + 1, size=n)]
        # with one variable every line is a multiple of x, so only exclude zero
        if len(set(c)) > 1 or (n == 1 and c[0]):
            lines.append(c)
    return lines


# -- Betti tables --------------------------------------------------------------------
@dataclass
class BettiTable:
    n: int
    d: int
    beta: Dict[Tuple[int, int], int] = field(default_factory=dict)
    a: Optional[int] = None
    ell: Optional[int] = None
    b: Optional[int] = None
    u: Optional[List[int]] = None
    source: str = ""

    def __post_init__(self):
        self.beta = {k: v for k, v in self.beta.items() if v}

    def __getitem__(self, ij) -> int:
        return self.beta.get(tuple(ij), 0)

    def entries_equal(self, other: "BettiTable") -> bool:
        return self.beta == other.beta

    def totals(self) -> List[int]:
        top = max((i for i, _ in self.beta), default=0)
        return [sum(v for (i, _), v in self.beta.items() if i == k) for k in range(top + 1)]

    def projective_dimension(self) -> int:
        return max((i for i, _ in self.beta), default=0)

    def regularity(self) -> int:
        return max((j - i for i, j in self.beta), default=0)

    def shape_ok(self) -> bool:
        """Entries only in rows j - i in {0, d-1, d}, and beta(0,0) = 1."""
        allowed = {0, self.d - 1, self.d}
        return self.beta.get((0, 0)) == 1 and all(j - i in allowed for i, j in self.beta)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "source": self.source,
            "entries": [{"i": i, "j": j, "beta": v} for (i, j), v in sorted(self.beta.items())],
            "totals": self.totals(),
        }
        if self.a is not None:
            out.update({"a": self.a, "ell": self.ell, "b": self.b, "u": self.u})
        return out

    def to_text(self) -> str:
        """Betti diagram: rows indexed by j - i, columns by i."""
        cols = self.projective_dimension() + 1
        rows = sorted({j - i for i, j in self.beta}) or [0]
        width = max([len(str(v)) for v in self.beta.values()] + [len(str(t)) for t in self.totals()] + [1]) + 1
        lines = [" " * 7 + "".join(str(i).rjust(width) for i in range(cols))]
        lines.append("total:".rjust(7) + "".join(str(t).rjust(width) for t in self.totals()))
        for s in range(min(rows), max(rows) + 1):
            cells = []
            for i in range(cols):
                v = self.beta.get((i, i + s), 0)
                cells.append((str(v) if v else ".").rjust(width))
            lines.append(f"{s}:".rjust(7) + "".join(cells))
        return "\n".join(lines)


def betti_formula(n: int, d: int, r: int) -> BettiTable:
    """Closed-form Betti table of a general (r, d)-symmetric quotient."""
    if n < noah_bound(d, r):
        warnings.warn(f"n={n} is below the bound {noah_bound(d, r)} for (d, r)=({d}, {r})", stacklevel=2)
    a = expected_a(n, d, r)
    ell = expected_ell(n, d, r)
    b = comb(n + d - 2, d - 1) - a * n + ell
    u = [comb(n + d - 1, d + i) * comb(d + i - 1, i) - a * comb(n, i) for i in range(n - 1)]
    beta: Dict[Tuple[int, int], int] = {}

    def add(i, j, v):
        beta[(i, j)] = beta.get((i, j), 0) + v

    add(0, 0, 1)
    for i in range(1, n):
        add(i, i + d - 1, u[i - 1])
    add(n - 1, n - 1 + d, ell)
    add(n, n + d - 1, b)
    add(n, n + d, a)
    return BettiTable(n, d, beta, a=a, ell=ell, b=b, u=u, source="formula")


def koszul_sizes(A: ArtinianQuotient) -> Dict[Tuple[int, int], int]:
    top = A.top_degree()
    return {(i, i + k): comb(A.n, i) * A.hf_at(k) for i in range(A.n + 1) for k in range(top + 1)}


def betti_oracle(A: ArtinianQuotient, force: bool = False) -> BettiTable:
    """Graded Betti numbers as Koszul homology of A.

    The strand in homological degree i and internal degree j is
    Lambda^i(k^n) (x) A_{j-i}, with differential
    e_S (x) a -> sum_p (-1)^p e_{S - s_p} (x) x_{s_p} a.
    """
    n = A.n
    if not force and (n > 6 or A.d > 3):
        sizes = koszul_sizes(A)
        raise CostGuardError(
            f"Koszul oracle is limited to n <= 6, d <= 3 by default (n={n}, d={A.d}, "
            f"largest strand {max(sizes.values())}); pass force=True to override"
        )
    top = A.top_degree()
    hf = [A.hf_at(k) for k in range(top + 2)]
    subsets = {i: list(itertools.combinations(range(n), i)) for i in range(n + 1)}
    sub_index = {i: {S: p for p, S in enumerate(subsets[i])} for i in range(n + 1)}

    unit = [[int(s == t) for s in range(n)] for t in range(n)]
    mult_cache: Dict[Tuple[int, int], List[Dict[int, Fraction]]] = {}

    def mult(k, t):
        key = (k, t)
        if key not in mult_cache:
            mult_cache[key] = A.multiplication_rows(k, unit[t])
        return mult_cache[key]

    def diff_rank(i: int, k: int) -> int:
        """Rank of Lambda^i (x) A_k -> Lambda^{i-1} (x) A_{k+1}."""
        if i == 0 or i > n or hf[k] == 0 or hf[k + 1] == 0:
            return 0
        width = hf[k + 1]
        rows = []
        for S in subsets[i]:
            for a in range(hf[k]):
                row: Dict[int, Fraction] = {}
                for p, s in enumerate(S):
                    sign = -1 if p % 2 else 1
                    T = S[:p] + S[p + 1:]
                    base = sub_index[i - 1][T] * width
                    for j, v in mult(k, s)[a].items():
                        row[base + j] = row.get(base + j, 0) + sign * v
                rows.append({c: v for c, v in row.items() if v})
        return _rank_of(rows, len(subsets[i - 1]) * width, A.mode)

    beta: Dict[Tuple[int, int], int] = {}
    for i in range(n + 1):
        for k in range(top + 1):
            dim = comb(n, i) * hf[k]
            if not dim:
                continue
            out_rank = diff_rank(i, k)
            in_rank = diff_rank(i + 1, k - 1) if k >= 1 else 0
            h = dim - out_rank - in_rank
            if h:
                beta[(i, i + k)] = h
    return BettiTable(n, A.d, beta, source="koszul")


def euler_characteristic_check(table: BettiTable, hf: Sequence[int]) -> bool:
    """sum_{i,j} (-1)^i beta_{ij} t^j / (1-t)^n equals sum hf_k t^k."""
    n = table.n
    top = max((j for _, j in table.beta), default=0)
    num = [0] * (top + 1)
    for (i, j), v in table.beta.items():
        num[j] += (-1) ** i * v
    # multiply hf by (1 - t)^n and compare with the numerator
    prod = [0] * (len(hf) + n)
    for k, h in enumerate(hf):
        for m in range(n + 1):
            prod[k + m] += h * comb(n, m) * (-1) ** m
    size = max(len(prod), len(num))
    prod += [0] * (size - len(prod))
    num += [0] * (size - len(num))
    return prod == num


# -- extremality -------------------------------------------------------------------
def minimal_hf_comparison(general: ArtinianQuotient, other: GradedIdealSlice) -> bool:
    """True when HF of the general quotient is pointwise <= HF of R/J.

    Compared through one degree past the top of the general quotient, where
    the general Hilbert function is already zero for all later degrees.
    """
    top = general.top_degree()
    B = ArtinianQuotient(other, mode=general.mode)
    return all(general.hf_at(k) <= B.hf_at(k) for k in range(top + 2))
