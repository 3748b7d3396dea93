"""Exact linear algebra over Q.

Elimination is fraction free: every row is scaled to a primitive integer
vector, and a row is reduced against a pivot row by cross multiplication
followed by division by the content (gcd of entries).  Rows are stored
sparsely as ``{column: int}`` dicts, which keeps the many structured
(mostly zero) pairing and Koszul matrices cheap.

Modular ranks are available as a fast lower bound.  :func:`rank` only
trusts a modular result when it meets a proven upper bound, so the value it
returns is always the exact rank over Q.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

DEFAULT_PRIME = 33554393  # largest prime below 2**25; products fit comfortably in int64
SECOND_PRIME = 33554383

Row = Dict[int, int]


# -- row helpers -------------------------------------------------------------
def _primitive(row: Row) -> Row:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def integer_row(values: Iterable, offset: int = 0) -> Row:
    """Clear denominators of a rational vector, returning a primitive sparse row."""
    entries = [(j + offset, Fraction(v)) for j, v in enumerate(values) if v]
    if not entries:
        return {}
    den = 1
    for _, v in entries:
        den = lcm(den, v.denominator)
    row = {j: int(v * den) for j, v in entries}
    return _primitive(row)


def sparse_integer_row(values: Dict[int, object]) -> Row:
    entries = [(j, Fraction(v)) for j, v in values.items() if v]
    if not entries:
        return {}
    den = 1
    for _, v in entries:
        den = lcm(den, v.denominator)
    return _primitive({j: int(v * den) for j, v in entries})


def _eliminate(row: Row, pivot_row: Row, col: int) -> Row:
    a = pivot_row[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {k: a * v for k, v in row.items()}
    for k, v in pivot_row.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return _primitive(out) if out else out


class Echelon:
    """Incremental fraction-free row echelon form.

    Rows are inserted one at a time; each new row is reduced at its leading
    column until that column is not a pivot.  Distinct leading columns make
    the stored rows independent, so ``len(self)`` is the rank.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Row] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        while row:
            lead = min(row)
            prow = self.pivots.get(lead)
            if prow is None:
                return row
            row = _eliminate(row, prow, lead)
        return row

    def add(self, row: Row) -> bool:
        """Insert ``row``; return True if it enlarged the span."""
        row = self.reduce(dict(row))
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def contains(self, row: Row) -> bool:
        return not self.reduce(dict(row))

    def full(self) -> bool:
        return len(self.pivots) == self.ncols

    def rref(self) -> List[List[Fraction]]:
        """Reduced row echelon form with unit pivots, rows sorted by pivot column."""
        cols = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in cols}
        # back substitution from the right so earlier rows see reduced later rows
        for i in reversed(range(len(cols))):
            c = cols[i]
            prow = rows[c]
            for c2 in cols[:i]:
                r = rows[c2]
                if c in r:
                    rows[c2] = _eliminate(r, prow, c)
        out = []
        for c in cols:
            r = rows[c]
            p = r[c]
            dense = [Fraction(0)] * self.ncols
            for k, v in r.items():
                dense[k] = Fraction(v, p)
            out.append(dense)
        return out


# -- matrices ----------------------------------------------------------------------
class RatMatrix:
    """Dense exact rational matrix (rows of Fractions)."""

    def __init__(self, rows: Sequence[Sequence], ncols: Optional[int] = None):
        self.rows: List[List[Fraction]] = [[Fraction(v) for v in r] for r in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.nrows = len(self.rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, k: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(k)] for i in range(k)], k)

    @classmethod
    def zeros(cls, r: int, c: int) -> "RatMatrix":
        return cls([[0] * c for _ in range(r)], c)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"RatMatrix({self.nrows}x{self.ncols})"

    def transpose(self) -> "RatMatrix":
        return RatMatrix([list(col) for col in zip(*self.rows)] if self.rows else [], self.nrows)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows)) if other.rows else [()] * 0
            return RatMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
                other.ncols,
            )
        vec = [Fraction(v) for v in other]
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return [sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows]

    def integer_rows(self) -> List[Row]:
        return [integer_row(r) for r in self.rows]

    def rank(self) -> int:
        return rank(self)

    def rref(self) -> "RatMatrix":
        return RatMatrix(rref_rows(self.integer_rows(), self.ncols), self.ncols)

    def kernel(self) -> "Subspace":
        return kernel(self)

    def to_json(self) -> list:
        return [[_frac_str(v) for v in r] for r in self.rows]


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _as_rows(M) -> Tuple[List[Row], int]:
    if isinstance(M, RatMatrix):
        return M.integer_rows(), M.ncols
    rows = [list(r) for r in M]
    ncols = len(rows[0]) if rows else 0
    return [integer_row(r) for r in rows], ncols


def echelon_of(rows: Iterable[Row], ncols: int) -> Echelon:
    ech = Echelon(ncols)
    for r in rows:
        if r:
            ech.add(r)
            if ech.full():
                break
    return ech


def exact_rank_rows(rows: Sequence[Row], ncols: int) -> int:
    return len(echelon_of(rows, ncols))


def rref_rows(rows: Iterable[Row], ncols: int) -> List[List[Fraction]]:
    return echelon_of(rows, ncols).rref()


# -- modular arithmetic ------------------------------------------------------------
def _mod_matrix(rows: Sequence[Row], ncols: int, p: int) -> np.ndarray:
    A = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        for j, v in r.items():
            A[i, j] = v % p
    return A


def modular_echelon(rows: Sequence[Row], ncols: int, p: int = DEFAULT_PRIME) -> List[int]:
    """Indices of rows that are independent mod p (chosen greedily in order).

    The selected rows are independent mod p and therefore independent over Q;
    their count is the rank mod p.
    """
    if not rows or not ncols:
        return []
    A = _mod_matrix(rows, ncols, p)
    order = np.arange(A.shape[0])
    chosen: List[int] = []
    r = 0
    for c in range(ncols):
        if r == A.shape[0]:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
            order[[r, k]] = order[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        below = A[r + 1:, c].copy()
        mask = below != 0
        if mask.any():
            idx = np.nonzero(mask)[0] + r + 1
            A[idx] = (A[idx] - (below[mask][:, None] * A[r][None, :]) % p) % p
        chosen.append(int(order[r]))
        r += 1
    return sorted(chosen)


def modular_rank(M, p: int = DEFAULT_PRIME) -> int:
    """Rank of M reduced mod p; a lower bound for the rank over Q.

    Raises ValueError if p divides the denominator of any entry.
    """
    if isinstance(M, RatMatrix):
        raw = M.rows
        ncols = M.ncols
    else:
        raw = [list(r) for r in M]
        ncols = len(raw[0]) if raw else 0
    rows: List[Row] = []
    for r in raw:
        row: Row = {}
        for j, v in enumerate(r):
            v = Fraction(v)
            if not v:
                continue
            if v.denominator % p == 0:
                raise ValueError(f"prime {p} divides a denominator ({v})")
            row[j] = v.numerator * pow(v.denominator, -1, p) % p
        rows.append(row)
    return len(modular_echelon(rows, ncols, p))


# -- exact rank with modular shortcut --------------------------------------------
def rank_rows(rows: Sequence[Row], ncols: int, upper_bound: Optional[int] = None,
              mode: str = "exact") -> int:
    """Exact rank of integer rows.

    A modular rank is a lower bound; when it reaches a proven upper bound
    (the matrix size or a caller-supplied bound) the rank is settled.  In
    ``fast`` mode two agreeing primes are accepted without exact elimination.
    """
    rows = [r for r in rows if r]
    bound = min(len(rows), ncols)
    if upper_bound is not None:
        bound = min(bound, upper_bound)
    if bound == 0:
        return 0
    small = len(rows) * ncols <= 400
    if small:
        return exact_rank_rows(rows, ncols)
    low = len(modular_echelon(rows, ncols, DEFAULT_PRIME))
    if low >= bound:
        return bound
    if mode == "fast":
        other = len(modular_echelon(rows, ncols, SECOND_PRIME))
        if other == low:
            return low
    return exact_rank_rows(rows, ncols)


def rank(M, upper_bound: Optional[int] = None, mode: str = "exact") -> int:
    rows, ncols = _as_rows(M)
    return rank_rows(rows, ncols, upper_bound, mode)


def rref(M) -> RatMatrix:
    rows, ncols = _as_rows(M)
    return RatMatrix(rref_rows(rows, ncols), ncols)


def kernel_basis_rows(rows: Sequence[Row], ncols: int) -> List[List[Fraction]]:
    """Basis of {v : M v = 0}, returned directly in reduced row echelon form.

    Row-reduce M with the column order reversed, so each row ends in a unit
    at its last nonzero column q.  For every other column f the vector
    e_f - sum_{q > f} M[q, f] e_q lies in the kernel; its leading entry is
    at f and every other such vector vanishes at f, so these vectors already
    form the reduced echelon basis of the kernel.
    """
    flipped = [{ncols - 1 - k: v for k, v in r.items()} for r in rows if r]
    R = rref_rows(flipped, ncols)
    trailing: Dict[int, List[Fraction]] = {}
    for r in R:
        q = next(j for j, v in enumerate(r) if v)
        trailing[ncols - 1 - q] = r[::-1]
    zero = Fraction(0)
    basis = []
    for f in range(ncols):
        if f in trailing:
            continue
        v = [zero] * ncols
        v[f] = Fraction(1)
        for q, r in trailing.items():
            if r[f]:
                v[q] = -r[f]
        basis.append(v)
    return basis


def kernel(M, labels: Optional[Sequence] = None) -> "Subspace":
    rows, ncols = _as_rows(M)
    if labels is None:
        labels = list(range(ncols))
    return Subspace(labels, kernel_basis_rows(rows, ncols))


# -- subspaces ---------------------------------------------------------------------
class Subspace:
    """Row space of a rational matrix over a labelled ordered basis.

    Stored in reduced row echelon form, which makes equality canonical.
    """

    __slots__ = ("labels", "basis")

    def __init__(self, labels: Sequence, basis: Sequence[Sequence[Fraction]]):
        self.labels = tuple(labels)
        self.basis = tuple(tuple(r) for r in basis)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], labels: Sequence) -> "Subspace":
        labels = tuple(labels)
        irows = [integer_row(r) for r in rows]
        return cls(labels, rref_rows(irows, len(labels)))

    @classmethod
    def from_integer_rows(cls, rows: Iterable[Row], labels: Sequence) -> "Subspace":
        labels = tuple(labels)
        return cls(labels, rref_rows(rows, len(labels)))

    @classmethod
    def zero(cls, labels: Sequence) -> "Subspace":
        return cls(labels, [])

    @classmethod
    def full(cls, labels: Sequence) -> "Subspace":
        k = len(labels)
        return cls(labels, [[Fraction(int(i == j)) for j in range(k)] for i in range(k)])

    @property
    def ambient_dim(self) -> int:
        return len(self.labels)

    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.labels == other.labels and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.labels, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim()}, ambient={self.ambient_dim})"

    def matrix(self) -> RatMatrix:
        return RatMatrix(self.basis, self.ambient_dim)

    def pivot_columns(self) -> List[int]:
        return [next(j for j, v in enumerate(r) if v) for r in self.basis]

    def _echelon(self) -> Echelon:
        return echelon_of([integer_row(r) for r in self.basis], self.ambient_dim)

    def contains_vector(self, vec: Sequence) -> bool:
        v = [Fraction(x) for x in vec]
        for r, pc in zip(self.basis, self.pivot_columns()):
            c = v[pc]
            if c:
                v = [a - c * b for a, b in zip(v, r)]
        return not any(v)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(r) for r in other.basis)

    def join(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_rows(list(self.basis) + list(other.basis), self.labels)

    def orthogonal_complement(self) -> "Subspace":
        """Coordinate complement {v : <v, b> = 0 for all basis rows b}."""
        rows = [integer_row(r) for r in self.basis]
        return Subspace(self.labels, kernel_basis_rows(rows, self.ambient_dim))

    def _check(self, other: "Subspace") -> None:
        if self.labels != other.labels:
            raise ValueError("subspaces live in different ambient spaces")

    def to_json(self) -> dict:
        return {
            "labels": [list(l) if isinstance(l, tuple) else l for l in self.labels],
            "echelon": [[_frac_str(v) for v in r] for r in self.basis],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Subspace":
        labels = [tuple(l) if isinstance(l, list) else l for l in data["labels"]]
        return cls(labels, [[Fraction(v) for v in r] for r in data["echelon"]])


# -- union-find rank for difference matrices ----------------------------------------
class _DisjointSets:
    def __init__(self):
        self.parent: Dict = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def difference_components(pairs: Iterable[Tuple[object, object]]):
    """Connected components of the graph whose edges are the pairs (a, b).

    The span of the vectors e_a - e_b has dimension
    (#vertices touched) - (#components); returns ``(rank, find)`` where
    ``find`` maps a vertex to its component representative.
    """
    ds = _DisjointSets()
    rank_count = 0
    for a, b in pairs:
        if ds.union(a, b):
            rank_count += 1
    return rank_count, ds.find
