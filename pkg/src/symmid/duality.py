"""Inverse systems in a single graded piece.

Ideals generated in degree d are only ever materialised as their degree-d
slice, and inverse systems as their degree -d slice; everything above
degree -d in S is handled by bookkeeping rather than stored.

Two coordinate systems appear:

* monomial coordinates on R_d or S_{-d}, ordered by :func:`monomial_basis`;
* invariant coordinates indexed by partitions of d with at most n parts
  (lex ascending).  Subspaces of R'_d use the m-basis, subspaces of S'_{-d}
  use the M-basis, so that the pairing between them is the plain dot
  product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence

from .exactla import (
    Echelon,
    Subspace,
    integer_row,
    kernel_basis_rows,
    rank_rows,
    sparse_integer_row,
)
from .partitions import Partition, enumerate_partitions, stabilizer_multinomial
from .polyring import (
    M_basis,
    Polynomial,
    contract,
    coordinates,
    from_coordinates,
    m_basis,
    monomial_basis,
    monomial_index,
    monomial_type,
    monomials_of_type,
    reynolds,
    invariant_coordinates,
)


def invariant_labels(n: int, d: int) -> tuple:
    return enumerate_partitions(d, n).entries


# -- slice types -------------------------------------------------------------------
@dataclass(frozen=True)
class GradedIdealSlice:
    """Degree-d piece of an ideal, as a subspace of R_d in monomial coordinates."""

    n: int
    d: int
    space: Subspace

    def dim(self) -> int:
        return self.space.dim()

    def polynomials(self) -> List[Polynomial]:
        basis = monomial_basis(self.n, self.d)
        return [from_coordinates(r, basis) for r in self.space.basis]

    @classmethod
    def from_polynomials(cls, polys: Sequence[Polynomial], n: int, d: int) -> "GradedIdealSlice":
        return cls(n, d, _span_polys(polys, n, d))

    @classmethod
    def power_of_maximal_ideal(cls, n: int, d: int) -> "GradedIdealSlice":
        return cls(n, d, Subspace.full(monomial_basis(n, d)))

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "space": self.space.to_json()}


@dataclass(frozen=True)
class InverseSystemSlice:
    """Degree -d piece of an inverse system, as a subspace of S_{-d}."""

    n: int
    d: int
    space: Subspace

    def dim(self) -> int:
        return self.space.dim()

    def polynomials(self) -> List[Polynomial]:
        basis = monomial_basis(self.n, self.d)
        return [from_coordinates(r, basis, dual=True) for r in self.space.basis]

    @classmethod
    def from_polynomials(cls, polys: Sequence[Polynomial], n: int, d: int) -> "InverseSystemSlice":
        return cls(n, d, _span_polys(polys, n, d))

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "space": self.space.to_json()}


def _span_polys(polys: Sequence[Polynomial], n: int, d: int) -> Subspace:
    basis = monomial_basis(n, d)
    idx = monomial_index(n, d)
    rows = []
    for f in polys:
        row = {}
        for e, c in f.terms.items():
            if e not in idx:
                raise ValueError(f"term {e} is not of degree {d} in {n} variables")
            row[idx[e]] = c
        rows.append(sparse_integer_row(row))
    return Subspace.from_integer_rows(rows, basis)


# -- pairing ------------------------------------------------------------------------
def pairing_matrix(F: Sequence[Polynomial], G: Sequence[Polynomial]) -> List[List[Fraction]]:
    """Matrix of f o g (degree-0 values) for f in F (rows) and g in G (columns)."""
    out = []
    for f in F:
        row = []
        for g in G:
            h = contract(f, g)
            row.append(h.coefficient((0,) * f.n))
        out.append(row)
    return out


def ann_degree(W: InverseSystemSlice) -> GradedIdealSlice:
    """[Ann_R(W + S_{>= -d+1})]_d.

    The pairing of a degree-d monomial with a degree -d dual monomial is 1
    when the exponents agree and 0 otherwise, so the pairing matrix of W
    against the monomials of R_d is W's coordinate matrix and the
    annihilator is its kernel.
    """
    labels = monomial_basis(W.n, W.d)
    rows = [integer_row(r) for r in W.space.basis]
    return GradedIdealSlice(W.n, W.d, Subspace(labels, kernel_basis_rows(rows, len(labels))))


def inverse_system_degree(I: GradedIdealSlice) -> InverseSystemSlice:
    """(I^{-1})_{-d}: dual forms of degree -d killed by every element of I_d."""
    labels = monomial_basis(I.n, I.d)
    rows = [integer_row(r) for r in I.space.basis]
    return InverseSystemSlice(I.n, I.d, Subspace(labels, kernel_basis_rows(rows, len(labels))))


# -- invariant subspaces ------------------------------------------------------------
def invariant_subspace(rows: Sequence[Sequence], n: int, d: int) -> Subspace:
    """Span of coordinate vectors over the partitions of d with at most n parts."""
    return Subspace.from_rows(rows, invariant_labels(n, d))


def perp(U: Subspace) -> Subspace:
    """U^perp in S'_{-d} (M-coordinates) for U in R'_d (m-coordinates).

    Since m_lam o M_nu is the Kronecker delta, this is the coordinate
    orthogonal complement.
    """
    return U.orthogonal_complement()


def invariant_to_monomial(U: Subspace, n: int, d: int, basis: str = "m", dual: bool = False) -> Subspace:
    """Express an invariant subspace (m- or M-coordinates) in monomial coordinates."""
    labels = monomial_basis(n, d)
    idx = monomial_index(n, d)
    parts = list(U.labels)
    rows = []
    for vec in U.basis:
        row: Dict[int, Fraction] = {}
        for lam, c in zip(parts, vec):
            if not c:
                continue
            if basis == "M":
                c = c / stabilizer_multinomial(lam, n)
            elif basis != "m":
                raise ValueError("basis must be 'm' or 'M'")
            for e in monomials_of_type(lam, n):
                row[idx[e]] = row.get(idx[e], 0) + c
        rows.append(sparse_integer_row(row))
    return Subspace.from_integer_rows(rows, labels)


def invariant_polynomials(U: Subspace, n: int, basis: str = "m", dual: bool = False) -> List[Polynomial]:
    out = []
    for vec in U.basis:
        f = Polynomial(n, {}, dual)
        for lam, c in zip(U.labels, vec):
            if c:
                b = m_basis(lam, n, dual) if basis == "m" else M_basis(lam, n, dual)
                f = f + b.scale(c)
        out.append(f)
    return out


def perp_slice(U: Subspace, n: int, d: int) -> InverseSystemSlice:
    """U^perp as an inverse-system slice inside S_{-d}."""
    return InverseSystemSlice(n, d, invariant_to_monomial(perp(U), n, d, basis="M", dual=True))


def reynolds_image(I: GradedIdealSlice) -> Subspace:
    """rho(I_d) in m-coordinates, computed by applying the Reynolds operator."""
    rows = []
    for f in I.polynomials():
        rows.append(invariant_coordinates(reynolds(f), I.d, basis="m"))
    return invariant_subspace(rows, I.n, I.d)


def reynolds_preimage(U: Subspace, n: int, d: int) -> GradedIdealSlice:
    """{f in R_d : rho(f) in U}, built as ker(rho) plus lifts of a basis of U.

    rho(x^lam) = M_lam = m_lam / #type(lam), so #type(lam) * x^lam lifts m_lam.
    """
    basis = monomial_basis(n, d)
    idx = monomial_index(n, d)
    labels = list(invariant_labels(n, d))
    col_of = {lam: j for j, lam in enumerate(labels)}
    # Reynolds matrix: columns are monomials, rows are partitions (m-coordinates)
    rho_rows: List[Dict[int, Fraction]] = [dict() for _ in labels]
    for i, e in enumerate(basis):
        f = Polynomial(n, {e: 1})
        g = reynolds(f)
        coords = invariant_coordinates(g, d, basis="m")
        for j, c in enumerate(coords):
            if c:
                rho_rows[j][i] = c
    ker = kernel_basis_rows([sparse_integer_row(r) for r in rho_rows], len(basis))
    lifts = []
    for vec in U.basis:
        row: Dict[int, Fraction] = {}
        for lam, c in zip(U.labels, vec):
            if c:
                rep = tuple(lam) + (0,) * (n - len(lam))
                row[idx[rep]] = c * stabilizer_multinomial(lam, n)
        lifts.append(sparse_integer_row(row))
    rows = [integer_row(v) for v in ker] + lifts
    return GradedIdealSlice(n, d, Subspace.from_integer_rows(rows, basis))


def ann_vs_reynolds_preimage(U: Subspace, n: int, d: int) -> bool:
    """Compare [Ann_R(U^perp)]_d with {f in R_d : rho(f) in U}.

    The left side goes through contraction against U^perp; the right side
    through the Reynolds operator, so the two routes share no matrices.
    """
    W = perp(U)
    dual_forms = invariant_polynomials(W, n, basis="M", dual=True)
    mons = [Polynomial(n, {e: 1}) for e in monomial_basis(n, d)]
    pm = pairing_matrix(mons, dual_forms)  # rows: monomials, cols: W basis
    cols = [[pm[i][j] for i in range(len(mons))] for j in range(len(dual_forms))]
    left = Subspace(monomial_basis(n, d), kernel_basis_rows([integer_row(c) for c in cols], len(mons)))
    right = reynolds_preimage(U, n, d).space
    return left == right


# -- invariant inverse system identities -------------------------------------------
def _contraction_span_dim(n: int, target_degree: int, sources: Sequence[Polynomial]) -> int:
    """dim of span{x^c o g : g in sources, deg(x^c o g) = -target_degree}."""
    basis_idx = monomial_index(n, target_degree)
    ech = Echelon(len(basis_idx))
    for g in sources:
        k = -g.degree() - target_degree
        if k < 0:
            continue
        for c in monomial_basis(n, k):
            h = contract(Polynomial(n, {c: 1}), g)
            if h:
                ech.add(sparse_integer_row({basis_idx[e]: v for e, v in h.terms.items()}))
            if ech.full():
                return len(ech)
    return len(ech)


def invariant_inverse_identities(I: GradedIdealSlice, U: Subspace, full_invariant_degree: int | None = None) -> dict:
    """Check the degree-level inverse-system identities for an invariant shadow.

    (i)   (I^{-1})_{-d} equals U^perp viewed in S_{-d};
    (ii)  R o (U^perp + S'_{>= -d+1}) covers S_{-d+1};
    (iii) rho(I_d) equals U.

    (ii) is evaluated literally: in degree -d+1 the module R o (W + S'_{>=-d+1})
    is R_1 o W + S'_{-d+1}.  The report also evaluates the variant that
    contracts invariants of every degree down to -d+1 (up to
    ``full_invariant_degree``, default n*(d-1)), which is where R o S' = S
    comes from.
    """
    n, d = I.n, I.d
    report: Dict[str, object] = {"n": n, "d": d}

    inv = inverse_system_degree(I)
    W_slice = perp_slice(U, n, d)
    report["dim_inverse_system"] = inv.dim()
    report["dim_U_perp"] = W_slice.dim()
    report["identity_i"] = inv.space == W_slice.space

    target = d - 1
    dim_target = len(monomial_basis(n, target))
    W_forms = W_slice.polynomials()
    low_invariants = [M_basis(lam, n, dual=True) for lam in invariant_labels(n, target)]
    literal = _contraction_span_dim(n, target, W_forms + low_invariants)
    report["dim_S_minus_d_plus_1"] = dim_target
    report["dim_literal_extension"] = literal
    report["identity_ii"] = literal == dim_target

    top = full_invariant_degree if full_invariant_degree is not None else n * max(d - 1, 0)
    sources = list(W_forms) + list(low_invariants)
    for e in range(d + 1, top + 1):
        sources.extend(M_basis(lam, n, dual=True) for lam in invariant_labels(n, e))
    full = _contraction_span_dim(n, target, sources) if target >= 0 else 0
    report["dim_full_invariant_extension"] = full
    report["identity_ii_full_invariants"] = full == dim_target

    report["identity_iii"] = reynolds_image(I) == U
    report["all_hold"] = bool(report["identity_i"] and report["identity_ii"] and report["identity_iii"])
    return report
