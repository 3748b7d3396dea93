"""Generators of general symmetric ideals and operational genericity checks.

The explicit polynomials f_alpha need many variables (15 already for
d = 3).  For smaller n, :func:`lift_alpha` falls back to a dense seeded
lift of the same invariant shadow sum alpha_lam M_lam.  Either way the
resulting ideal is only called general after :func:`certify_general` has
checked every conclusion the theory predicts for it.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, perm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .duality import (
    GradedIdealSlice,
    ann_degree,
    invariant_labels,
    invariant_subspace,
    perp,
    perp_slice,
    reynolds_image,
    reynolds_preimage,
)
from .exactla import (
    Echelon,
    Subspace,
    difference_components,
    exact_rank_rows,
    integer_row,
    modular_echelon,
    rank_rows,
    sparse_integer_row,
)
from .invariants import (
    ArtinianQuotient,
    count_partitions,
    dim_R,
    expected_a,
    expected_ell,
    hilbert_function,
    noah_bound,
    socle,
    socle_formula,
    standard_lines,
    syzygy_report,
    wlp_check,
)
from .partitions import (
    P,
    Partition,
    as_partition,
    enumerate_partitions,
    is_subpartition,
    stabilizer_multinomial,
    subpartitions,
    t_indices,
)
from .polyring import (
    Monomial,
    Polynomial,
    monomial_basis,
    monomial_index,
    monomial_type,
    monomials_of_type,
    permute,
    reynolds_coordinates,
)

FULL_ENUMERATION_CAP = factorial(8)


# -- admissible binomials ------------------------------------------------------------
@dataclass(frozen=True)
class AdmissibleBinomial:
    lam: Partition
    gamma: Partition
    m_plus: Monomial
    m_minus: Monomial

    def polynomial(self) -> Polynomial:
        n = len(self.m_plus)
        return Polynomial(n, {self.m_plus: 1, self.m_minus: -1})

    def gcd(self) -> Monomial:
        return tuple(min(a, b) for a, b in zip(self.m_plus, self.m_minus))

    def support(self) -> List[int]:
        return [i for i, (a, b) in enumerate(zip(self.m_plus, self.m_minus)) if a or b]

    def is_admissible(self) -> bool:
        g = self.gcd()
        q_plus = [a - b for a, b in zip(self.m_plus, g)]
        q_minus = [a - b for a, b in zip(self.m_minus, g)]
        coprime = all(not (gi and (qp or qm)) for gi, qp, qm in zip(g, q_plus, q_minus))
        return (
            self.m_plus != self.m_minus
            and monomial_type(self.m_plus) == self.lam
            and monomial_type(self.m_minus) == self.lam
            and monomial_type(g) == self.gamma
            and coprime
        )

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "gamma": list(self.gamma),
            "plus": list(self.m_plus),
            "minus": list(self.m_minus),
        }


def binomial_pairs(d: int, tau: Partition) -> List[Tuple[Partition, Partition]]:
    """All (lam, gamma) with lam a partition of d other than tau and gamma a proper subpartition."""
    pairs = []
    for lam in enumerate_partitions(d, d):
        if lam == tau:
            continue
        for gamma in subpartitions(lam):
            if gamma != lam:
                pairs.append((lam, gamma))
    return pairs


def min_vars_for_construction(d: int, tau: Sequence[int]) -> int:
    """Variables used by :func:`build_f_alpha` for this (d, tau)."""
    tau = as_partition(tau)
    total = d
    for lam, gamma in binomial_pairs(d, tau):
        total += len(gamma) + 2 * (len(lam) - len(gamma))
    return total


def min_vars_any(d: int) -> int:
    return max(min_vars_for_construction(d, tau) for tau in enumerate_partitions(d, d))


# -- the polynomial f_alpha -------------------------------------------------------------
def _infer_degree(length: int) -> int:
    d = 1
    while P(d) < length:
        d += 1
    if P(d) != length:
        raise ValueError(f"alpha has {length} entries, which is not P(d) for any d")
    return d


def _as_alpha(alpha: Sequence, d: Optional[int]) -> Tuple[List[Fraction], int]:
    alpha = [Fraction(a) for a in alpha]
    if d is None:
        d = _infer_degree(len(alpha))
    if len(alpha) != P(d):
        raise ValueError(f"alpha must have P({d}) = {P(d)} entries")
    if not any(alpha):
        raise ValueError("alpha must be nonzero")
    return alpha, d


def tau_of(alpha: Sequence, d: Optional[int] = None) -> Partition:
    """Lex-smallest partition with a nonzero alpha coefficient."""
    alpha, d = _as_alpha(alpha, d)
    for lam, c in zip(enumerate_partitions(d, d), alpha):
        if c:
            return lam
    raise AssertionError("unreachable")


def h_alpha(alpha: Sequence, n: int, d: Optional[int] = None) -> Polynomial:
    alpha, d = _as_alpha(alpha, d)
    if n < d:
        raise ValueError(f"h_alpha needs n >= d = {d}")
    terms = {}
    for lam, c in zip(enumerate_partitions(d, d), alpha):
        if c:
            terms[tuple(lam) + (0,) * (n - len(lam))] = c
    return Polynomial(n, terms)


@dataclass
class ConstructionFAlpha:
    alpha: List[Fraction]
    tau: Partition
    n: int
    d: int
    f: Polynomial
    binomials: List[AdmissibleBinomial]
    allocation: Dict[int, str] = field(default_factory=dict)

    def h(self) -> Polynomial:
        return h_alpha(self.alpha, self.n, self.d)

    def to_json(self) -> dict:
        return {
            "alpha": [str(a) for a in self.alpha],
            "tau": list(self.tau),
            "n": self.n,
            "d": self.d,
            "f": self.f.to_json(),
            "binomials": [b.to_json() for b in self.binomials],
            "allocation": {f"x{k + 1}": v for k, v in sorted(self.allocation.items())},
        }


def build_f_alpha(alpha: Sequence, n: int, d: Optional[int] = None) -> ConstructionFAlpha:
    """f_alpha = h_alpha + sum of one admissible binomial per (lam, gamma), lam != tau.

    Variables x_1..x_d are reserved for h_alpha.  Each binomial takes fresh
    variables in increasing order: first the shared block carrying gamma,
    then the block of m_plus, then the block of m_minus.
    """
    alpha, d = _as_alpha(alpha, d)
    tau = tau_of(alpha, d)
    need = min_vars_for_construction(d, tau)
    if n < need:
        raise ValueError(f"construction for d={d}, tau={tau} requires n >= {need} (got n={n})")
    allocation = {i: "h" for i in range(d)}
    binomials = []
    f = h_alpha(alpha, n, d)
    nxt = d
    for lam, gamma in binomial_pairs(d, tau):
        T = t_indices(lam, gamma)
        plus = [0] * n
        minus = [0] * n
        shared = [k for k in range(1, len(lam) + 1) if k in T]
        free = [k for k in range(1, len(lam) + 1) if k not in T]
        label = f"b({list(lam)},{list(gamma)})"
        for k in shared:
            plus[nxt] = minus[nxt] = lam[k - 1]
            allocation[nxt] = label + ":shared"
            nxt += 1
        for k in free:
            plus[nxt] = lam[k - 1]
            allocation[nxt] = label + ":plus"
            nxt += 1
        for k in free:
            minus[nxt] = lam[k - 1]
            allocation[nxt] = label + ":minus"
            nxt += 1
        b = AdmissibleBinomial(lam, gamma, tuple(plus), tuple(minus))
        if not b.is_admissible():
            raise AssertionError(f"allocator produced a non-admissible binomial {b}")
        binomials.append(b)
        f = f + b.polynomial()
    return ConstructionFAlpha(alpha, tau, n, d, f, binomials, allocation)


def dense_lift(alpha: Sequence, n: int, rng: np.random.Generator, bound: int = 100,
               d: Optional[int] = None) -> Polynomial:
    """h_alpha plus a random form g with rho(g) = 0.

    Within each type block, g has random coefficients on the non-representative
    monomials and minus their sum on x^lam, so every block sums to zero.
    """
    alpha, d = _as_alpha(alpha, d)
    terms: Dict[Monomial, Fraction] = {}
    for lam, c in zip(enumerate_partitions(d, d), alpha):
        if len(lam) > n:
            continue
        rep = tuple(lam) + (0,) * (n - len(lam))
        total = Fraction(0)
        for e in monomials_of_type(lam, n):
            if e == rep:
                continue
            v = int(rng.integers(-bound, bound + 1))
            terms[e] = Fraction(v)
            total += v
        terms[rep] = c - total
    return Polynomial(n, terms)


def lift_alpha(alpha: Sequence, n: int, seed: int = 0, bound: int = 100,
               d: Optional[int] = None) -> Tuple[Polynomial, str]:
    """A degree-d form with rho(f) = sum alpha_lam M_lam.

    Returns (f, kind) with kind "f_alpha" when the explicit construction fits
    in n variables and "dense_lift" otherwise.
    """
    alpha, d = _as_alpha(alpha, d)
    tau = tau_of(alpha, d)
    if n >= min_vars_for_construction(d, tau):
        return build_f_alpha(alpha, n, d).f, "f_alpha"
    rng = np.random.default_rng([seed, n, d])
    return dense_lift(alpha, n, rng, bound, d), "dense_lift"


def pad_polynomial(f: Polynomial, n: int) -> Polynomial:
    """View f in R_m inside R_n (n >= m) by adding unused variables."""
    if n < f.n:
        raise ValueError("cannot drop variables")
    extra = (0,) * (n - f.n)
    return Polynomial(n, {e + extra: c for e, c in f.terms.items()}, f.dual)


def random_alpha(d: int, r: int, seed: int, bound: int = 100) -> List[List[int]]:
    """r linearly independent integer vectors in [-bound, bound]^P(d), seeded."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    k = P(d)
    if not 1 <= r <= k:
        raise ValueError(f"need 1 <= r <= P(d) = {k}")
    rng = np.random.default_rng(seed)
    while True:
        rows = rng.integers(-bound, bound + 1, size=(r, k)).tolist()
        if exact_rank_rows([integer_row(x) for x in rows], k) == r:
            return [[int(v) for v in x] for x in rows]


def alpha_to_U(alphas: Sequence[Sequence], n: int, d: int) -> Subspace:
    """U = span(sum alpha_lam M_lam) in m-coordinates: alpha_lam / #type(lam)."""
    labels = invariant_labels(n, d)
    full = enumerate_partitions(d, d).entries
    rows = []
    for alpha in alphas:
        coords = dict(zip(full, (Fraction(a) for a in alpha)))
        rows.append([coords.get(lam, Fraction(0)) / stabilizer_multinomial(lam, n) for lam in labels])
    return invariant_subspace(rows, n, d)


# -- orbit spans -------------------------------------------------------------------
def _row_of(f: Polynomial, idx: Dict[Monomial, int]) -> Dict[int, Fraction]:
    return {idx[e]: c for e, c in f.terms.items()}


def orbit_images(f: Polynomial) -> Iterable[Polynomial]:
    """Distinct sigma.f, enumerated by injective maps of f's support into [n]."""
    n = f.n
    support = f.support_variables()
    for image in itertools.permutations(range(n), len(support)):
        mapping = dict(zip(support, image))
        terms = {}
        for e, c in f.terms.items():
            new = [0] * n
            for i in support:
                if e[i]:
                    new[mapping[i]] = e[i]
            terms[tuple(new)] = c
        yield Polynomial._raw(n, terms, False)


def _orbit_count(f: Polynomial) -> int:
    return perm(f.n, len(f.support_variables()))


def orbit_span(V, n: int, d: Optional[int] = None, seed: int = 0, mode: str = "exact") -> GradedIdealSlice:
    """[(V)_{S_n}]_d, the span of all permutations of a basis of V.

    The span always sits inside the container {f : rho(f) in rho(V)}.  Random
    permutations are tried first; once their rank reaches the container's
    dimension the two spaces coincide.  Otherwise every image is enumerated,
    which is refused beyond 8! images per generator.
    """
    polys = _as_polys(V, n, d)
    if not polys:
        return GradedIdealSlice(n, d if d is not None else 0, Subspace.zero(monomial_basis(n, d or 0)))
    d = polys[0].degree()
    basis = monomial_basis(n, d)
    idx = monomial_index(n, d)
    labels = invariant_labels(n, d)
    # rho(f) in M-coordinates, converted to m-coordinates
    U = invariant_subspace(
        [[reynolds_coordinates(f).get(lam, 0) / stabilizer_multinomial(lam, n) for lam in labels]
         for f in polys], n, d)
    container = reynolds_preimage(U, n, d)
    target = container.dim()

    rng = np.random.default_rng([seed, n, d, 7919])
    rows = [sparse_integer_row(_row_of(f, idx)) for f in polys]
    budget = min(4 * target + 20, sum(_orbit_count(f) for f in polys))
    batch = max(8, target // 2)
    while len(rows) < budget:
        for _ in range(batch):
            f = polys[len(rows) % len(polys)]
            rows.append(sparse_integer_row(_row_of(permute(f, rng.permutation(n).tolist()), idx)))
        if len(rows) >= target and len(modular_echelon(rows, len(basis))) >= target:
            return container

    total = sum(_orbit_count(f) for f in polys)
    if any(_orbit_count(f) > FULL_ENUMERATION_CAP for f in polys):
        raise ValueError(
            f"full orbit enumeration needs {total} images (cap {FULL_ENUMERATION_CAP}); "
            "use the structured generators instead"
        )
    ech = Echelon(len(basis))
    for f in polys:
        for g in orbit_images(f):
            ech.add(sparse_integer_row(_row_of(g, idx)))
            if len(ech) == target:
                return container
    return GradedIdealSlice(n, d, Subspace(basis, ech.rref()))


def _as_polys(V, n: int, d: Optional[int]) -> List[Polynomial]:
    if isinstance(V, GradedIdealSlice):
        return V.polynomials()
    if isinstance(V, Subspace):
        if d is None:
            d = sum(V.labels[0]) if V.labels else 0
        from .polyring import from_coordinates

        return [from_coordinates(r, V.labels) for r in V.basis]
    polys = [f for f in V if f]
    for f in polys:
        if f.n != n or f.dual or not f.is_homogeneous():
            raise ValueError("V must consist of homogeneous forms of R in n variables")
    degs = {f.degree() for f in polys}
    if len(degs) > 1:
        raise ValueError("V must live in a single degree")
    return polys


def collapse_to_lowest_degree(polys: Sequence[Polynomial], n: int) -> dict:
    """Check that adding higher-degree forms does not enlarge the ideal of a general V_{d1}.

    For each higher-degree form g, test g in [(V_{d1})]_{deg g} = R_{deg g - d1} (V_{d1})_{S_n}.
    """
    by_degree: Dict[int, List[Polynomial]] = {}
    for f in polys:
        by_degree.setdefault(f.degree(), []).append(f)
    d1 = min(by_degree)
    low = orbit_span(by_degree[d1], n)
    A = ArtinianQuotient(low)
    out = {"lowest_degree": d1, "contained": {}}
    for k, forms in sorted(by_degree.items()):
        if k == d1:
            continue
        ok = True
        for g in forms:
            vec: Dict[int, Fraction] = {}
            for e, c in g.terms.items():
                for j, v in A.normal_form(k, e).items():
                    vec[j] = vec.get(j, 0) + c * v
            if any(vec.values()):
                ok = False
        out["contained"][k] = ok
    out["collapses"] = all(out["contained"].values())
    return out


# -- structured generators -------------------------------------------------------------
def sigma_m(m: Monomial, tau: Partition) -> List[int]:
    """The fixed permutation with sigma(j) = i_j for m = prod x_{i_j}^{tau_j}.

    Equal parts of tau take the variable indices of m in increasing order;
    the remaining positions go to the unused indices in increasing order.
    """
    n = len(m)
    used: List[int] = []
    taken = set()
    for part in tau:
        i = next(i for i in range(n) if m[i] == part and i not in taken)
        used.append(i)
        taken.add(i)
    rest = [i for i in range(n) if i not in taken]
    return used + rest


def psi_generators(alphas: Sequence[Sequence], n: int, d: Optional[int] = None) -> List[ConstructionFAlpha]:
    """The constructions f_{alpha^1}, ..., f_{alpha^r} for the rows of an alpha matrix."""
    return [build_f_alpha(a, n, d) for a in alphas]


def generator_identity(alphas: Sequence[Sequence], n: int, d: Optional[int] = None) -> dict:
    """Compare the span of the structured generators with [Ann_R(U^perp)]_d.

    Structured generators: the S_n-orbits of every binomial b(lam, gamma) and
    sigma_m . h_alpha for each monomial m of type tau.  Orbits of a binomial
    m - m' are differences of monomials, so their span has dimension
    (#monomials touched) - (#connected components); the h-rows are then
    reduced modulo that span by summing coefficients over each component.
    Containment in the annihilator is checked by exact contraction against a
    basis of U^perp, so containment plus equal dimension proves equality.
    """
    constructions = psi_generators(alphas, n, d)
    d = constructions[0].d
    basis = monomial_basis(n, d)
    idx = monomial_index(n, d)

    edges = []
    for con in constructions:
        for b in con.binomials:
            for g in orbit_images(b.polynomial()):
                plus = [e for e, c in g.terms.items() if c > 0][0]
                minus = [e for e, c in g.terms.items() if c < 0][0]
                edges.append((idx[plus], idx[minus]))
    edge_rank, find = difference_components(edges)

    h_rows: List[Dict[int, Fraction]] = []
    for con in constructions:
        h = con.h()
        for m in monomials_of_type(con.tau, n):
            h_rows.append(_row_of(permute(h, sigma_m(m, con.tau)), idx))
    comp_index: Dict[int, int] = {}
    reduced = []
    for row in h_rows:
        red: Dict[int, Fraction] = {}
        for c, v in row.items():
            key = find(c)
            j = comp_index.setdefault(key, len(comp_index))
            red[j] = red.get(j, 0) + v
        reduced.append(sparse_integer_row(red))
    h_rank = exact_rank_rows(reduced, max(len(comp_index), 1))
    span_dim = edge_rank + h_rank

    U = alpha_to_U(alphas, n, d)
    W = perp(U)
    target = ann_degree(perp_slice(U, n, d))
    expected = dim_R(n, d) - W.dim()

    # containment: each generator pairs to zero with every M-basis element of W
    def pairs_to_zero(row: Dict[int, Fraction]) -> bool:
        by_type: Dict[Partition, Fraction] = {}
        for c, v in row.items():
            lam = monomial_type(basis[c])
            by_type[lam] = by_type.get(lam, 0) + v
        for w in W.basis:
            total = sum((wv * by_type.get(lam, 0) / stabilizer_multinomial(lam, n)
                         for lam, wv in zip(W.labels, w) if wv), Fraction(0))
            if total:
                return False
        return True

    contained = all(pairs_to_zero({a: 1, b: -1}) for a, b in edges)
    contained = contained and all(pairs_to_zero(r) for r in h_rows)
    return {
        "n": n,
        "d": d,
        "r": len(alphas),
        "taus": [list(c.tau) for c in constructions],
        "binomial_orbit_rank": edge_rank,
        "h_rank_modulo_binomials": h_rank,
        "span_dim": span_dim,
        "ann_dim": target.dim(),
        "expected_dim": expected,
        "contained": contained,
        "equal": contained and span_dim == target.dim(),
    }


# -- certification -------------------------------------------------------------------
@dataclass
class GenericityCertificate:
    n: int
    d: int
    r: int
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, dict] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def record(self, name: str, ok: bool, computed, expected) -> None:
        self.checks[name] = bool(ok)
        self.details[name] = {"passed": bool(ok), "computed": computed, "expected": expected}

    def failed(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "r": self.r,
            "passed": self.passed,
            "checks": self.details,
            "warnings": self.warnings,
        }


CHECK_NAMES = (
    "dim_Id",
    "hf_at_d_plus_1",
    "syzygy_dim",
    "property_P",
    "property_Q",
    "socle_poly",
    "generated_in_degree_d",
    "wlp",
)


def certify_general(V, n: int, d: Optional[int] = None, seed: int = 0, mode: str = "exact",
                    return_quotient: bool = False):
    """Run every generality check on the symmetric ideal generated by V."""
    polys = _as_polys(V, n, d)
    if not polys:
        raise ValueError("V must be nonzero")
    d = polys[0].degree()
    r = exact_rank_rows([sparse_integer_row(_row_of(f, monomial_index(n, d))) for f in polys],
                        dim_R(n, d))
    cert = GenericityCertificate(n, d, r)
    if n < noah_bound(d, r):
        cert.warnings.append(f"n={n} is below the bound {noah_bound(d, r)}; conclusions are not guaranteed")
    if r > count_partitions(d, n):
        cert.warnings.append(f"r={r} exceeds P_n(d)={count_partitions(d, n)}")

    a = expected_a(n, d, r)
    ell = expected_ell(n, d, r)
    I = orbit_span(polys, n, seed=seed, mode=mode)
    cert.record("dim_Id", I.dim() == dim_R(n, d) - a, I.dim(), dim_R(n, d) - a)

    A = ArtinianQuotient(I, mode=mode)
    hf_next = A.hf_at(d + 1)
    cert.record("hf_at_d_plus_1", hf_next == 0, hf_next, 0)

    U = reynolds_image(I)
    W = perp(U)
    syz = syzygy_report(W, n, d)
    cert.record("syzygy_dim", syz.dim_L == ell, syz.dim_L, ell)
    cert.record("property_P", syz.property_P and syz.property_P == (syz.dim_L == syz.dim_L_tilde),
                {"direct": syz.property_P, "dim_L": syz.dim_L, "dim_L_tilde": syz.dim_L_tilde}, True)
    cert.record("property_Q", syz.property_Q, syz.property_Q, True)

    J = ann_degree(perp_slice(U, n, d))
    generated = J.space == I.space and hf_next == 0
    cert.record("generated_in_degree_d", generated,
                {"ann_equals_orbit_span": J.space == I.space, "hf_d_plus_1": hf_next}, True)

    if hf_next == 0:
        soc = socle(A)
        want = socle_formula(n, d, A.hf_at(d), syz.dim_L)
        cert.record("socle_poly", soc == want, {str(k): v for k, v in soc.items()},
                    {str(k): v for k, v in want.items()})
        results = [wlp_check(A, line) for line in standard_lines(n, seed)]
        cert.record("wlp", all(x["maximal_rank"] for x in results),
                    [x["maximal_rank"] for x in results], True)
    else:
        cert.record("socle_poly", False, "skipped: A_{d+1} != 0", "formula")
        cert.record("wlp", False, "skipped: A_{d+1} != 0", True)
    if return_quotient:
        return cert, A
    return cert
