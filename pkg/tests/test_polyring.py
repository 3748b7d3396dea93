import itertools
from fractions import Fraction
from math import comb, factorial

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from symmid.partitions import enumerate_partitions, stabilizer_multinomial
from symmid.polyring import (
    M_basis,
    Polynomial,
    contract,
    coordinates,
    delta_restrict,
    from_coordinates,
    invariant_coordinates,
    is_symmetric,
    linear_form,
    m_basis,
    monomial,
    monomial_basis,
    monomials_of_type,
    pairing,
    permute,
    reynolds,
    reynolds_coordinates,
    variable,
    zero,
)


def to_sympy(f):
    xs = sp.symbols(f"x1:{f.n + 1}")
    return sum(sp.Rational(c.numerator, c.denominator) * sp.prod([x ** k for x, k in zip(xs, e)])
               for e, c in f.terms.items()), xs


def average_over_group(f):
    """Reynolds operator by brute force over all n! permutations."""
    total = zero(f.n, f.dual)
    perms = list(itertools.permutations(range(f.n)))
    for sigma in perms:
        total = total + permute(f, sigma)
    return total / len(perms)


def polys(n, d, dual=False):
    basis = monomial_basis(n, d)
    return st.lists(st.integers(-5, 5), min_size=len(basis), max_size=len(basis)).map(
        lambda v: from_coordinates(v, basis, dual=dual))


def test_monomial_basis_order_and_size():
    assert monomial_basis(2, 2) == ((2, 0), (1, 1), (0, 2))
    for n, d in [(3, 2), (4, 3), (5, 3)]:
        assert len(monomial_basis(n, d)) == comb(n + d - 1, d)


@pytest.mark.parametrize("lam,n", [((2, 1), 4), ((1, 1, 1), 5), ((3,), 3), ((2, 2, 1), 5), ((1, 1), 6)])
def test_monomials_of_type_vs_permutations(lam, n):
    pad = tuple(lam) + (0,) * (n - len(lam))
    assert set(monomials_of_type(lam, n)) == set(itertools.permutations(pad))
    assert len(monomials_of_type(lam, n)) == stabilizer_multinomial(lam, n)


def test_permute_transposition_and_identity():
    f = monomial((2, 1))
    assert permute(f, (1, 0)) == monomial((1, 2))
    g = linear_form([1, 2, 3]) * linear_form([3, 0, 1])
    assert permute(g, (0, 1, 2)) == g


@pytest.mark.parametrize("lam,n", [((2, 1), 4), ((1, 1), 3), ((3,), 3)])
def test_m_basis_is_invariant(lam, n):
    m = m_basis(lam, n)
    for sigma in itertools.permutations(range(n)):
        assert permute(m, sigma) == m
    assert len(m) == stabilizer_multinomial(lam, n)


def test_m_and_M_examples():
    assert m_basis((2,), 2) == monomial((2, 0)) + monomial((0, 2))
    assert m_basis((1, 1), 3) == monomial((1, 1, 0)) + monomial((1, 0, 1)) + monomial((0, 1, 1))
    assert M_basis((3,), 2) == (monomial((3, 0)) + monomial((0, 3))) / 2


def test_contract_monomial_rules():
    y = monomial((3, 1), dual=True)
    assert contract(monomial((2, 0)), y) == monomial((1, 1), dual=True)
    assert contract(monomial((1, 1)), monomial((2, 0), dual=True)) == 0
    with pytest.raises(ValueError):
        contract(y, monomial((2, 0)))


@given(polys(3, 1), polys(3, 3, dual=True), st.permutations(range(3)))
def test_contract_equivariance(f, g, sigma):
    assert permute(contract(f, g), sigma) == contract(permute(f, sigma), permute(g, sigma))


@given(polys(3, 1), polys(3, 1), polys(3, 3, dual=True))
def test_contract_is_module_action(f, h, g):
    # (f h) o g = f o (h o g)
    assert contract(f * h, g) == contract(f, contract(h, g))


@pytest.mark.parametrize("n,d", [(3, 3), (4, 2), (4, 4), (5, 3), (7, 2), (6, 5)])
def test_m_M_dual_bases(n, d):
    labels = enumerate_partitions(d, n)
    for lam in labels:
        for nu in labels:
            want = Fraction(1) if lam == nu else Fraction(0)
            assert pairing(m_basis(lam, n), M_basis(nu, n, dual=True)) == want


def test_reynolds_examples():
    assert reynolds(monomial((2, 1, 0))) == M_basis((2, 1), 3)
    assert reynolds(m_basis((2, 1), 4)) == m_basis((2, 1), 4)
    b = monomial((2, 1, 0, 0)) - monomial((0, 0, 1, 2))
    assert reynolds(b) == 0


@given(polys(3, 3))
def test_reynolds_vs_group_average(f):
    assert reynolds(f) == average_over_group(f)


@given(polys(4, 2))
def test_reynolds_is_projection(f):
    r = reynolds(f)
    assert is_symmetric(r)
    assert reynolds(r) == r
    assert reynolds_coordinates(f) == {k: v for k, v in reynolds_coordinates(r).items()}


@given(polys(3, 2), polys(3, 2))
def test_product_vs_sympy(f, g):
    ef, xs = to_sympy(f)
    eg, _ = to_sympy(g)
    eh, _ = to_sympy(f * g)
    assert sp.expand(ef * eg - eh) == 0


def test_degree_and_homogeneity():
    f = monomial((2, 1))
    assert f.degree() == 3
    assert monomial((2, 1), dual=True).degree() == -3
    with pytest.raises(ValueError):
        (f + monomial((1, 0))).degree()


def test_json_round_trip():
    f = linear_form([Fraction(1, 3), -2, 0, 5]) * variable(2, 4)
    assert Polynomial.from_json(f.to_json()) == f


def test_coordinates_round_trip():
    basis = monomial_basis(3, 2)
    v = [1, 0, -2, Fraction(1, 2), 0, 3]
    assert coordinates(from_coordinates(v, basis), basis) == [Fraction(x) for x in v]


def test_delta_restrict_m_basis():
    assert delta_restrict(m_basis((1, 1), 3, dual=True), 2) == monomial((1, 1), dual=True)
    for lam in enumerate_partitions(3, 3):
        assert delta_restrict(m_basis(lam, 6, dual=True), 3) == m_basis(lam, 3, dual=True)


@pytest.mark.parametrize("n,d", [(4, 3), (6, 3), (5, 4)])
def test_delta_restrict_M_basis_scalar(n, d):
    # the scalar is (#monomials of type lam in d vars) / (#in n vars); it equals
    # 1/binom(n, d) only for lam = (1, ..., 1)
    for lam in enumerate_partitions(d, d):
        got = delta_restrict(M_basis(lam, n, dual=True), d)
        c = Fraction(stabilizer_multinomial(lam, d), stabilizer_multinomial(lam, n))
        assert got == M_basis(lam, d, dual=True).scale(c)
    ones = (1,) * d
    assert Fraction(stabilizer_multinomial(ones, d), stabilizer_multinomial(ones, n)) == Fraction(1, comb(n, d))


@pytest.mark.parametrize("n,d", [(4, 3), (5, 3), (6, 4)])
def test_delta_restrict_injective_on_invariants(n, d):
    labels = enumerate_partitions(d, n)
    rows = [coordinates(delta_restrict(m_basis(lam, n, dual=True), d), monomial_basis(d, d))
            for lam in labels if len(lam) <= d]
    assert sp.Matrix(rows).rank() == len(labels)


def test_invariant_coordinates():
    g = m_basis((2, 1), 4) * 3 + M_basis((3,), 4)
    assert invariant_coordinates(g, 3, "m") == [0, 3, Fraction(1, 4)]
    assert invariant_coordinates(g, 3, "M") == [0, 36, 1]
    with pytest.raises(ValueError):
        invariant_coordinates(monomial((3, 0, 0, 0)), 3)
