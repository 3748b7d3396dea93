from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from instances import general_instance
from symmid.chains import (
    MPoly,
    RationalFunction,
    beta_diagonal_symbolic,
    betti_coefficients,
    chain_stability_check,
    equivariant_hilbert_series,
    equivariant_hilbert_series_alt,
    equivariant_poincare_series,
    expected_regularity,
    hilbert_coefficients,
    hilbert_series_variants,
    multiplicity_limit_check,
    poincare_vs_formula,
)
from symmid.construction import random_alpha
from symmid.invariants import betti_oracle, full_hilbert_function
from symmid.partitions import P

V2 = ("s", "t")


def mpolys(variables, max_deg=2):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in variables])
    return st.dictionaries(exps, st.integers(-4, 4), max_size=5).map(lambda t: MPoly(variables, t))


@given(mpolys(V2), mpolys(V2))
def test_series_times_denominator_recovers_numerator(p, q):
    q = q + 1 - q.constant_term()  # constant term 1
    orders = (6, 6)
    ser = RationalFunction(p, q).series(orders)
    assert ser.mul(q, orders) == p.truncate(orders)


def test_series_matches_sympy():
    s, t = sp.symbols("s t")
    H = equivariant_hilbert_series(3, 2)
    ours = H.series({"s": 6, "t": 4})
    expr = sp.series(H.to_sympy(), s, 0, 7).removeO()
    for k in range(7):
        ck = sp.Poly(sp.expand(expr).coeff(s, k), t)
        for (j,), c in ck.terms():
            assert ours.coefficient({"s": k, "t": j}) == Fraction(int(c.p), int(c.q))


def test_series_requires_nonzero_constant():
    f = RationalFunction(MPoly.const(V2), MPoly.var(V2, "s"))
    with pytest.raises(ValueError):
        f.series(3)


def test_arithmetic_and_reduction():
    s = RationalFunction.var(V2, "s")
    one = RationalFunction.const(V2)
    f = (one - s * s) / (one - s)
    g = f.reduced()
    assert g == one + s
    assert g.den == MPoly.const(V2)
    assert (f * (one - s)) == one - s * s


def test_json_round_trip():
    P7 = equivariant_poincare_series(2, 1)
    back = RationalFunction.from_json(P7.to_json())
    assert back == P7


def test_hilbert_examples():
    ser = equivariant_hilbert_series(2, 1).series({"s": 8, "t": 4})
    assert hilbert_coefficients(ser, 3) == [1, 3, 1]
    ser = equivariant_hilbert_series(3, 1).series({"s": 8, "t": 5})
    assert hilbert_coefficients(ser, 5) == [1, 5, 15, 2]
    one = equivariant_hilbert_series(1, 1)
    assert one.reduced() == RationalFunction.var(V2, "s") / (1 - RationalFunction.var(V2, "s"))
    ser = one.series({"s": 8, "t": 3})
    assert all(hilbert_coefficients(ser, n) == [1] for n in range(1, 9))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_hilbert_variants(d):
    for r in range(1, P(d) + 1):
        rep = hilbert_series_variants(d, r, n_max=8)
        assert rep["matches"]["reduced"]
        assert not rep["matches"]["alt"]


def test_alt_variant_coefficients():
    # s t^2/(1-s)^2 + s t/(1-s) + s + t^2/(1-s): the s^n coefficient is t + (n+1) t^2 for n >= 2
    ser = equivariant_hilbert_series_alt(2, 1).series({"s": 8, "t": 4})
    assert hilbert_coefficients(ser, 1) == [1, 1, 2]
    assert all(hilbert_coefficients(ser, n) == [0, 1, n + 1] for n in range(2, 9))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_poincare_vs_formula(d):
    for r in range(1, P(d) + 1):
        assert poincare_vs_formula(d, r, n_max=6)["all_match"]


@pytest.mark.parametrize("n,d,r", [(3, 2, 1), (4, 2, 1), (5, 3, 1), (6, 3, 1), (3, 2, 2)])
def test_poincare_vs_oracle(n, d, r):
    ser = equivariant_poincare_series(d, r).series({"s": n, "t": n, "u": n + d})
    assert betti_coefficients(ser, n) == betti_oracle(general_instance(n, d, r)[3]).beta


def test_poincare_constant_term():
    ser = equivariant_poincare_series(3, 1).series({"s": 10, "t": 3, "u": 3})
    assert all(ser.coefficient({"s": n}) == 1 for n in range(11))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_beta_diagonal_symbolic(d):
    assert beta_diagonal_symbolic(d)["holds"]


def test_beta_diagonal_numeric():
    d, r = 3, 1
    a, ell = P(d) - r, max(P(d) - P(d - 1) - r, 0)
    ser = equivariant_poincare_series(d, r).series({"s": 8, "t": 6, "u": 6 + d})
    for i in range(1, 6):
        got = {k: ser.coefficient({"s": k, "t": i, "u": i + d}) for k in range(9)}
        want = {k: (a if k == i else 0) + (ell if k == i + 1 else 0) for k in range(9)}
        assert got == want


def test_multiplicity_limit():
    rep = multiplicity_limit_check(2, 1, range(2, 51))
    assert rep["rows"][-1]["error"] < 0.1 and rep["ratios_monotone"]
    rep = multiplicity_limit_check(3, 1, [100])
    assert abs(rep["rows"][0]["ratio"] - 0.5) / 0.5 < 0.05
    assert rep["rows"][0]["e"] == comb_102_2() + 2
    rep = multiplicity_limit_check(1, 1, range(1, 10))
    assert all(x["ratio"] == 1.0 for x in rep["rows"]) and rep["limit"] == 1.0


def comb_102_2():
    from math import comb
    return comb(102, 2)


def test_chain_d2():
    chain = chain_stability_check(random_alpha(2, 1, 0), 2, 1, [3, 4, 5, 6])
    assert chain.passed, chain.first_failure()
    for n, (cert, hf, table) in chain.per_n.items():
        assert table[(n, n + 2)] == 1
        assert hf == [1, n, 1]


def test_chain_d3_regularity():
    chain = chain_stability_check(random_alpha(3, 1, 0), 3, 1, [5, 6])
    assert chain.passed
    assert all(v[2].regularity() == 3 for v in chain.per_n.values())


def test_chain_d1():
    chain = chain_stability_check([[1]], 1, 1, [1, 2, 3])
    assert chain.passed
    assert all(v[1] == [1] for v in chain.per_n.values())


def test_chain_power_of_maximal_ideal_regularity():
    assert expected_regularity(2, 2) == 1 and expected_regularity(2, 1) == 2
    chain = chain_stability_check(random_alpha(2, 2, 1), 2, 2, [3, 4])
    assert chain.passed
    assert all(v[2].regularity() == 1 for v in chain.per_n.values())


def test_chain_validation():
    with pytest.raises(ValueError):
        chain_stability_check([[1, 0]], 2, 1, [4, 3])
    with pytest.raises(ValueError):
        chain_stability_check([[1, 0]], 2, 2, [3, 4])
    data = chain_stability_check([[1, 2]], 2, 1, [3]).to_json()
    assert data["passed"] and data["first_failure"] is None
