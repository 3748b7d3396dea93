import random
from fractions import Fraction

import pytest

from instances import general_instance
from symmid.duality import (
    GradedIdealSlice,
    InverseSystemSlice,
    ann_degree,
    ann_vs_reynolds_preimage,
    invariant_inverse_identities,
    invariant_labels,
    invariant_subspace,
    inverse_system_degree,
    pairing_matrix,
    perp,
    perp_slice,
    reynolds_image,
    reynolds_preimage,
)
from symmid.exactla import Subspace
from symmid.partitions import count_partitions, enumerate_partitions
from symmid.polyring import M_basis, m_basis, monomial, monomial_basis, reynolds
from symmid.construction import orbit_span


def random_rows(rng, k, size, lo=-3, hi=3):
    return [[rng.randint(lo, hi) for _ in range(size)] for _ in range(k)]


def random_slice(rng, n, d, cls):
    basis = monomial_basis(n, d)
    k = rng.randint(0, len(basis))
    return cls(n, d, Subspace.from_rows(random_rows(rng, k, len(basis)), basis))


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("d", range(1, 6))
def test_pairing_matrix_is_identity(n, d):
    labels = enumerate_partitions(d, n)
    F = [m_basis(lam, n) for lam in labels]
    G = [M_basis(lam, n, dual=True) for lam in labels]
    P = pairing_matrix(F, G)
    assert P == [[Fraction(int(i == j)) for j in range(len(labels))] for i in range(len(labels))]


def test_ann_degree_extremes():
    n, d = 3, 2
    basis = monomial_basis(n, d)
    zero = InverseSystemSlice(n, d, Subspace.zero(basis))
    full = InverseSystemSlice(n, d, Subspace.full(basis))
    assert ann_degree(zero).space == Subspace.full(basis)
    assert ann_degree(full).dim() == 0
    assert inverse_system_degree(GradedIdealSlice.power_of_maximal_ideal(n, d)).dim() == 0
    assert inverse_system_degree(GradedIdealSlice(n, d, Subspace.zero(basis))).dim() == len(basis)


def test_ann_degree_dimension_and_round_trip():
    rng = random.Random(2)
    for _ in range(20):
        n, d = rng.choice([(3, 2), (4, 2), (3, 3), (4, 3)])
        W = random_slice(rng, n, d, InverseSystemSlice)
        I = ann_degree(W)
        assert I.dim() == len(monomial_basis(n, d)) - W.dim()
        assert inverse_system_degree(I).space == W.space
    for _ in range(20):
        I = random_slice(rng, 4, 2, GradedIdealSlice)
        assert ann_degree(inverse_system_degree(I)).space == I.space


def test_ann_degree_annihilates():
    rng = random.Random(8)
    W = random_slice(rng, 3, 3, InverseSystemSlice)
    I = ann_degree(W)
    P = pairing_matrix(I.polynomials(), W.polynomials())
    assert all(v == 0 for row in P for v in row)


def test_perp_examples():
    n, d = 4, 3
    labels = invariant_labels(n, d)
    U = invariant_subspace([[0, 0, 1]], n, d)  # span{m_(3)}
    W = perp(U)
    expected = Subspace.from_rows([[1, 0, 0], [0, 1, 0]], labels)
    assert W == expected
    rng = random.Random(4)
    for _ in range(10):
        k = rng.randint(0, len(labels))
        U = invariant_subspace(random_rows(rng, k, len(labels)), n, d)
        assert U.dim() + perp(U).dim() == count_partitions(d, n)
        assert perp(perp(U)) == U


def test_perp_pairs_to_zero_with_polynomials():
    n, d = 5, 3
    U = invariant_subspace([[1, -2, 7]], n, d)
    W = perp_slice(U, n, d)
    u = m_basis((1, 1, 1), n) - m_basis((2, 1), n).scale(2) + m_basis((3,), n).scale(7)
    assert all(v == 0 for v in pairing_matrix([u], W.polynomials())[0])


def test_ann_vs_reynolds_preimage_trivial_cases():
    n, d = 4, 2
    labels = invariant_labels(n, d)
    full = Subspace.full(labels)
    assert ann_vs_reynolds_preimage(full, n, d)
    assert reynolds_preimage(full, n, d).space == Subspace.full(monomial_basis(n, d))
    zero = Subspace.zero(labels)
    assert ann_vs_reynolds_preimage(zero, n, d)
    pre = reynolds_preimage(zero, n, d)
    assert pre.dim() == len(monomial_basis(n, d)) - len(labels)
    assert all(reynolds(f) == 0 for f in pre.polynomials())


def test_ann_vs_reynolds_preimage_random():
    rng = random.Random(10)
    labels = invariant_labels(5, 3)
    for _ in range(20):
        k = rng.randint(0, len(labels))
        U = invariant_subspace(random_rows(rng, k, len(labels)), 5, 3)
        assert ann_vs_reynolds_preimage(U, 5, 3)


def test_reynolds_image_of_orbit_span():
    alpha, V, I, _ = general_instance(5, 3, 1)
    U = reynolds_image(I)
    assert U.dim() == 1
    # alpha is in M-coordinates; U is stored in m-coordinates alpha_lam / #type(lam)
    from symmid.partitions import stabilizer_multinomial
    want = [Fraction(a, stabilizer_multinomial(lam, 5)) for a, lam in zip(alpha[0], invariant_labels(5, 3))]
    assert U.contains_vector(want)


def test_identities_general_instance():
    _, _, I, _ = general_instance(5, 3, 1)
    U = reynolds_image(I)
    rep = invariant_inverse_identities(I, U)
    assert rep["identity_i"] and rep["identity_iii"]
    # contracting only W and invariants of degree d-1 reaches 10 of the 15 dimensions;
    # with invariants of every degree the whole of S_{-d+1} is covered
    assert rep["dim_literal_extension"] == 10 and not rep["identity_ii"]
    assert rep["identity_ii_full_invariants"] and rep["dim_full_invariant_extension"] == 15


def test_identities_power_of_maximal_ideal():
    n, d = 4, 2
    I = GradedIdealSlice.power_of_maximal_ideal(n, d)
    U = Subspace.full(invariant_labels(n, d))
    rep = invariant_inverse_identities(I, U)
    assert rep["identity_i"] and rep["dim_inverse_system"] == 0 and rep["dim_U_perp"] == 0
    assert rep["identity_iii"]


def test_identities_fail_for_power_orbit():
    n, d = 5, 3
    J = orbit_span([monomial((3, 0, 0, 0, 0))], n, d)
    rep = invariant_inverse_identities(J, reynolds_image(J))
    assert J.dim() == 5
    assert not rep["identity_i"]
    assert (rep["dim_inverse_system"], rep["dim_U_perp"]) == (30, 2)


def test_slice_json():
    _, _, I, _ = general_instance(3, 2, 1)
    data = I.to_json()
    assert Subspace.from_json(data["space"]) == I.space
