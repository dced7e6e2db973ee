import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_surfaces
from oracles import CommutativeSeed, sym_name, torus_to_sympy
from wallskein.cluster import (
    MutationState,
    NonNormalizedWithoutGeometry,
    check_compatibility,
    compatibility_degrees,
    exchange_rhs,
    expand_along,
    frame_commutation_errors,
    frame_product,
    mutate_matrices,
    mutate_seed,
    seed_from_matrices,
    seed_from_triangulation,
    yhat,
)
from wallskein.coefrw import LaurentElem, zm, zp
from wallskein.quasihom import positivity_check
from wallskein.skeinid import non_normalized_walls
from wallskein.surface import annulus_mw, compatibility_matrix, exchange_matrix, flip, polygon, square, torus_one_hole
from wallskein.walls import principal_wall, wall_coeffs

SURFACES = [square(), polygon(5), polygon(6), annulus_mw(), torus_one_hole()]


def basis(seed, powers, coeff=1):
    return frame_product(seed, [powers.get(a, 0) for a in seed.labels]) * coeff


@pytest.mark.parametrize("t", all_surfaces(), ids=lambda t: t.name)
def test_compatibility_degree_four(t):
    s = seed_from_triangulation(t)
    assert check_compatibility(s) == []
    assert set(compatibility_degrees(s).values()) == {4}


def test_coefficient_free_square_exchange():
    s = seed_from_triangulation(square())
    want = LaurentElem.qpow(2) * basis(s, {"alpha1": 1, "alpha2": 1}) + LaurentElem.qpow(-2) * basis(
        s, {"beta1": 1, "beta2": 1}
    )
    assert exchange_rhs(s, "kappa") == want


def test_principal_square_exchange_and_quotient():
    t = square()
    s = seed_from_triangulation(t, principal_wall(t))
    want = LaurentElem.monomial({zp("kappa"): 2}, q2=2) * basis(s, {"alpha1": 1, "alpha2": 1}) + LaurentElem.monomial(
        {zm("kappa"): 2}, q2=-2
    ) * basis(s, {"beta1": 1, "beta2": 1})
    assert exchange_rhs(s, "kappa") == want
    new = mutate_seed(s, "kappa").var("kappa")
    assert len(new.coefficients()) == 2
    assert s.var("kappa") * new == want


def test_principal_square_yhat():
    t = square()
    s = seed_from_triangulation(t, principal_wall(t))
    ratio = LaurentElem.monomial({zm("kappa"): 2, zp("kappa"): -2})
    assert yhat(s, "kappa") == ratio * basis(s, {"alpha1": -1, "alpha2": -1, "beta1": 1, "beta2": 1})


def test_double_mutation_returns():
    t = annulus_mw()
    s = seed_from_triangulation(t, principal_wall(t))
    assert mutate_seed(mutate_seed(s, "2"), "2").same_data(s)


def test_mutation_state_history():
    st_ = MutationState(seed_from_triangulation(square())).mutate("kappa")
    assert st_.history == ("kappa",)
    assert mutate_seed(st_, "kappa").seed.same_data(seed_from_triangulation(square()))


def test_expand_along_three_steps_annulus():
    s = seed_from_triangulation(annulus_mw())
    v = expand_along(s, ["2", "1", "2"], "2")
    assert v == mutate_seed(mutate_seed(mutate_seed(s, "2"), "1"), "2").var("2")


@pytest.mark.parametrize("t", SURFACES, ids=lambda t: t.name)
def test_flip_matches_mutation_both_signs(t):
    for k in t.interior:
        flipped, _ = flip(t, k)
        for sign in (1, -1):
            eps, pi = mutate_matrices(exchange_matrix(t), compatibility_matrix(t), k, sign, t.edges, t.interior)
            assert [list(r) for r in eps] == exchange_matrix(flipped)
            assert [list(r) for r in pi] == compatibility_matrix(flipped)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_random_skew_matrix_sign_independent(n, seed):
    rng = random.Random(seed)
    eps = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            eps[i][j] = rng.randint(-2, 2)
            eps[j][i] = -eps[i][j]
    zero = [[0] * n for _ in range(n)]
    k = rng.randrange(n)
    assert mutate_matrices(eps, zero, k, 1)[0] == mutate_matrices(eps, zero, k, -1)[0]


def test_incompatible_form_detected():
    t = square()
    pi = [list(r) for r in compatibility_matrix(t)]
    pi[1][2], pi[2][1] = 1, -1
    s = seed_from_matrices(t.edges, t.interior, exchange_matrix(t), pi)
    assert check_compatibility(s)


def test_non_normalized_needs_geometry():
    t = square()
    w = non_normalized_walls(t, "kappa")
    p = wall_coeffs(t, w)
    s = seed_from_matrices(t.edges, t.interior, exchange_matrix(t), compatibility_matrix(t), [p["kappa"]])
    with pytest.raises(NonNormalizedWithoutGeometry):
        mutate_seed(s, "kappa")
    # with the wall system attached the flip recomputes the coefficients
    mutate_seed(seed_from_triangulation(t, w), "kappa")


def _oracle_seed(t, principal):
    s = seed_from_triangulation(t)
    y = []
    for a in t.interior:
        if principal:
            y.append({sympy.Symbol(sym_name(zm(a))): 1, sympy.Symbol(sym_name(zp(a))): -1})
        else:
            y.append({})
    return CommutativeSeed(s.labels, s.uf, s.eps, y)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SURFACES), st.booleans(), st.lists(st.integers(0, 9), min_size=1, max_size=5))
def test_against_commutative_oracle(t, principal, picks):
    s = seed_from_triangulation(t, principal_wall(t) if principal else None)
    oracle = _oracle_seed(t, principal)
    for p in picks:
        k = t.interior[p % len(t.interior)]
        s = mutate_seed(s, k)
        oracle.mutate(k)
    for a, x in zip(t.edges, oracle.x):
        assert sympy.simplify(torus_to_sympy(s.var(a), s.labels) - x) == 0


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SURFACES), st.lists(st.integers(0, 9), min_size=1, max_size=6))
def test_geometric_coefficients_follow_the_rule(t, picks):
    s = seed_from_triangulation(t, principal_wall(t))
    rule = seed_from_matrices(s.labels, s.uf, s.eps, s.pi, s.p)
    for p in picks:
        k = t.interior[p % len(t.interior)]
        s, rule = mutate_seed(s, k), mutate_seed(rule, k)
        assert s.p == rule.p
        assert s.eps == rule.eps and s.pi == rule.pi


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SURFACES), st.booleans(), st.lists(st.integers(0, 9), max_size=6))
def test_variables_bar_invariant_positive_and_q_commuting(t, principal, picks):
    s = seed_from_triangulation(t, principal_wall(t) if principal else None)
    for p in picks:
        s = mutate_seed(s, t.interior[p % len(t.interior)])
    assert all(v.map_coefficients(LaurentElem.bar) == v for v in s.frame)
    assert positivity_check(s.frame)
    assert frame_commutation_errors(s) == []
    assert check_compatibility(s) == []


def test_unknown_mutable_index():
    with pytest.raises(ValueError):
        mutate_seed(seed_from_triangulation(square()), "alpha1")
