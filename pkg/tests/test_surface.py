import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_surfaces
from wallskein.surface import (
    InvalidTriangulation,
    NotFlippable,
    Triangulation,
    annulus_mw,
    compatibility_matrix,
    exchange_matrix,
    flip,
    polygon,
    square,
    torus_one_hole,
    validate,
)


def eps_oracle(t):
    # count, per triangle, which sides follow which counter-clockwise
    out = {(a, b): 0 for a in t.interior for b in t.edges}
    for tri in t.triangles:
        names = [e for e, _ in tri]
        for i in range(3):
            a, b, c = names[i], names[(i + 1) % 3], names[(i + 2) % 3]
            if a in t.interior:
                out[(a, b)] += 1
                out[(a, c)] -= 1
    return [[out[(a, b)] for b in t.edges] for a in t.interior]


def test_square_exchange_row():
    t = square()
    row = dict(zip(t.edges, exchange_matrix(t)[0]))
    assert row == {"kappa": 0, "alpha1": -1, "alpha2": -1, "beta1": 1, "beta2": 1}


def test_square_compatibility_row():
    t = square()
    row = dict(zip(t.edges, compatibility_matrix(t)[0]))
    assert row == {"kappa": 0, "alpha1": 1, "alpha2": 1, "beta1": -1, "beta2": -1}


def test_annulus_matrix_shape_and_values():
    t = annulus_mw()
    eps = exchange_matrix(t)
    assert (len(eps), len(eps[0])) == (4, 8)
    assert eps == [
        [0, 1, 0, 1, -1, -1, 0, 0],
        [-1, 0, 1, 0, 1, 0, 0, -1],
        [0, -1, 0, -1, 0, 0, 1, 1],
        [-1, 0, 1, 0, 0, 1, -1, 0],
    ]


@pytest.mark.parametrize("t", all_surfaces(), ids=lambda t: t.name)
def test_exchange_matrix_matches_oracle(t):
    assert exchange_matrix(t) == eps_oracle(t)


@pytest.mark.parametrize("t", all_surfaces(), ids=lambda t: t.name)
def test_compatibility_is_skew(t):
    pi = compatibility_matrix(t)
    n = len(pi)
    assert all(pi[i][j] == -pi[j][i] for i in range(n) for j in range(n))


@pytest.mark.parametrize("t", all_surfaces(), ids=lambda t: t.name)
def test_json_round_trip(t):
    again = Triangulation.from_json(json.dumps(t.to_json()))
    assert again == t
    assert exchange_matrix(again) == exchange_matrix(t)
    assert compatibility_matrix(again) == compatibility_matrix(t)


def test_counts():
    assert [len(polygon(n).interior) for n in (4, 5, 6, 7)] == [1, 2, 3, 4]
    t = annulus_mw()
    assert (len(t.interior), len(t.boundary), len(t.points), t.euler_characteristic()) == (4, 4, 4, 0)
    t = torus_one_hole()
    assert (len(t.interior), len(t.boundary), t.euler_characteristic()) == (5, 2, -1)


def test_annulus_flip_of_radial_arc():
    t = annulus_mw()
    flipped, quad = flip(t, "2")
    assert t.endpoints["2"] == ("M1", "M2")
    # the new arc returns to the outer circle after going around the hole
    assert flipped.endpoints["2"] == ("M4", "M4")
    assert {quad.alpha1, quad.alpha2, quad.beta1, quad.beta2} == {"1", "3", "5", "8"}


def test_flip_boundary_rejected():
    with pytest.raises(NotFlippable):
        flip(square(), "alpha1")
    with pytest.raises(NotFlippable):
        flip(square(), "nope")


def test_flip_new_id():
    t, quad = flip(square(), "kappa", new_id="kp")
    assert "kp" in t.interior and quad.kappa_prime == "kp"


def test_dangling_edge_rejected():
    data = square().to_json()
    data["triangles"][0][0] = "ghost"
    with pytest.raises(InvalidTriangulation):
        Triangulation.from_json(data)


def test_missing_triangle_rejected():
    edges = [("k", False, ("a", "c")), ("x", True, ("a", "b")), ("y", True, ("b", "c")), ("z", True, ("c", "a"))]
    with pytest.raises(InvalidTriangulation):
        Triangulation.build(edges, [[("x", 0), ("y", 0), ("k", 1)]])


def test_equality_ignores_orientation_of_a_double_flip():
    t = square()
    twice = flip(flip(t, "kappa")[0], "kappa")[0]
    assert twice == t and hash(twice) == hash(t)
    assert flip(t, "kappa")[0] != t


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.lists(st.integers(0, 10), max_size=8))
def test_random_flips_stay_valid_and_involutive(which, picks):
    t0 = [polygon(6), annulus_mw(), torus_one_hole(), polygon(7)][which]
    t = t0
    for p in picks:
        k = t.interior[p % len(t.interior)]
        nxt, _ = flip(t, k)
        validate(nxt)
        assert nxt.euler_characteristic() == t0.euler_characteristic()
        assert flip(nxt, k)[0] == t
        t = nxt


def test_relabel():
    t = square().relabel({"kappa": "k"})
    assert "k" in t.interior
    assert exchange_matrix(t) == exchange_matrix(square())
