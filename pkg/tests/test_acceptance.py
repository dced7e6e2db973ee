"""Acceptance criteria 1-11, one test each; results are summarized at the end
of the pytest run and printed by ``python tests/test_acceptance.py``."""

import random

import pytest

from conftest import record
from wallskein.cluster import (
    check_compatibility,
    compatibility_degrees,
    frame_product,
    mutate_matrices,
    mutate_seed,
    seed_from_triangulation,
)
from wallskein.coefrw import LaurentElem, TropMonomial, u, zm, zp
from wallskein.lamination import (
    MultiLamination,
    half_int_mutate,
    lam_coeffs,
    principal_lamination,
    random_curve,
    relation_identity_holds,
    shear_from_a2,
    shear_mutate,
)
from wallskein.qtorus import NotDivisible, SkewLattice, TorusElem, divide_exact
from wallskein.quasihom import CoeffHom, check_quasi, check_quasi_along, forget_walls, principal_specialization, specialize_minus
from wallskein.skeinid import (
    QuadWallData,
    non_normalized_walls,
    resolved_walls,
    run_fixture,
)
from wallskein.surface import (
    annulus_mw,
    compatibility_matrix,
    exchange_matrix,
    flip,
    polygon,
    square,
    torus_one_hole,
)
from wallskein.walls import is_normalized, lam_to_wall, principal_wall, wall_coeffs

TEST_SURFACES = (square, lambda: polygon(5), lambda: polygon(6), annulus_mw)


def _sequences(n=200, max_len=6, seed=6):
    rng = random.Random(seed)
    surfaces = [f() for f in TEST_SURFACES]
    out = []
    for _ in range(n):
        t = rng.choice(surfaces)
        out.append((t, [rng.choice(t.interior) for _ in range(rng.randint(1, max_len))]))
    return out


SEQUENCES = _sequences()


def _fixture(name):
    rep = run_fixture(name)
    failed = [c["check"] for c in rep.checks if not c["ok"]]
    return rep.passed, f"fixture {name}: {len(rep.checks)} checks" + (f", failed {failed}" if failed else "")


def criterion_1():
    ok, detail = _fixture("intro-square")
    t = square()
    s = seed_from_triangulation(t, principal_wall(t))
    lhs = s.var("kappa") * mutate_seed(s, "kappa").var("kappa")
    rhs = LaurentElem.monomial({zp("kappa"): 2}, q2=2) * frame_product(s, [0, 1, 1, 0, 0]) + LaurentElem.monomial(
        {zm("kappa"): 2}, q2=-2
    ) * frame_product(s, [0, 0, 0, 1, 1])
    return ok and lhs == rhs, detail + "; kappa kappa' = q z+ a1 a2 + q^-1 z- b1 b2"


def criterion_2():
    ok, detail = _fixture("sl4-hexagon")
    data = QuadWallData(
        A_kappa={"234": 1, "12": 1}, A_kappa_prime={"34": 1}, B_kappa={"234": 1}, B_kappa_prime={"123": 1, "34": 1}
    )
    want = (
        TropMonomial.from_map({zp("234"): 2, zp("12"): 2, zm("34"): 2}),
        TropMonomial.from_map({zp("123"): 2, zp("34"): 2, zm("234"): 2}),
    )
    return ok and data.coefficients() == want, detail + "; multiset coefficients match"


def criterion_3():
    ok, detail = _fixture("torus-wall")
    data = QuadWallData(B_kappa={"0": 1}, B_B={"0": 2})
    a_side, b_side = data.coefficients()
    want_b = TropMonomial.from_map({zp("0"): 4, zm("0"): 6})  # a0^2 z-[0]
    return ok and a_side.is_one() and b_side == want_b and data.B_B["0"] == 2, detail + "; C_BB = {0, 0}"


def criterion_4():
    a, da = _fixture("annulus-mw")
    b, db = _fixture("annulus-mw-specialized")
    return a and b, f"{da}; {db}"


def criterion_5():
    ok, detail = _fixture("non-normalized")
    t = square()
    p = wall_coeffs(t, non_normalized_walls(t, "kappa"))
    both = TropMonomial.from_map({zp("0"): 2, zm("0"): 2})
    return ok and p["kappa"] == (both, both) and not is_normalized(p), detail


def criterion_6():
    for f in TEST_SURFACES:
        s = seed_from_triangulation(f())
        if check_compatibility(s) or set(compatibility_degrees(s).values()) != {4}:
            return False, f"{s.triangulation.name}: compatibility fails"
    steps = 0
    for t, flips in SEQUENCES:
        s = seed_from_triangulation(t)
        for k in flips:
            s = mutate_seed(s, k)
            steps += 1
            if check_compatibility(s) or set(compatibility_degrees(s).values()) != {4}:
                return False, f"{t.name} after {flips}: compatibility lost"
    return True, f"{len(SEQUENCES)} sequences, {steps} mutations, sum eps pi = 4 delta throughout"


def criterion_7():
    checked = 0
    for f in (*TEST_SURFACES, torus_one_hole):
        t0 = f()
        # every edge of the initial triangulation and of one flip away
        for t in [t0] + [flip(t0, k)[0] for k in t0.interior]:
            eps, pi = exchange_matrix(t), compatibility_matrix(t)
            for k in t.interior:
                flipped, _ = flip(t, k)
                for sign in (1, -1):
                    e2, p2 = mutate_matrices(eps, pi, k, sign, t.edges, t.interior)
                    if [list(r) for r in e2] != exchange_matrix(flipped) or [list(r) for r in p2] != compatibility_matrix(flipped):
                        return False, f"{t.name}: flip of {k} (sign {sign}) disagrees"
                    checked += 1
    return True, f"{checked} (edge, sign) pairs agree"


def _sources(t, rng):
    lam = MultiLamination(t, tuple((u(i), random_curve(t, rng, 3)) for i in range(2)))
    return {"coefficient-free": None, "principal-wall": principal_wall(t), "lamination": lam}


def _random_elem(lattice, rng):
    out = TorusElem(lattice)
    for _ in range(rng.randint(1, 4)):
        lam = [rng.randint(-2, 2) for _ in range(lattice.rank)]
        c = LaurentElem.monomial({zp(1): 2 * rng.randint(-1, 1)}, q2=rng.randint(-3, 3), coeff=rng.choice([-2, -1, 1, 2]))
        out = out + TorusElem.basis(lattice, lam, c)
    return out


def criterion_8():
    rng = random.Random(8)
    mutations = 0
    for t, flips in SEQUENCES:
        for name, src in _sources(t, rng).items():
            s = seed_from_triangulation(t, src)
            try:
                for k in flips:
                    s = mutate_seed(s, k)
                    mutations += 1
            except NotDivisible:
                return False, f"{name} seed on {t.name}: division failed along {flips}"
    lattice = SkewLattice(tuple(tuple(r) for r in compatibility_matrix(polygon(5))))
    for _ in range(500):
        a, b = _random_elem(lattice, rng), _random_elem(lattice, rng)
        if divide_exact(a * b, b) != a:
            return False, "division round trip failed"
    return True, f"{mutations} exact divisions over 3 coefficient sources; 500 round trips"


def criterion_9():
    rng = random.Random(9)
    surfaces = [f() for f in (*TEST_SURFACES, torus_one_hole)]
    for _ in range(200):
        t = rng.choice(surfaces)
        c = random_curve(t, rng)
        for k in t.interior:
            flipped, _ = flip(t, k)
            once = shear_mutate(c, k, flipped)
            if shear_mutate(once, k) != c:
                return False, f"{t.name}: double flip of {k} is not the identity"
            # the jointly mutated pair still satisfies x = -eps a on the flipped triangulation
            if shear_from_a2(flipped, half_int_mutate(t, c.a2, k)) != once.x:
                return False, f"{t.name}: x and a disagree after flipping {k}"
            if not relation_identity_holds(t, c, k):
                return False, f"{t.name}: scalar identity fails at {k}"
    return True, "200 random curves, every interior edge"


def criterion_10():
    square_t, ann = square(), annulus_mw()
    cases = [
        ("square principal", square_t, principal_wall(square_t), ["kappa"]),
        ("square non-normalized", square_t, non_normalized_walls(square_t, "kappa"), ["kappa", "kappa"]),
        ("square resolved", square_t, resolved_walls(square_t, "kappa"), ["kappa"]),
        ("annulus principal", ann, principal_wall(ann), ["2", "3", "4", "1"]),
    ]
    for name, t, w, flips in cases:
        psi = principal_specialization(t, w)
        src, tgt = seed_from_triangulation(t, principal_wall(t)), seed_from_triangulation(t, w)
        rep = check_quasi(src, tgt, psi, {})
        rep_along = check_quasi_along(src, tgt, psi, flips)
        # supplied rescaling after the first flip: every variable maps to its target exactly
        supplied = {a: 1 for a in t.edges}
        rep_flip = check_quasi(mutate_seed(src, flips[0]), mutate_seed(tgt, flips[0]), psi, supplied, {})
        if not (rep.ok and rep_along.ok and rep_flip.ok):
            return False, f"{name}: {rep.failures + rep_along.failures + rep_flip.failures}"
    return True, f"{len(cases)} wall fixtures, initial seed and along flips"


def criterion_11():
    rng = random.Random(11)
    count = 0
    for f in (*TEST_SURFACES, torus_one_hole):
        t = f()
        lams = [
            principal_lamination(t, "+"),
            principal_lamination(t, "-"),
            MultiLamination(t, tuple((u(i), random_curve(t, rng)) for i in range(3))),
        ]
        for lam in lams:
            w = lam_to_wall(lam)
            rename = CoeffHom({zp(j): TropMonomial.var(u(j)) for j in w.labels})
            got = specialize_minus(wall_coeffs(t, w, drop_minus=True))
            got = {a: (rename(pp), rename(pm)) for a, (pp, pm) in got.items()}
            if got != lam_coeffs(t, lam):
                return False, f"{t.name}: realization identity fails"
            count += 1
        s, free = seed_from_triangulation(t, principal_wall(t)), seed_from_triangulation(t)
        for k in t.interior:
            s, free = mutate_seed(s, k), mutate_seed(free, k)
            if not forget_walls(s).same_data(free):
                return False, f"{t.name}: forgetting walls does not give the coefficient-free seed"
    return True, f"{count} laminations; forgetting walls collapses every wall seed"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 12)}


@pytest.mark.parametrize("n", list(CRITERIA))
def test_criterion(n):
    ok, detail = CRITERIA[n]()
    record(n, ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
