import json

import pytest
import sympy

from oracles import CommutativeSeed, sym_name, torus_to_sympy
from wallskein.cli import main
from wallskein.cluster import mutate_seed, seed_from_triangulation
from wallskein.coefrw import zm, zp
from wallskein.lamination import principal_lamination
from wallskein.qtorus import parse_torus
from wallskein.surface import annulus_mw, square
from wallskein.walls import principal_wall

# expansions printed by `mutate`, checked below against the commutative oracle
SQUARE_KAPPA = "z+[kappa]*B[-1,1,1,0,0] + z-[kappa]*B[-1,0,0,1,1]"
ANNULUS_212 = {
    "1": "z+[1]*z+[2]*B[0,-1,0,0,0,1,0,1] + z-[1]*z-[2]*B[-1,0,1,1,0,0,0,0] + z+[1]*z-[2]*B[-1,-1,1,0,1,1,0,0]",
    "2": "z-[1]*B[-1,1,0,1,0,0,0,0] + z+[1]*B[-1,0,0,0,1,1,0,0]",
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    return code, json.loads(out)


def principal_oracle(t, flips):
    s = seed_from_triangulation(t)
    y = [{sympy.Symbol(sym_name(zm(a))): 1, sympy.Symbol(sym_name(zp(a))): -1} for a in t.interior]
    o = CommutativeSeed(s.labels, s.uf, s.eps, y)
    for k in flips:
        o.mutate(k)
    return dict(zip(t.edges, o.x))


def test_mutate_square_prints_exchange_quotient(capsys):
    code, data = run_json(capsys, "mutate", "square", "kappa")
    assert code == 0
    assert data["variables"] == {"kappa": SQUARE_KAPPA}
    t = square()
    seed = seed_from_triangulation(t, principal_wall(t))
    assert parse_torus(SQUARE_KAPPA, seed.lattice) == mutate_seed(seed, "kappa").var("kappa")
    oracle = principal_oracle(t, ["kappa"])
    assert sympy.simplify(torus_to_sympy(parse_torus(SQUARE_KAPPA, seed.lattice), t.edges) - oracle["kappa"]) == 0


def test_mutate_twice_prints_initial_seed(capsys):
    _, once = run_json(capsys, "mutate", "square")
    code, twice = run_json(capsys, "mutate", "square", "kappa", "kappa")
    assert code == 0
    assert twice["variables"] == {}
    assert twice["eps"] == once["eps"] and twice["pi"] == once["pi"]


def test_mutate_annulus_three_steps(capsys):
    code, data = run_json(capsys, "mutate", "annulus", "2", "1", "2")
    assert code == 0
    assert data["variables"] == ANNULUS_212
    t = annulus_mw()
    lattice = seed_from_triangulation(t).lattice
    oracle = principal_oracle(t, ["2", "1", "2"])
    for a, text in ANNULUS_212.items():
        assert sympy.simplify(torus_to_sympy(parse_torus(text, lattice), t.edges) - oracle[a]) == 0


def test_expand_output_round_trips(capsys):
    t = annulus_mw()
    seed = seed_from_triangulation(t, principal_wall(t))
    code, data = run_json(capsys, "expand", "annulus", "3", "--flips", "2", "3", "4", "3", "--exchange")
    assert code == 0
    for key in ("expansion", "exchange"):
        parse_torus(data[key], seed.lattice)
    cur = seed
    for k in ("2", "3", "4", "3"):
        cur = mutate_seed(cur, k)
    assert parse_torus(data["expansion"], seed.lattice) == cur.var("3")


@pytest.mark.parametrize("argv", [["fixtures", "all"], ["fixtures", "run", "all"], ["fixtures", "annulus-mw"], ["fixtures"]])
def test_fixtures_succeed(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and "FAIL" not in out


def test_fixtures_json_report(capsys):
    code, data = run_json(capsys, "fixtures", "run", "intro-square", "torus-wall")
    assert code == 0 and data["passed"]
    assert [f["fixture"] for f in data["fixtures"]] == ["intro-square", "torus-wall"]


def test_unknown_fixture(capsys):
    code, _, err = run(capsys, "fixtures", "bogus")
    assert code == 1 and "unknown fixture" in err


def test_load_annulus_bundle(capsys, tmp_path):
    t = annulus_mw()
    path = tmp_path / "annulus.json"
    path.write_text(
        json.dumps(
            {
                "name": "walled annulus",
                "triangulation": t.to_json(),
                "walls": principal_wall(t).to_json(),
                "lamination": principal_lamination(t).to_json(),
            }
        )
    )
    code, data = run_json(capsys, "load", str(path))
    assert code == 0 and data["walls"] == 4 and data["curves"] == 4
    code, data = run_json(capsys, "coeffs", str(path), "--coeffs", "lamination")
    assert code == 0 and data["coefficients"]["1"] == {"p+": "1", "p-": "u[1]"}


def test_load_plain_triangulation(capsys, tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps(square().to_json()))
    code, data = run_json(capsys, "load", str(path))
    assert code == 0 and data["name"] == "square" and data["interior"] == ["kappa"]
    code, _, _ = run(capsys, "validate", str(path))
    assert code == 0


def test_dangling_edge(capsys, tmp_path):
    data = square().to_json()
    data["triangles"][0][0] = "ghost"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "load", str(path))
    assert code == 1 and "ghost" in err


def test_json_syntax_error_has_line_context(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "edges": [\n    1,,\n  ]\n}')
    code, _, err = run(capsys, "load", str(path))
    assert code == 1 and "broken.json:3:" in err and "1,," in err


def test_missing_source(capsys):
    assert run(capsys, "load", "no-such-surface")[0] == 1


def test_matrices(capsys):
    code, data = run_json(capsys, "eps", "annulus")
    assert code == 0 and len(data["eps"]["matrix"]) == 4 and len(data["eps"]["matrix"][0]) == 8
    code, data = run_json(capsys, "pi", "polygon7")
    assert code == 0 and len(data["pi"]["labels"]) == 11


def test_boundary_flip_is_user_error(capsys):
    assert run(capsys, "mutate", "square", "alpha1")[0] == 1


def test_specialize(capsys):
    code, out, _ = run(capsys, "specialize", "q^{1/2} z+[1]^2 + 3 z-[2]", "--minus", "--assign", "z+[1]=q")
    assert code == 0 and out.strip() == "q^{5/2} + 3"
    code, out, _ = run(capsys, "specialize", "q z+[1] z-[1]", "--forget")
    assert out.strip() == "q"
    assert run(capsys, "specialize", "z+[1")[0] == 1
    assert run(capsys, "specialize", "z+[1]", "--assign", "z+[1]=z+[1]^2")[0] == 1


def test_quasi_check(capsys, tmp_path):
    code, data = run_json(capsys, "quasi-check", "square", "--target", "resolved:kappa", "--flips", "kappa")
    assert code == 0 and data["ok"]
    code, _, _ = run(capsys, "quasi-check", "annulus", "--flips", "1", "2", "3")
    assert code == 0
    bad = tmp_path / "assign.json"
    bad.write_text(json.dumps({"z+[kappa]": "z+[kappa]^2"}))
    code, data = run_json(capsys, "quasi-check", "square", "--target", "principal", "--assignment", str(bad))
    assert code == 2 and not data["ok"]


def test_missing_wall_system(capsys):
    assert run(capsys, "mutate", "pentagon", "d2", "--coeffs", "walls")[0] == 1
    assert run(capsys, "mutate", "pentagon", "d2", "--coeffs", "principal")[0] == 0
