"""Command-line front end.

Surfaces are given either by a built-in name (``square``, ``pentagon``,
``hexagon``, ``polygonN``, ``annulus``, ``torus``, ``sl4-hexagon``) or by a
JSON file holding a triangulation, or a bundle
``{triangulation, walls?, lamination?}``.

Exit codes: 0 success, 1 user error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import surface
from .cluster import QuantumSeed, exchange_rhs, mutate_seed, seed_from_triangulation
from .coefrw import LaurentElem, ParseError, SpecializationError, parse_expression, specialize
from .lamination import InvalidCurve, MultiLamination, load_lamination
from .qtorus import NotDivisible
from .quasihom import CoeffHom, check_quasi_along, forget_walls, principal_specialization, specialize_minus
from .skeinid import FIXTURES, UnknownFixture, resolved_walls, run_fixture, sl4_hexagon
from .surface import InvalidTriangulation, NotFlippable, Triangulation
from .walls import WallSystem, principal_wall

EXIT_OK, EXIT_USER, EXIT_INTERNAL = 0, 1, 2


class UserError(Exception):
    pass


@dataclass
class Workspace:
    name: str
    triangulation: Triangulation
    walls: WallSystem | None = None
    lamination: MultiLamination | None = None


def _builtin(name: str) -> Triangulation | None:
    table = {
        "square": surface.square,
        "pentagon": lambda: surface.polygon(5),
        "hexagon": lambda: surface.polygon(6),
        "annulus": surface.annulus_mw,
        "torus": surface.torus_one_hole,
        "sl4-hexagon": sl4_hexagon,
    }
    if name in table:
        return table[name]()
    if name.startswith("polygon") and name[7:].isdigit():
        return surface.polygon(int(name[7:]))
    return None


def load_workspace(ref: str) -> Workspace:
    t = _builtin(ref)
    if t is not None:
        walls = principal_wall(t) if ref in ("square", "annulus") else None
        return Workspace(ref, t, walls)
    path = Path(ref)
    if not path.exists():
        raise UserError(f"{ref}: no such file or built-in surface")
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise UserError(f"{ref}:{exc.lineno}:{exc.colno}: {exc.msg}\n  {line.strip()}") from None
    tri = data.get("triangulation", data)
    try:
        t = Triangulation.from_json(tri)
        walls = WallSystem.from_json(data["walls"], t) if data.get("walls") else None
        lam = load_lamination(data["lamination"], t) if data.get("lamination") else None
    except (InvalidTriangulation, InvalidCurve, ValueError, KeyError, TypeError) as exc:
        raise UserError(f"{ref}: {exc}") from None
    return Workspace(data.get("name", tri.get("name", path.stem)), t, walls, lam)


def _seed(ws: Workspace, coeffs: str) -> QuantumSeed:
    t = ws.triangulation
    if coeffs == "auto":
        coeffs = "walls" if ws.walls is not None else "lamination" if ws.lamination is not None else "none"
    if coeffs == "none":
        return seed_from_triangulation(t)
    if coeffs == "principal":
        return seed_from_triangulation(t, principal_wall(t))
    if coeffs == "walls":
        if ws.walls is None:
            raise UserError("no wall system loaded")
        return seed_from_triangulation(t, ws.walls)
    if coeffs == "lamination":
        if ws.lamination is None:
            raise UserError("no lamination loaded")
        return seed_from_triangulation(t, ws.lamination)
    raise UserError(f"unknown coefficient source {coeffs}")


def _matrix_text(rows, row_labels, col_labels) -> str:
    width = max(len(str(v)) for r in rows for v in r) if rows else 1
    width = max(width, *(len(c) for c in col_labels))
    lab = max(len(r) for r in row_labels) if row_labels else 0
    head = " " * (lab + 1) + " ".join(c.rjust(width) for c in col_labels)
    body = [r.ljust(lab) + " " + " ".join(str(v).rjust(width) for v in row) for r, row in zip(row_labels, rows)]
    return "\n".join([head] + body)


def _coeff_rows(seed: QuantumSeed) -> dict:
    return {a: {"p+": str(pp), "p-": str(pm)} for a, (pp, pm) in zip(seed.uf, seed.p)}


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.payload: dict = {}

    def put(self, key, value, text: str | None = None):
        self.payload[key] = value
        if not self.as_json:
            print(text if text is not None else f"{key}: {value}")

    def finish(self):
        if self.as_json:
            print(json.dumps(self.payload, indent=2, sort_keys=True))


# subcommands


def cmd_load(args, out: Output) -> int:
    ws = load_workspace(args.source)
    t = ws.triangulation
    out.put("name", ws.name)
    out.put("edges", list(t.edges), f"edges: {' '.join(t.edges)}")
    out.put("interior", list(t.interior), f"interior: {' '.join(t.interior)}")
    out.put("points", list(t.points), f"marked points: {' '.join(t.points)}")
    if ws.walls is not None:
        out.put("walls", len(ws.walls.walls), f"walls: {len(ws.walls.walls)} (labels {' '.join(ws.walls.labels)})")
    if ws.lamination is not None:
        out.put("curves", len(ws.lamination.entries), f"lamination curves: {len(ws.lamination.entries)}")
    return EXIT_OK


def cmd_validate(args, out: Output) -> int:
    ws = load_workspace(args.source)
    out.put("valid", True, f"{ws.name}: valid triangulation, euler characteristic {ws.triangulation.euler_characteristic()}")
    return EXIT_OK


def cmd_eps(args, out: Output) -> int:
    t = load_workspace(args.source).triangulation
    m = surface.exchange_matrix(t)
    out.put("eps", {"rows": list(t.interior), "cols": list(t.edges), "matrix": m}, _matrix_text(m, t.interior, t.edges))
    return EXIT_OK


def cmd_pi(args, out: Output) -> int:
    t = load_workspace(args.source).triangulation
    m = surface.compatibility_matrix(t)
    out.put("pi", {"labels": list(t.edges), "matrix": m}, _matrix_text(m, t.edges, t.edges))
    return EXIT_OK


def _flip_all(seed: QuantumSeed, flips):
    for k in flips:
        if str(k) not in seed.uf:
            raise UserError(f"{k} is not an interior edge")
        seed = mutate_seed(seed, k)
    return seed


def cmd_mutate(args, out: Output) -> int:
    ws = load_workspace(args.source)
    seed0 = _seed(ws, args.coeffs)
    seed = _flip_all(seed0, args.flips)
    out.put("eps", [list(r) for r in seed.eps], "eps:\n" + _matrix_text(seed.eps, seed.uf, seed.labels))
    out.put("pi", [list(r) for r in seed.pi], "pi:\n" + _matrix_text(seed.pi, seed.labels, seed.labels))
    coeffs = _coeff_rows(seed)
    out.put("coefficients", coeffs, "coefficients:\n" + "\n".join(f"  {a}: p+ = {c['p+']}, p- = {c['p-']}" for a, c in coeffs.items()))
    changed = {a: str(new) for a, old, new in zip(seed.labels, seed0.frame, seed.frame) if old != new}
    out.put("variables", changed, "variables:\n" + "\n".join(f"  {a} = {v}" for a, v in changed.items()))
    return EXIT_OK


def cmd_expand(args, out: Output) -> int:
    ws = load_workspace(args.source)
    seed = _flip_all(_seed(ws, args.coeffs), args.flips)
    if args.target not in seed.labels:
        raise UserError(f"unknown edge {args.target}")
    out.put("expansion", str(seed.var(args.target)), str(seed.var(args.target)))
    if args.exchange:
        if args.target not in seed.uf:
            raise UserError(f"{args.target} is not mutable")
        out.put("exchange", str(exchange_rhs(seed, args.target)), f"exchange: {exchange_rhs(seed, args.target)}")
    return EXIT_OK


def cmd_coeffs(args, out: Output) -> int:
    ws = load_workspace(args.source)
    seed = _flip_all(_seed(ws, args.coeffs), args.flips)
    coeffs = _coeff_rows(seed)
    out.put("coefficients", coeffs, "\n".join(f"{a}: p+ = {c['p+']}, p- = {c['p-']}" for a, c in coeffs.items()))
    return EXIT_OK


def _parse_assignment(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UserError(f"assignment {item!r} is not of the form SYMBOL=VALUE")
        key, value = item.split("=", 1)
        key = key.strip()
        if key == "q":
            sym = "q"
        else:
            parsed = parse_expression(key)
            if not isinstance(parsed, LaurentElem) or len(parsed.syms) != 1 or len(parsed.terms) != 1:
                raise UserError(f"{key!r} is not a single symbol")
            sym = parsed.syms[0]
        val = parse_expression(value)
        out[sym] = val if isinstance(val, LaurentElem) else LaurentElem.const(int(val))
    return out


def cmd_specialize(args, out: Output) -> int:
    expr = parse_expression(args.expression)
    if isinstance(expr, int):
        expr = LaurentElem.const(expr)
    if not isinstance(expr, LaurentElem):
        raise UserError("expression must be a coefficient-ring element")
    if args.minus:
        expr = specialize_minus(expr)
    if args.forget:
        expr = forget_walls(expr)
    assignment = _parse_assignment(args.assign)
    if assignment:
        expr = specialize(expr, assignment)
    out.put("result", str(expr), str(expr))
    return EXIT_OK


def _load_assignment_file(path: str) -> CoeffHom:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UserError(f"{path}: {exc}") from None
    return CoeffHom({k: v for k, v in _parse_assignment([f"{k}={v}" for k, v in data.items()]).items()})


def cmd_quasi_check(args, out: Output) -> int:
    ws = load_workspace(args.source)
    t = ws.triangulation
    if args.target == "walls":
        if ws.walls is None:
            raise UserError("no wall system loaded")
        target_walls = ws.walls
    elif args.target == "principal":
        target_walls = principal_wall(t)
    elif args.target.startswith("resolved:"):
        target_walls = resolved_walls(t, args.target.split(":", 1)[1])
    else:
        raise UserError(f"unknown target {args.target}")
    psi = _load_assignment_file(args.assignment) if args.assignment else principal_specialization(t, target_walls)
    source = seed_from_triangulation(t, principal_wall(t))
    target = seed_from_triangulation(t, target_walls)
    rep = check_quasi_along(source, target, psi, args.flips)
    out.put("ok", rep.ok, "quasi-homomorphism: " + ("ok" if rep.ok else "FAILED"))
    out.put("failures", rep.failures, "\n".join(rep.failures) if rep.failures else "")
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def cmd_fixtures(args, out: Output) -> int:
    names = list(args.names)
    if names and names[0] == "run":
        names = names[1:]
    if not names or names == ["all"]:
        names = list(FIXTURES)
    reports = []
    for n in names:
        try:
            reports.append(run_fixture(n))
        except UnknownFixture:
            raise UserError(f"unknown fixture {n!r}; choose from {', '.join(FIXTURES)}") from None
    ok = all(r.passed for r in reports)
    out.put(
        "fixtures",
        [r.to_json() for r in reports],
        "\n".join(f"{'PASS' if r.passed else 'FAIL'} {r.name}" for r in reports),
    )
    out.put("passed", ok, f"{sum(r.passed for r in reports)}/{len(reports)} fixtures passed")
    return EXIT_OK if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wallskein", description=__doc__.split("\n")[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def surface_cmd(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("source", help="built-in surface name or JSON file")
        sp.set_defaults(fn=fn)
        return sp

    surface_cmd("load", cmd_load, "load a surface or bundle and summarize it")
    surface_cmd("validate", cmd_validate, "check triangulation invariants")
    surface_cmd("eps", cmd_eps, "print the exchange matrix")
    surface_cmd("pi", cmd_pi, "print the compatibility matrix")
    coeff_choices = ["auto", "none", "principal", "walls", "lamination"]
    sp = surface_cmd("mutate", cmd_mutate, "flip a sequence of edges and print the new seed")
    sp.add_argument("flips", nargs="*")
    sp.add_argument("--coeffs", default="auto", choices=coeff_choices)
    sp = surface_cmd("expand", cmd_expand, "Laurent expansion of one variable after flips")
    sp.add_argument("target")
    sp.add_argument("--flips", nargs="*", default=[])
    sp.add_argument("--coeffs", default="auto", choices=coeff_choices)
    sp.add_argument("--exchange", action="store_true", help="also print the exchange relation at the target")
    sp = surface_cmd("coeffs", cmd_coeffs, "coefficient tuple of a seed")
    sp.add_argument("--flips", nargs="*", default=[])
    sp.add_argument("--coeffs", default="auto", choices=coeff_choices)
    sp = sub.add_parser("specialize", help="substitute coefficient symbols in an expression")
    sp.add_argument("expression")
    sp.add_argument("--assign", action="append", metavar="SYM=VALUE")
    sp.add_argument("--minus", action="store_true", help="set every z-[j] to 1")
    sp.add_argument("--forget", action="store_true", help="set every z+-[j] to 1")
    sp.set_defaults(fn=cmd_specialize)
    sp = surface_cmd("quasi-check", cmd_quasi_check, "check the principal specialization map")
    sp.add_argument("--target", default="walls", help="walls | principal | resolved:EDGE")
    sp.add_argument("--assignment", help="JSON file mapping source symbols to monomials")
    sp.add_argument("--flips", nargs="*", default=[])
    sp = sub.add_parser("fixtures", help="run golden fixtures: fixtures [run] [NAME...|all]")
    sp.add_argument("names", nargs="*")
    sp.set_defaults(fn=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.json)
    try:
        code = args.fn(args, out)
    except (UserError, ParseError, SpecializationError, NotFlippable, InvalidTriangulation, InvalidCurve) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except NotDivisible as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    out.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
