"""Wall systems and their coefficient tuples.

Each wall carries the coordinates of its two shifted copies ``plus`` and
``minus``; a loop wall has ``plus == minus``. A wall built from a lamination
may lack ``minus`` coordinates, in which case only the ``z-[j] = 1``
coefficients are available.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coefrw import Symbol, TropMonomial, zm, zp
from .lamination import CurveCoords, MultiLamination, principal_curve, shear_mutate
from .surface import Triangulation, flip

__all__ = [
    "Wall",
    "WallSystem",
    "MissingMinusCoords",
    "CrossinglessFlagMissing",
    "wall_coeffs",
    "is_normalized",
    "wall_to_multilam",
    "lam_to_wall",
    "principal_wall",
]


class MissingMinusCoords(ValueError):
    """A wall without ``minus`` coordinates was used where they are needed."""


class CrossinglessFlagMissing(ValueError):
    """The conversion needs every label flagged as crossingless."""


@dataclass(frozen=True)
class Wall:
    label: str
    kind: str
    plus: CurveCoords
    minus: CurveCoords | None = None

    def __post_init__(self):
        object.__setattr__(self, "label", str(self.label))
        if self.kind not in ("arc", "loop"):
            raise ValueError(f"wall kind must be 'arc' or 'loop', not {self.kind!r}")
        if self.kind == "loop":
            if self.minus is None:
                object.__setattr__(self, "minus", self.plus)
            elif self.minus != self.plus:
                raise ValueError("a loop wall has equal plus and minus copies")

    def mutate(self, kappa, flipped: Triangulation) -> "Wall":
        plus = shear_mutate(self.plus, kappa, flipped)
        if self.kind == "loop":
            return Wall(self.label, "loop", plus, plus)
        minus = shear_mutate(self.minus, kappa, flipped) if self.minus is not None else None
        return Wall(self.label, self.kind, plus, minus)


@dataclass(frozen=True)
class WallSystem:
    base: Triangulation
    walls: tuple = ()
    crossingless: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "walls", tuple(self.walls))
        object.__setattr__(self, "crossingless", frozenset(str(j) for j in self.crossingless))
        for w in self.walls:
            for c in (w.plus, w.minus):
                if c is not None and c.base != self.base:
                    raise ValueError("wall coordinates on a different triangulation")
        if not self.crossingless <= set(self.labels):
            raise ValueError("crossingless flag on an unused label")

    @property
    def labels(self) -> tuple:
        seen = []
        for w in self.walls:
            if w.label not in seen:
                seen.append(w.label)
        return tuple(seen)

    def has_minus(self) -> bool:
        return all(w.minus is not None for w in self.walls)

    def mutate(self, kappa) -> "WallSystem":
        flipped, _ = flip(self.base, kappa)
        return WallSystem(flipped, tuple(w.mutate(kappa, flipped) for w in self.walls), self.crossingless)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "walls": [
                {
                    "label": w.label,
                    "kind": w.kind,
                    "plus": w.plus.to_json(),
                    "minus": None if w.minus is None or w.kind == "loop" else w.minus.to_json(),
                    "crossingless_label": w.label in self.crossingless,
                }
                for w in self.walls
            ],
        }

    @classmethod
    def from_json(cls, data: dict, t: Triangulation) -> "WallSystem":
        walls, flags = [], set()
        for row in data.get("walls", []):
            plus = _curve_from_json(row["plus"], t)
            minus = _curve_from_json(row["minus"], t) if row.get("minus") else None
            walls.append(Wall(str(row["label"]), row.get("kind", "arc"), plus, minus))
            if row.get("crossingless_label"):
                flags.add(str(row["label"]))
        labels = [str(j) for j in data.get("labels", [])]
        used = {w.label for w in walls}
        if labels and set(labels) != used:
            raise ValueError("every label must carry at least one wall")
        return cls(t, tuple(walls), frozenset(flags))


def _curve_from_json(row: dict, t: Triangulation) -> CurveCoords:
    c = CurveCoords.from_a2(t, [int(row.get("a2", {}).get(e, 0)) for e in t.edges])
    if "x" in row and tuple(int(row["x"].get(e, 0)) for e in t.interior) != c.x:
        raise ValueError("curve x disagrees with a2")
    return c


def wall_coeffs(t: Triangulation, w: WallSystem, drop_minus: bool = False) -> dict:
    """``alpha -> (p+, p-)`` as monomials in ``z+[j]``, ``z-[j]``.

    With ``drop_minus`` the ``z-`` factors are omitted (the ``z- = 1``
    quotient); otherwise every wall needs ``minus`` coordinates.
    """
    if not drop_minus and not w.has_minus():
        raise MissingMinusCoords("wall without minus coordinates; pass drop_minus=True")
    out = {}
    for i, alpha in enumerate(t.interior):
        plus, minus = {}, {}
        for wall in w.walls:
            copies = [(zp(wall.label), wall.plus)]
            if not drop_minus:
                copies.append((zm(wall.label), wall.minus))
            for sym, c in copies:
                x = c.x[i]
                if x > 0:
                    plus[sym] = plus.get(sym, 0) + 2 * x
                elif x < 0:
                    minus[sym] = minus.get(sym, 0) - 2 * x
        out[alpha] = (TropMonomial.from_map(plus), TropMonomial.from_map(minus))
    return out


def is_normalized(p: dict) -> bool:
    return all((pp + pm).is_one() for pp, pm in p.values())


def wall_to_multilam(w: WallSystem, crossingless: bool | None = None) -> MultiLamination:
    """Double lamination tagged ``u+[j]`` (plus copies) and ``u-[j]`` (minus copies)."""
    flagged = crossingless if crossingless is not None else set(w.labels) <= w.crossingless
    if not flagged:
        raise CrossinglessFlagMissing("every label must be flagged crossingless")
    if not w.has_minus():
        raise MissingMinusCoords("wall without minus coordinates")
    entries = []
    for wall in w.walls:
        entries.append((Symbol("u+", wall.label), wall.plus))
        entries.append((Symbol("u-", wall.label), wall.minus))
    return MultiLamination(w.base, tuple(entries))


def wall_to_lam_symbols(w: WallSystem) -> dict:
    """Renaming ``z+-[j] -> u+-[j]``."""
    out = {}
    for j in w.labels:
        out[zp(j)] = TropMonomial.var(Symbol("u+", j))
        out[zm(j)] = TropMonomial.var(Symbol("u-", j))
    return out


def lam_to_wall(lam: MultiLamination) -> WallSystem:
    """One arc wall per curve, labelled by its symbol's label; no minus copies."""
    walls = tuple(Wall(sym.label, "arc", c, None) for sym, c in lam.entries)
    return WallSystem(lam.base, walls)


def principal_wall(t: Triangulation) -> WallSystem:
    """One crossingless arc wall per interior edge."""
    walls = tuple(Wall(e, "arc", principal_curve(t, e, "+"), principal_curve(t, e, "-")) for e in t.interior)
    return WallSystem(t, walls, frozenset(t.interior))
