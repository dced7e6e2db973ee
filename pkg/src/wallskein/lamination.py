"""Curves on a triangulated surface by shear coordinates and intersection numbers.

A curve is stored by ``x`` (shear coordinates on interior edges) and ``a2``
(twice the half-intersection numbers, i.e. the geometric intersection
counts, on all edges). The two are tied by ``x = -eps . a``. Arcs ending on
a boundary segment count their endpoint as half an intersection with that
boundary edge.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .coefrw import Symbol, TropMonomial, u
from .surface import NotFlippable, Triangulation, exchange_matrix, flip

__all__ = [
    "CurveCoords",
    "MultiLamination",
    "InvalidCurve",
    "shear_from_a2",
    "shear_mutate",
    "half_int_mutate",
    "lam_coeffs",
    "rescale_prefix",
    "principal_curve",
    "principal_lamination",
    "minimal_half_solution",
    "random_curve",
    "relation_identity_holds",
]


class InvalidCurve(ValueError):
    """Coordinates violate ``x = -eps . a`` or a nonnegativity constraint."""


def shear_from_a2(t: Triangulation, a2: Sequence[int]) -> tuple:
    """Shear coordinates determined by doubled intersection numbers."""
    eps = exchange_matrix(t)
    out = []
    for row in eps:
        s = -sum(e * a for e, a in zip(row, a2))
        if s % 2:
            raise InvalidCurve("intersection numbers give a half-integer shear coordinate")
        out.append(s // 2)
    return tuple(out)


@dataclass(frozen=True)
class CurveCoords:
    """``x`` aligned with ``base.interior``; ``a2`` aligned with ``base.edges``."""

    base: Triangulation
    x: tuple
    a2: tuple

    def __post_init__(self):
        x = tuple(int(v) for v in self.x)
        a2 = tuple(int(v) for v in self.a2)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "a2", a2)
        if len(x) != len(self.base.interior) or len(a2) != len(self.base.edges):
            raise InvalidCurve("coordinate vectors do not match the triangulation")
        if any(v < 0 for v in a2):
            raise InvalidCurve("intersection numbers must be nonnegative")
        if shear_from_a2(self.base, a2) != x:
            raise InvalidCurve("shear coordinates disagree with the intersection numbers")

    @classmethod
    def from_a2(cls, t: Triangulation, a2: Sequence[int]) -> "CurveCoords":
        return cls(t, shear_from_a2(t, a2), tuple(a2))

    @classmethod
    def from_maps(cls, t: Triangulation, x: dict, a2: dict) -> "CurveCoords":
        return cls(t, tuple(x.get(e, 0) for e in t.interior), tuple(a2.get(e, 0) for e in t.edges))

    def x_of(self, edge) -> int:
        return self.x[self.base.uf_index(edge)]

    def a2_of(self, edge) -> int:
        return self.a2[self.base.index(edge)]

    def x_map(self) -> dict:
        return dict(zip(self.base.interior, self.x))

    def a2_map(self) -> dict:
        return dict(zip(self.base.edges, self.a2))

    def to_json(self) -> dict:
        return {
            "x": {e: v for e, v in self.x_map().items() if v},
            "a2": {e: v for e, v in self.a2_map().items() if v},
        }


@dataclass(frozen=True)
class MultiLamination:
    """Curves tagged by the coefficient symbol of their lamination."""

    base: Triangulation
    entries: tuple = ()

    def __post_init__(self):
        entries = tuple((s if isinstance(s, Symbol) else u(s), c) for s, c in self.entries)
        object.__setattr__(self, "entries", entries)
        for _, c in entries:
            if c.base is not self.base and c.base != self.base:
                raise InvalidCurve("curve on a different triangulation")

    @property
    def symbols(self) -> tuple:
        seen = []
        for s, _ in self.entries:
            if s not in seen:
                seen.append(s)
        return tuple(sorted(seen, key=lambda s: s.sort_key))

    def total_x(self, sym: Symbol) -> tuple:
        out = [0] * len(self.base.interior)
        for s, c in self.entries:
            if s == sym:
                out = [a + b for a, b in zip(out, c.x)]
        return tuple(out)

    def total_a2(self, sym: Symbol) -> tuple:
        out = [0] * len(self.base.edges)
        for s, c in self.entries:
            if s == sym:
                out = [a + b for a, b in zip(out, c.a2)]
        return tuple(out)

    def mutate(self, kappa) -> "MultiLamination":
        flipped, _ = flip(self.base, kappa)
        return MultiLamination(flipped, tuple((s, shear_mutate(c, kappa, flipped)) for s, c in self.entries))

    def to_json(self, base_id: str = "") -> dict:
        return {
            "base": base_id or self.base.name,
            "curves": [dict(label=str(s), **c.to_json()) for s, c in self.entries],
        }


def half_int_mutate(t: Triangulation, a2: Sequence[int], kappa) -> tuple:
    """Doubled intersection numbers after flipping ``kappa``.

    ``a'(kappa') = -a(kappa) + max(sum [eps]_+ a, sum [-eps]_+ a)``; other
    entries are unchanged.
    """
    kappa = str(kappa)
    if kappa in t.boundary or kappa not in t.endpoints:
        raise NotFlippable(f"{kappa} is not an interior edge")
    row = exchange_matrix(t)[t.uf_index(kappa)]
    pos = sum(e * a for e, a in zip(row, a2) if e > 0)
    neg = sum(-e * a for e, a in zip(row, a2) if e < 0)
    out = list(a2)
    k = t.index(kappa)
    out[k] = -a2[k] + max(pos, neg)
    return tuple(out)


def _shear_rule(t: Triangulation, x: Sequence[int], kappa: str) -> tuple:
    eps = exchange_matrix(t)
    col = t.index(kappa)
    k = t.uf_index(kappa)
    xk = x[k]
    out = []
    for i, xi in enumerate(x):
        if i == k:
            out.append(-xk)
            continue
        e = eps[i][col]
        if e > 0:
            out.append(xi + e * max(xk, 0))
        elif e < 0:
            out.append(xi + e * max(-xk, 0))
        else:
            out.append(xi)
    return tuple(out)


def shear_mutate(c: CurveCoords, kappa, flipped: Triangulation | None = None) -> CurveCoords:
    """Joint flip of shear coordinates and intersection numbers across ``kappa``."""
    kappa = str(kappa)
    if flipped is None:
        flipped, _ = flip(c.base, kappa)
    x = _shear_rule(c.base, c.x, kappa)
    a2 = half_int_mutate(c.base, c.a2, kappa)
    return CurveCoords(flipped, x, a2)


def lam_coeffs(t: Triangulation, lam: MultiLamination) -> dict:
    """``alpha -> (p+, p-)`` with ``p+- = prod_j sym_j^[+-x_alpha(L_j)]_+``."""
    out = {}
    totals = {s: lam.total_x(s) for s in lam.symbols}
    for i, alpha in enumerate(t.interior):
        plus, minus = {}, {}
        for s, x in totals.items():
            if x[i] > 0:
                plus[s] = 2 * x[i]
            elif x[i] < 0:
                minus[s] = -2 * x[i]
        out[alpha] = (TropMonomial.from_map(plus), TropMonomial.from_map(minus))
    return out


def rescale_prefix(t: Triangulation, lam: MultiLamination, alpha) -> TropMonomial:
    """``prod_j sym_j^{a_alpha(L_j)}`` (doubled exponents are the counts)."""
    k = t.index(alpha)
    return TropMonomial.from_map({s: lam.total_a2(s)[k] for s in lam.symbols})


def principal_curve(t: Triangulation, kappa, sign: str = "+") -> CurveCoords:
    """Arc parallel to ``kappa`` with both ends slid into adjacent boundary segments.

    For ``sign='+'`` each end moves past the edge ends listed before
    ``kappa`` at its marked point, for ``'-'`` past those listed after. The
    result crosses ``kappa`` once and has shear coordinates ``-+e_kappa``.
    """
    kappa = str(kappa)
    if kappa not in t.interior:
        raise NotFlippable(f"{kappa} is not an interior edge")
    a2 = [0] * len(t.edges)
    a2[t.index(kappa)] += 1
    for end in (0, 1):
        p = t.point_of(kappa, end)
        seq = t.end_orders[p]
        i = seq.index((kappa, end))
        passed = seq[:i] if sign == "+" else seq[i + 1:]
        for e, _ in passed:
            a2[t.index(e)] += 1
    return CurveCoords.from_a2(t, a2)


def principal_lamination(t: Triangulation, sign: str = "+", kind: str = "u") -> MultiLamination:
    """One principal curve per interior edge, tagged ``kind[edge]``."""
    return MultiLamination(t, tuple((Symbol(kind, e), principal_curve(t, e, sign)) for e in t.interior))


def minimal_half_solution(t: Triangulation, x: Sequence[int]) -> tuple | None:
    """Smallest-support ``a2`` with entries in ``{0, 1}`` and ``x = -eps . a``.

    Exhaustive search; intended for small triangulations.
    """
    n = len(t.edges)
    x = tuple(x)
    for size in range(n + 1):
        for support in itertools.combinations(range(n), size):
            a2 = [0] * n
            for i in support:
                a2[i] = 1
            try:
                if shear_from_a2(t, a2) == x:
                    return tuple(a2)
            except InvalidCurve:
                continue
    return None


def _triangle_ok(counts: Sequence[int]) -> bool:
    a, b, c = counts
    return (a + b + c) % 2 == 0 and a <= b + c and b <= a + c and c <= a + b


def random_curve(t: Triangulation, rng: random.Random, max_count: int = 4, tries: int = 10_000) -> CurveCoords:
    """Random multicurve given by normal coordinates.

    Edge counts are drawn until every triangle satisfies the triangle
    inequalities with even perimeter, which is exactly the condition for the
    counts to come from a normal multicurve.
    """
    idx = {e: i for i, e in enumerate(t.edges)}
    for _ in range(tries):
        n = [rng.randint(0, max_count) for _ in t.edges]
        if all(_triangle_ok([n[idx[e]] for e, _ in tri]) for tri in t.triangles):
            return CurveCoords.from_a2(t, n)
    raise RuntimeError("failed to sample normal coordinates")


def relation_identity_holds(t: Triangulation, c: CurveCoords, kappa) -> bool:
    """``max(P, N) - P = [x]_+`` and ``max(P, N) - N = [-x]_+`` at ``kappa``.

    ``P`` and ``N`` are the positive- and negative-side sums of the
    intersection numbers around ``kappa``.
    """
    row = exchange_matrix(t)[t.uf_index(kappa)]
    pos = sum(e * a for e, a in zip(row, c.a2) if e > 0)
    neg = sum(-e * a for e, a in zip(row, c.a2) if e < 0)
    x2 = 2 * c.x_of(kappa)
    top = max(pos, neg)
    return top - pos == max(x2, 0) and top - neg == max(-x2, 0)


def curves_json(lam: MultiLamination) -> list:
    return lam.to_json()["curves"]


def load_lamination(data: dict, t: Triangulation) -> MultiLamination:
    """Parse ``{curves:[{label, x, a2}]}``; ``x`` is optional and checked if present."""
    from .coefrw import parse_expression

    entries = []
    for row in data.get("curves", []):
        label = str(row["label"])
        sym = parse_expression(label).syms[0] if "[" in label else u(label)
        c = CurveCoords.from_a2(t, [int(row.get("a2", {}).get(e, 0)) for e in t.edges])
        if "x" in row:
            want = tuple(int(row["x"].get(e, 0)) for e in t.interior)
            if want != c.x:
                raise InvalidCurve(f"curve {label}: x disagrees with a2")
        entries.append((sym, c))
    return MultiLamination(t, tuple(entries))


def mutate_all(curves: Iterable[CurveCoords], kappa) -> list:
    curves = list(curves)
    if not curves:
        return []
    flipped, _ = flip(curves[0].base, kappa)
    return [shear_mutate(c, kappa, flipped) for c in curves]
