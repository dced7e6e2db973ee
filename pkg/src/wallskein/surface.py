"""Ideal triangulations of unpunctured marked surfaces.

A triangle is a counter-clockwise cycle of sides; a side ``(edge, start)``
runs along ``edge`` from its end ``start`` to the other end. Each marked
point keeps the counter-clockwise order of the edge ends incident to it,
beginning and ending with boundary edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Triangulation",
    "FlipQuad",
    "InvalidTriangulation",
    "NotFlippable",
    "validate",
    "exchange_matrix",
    "compatibility_matrix",
    "flip",
    "square",
    "polygon",
    "annulus_mw",
    "torus_one_hole",
]


class InvalidTriangulation(ValueError):
    """The triangulation data violates a structural invariant."""


class NotFlippable(ValueError):
    """The edge cannot be flipped (boundary edge or degenerate position)."""


@dataclass(frozen=True)
class FlipQuad:
    """Edges around a flipped diagonal.

    ``p1`` is the marked point at the head of ``kappa``; ``beta1, alpha1,
    beta2, alpha2`` follow the quadrilateral counter-clockwise from ``p1``, so
    the alpha sides precede ``kappa`` in their triangles and the beta sides
    follow it.
    """

    kappa: str
    kappa_prime: str
    alpha1: str
    alpha2: str
    beta1: str
    beta2: str


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Equality ignores edge orientations and the storage order of triangles."""

    edges: tuple
    boundary: frozenset
    endpoints: dict = field(hash=False, compare=False)
    triangles: tuple = ()
    end_orders: dict = field(default=None, hash=False, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.end_orders is None:
            object.__setattr__(self, "end_orders", _derive_end_orders(self))
        validate(self)

    # construction helpers
    @classmethod
    def build(cls, edges: Iterable, triangles: Iterable, name: str = "") -> "Triangulation":
        """``edges``: ``(id, is_boundary, (point0, point1))``; ``triangles``: side triples."""
        ids, bnd, ends = [], set(), {}
        for eid, is_b, (p0, p1) in edges:
            eid = str(eid)
            if eid in ends:
                raise InvalidTriangulation(f"duplicate edge {eid}")
            ids.append(eid)
            ends[eid] = (str(p0), str(p1))
            if is_b:
                bnd.add(eid)
        tris = tuple(tuple((str(e), int(s)) for e, s in t) for t in triangles)
        return cls(tuple(ids), frozenset(bnd), ends, tris, None, name)

    def _key(self) -> tuple:
        cached = self.__dict__.get("_cached_key")
        if cached is not None:
            return cached
        rev = {}
        for e, (p0, p1) in self.endpoints.items():
            if p0 != p1:
                rev[e] = _natural(p0) > _natural(p1)
            else:
                seq = self.end_orders[p0]
                rev[e] = seq.index((e, 0)) > seq.index((e, 1))

        def side(e, s):
            return (e, s ^ rev[e])

        tris = []
        for t in self.triangles:
            t = tuple(side(*x) for x in t)
            tris.append(min(t[i:] + t[:i] for i in range(3)))
        orders = tuple(sorted((p, tuple(side(*x) for x in seq)) for p, seq in self.end_orders.items()))
        key = (self.edges, self.boundary, tuple(sorted(tris)), orders)
        object.__setattr__(self, "_cached_key", key)
        return key

    def __eq__(self, other):
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def interior(self) -> tuple:
        return tuple(e for e in self.edges if e not in self.boundary)

    @property
    def points(self) -> tuple:
        return tuple(sorted(self.end_orders, key=_natural))

    def index(self, edge) -> int:
        return self.edges.index(str(edge))

    def uf_index(self, edge) -> int:
        return self.interior.index(str(edge))

    def point_of(self, edge: str, end: int) -> str:
        return self.endpoints[edge][end]

    def triangles_of(self, edge: str) -> list:
        return [(i, j) for i, t in enumerate(self.triangles) for j, (e, _) in enumerate(t) if e == edge]

    def euler_characteristic(self) -> int:
        return len(self.end_orders) - len(self.edges) + len(self.triangles)

    def relabel(self, mapping: dict) -> "Triangulation":
        m = lambda e: mapping.get(e, e)  # noqa: E731
        return Triangulation(
            tuple(m(e) for e in self.edges),
            frozenset(m(e) for e in self.boundary),
            {m(e): v for e, v in self.endpoints.items()},
            tuple(tuple((m(e), s) for e, s in t) for t in self.triangles),
            {p: tuple((m(e), s) for e, s in ends) for p, ends in self.end_orders.items()},
            self.name,
        )

    # serialization
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "edges": [{"id": e, "boundary": e in self.boundary} for e in self.edges],
            "triangles": [[e for e, _ in t] for t in self.triangles],
            "points": [{"id": p, "ends": [[e, s] for e, s in self.end_orders[p]]} for p in self.points],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Triangulation":
        """Load the edges/triangles/points schema.

        Triangles may be plain edge triples; the traversal direction of each
        side is recovered from the endpoint data and the point orders.
        """
        if isinstance(data, str):
            data = json.loads(data)
        try:
            edge_rows = data["edges"]
            tri_rows = data["triangles"]
            point_rows = data["points"]
        except KeyError as exc:
            raise InvalidTriangulation(f"missing field {exc.args[0]!r}") from None
        ids = [str(r["id"]) for r in edge_rows]
        bnd = frozenset(str(r["id"]) for r in edge_rows if r.get("boundary"))
        ends: dict = {e: [None, None] for e in ids}
        orders = {}
        for pr in point_rows:
            pid = str(pr["id"])
            seq = []
            for e, s in pr["ends"]:
                e, s = str(e), int(s)
                if e not in ends:
                    raise InvalidTriangulation(f"point {pid} references unknown edge {e}")
                if s not in (0, 1) or ends[e][s] is not None:
                    raise InvalidTriangulation(f"edge end ({e},{s}) is invalid or listed twice")
                ends[e][s] = pid
                seq.append((e, s))
            orders[pid] = tuple(seq)
        for e, (a, b) in ends.items():
            if a is None or b is None:
                raise InvalidTriangulation(f"edge {e} has an end at no marked point")
        succ = {}
        for seq in orders.values():
            for x, y in zip(seq, seq[1:]):
                succ[x] = y
        tris = []
        for t in tri_rows:
            tris.append(_orient_triangle(t, ends, succ))
        return cls(tuple(ids), bnd, {e: tuple(v) for e, v in ends.items()}, tuple(tris), orders, data.get("name", ""))


def _natural(label: str):
    return (0, int(label), "") if str(label).isdigit() else (1, 0, str(label))


def _orient_triangle(row, ends, succ):
    parsed = []
    for item in row:
        if isinstance(item, (list, tuple)):
            parsed.append([(str(item[0]), int(item[1]))])
        else:
            e = str(item)
            if e not in ends:
                raise InvalidTriangulation(f"triangle references missing edge {e}")
            parsed.append([(e, 0), (e, 1)])
    for e, _ in (c[0] for c in parsed):
        if e not in ends:
            raise InvalidTriangulation(f"triangle references missing edge {e}")
    found = []
    for a in parsed[0]:
        for b in parsed[1]:
            for c in parsed[2]:
                sides = (a, b, c)
                if all(_corner_ok(sides[i], sides[(i + 1) % 3], ends, succ) for i in range(3)):
                    found.append(sides)
    if len(found) != 1:
        raise InvalidTriangulation(f"cannot orient triangle {list(row)} consistently with the point orders")
    return found[0]


def _corner_ok(a, b, ends, succ):
    # a arrives at the corner, b leaves it; b's end directly precedes a's end
    head = (a[0], 1 - a[1])
    tail = b
    if ends[head[0]][head[1]] != ends[tail[0]][tail[1]]:
        return False
    return succ.get(tail) == head


def _derive_end_orders(t: Triangulation) -> dict:
    succ = {}
    for tri in t.triangles:
        if len(tri) != 3:
            raise InvalidTriangulation("triangles must have three sides")
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            for e, _ in (a, b):
                if e not in t.endpoints:
                    raise InvalidTriangulation(f"triangle references missing edge {e}")
            head = (a[0], 1 - a[1])
            if t.endpoints[a[0]][head[1]] != t.endpoints[b[0]][b[1]]:
                raise InvalidTriangulation(f"sides {a} and {b} do not meet at a marked point")
            if b in succ:
                raise InvalidTriangulation(f"edge end {b} starts two corners")
            succ[b] = head
    ends_at: dict = {}
    for e, (p0, p1) in t.endpoints.items():
        ends_at.setdefault(p0, []).append((e, 0))
        ends_at.setdefault(p1, []).append((e, 1))
    targets = set(succ.values())
    orders = {}
    for p, ends in ends_at.items():
        starts = [x for x in ends if x not in targets]
        if len(starts) != 1:
            raise InvalidTriangulation(f"marked point {p} is not a single boundary fan (puncture or gap)")
        seq = [starts[0]]
        while seq[-1] in succ:
            seq.append(succ[seq[-1]])
            if len(seq) > len(ends):
                raise InvalidTriangulation(f"corner cycle at marked point {p}")
        orders[p] = tuple(seq)
    return orders


def validate(t: Triangulation) -> None:
    """Check every structural invariant; raises :class:`InvalidTriangulation`."""
    if len(set(t.edges)) != len(t.edges):
        raise InvalidTriangulation("duplicate edge ids")
    if set(t.endpoints) != set(t.edges):
        raise InvalidTriangulation("endpoint data does not match the edge set")
    if not t.boundary <= set(t.edges):
        raise InvalidTriangulation("boundary edge missing from the edge set")
    seen = {}
    for p, seq in t.end_orders.items():
        if not seq:
            raise InvalidTriangulation(f"marked point {p} has no incident edges")
        for x in seq:
            if x in seen:
                raise InvalidTriangulation(f"edge end {x} appears twice in the point orders")
            if t.endpoints[x[0]][x[1]] != p:
                raise InvalidTriangulation(f"edge end {x} listed at the wrong point {p}")
            seen[x] = p
        if seq[0][0] not in t.boundary or seq[-1][0] not in t.boundary:
            raise InvalidTriangulation(f"marked point {p}: first and last ends must be boundary edges")
        for x in seq[1:-1]:
            if x[0] in t.boundary:
                raise InvalidTriangulation(f"marked point {p}: boundary edge end {x} in the interior of the fan")
    if len(seen) != 2 * len(t.edges):
        raise InvalidTriangulation("some edge end is at no marked point")
    side_count: dict = {}
    for tri in t.triangles:
        if len(tri) != 3:
            raise InvalidTriangulation("triangles must have three sides")
        for e, s in tri:
            if e not in t.endpoints:
                raise InvalidTriangulation(f"triangle references missing edge {e}")
            side_count[e] = side_count.get(e, 0) + 1
        es = [e for e, _ in tri]
        for i in range(3):
            if es[i] == es[(i + 1) % 3] and tri[i][1] != tri[(i + 1) % 3][1]:
                raise InvalidTriangulation(f"self-folded triangle {tri}")
    for e in t.edges:
        want = 1 if e in t.boundary else 2
        if side_count.get(e, 0) != want:
            raise InvalidTriangulation(f"edge {e} borders {side_count.get(e, 0)} triangle sides, expected {want}")
    # corners: each consecutive pair of ends at a point is a triangle corner
    corners = set()
    for tri in t.triangles:
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            corners.add((b, (a[0], 1 - a[1])))
    pairs = {(x, y) for seq in t.end_orders.values() for x, y in zip(seq, seq[1:])}
    if pairs != corners or len(corners) != 3 * len(t.triangles):
        raise InvalidTriangulation("point orders do not match the triangle corners")
    chi = t.euler_characteristic()
    m = len(t.end_orders)
    if len(t.edges) != -3 * chi + 2 * m or len(t.interior) != -3 * chi + m:
        raise InvalidTriangulation("edge counts violate the Euler characteristic relations")


def exchange_matrix(t: Triangulation) -> list:
    """Rows indexed by interior edges, columns by all edges."""
    idx = {e: i for i, e in enumerate(t.edges)}
    row = {e: i for i, e in enumerate(t.interior)}
    eps = [[0] * len(t.edges) for _ in t.interior]
    for tri in t.triangles:
        for i in range(3):
            a, b = tri[i][0], tri[(i + 1) % 3][0]
            if a in row:
                eps[row[a]][idx[b]] += 1
            if b in row:
                eps[row[b]][idx[a]] -= 1
    return eps


def compatibility_matrix(t: Triangulation) -> list:
    """Skew form over all edges from the point orders."""
    idx = {e: i for i, e in enumerate(t.edges)}
    n = len(t.edges)
    pi = [[0] * n for _ in range(n)]
    for seq in t.end_orders.values():
        for i, (x, _) in enumerate(seq):
            for y, _ in seq[i + 1:]:
                # the earlier end is clockwise of the later one
                pi[idx[x]][idx[y]] += 1
                pi[idx[y]][idx[x]] -= 1
    for i in range(n):
        pi[i][i] = 0
    return pi


def flip(t: Triangulation, kappa, new_id: str | None = None):
    """Replace ``kappa`` by the other diagonal of its quadrilateral.

    Returns ``(flipped, quad)``. The new edge keeps the id of ``kappa`` unless
    ``new_id`` is given.
    """
    kappa = str(kappa)
    if kappa not in t.endpoints:
        raise NotFlippable(f"unknown edge {kappa}")
    if kappa in t.boundary:
        raise NotFlippable(f"{kappa} is a boundary edge")
    occ = t.triangles_of(kappa)
    tri_ids = {i for i, _ in occ}
    if len(tri_ids) != 2:
        raise NotFlippable(f"{kappa} borders a single triangle twice")
    first = next(i for i, j in occ if t.triangles[i][j] == (kappa, 0))
    second = next(i for i in tri_ids if i != first)
    t1 = _rotate_to(t.triangles[first], (kappa, 0))
    t2 = _rotate_to(t.triangles[second], (kappa, 1))
    _, s1, s2 = t1
    _, u1, u2 = t2
    r1 = t.point_of(s1[0], 1 - s1[1])
    r2 = t.point_of(u1[0], 1 - u1[1])
    new = str(new_id) if new_id is not None else kappa
    quad = FlipQuad(kappa, new, alpha1=s2[0], alpha2=u2[0], beta1=s1[0], beta2=u1[0])

    orders = {p: [x for x in seq if x[0] != kappa] for p, seq in t.end_orders.items()}
    _insert_between(orders[r1], s2, (s1[0], 1 - s1[1]), (new, 0))
    _insert_between(orders[r2], u2, (u1[0], 1 - u1[1]), (new, 1))

    endpoints = dict(t.endpoints)
    del endpoints[kappa]
    endpoints[new] = (r1, r2)
    tris = [tri for i, tri in enumerate(t.triangles) if i not in tri_ids]
    tris.insert(min(first, second), (s2, u1, (new, 1)))
    tris.insert(max(first, second), (u2, s1, (new, 0)))
    edges = tuple(new if e == kappa else e for e in t.edges)
    flipped = Triangulation(
        edges, t.boundary, endpoints, tuple(tris), {p: tuple(v) for p, v in orders.items()}, t.name
    )
    return flipped, quad


def _rotate_to(tri, side):
    i = tri.index(side)
    return tri[i:] + tri[:i]


def _insert_between(seq: list, leaving, arriving, new_end):
    i = seq.index(leaving)
    if seq[i + 1] != arriving:
        raise NotFlippable("point order is inconsistent with the quadrilateral")
    seq.insert(i + 1, new_end)


# builders


def square() -> Triangulation:
    """Square ``p1..p4`` with diagonal ``kappa`` from ``p3`` to ``p1``."""
    edges = [
        ("kappa", False, ("p3", "p1")),
        ("alpha1", True, ("p2", "p3")),
        ("alpha2", True, ("p4", "p1")),
        ("beta1", True, ("p1", "p2")),
        ("beta2", True, ("p3", "p4")),
    ]
    tris = [
        [("beta1", 0), ("alpha1", 0), ("kappa", 0)],
        [("kappa", 1), ("beta2", 0), ("alpha2", 0)],
    ]
    return Triangulation.build(edges, tris, name="square")


def polygon(n: int) -> Triangulation:
    """Convex ``n``-gon, fan triangulation from vertex 0.

    Boundary edges ``b{i}`` join ``i`` and ``i+1``; diagonals ``d{j}`` join
    0 and ``j``.
    """
    if n < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    edges = [(f"b{i}", True, (str(i), str((i + 1) % n))) for i in range(n)]
    edges += [(f"d{j}", False, ("0", str(j))) for j in range(2, n - 1)]

    def chord(j):  # side from 0 to j
        if j == 1:
            return ("b0", 0)
        if j == n - 1:
            return (f"b{n - 1}", 1)
        return (f"d{j}", 0)

    tris = []
    for j in range(1, n - 1):
        to_j = chord(j)
        back = chord(j + 1)
        tris.append([to_j, (f"b{j}", 0), (back[0], 1 - back[1])])
    return Triangulation.build(edges, tris, name=f"polygon{n}")


def annulus_mw() -> Triangulation:
    """Annulus with two marked points on each boundary circle.

    Outer points ``M1`` (top), ``M4`` (bottom); inner points ``M2`` (top),
    ``M3`` (bottom). Arcs ``2`` = M1-M2 and ``4`` = M3-M4 are radial; ``1``
    and ``3`` join M2 to M4 around the left and right of the hole. Boundary
    arcs: ``5`` outer left, ``8`` outer right, ``6`` inner left, ``7`` inner
    right.
    """
    edges = [
        ("1", False, ("M2", "M4")),
        ("2", False, ("M1", "M2")),
        ("3", False, ("M2", "M4")),
        ("4", False, ("M3", "M4")),
        ("5", True, ("M1", "M4")),
        ("6", True, ("M2", "M3")),
        ("7", True, ("M2", "M3")),
        ("8", True, ("M4", "M1")),
    ]
    tris = [
        [("5", 0), ("1", 1), ("2", 1)],
        [("1", 0), ("4", 1), ("6", 1)],
        [("2", 0), ("3", 0), ("8", 0)],
        [("7", 0), ("4", 0), ("3", 1)],
    ]
    return Triangulation.build(edges, tris, name="annulus")


def torus_one_hole() -> Triangulation:
    """Torus with one boundary circle carrying two marked points.

    Built from a hexagon with sides ``a, b, a^-1, b^-1, c, d``; ``c`` and
    ``d`` are the boundary arcs, ``e1, e2, e3`` the fan diagonals from the
    vertex between ``c`` and ``d``.
    """
    edges = [
        ("a", False, ("X", "X")),
        ("b", False, ("X", "X")),
        ("e1", False, ("Y", "X")),
        ("e2", False, ("Y", "X")),
        ("e3", False, ("Y", "X")),
        ("c", True, ("X", "Y")),
        ("d", True, ("Y", "X")),
    ]
    tris = [
        [("d", 0), ("a", 0), ("e1", 1)],
        [("e1", 0), ("b", 0), ("e2", 1)],
        [("e2", 0), ("a", 1), ("e3", 1)],
        [("e3", 0), ("b", 1), ("c", 0)],
    ]
    return Triangulation.build(edges, tris, name="torus")


def edge_points(t: Triangulation, edges: Sequence[str]) -> list:
    return [t.endpoints[e] for e in edges]
