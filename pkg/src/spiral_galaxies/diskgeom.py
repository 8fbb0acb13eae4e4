"""Disk geometry shared by the Unit3 reduction: loops, paths and their matchings.

Disks live on cells. Two disks two cells apart in a row or column form a potential
edge whose midpoint cell carries a center. Loops are drawn on one of two
sublattices (offset 0: even/even cells, offset 1: odd/odd cells), so a loop never
has an edge to a disk of the other sublattice; edges of different sublattices can
only interact by crossing at a shared midpoint cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Point = tuple[int, int]
Edge = tuple[Point, Point]


class GeometryError(ValueError):
    pass


def edge(p: Point, q: Point) -> Edge:
    return (p, q) if p < q else (q, p)


def mid(e: Edge) -> Point:
    (a, b), (c, d) = e
    return ((a + c) // 2, (b + d) // 2)


def edges_of(disks: Iterable[Point]) -> set[Edge]:
    s = set(disks)
    out = set()
    for x, y in s:
        for q in ((x + 2, y), (x, y + 2)):
            if q in s:
                out.add(((x, y), q))
    return out


def polyline(points: Sequence[Point]) -> list[Point]:
    """Lattice points at spacing 2 along an axis-parallel polyline, endpoints included."""
    out: list[Point] = []
    for (a, b), (c, d) in zip(points, points[1:]):
        if a != c and b != d:
            raise GeometryError(f"segment {(a, b)}->{(c, d)} is not axis-parallel")
        if (a - c) % 2 or (b - d) % 2:
            raise GeometryError(f"segment {(a, b)}->{(c, d)} has odd length")
        n = (abs(c - a) + abs(d - b)) // 2
        sx, sy = (c > a) - (c < a), (d > b) - (d < b)
        out.extend((a + 2 * sx * k, b + 2 * sy * k) for k in range(n))
    out.append(tuple(points[-1]))
    return out


# ---------------------------------------------------------------- regions

@dataclass
class Region:
    """Union of 2x2 tiles; tile (i, j) spans cells [2i+o, 2i+2+o] x [2j+o, 2j+2+o]."""

    offset: int
    tiles: set[tuple[int, int]] = field(default_factory=set)

    def add_rect(self, x0: int, y0: int, x1: int, y1: int) -> "Region":
        o = self.offset
        x0, x1 = sorted((x0, x1))
        y0, y1 = sorted((y0, y1))
        for v in (x0, x1, y0, y1):
            if (v - o) % 2:
                raise GeometryError(f"rectangle corner {v} is off the sublattice")
        for i in range((x0 - o) // 2, (x1 - o) // 2):
            for j in range((y0 - o) // 2, (y1 - o) // 2):
                self.tiles.add((i, j))
        return self

    def add_polygon(self, corners: Sequence[Point]) -> "Region":
        """Fill a simple rectilinear polygon by testing tile centers (even-odd rule)."""
        o = self.offset
        xs = [p[0] for p in corners]
        ys = [p[1] for p in corners]
        segs = list(zip(corners, list(corners[1:]) + [corners[0]]))
        for i in range((min(xs) - o) // 2, (max(xs) - o) // 2):
            for j in range((min(ys) - o) // 2, (max(ys) - o) // 2):
                cx, cy = 2 * i + o + 1, 2 * j + o + 1
                inside = False
                for (a, b), (c, d) in segs:
                    if a == c and a > cx and min(b, d) < cy < max(b, d):
                        inside = not inside
                if inside:
                    self.tiles.add((i, j))
        return self

    def cycle(self) -> list[Point]:
        """Boundary disks in order, counter-clockwise, starting at the lowest-then-leftmost disk."""
        if not self.tiles:
            raise GeometryError("empty region")
        o = self.offset
        nxt: dict[Point, Point] = {}
        for i, j in self.tiles:
            sides = (((i, j), (i + 1, j), (i, j - 1)), ((i + 1, j), (i + 1, j + 1), (i + 1, j)),
                     ((i + 1, j + 1), (i, j + 1), (i, j + 1)), ((i, j + 1), (i, j), (i - 1, j)))
            for a, b, nb in sides:
                if nb not in self.tiles:
                    if a in nxt:
                        raise GeometryError(f"region boundary pinches at {a}")
                    nxt[a] = b
        start = min(nxt, key=lambda p: (p[1], p[0]))
        out = [start]
        p = nxt[start]
        while p != start:
            out.append(p)
            p = nxt[p]
        if len(out) != len(nxt):
            raise GeometryError("region has a hole or several parts")
        return [(2 * i + o, 2 * j + o) for i, j in out]


# ---------------------------------------------------------------- components

@dataclass
class Component:
    """A connected group of disks whose perfect matchings are listed as ``states``."""

    name: str
    disks: list[Point]
    edges: set[Edge]
    states: list[frozenset[Edge]]
    kind: str = "loop"

    @property
    def probe(self) -> Edge:
        return edge(self.disks[0], self.disks[1])


def loop_component(name: str, cycle: list[Point], kind: str = "loop") -> Component:
    n = len(cycle)
    if n < 4 or n % 2:
        raise GeometryError(f"{name}: a loop needs an even number of at least 4 disks")
    es = [edge(cycle[k], cycle[(k + 1) % n]) for k in range(n)]
    for k in range(n):
        a, b = cycle[k], cycle[(k + 1) % n]
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 2 or a[0] != b[0] and a[1] != b[1]:
            raise GeometryError(f"{name}: consecutive disks {a} {b} are not two apart")
    if len(set(cycle)) != n:
        raise GeometryError(f"{name}: loop is not simple")
    if edges_of(cycle) != set(es):
        raise GeometryError(f"{name}: loop has a chord")
    states = [frozenset(es[0::2]), frozenset(es[1::2])]
    return Component(name, list(cycle), set(es), states, kind)


def matchings(disks: Iterable[Point]) -> list[frozenset[Edge]]:
    """All non-crossing perfect matchings of a small disk set (plain backtracking)."""
    order = sorted(set(disks))
    present = set(order)
    used: set[Point] = set()
    mids: set[Point] = set()
    cur: list[Edge] = []
    out: list[frozenset[Edge]] = []

    def rec(i: int):
        while i < len(order) and order[i] in used:
            i += 1
        if i == len(order):
            out.append(frozenset(cur))
            return
        v = order[i]
        for w in ((v[0] + 2, v[1]), (v[0], v[1] + 2), (v[0] - 2, v[1]), (v[0], v[1] - 2)):
            if w not in present or w in used:
                continue
            e = edge(v, w)
            m = mid(e)
            if m in mids:
                continue
            used.update((v, w))
            mids.add(m)
            cur.append(e)
            rec(i + 1)
            cur.pop()
            mids.discard(m)
            used.difference_update((v, w))

    rec(0)
    return out


def theta_component(name: str, paths: Sequence[list[Point]]) -> Component:
    disks: list[Point] = []
    es: set[Edge] = set()
    for p in paths:
        for a, b in zip(p, p[1:]):
            es.add(edge(a, b))
        for d in p:
            if d not in disks:
                disks.append(d)
    if edges_of(disks) != es:
        raise GeometryError(f"{name}: theta has a chord")
    return Component(name, disks, es, matchings(disks), "theta")


# ---------------------------------------------------------------- systems

@dataclass
class System:
    """Components plus the crossing constraints between their states."""

    components: list[Component]

    def __post_init__(self):
        owner: dict[Point, int] = {}
        for k, c in enumerate(self.components):
            for d in c.disks:
                if d in owner:
                    raise GeometryError(f"disk {d} shared by {self.components[owner[d]].name} and {c.name}")
                owner[d] = k
        expected = set().union(*(c.edges for c in self.components)) if self.components else set()
        actual = edges_of(owner)
        if actual != expected:
            extra = sorted(actual - expected)[:3]
            names = sorted({self.components[owner[e[0]]].name for e in extra} |
                           {self.components[owner[e[1]]].name for e in extra})
            raise GeometryError(f"unintended edges {extra} between {names}")
        by_mid: dict[Point, list[tuple[int, Edge]]] = {}
        for k, c in enumerate(self.components):
            for e in c.edges:
                by_mid.setdefault(mid(e), []).append((k, e))
        # conflicts[(a, b)] = set of (state of a, state of b) pairs that clash
        self.conflicts: dict[tuple[int, int], set[tuple[int, int]]] = {}
        for entries in by_mid.values():
            for (ka, ea), (kb, eb) in ((x, y) for i, x in enumerate(entries) for y in entries[i + 1:]):
                if ka == kb:
                    continue
                if ka > kb:
                    ka, ea, kb, eb = kb, eb, ka, ea
                bad = self.conflicts.setdefault((ka, kb), set())
                for sa, A in enumerate(self.components[ka].states):
                    if ea in A:
                        for sb, B in enumerate(self.components[kb].states):
                            if eb in B:
                                bad.add((sa, sb))
        self.disks = owner

    def index(self, name: str) -> int:
        for k, c in enumerate(self.components):
            if c.name == name:
                return k
        raise KeyError(name)

    def solutions(self, limit: int | None = None) -> list[tuple[int, ...]]:
        """Every consistent choice of one state per component."""
        n = len(self.components)
        nbrs: dict[int, list[int]] = {k: [] for k in range(n)}
        for a, b in self.conflicts:
            nbrs[a].append(b)
            nbrs[b].append(a)
        # visit components so each one after the first of its group has an assigned neighbour
        order, seen = [], set()
        for root in range(n):
            if root in seen:
                continue
            seen.add(root)
            queue = [root]
            while queue:
                k = queue.pop(0)
                order.append(k)
                for j in sorted(nbrs[k]):
                    if j not in seen:
                        seen.add(j)
                        queue.append(j)
        assign = [-1] * n
        out: list[tuple[int, ...]] = []

        def ok(k: int, s: int) -> bool:
            for j in nbrs[k]:
                if assign[j] < 0:
                    continue
                key, pair = ((k, j), (s, assign[j])) if k < j else ((j, k), (assign[j], s))
                if pair in self.conflicts[key]:
                    return False
            return True

        def rec(i: int) -> bool:
            if i == n:
                out.append(tuple(assign))
                return limit is not None and len(out) >= limit
            k = order[i]
            for s in range(len(self.components[k].states)):
                if ok(k, s):
                    assign[k] = s
                    if rec(i + 1):
                        return True
                    assign[k] = -1
            return False

        rec(0)
        return out

    def matching(self, states: Sequence[int]) -> set[Edge]:
        out: set[Edge] = set()
        for c, s in zip(self.components, states):
            out |= c.states[s]
        return out
