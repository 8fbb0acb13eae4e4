"""Squared grid graphs and their non-crossing perfect matchings.

Vertices are lattice points; two vertices are adjacent exactly when they are at
Euclidean distance 2, so every edge is axis-parallel of length 2. An even graph
(all vertices with x+y even) corresponds to a board whose empty cells are the
vertices: each edge becomes a 1x3 galaxy around the cell between its endpoints.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterable, Iterator

from .board import Board, BoardError, Center
from .solver import CountResult, SearchBudget, UNLIMITED

Point = tuple[int, int]
Edge = tuple[Point, Point]


class GraphError(ValueError):
    pass


class MatchingBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SquaredGridGraph:
    vertices: frozenset[Point]

    def __init__(self, vertices: Iterable[Point]):
        object.__setattr__(self, "vertices", frozenset((int(x), int(y)) for x, y in vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: Point) -> list[Point]:
        x, y = v
        return [w for w in ((x - 2, y), (x, y - 2), (x, y + 2), (x + 2, y)) if w in self.vertices]

    def edges(self) -> list[Edge]:
        out = []
        for v in sorted(self.vertices):
            x, y = v
            for w in ((x + 2, y), (x, y + 2)):
                if w in self.vertices:
                    out.append((v, w))
        return out

    def is_even(self) -> bool:
        return all((x + y) % 2 == 0 for x, y in self.vertices)

    def translate(self, dx: int, dy: int) -> "SquaredGridGraph":
        return SquaredGridGraph((x + dx, y + dy) for x, y in self.vertices)


@dataclass(frozen=True)
class Matching:
    edges: tuple[Edge, ...]

    @property
    def non_crossing(self) -> bool:
        es = self.edges
        return not any(edges_cross(es[i], es[j]) for i in range(len(es)) for j in range(i + 1, len(es)))

    def is_perfect_for(self, g: SquaredGridGraph) -> bool:
        covered = [v for e in self.edges for v in e]
        edge_set = {frozenset(e) for e in g.edges()}
        return (len(covered) == len(set(covered)) and set(covered) == g.vertices
                and all(frozenset(e) in edge_set for e in self.edges))


def parity_split(g: SquaredGridGraph) -> tuple[SquaredGridGraph, SquaredGridGraph]:
    even = SquaredGridGraph(v for v in g.vertices if (v[0] + v[1]) % 2 == 0)
    odd = SquaredGridGraph(v for v in g.vertices if (v[0] + v[1]) % 2)
    return even, odd


def _orient(p: Point, q: Point, r: Point) -> int:
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def _on_segment(p: Point, q: Point, r: Point) -> bool:
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def edges_cross(e1: Edge, e2: Edge) -> bool:
    """Whether the two open segments meet. Endpoints must be pairwise distinct."""
    (p1, q1), (p2, q2) = e1, e2
    if {p1, q1} & {p2, q2}:
        raise GraphError("edges share an endpoint")
    o1, o2 = _orient(p1, q1, p2), _orient(p1, q1, q2)
    o3, o4 = _orient(p2, q2, p1), _orient(p2, q2, q1)
    if o1 != o2 and o3 != o4:
        # a proper crossing, or one endpoint touching the other segment's interior
        return True
    # collinear overlap of positive length
    if o1 == o2 == 0:
        pts = [p for p in (p2, q2) if _on_segment(p1, q1, p)] + [p for p in (p1, q1) if _on_segment(p2, q2, p)]
        return len(set(pts)) >= 2
    return False


def midpoint(e: Edge) -> Point:
    (a, b), (c, d) = e
    return ((a + c) // 2, (b + d) // 2)


# ---------------------------------------------------------------- puzzle conversion

def graph_to_puzzle(g: SquaredGridGraph) -> tuple[Board, Point]:
    """Board whose empty cells are the vertices of ``g``, plus the offset subtracted from vertices.

    The offset always has even coordinate sum so that parity is preserved; when the
    bounding box corner has odd sum one fully centered padding row is added below.
    """
    if not g.vertices:
        raise GraphError("the graph has no vertices")
    if not g.is_even():
        raise GraphError("graph_to_puzzle needs an even graph")
    xs = [v[0] for v in g.vertices]
    ys = [v[1] for v in g.vertices]
    ox, oy = min(xs), min(ys)
    if (ox + oy) % 2:
        oy -= 1
    width, height = max(xs) - ox + 1, max(ys) - oy + 1
    empty = {(x - ox, y - oy) for x, y in g.vertices}
    centers = tuple(Center((2 * x + 1, 2 * y + 1)) for y in range(height) for x in range(width)
                    if (x, y) not in empty)
    if not centers:
        raise GraphError("the board would have no centers")
    return Board(width, height, centers), (ox, oy)


def puzzle_to_graph(b: Board) -> SquaredGridGraph:
    filled = set()
    for c in b.centers:
        a, d = c.pos
        if not (a % 2 and d % 2):
            raise BoardError(f"center {c.pos} is not a cell-center")
        filled.add((a // 2, d // 2))
    empty = [cell for cell in b.cells() if cell not in filled]
    odd = [cell for cell in empty if (cell[0] + cell[1]) % 2]
    if odd:
        raise BoardError(f"board is not even: empty cell {odd[0]} has odd position")
    return SquaredGridGraph(empty)


# ---------------------------------------------------------------- matching search

def _matchings(g: SquaredGridGraph, budget: SearchBudget) -> Iterator[list[Edge]]:
    order = sorted(g.vertices)
    if len(order) % 2:
        return
    used: set[Point] = set()
    mids: set[Point] = set()
    chosen: list[Edge] = []
    nodes = 0
    deadline = time.monotonic() + budget.max_seconds if budget.max_seconds else None

    def rec(i: int) -> Iterator[list[Edge]]:
        nonlocal nodes
        nodes += 1
        if budget.max_nodes is not None and nodes > budget.max_nodes:
            raise MatchingBudgetExceeded
        if deadline is not None and time.monotonic() > deadline:
            raise MatchingBudgetExceeded
        while i < len(order) and order[i] in used:
            i += 1
        if i == len(order):
            yield list(chosen)
            return
        v = order[i]
        for w in g.neighbors(v):
            if w in used:
                continue
            e = (v, w) if v < w else (w, v)
            m = midpoint(e)
            # perpendicular edges through the same midpoint are the only crossings here
            if m in mids:
                continue
            used.update((v, w))
            mids.add(m)
            chosen.append(e)
            yield from rec(i + 1)
            chosen.pop()
            mids.discard(m)
            used.difference_update((v, w))

    yield from rec(0)


def solve_matching(g: SquaredGridGraph, budget: SearchBudget = UNLIMITED) -> Matching | None:
    if not g.is_even():
        raise GraphError("matching search expects an even graph")
    for es in _matchings(g, budget):
        return Matching(tuple(es))
    return None


def count_matchings(g: SquaredGridGraph, budget: SearchBudget = UNLIMITED) -> CountResult:
    if not g.is_even():
        raise GraphError("matching search expects an even graph")
    n = 0
    try:
        for _ in _matchings(g, budget):
            n += 1
            if budget.max_solutions is not None and n >= budget.max_solutions:
                return CountResult(n, False)
    except MatchingBudgetExceeded:
        return CountResult(n, False)
    return CountResult(n, True)


def normalize_parity(g: SquaredGridGraph) -> SquaredGridGraph:
    """Shift a single-parity odd graph by (1, 0) so it becomes even."""
    even, odd = parity_split(g)
    if even.vertices and odd.vertices:
        raise GraphError("graph mixes parities; split it first")
    return g.translate(1, 0) if odd.vertices else g


def random_even_graph(rng: random.Random, max_vertices: int = 12, span: int = 4) -> SquaredGridGraph:
    """A random even graph grown from the origin, occasionally with detached vertices.

    Growth keeps most samples connected so that perfect matchings are common enough
    to be interesting; the detached draws exercise the disconnected case.
    """
    n = rng.randint(2, max_vertices)  # a lone vertex would give a board without centers
    if n % 2 and n < max_vertices and rng.random() < 0.8:
        n += 1  # odd vertex counts never match; keep them rare
    pts = {(0, 0)}
    box = [(x, y) for x in range(0, 2 * span + 1) for y in range(0, 2 * span + 1) if (x + y) % 2 == 0]
    while len(pts) < n:
        if rng.random() < 0.05:
            pts.add(rng.choice(box))
            continue
        x, y = rng.choice(sorted(pts))
        dx, dy = rng.choice(((2, 0), (-2, 0), (0, 2), (0, -2)))
        q = (x + dx, y + dy)
        if 0 <= q[0] <= 2 * span and 0 <= q[1] <= 2 * span:
            pts.add(q)
    return SquaredGridGraph(pts)


# ---------------------------------------------------------------- file formats

def parse_graph(text: str) -> SquaredGridGraph:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'x y'")
        try:
            pts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: coordinates must be integers") from None
    if len(set(pts)) != len(pts):
        raise GraphError("duplicate vertex")
    return SquaredGridGraph(pts)


def serialize_graph(g: SquaredGridGraph) -> str:
    return "".join(f"{x} {y}\n" for x, y in sorted(g.vertices))


def serialize_matching(m: Matching) -> str:
    return "".join(f"{a} {b} {c} {d}\n" for (a, b), (c, d) in m.edges)


def matching_from_solution(board: Board, sol, offset: Point = (0, 0)) -> Matching:
    """Read the matching encoded by a Unit3 solution of an even board."""
    edges = []
    for cells in sol.galaxies().values():
        if len(cells) == 3:
            ends = sorted(cells)
            p, q = ends[0], ends[2]
            edges.append(((p[0] + offset[0], p[1] + offset[1]), (q[0] + offset[0], q[1] + offset[1])))
    return Matching(tuple(sorted(edges)))
