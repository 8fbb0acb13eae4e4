"""Designing a board from a picture: the fewest centers whose galaxies tile a shape.

A shape is a set of cells S on a rectangular board; every other cell is forbidden.
``min_centers`` finds the smallest number of centers such that galaxies around them
partition S exactly, together with every optimal placement. The second half of the
module builds shapes from gadgets (local centers, blocks, ends, splits and chains)
and compiles a 1-in-3 formula into a shape whose optimum meets a fixed budget
exactly when the formula is satisfiable.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .board import Board, BoardError, Center, incident_cells, rotate_cell
from .solver import SearchBudget, UNLIMITED, _AnySearch, _OutOfBudget

Cell = tuple[int, int]
Pos = tuple[int, int]

DEFAULT_MAX_CELLS = 400


class ShapeError(ValueError):
    pass


# ---------------------------------------------------------------- shapes

@dataclass(frozen=True)
class Shape:
    width: int
    height: int
    cells: frozenset[Cell]

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(self.cells))
        for x, y in self.cells:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ShapeError(f"cell {(x, y)} lies outside the {self.width}x{self.height} board")

    def __len__(self) -> int:
        return len(self.cells)

    @classmethod
    def from_cells(cls, cells: Iterable[Cell], margin: int = 0) -> tuple["Shape", Cell]:
        """Normalise arbitrary cells into a shape; returns the shape and the offset subtracted."""
        cells = set(cells)
        if not cells:
            raise ShapeError("empty shape")
        ox = min(x for x, _ in cells) - margin
        oy = min(y for _, y in cells) - margin
        w = max(x for x, _ in cells) - ox + 1 + margin
        h = max(y for _, y in cells) - oy + 1 + margin
        return cls(w, h, frozenset((x - ox, y - oy) for x, y in cells)), (ox, oy)


def parse_shape(text: str) -> Shape:
    rows = [r.strip() for r in text.splitlines() if r.strip() and not r.lstrip().startswith("c ")]
    if not rows:
        raise ShapeError("empty shape file")
    width = len(rows[0])
    cells = set()
    for y, row in enumerate(rows):
        if len(row) != width:
            raise ShapeError(f"row {y} has length {len(row)}, expected {width}")
        for x, ch in enumerate(row):
            if ch == "#":
                cells.add((x, y))
            elif ch != ".":
                raise ShapeError(f"unexpected character {ch!r} at {(x, y)}")
    return Shape(width, len(rows), frozenset(cells))


def serialize_shape(s: Shape) -> str:
    return "".join("".join("#" if (x, y) in s.cells else "." for x in range(s.width)) + "\n"
                   for y in range(s.height))


@dataclass(frozen=True)
class CenterPlacement:
    """Centers in doubled coordinates and the owner (center index) of every cell of S."""

    centers: tuple[Pos, ...]
    owner: tuple[tuple[Cell, int], ...]

    @property
    def owner_map(self) -> dict[Cell, int]:
        return dict(self.owner)

    def galaxies(self) -> list[set[Cell]]:
        out: list[set[Cell]] = [set() for _ in self.centers]
        for cell, i in self.owner:
            out[i].add(cell)
        return out

    def key(self) -> frozenset:
        """Owner-map identity: the partition of S with each part tagged by its center."""
        return frozenset((self.centers[i], frozenset(g)) for i, g in enumerate(self.galaxies()))


def check_placement(s: Shape, p: CenterPlacement, connected: bool = True) -> list[str]:
    """Problems with a placement; an empty list means it is valid."""
    problems = []
    own = p.owner_map
    if set(own) != set(s.cells):
        problems.append("owner map does not cover S exactly")
    for i, (c, g) in enumerate(zip(p.centers, p.galaxies())):
        if not g:
            problems.append(f"center {c} owns no cell")
            continue
        if not set(incident_cells(c)) <= g:
            problems.append(f"center {c} does not contain its own cells")
        if any(rotate_cell(q, c) not in g for q in g):
            problems.append(f"galaxy of {c} is not symmetric")
        if connected and not _connected(g):
            problems.append(f"galaxy of {c} is disconnected")
    return problems


def _connected(cells: set[Cell]) -> bool:
    if not cells:
        return True
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        x, y = stack.pop()
        for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if q in cells and q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(cells)


def _nbrs(c: Cell) -> tuple[Cell, ...]:
    x, y = c
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def candidate_centers(s: Shape) -> list[Pos]:
    """Every doubled position whose incident cells all lie in S, ordered row-major."""
    out = set()
    for x, y in s.cells:
        for a in (2 * x, 2 * x + 1, 2 * x + 2):
            for b in (2 * y, 2 * y + 1, 2 * y + 2):
                if all(q in s.cells for q in incident_cells((a, b))):
                    out.add((a, b))
    return sorted(out, key=lambda c: (c[1], c[0]))


def reach(s: Shape, c: Pos) -> set[Cell]:
    """Cells that some galaxy around ``c`` inside S could contain.

    A cell q qualifies when a path from the center to q exists on which every cell
    has its mirror image in S.
    """
    seeds = incident_cells(c)
    if any(q not in s.cells for q in seeds):
        return set()
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        p = stack.pop()
        for q in _nbrs(p):
            if q in s.cells and q not in seen and rotate_cell(q, c) in s.cells:
                seen.add(q)
                stack.append(q)
    return seen


# ---------------------------------------------------------------- candidate galaxies

def enumerate_symmetric_galaxies(s: Shape, anchor: Cell, size_cap: int | None = None,
                                 connected: bool = True) -> list[tuple[Pos, frozenset[Cell]]]:
    """All (center, cells) galaxies inside S containing ``anchor``, at most ``size_cap`` cells.

    Exponential in the worst case; meant for small shapes and cross-checks. Ordered by
    center (row-major), then size, then sorted cell list.
    """
    if anchor not in s.cells:
        raise ShapeError(f"anchor {anchor} is not in the shape")
    cap = len(s) if size_cap is None else size_cap
    out = []
    for c in candidate_centers(s):
        region = reach(s, c) if connected else {q for q in s.cells if rotate_cell(q, c) in s.cells}
        if anchor not in region:
            continue
        seed = frozenset(incident_cells(c))
        orbit = {q: frozenset((q, rotate_cell(q, c))) for q in region}
        found: set[frozenset[Cell]] = set()
        if connected:
            _grow_connected(seed, orbit, cap, found)
        else:
            orbits = sorted({o for q, o in orbit.items() if q not in seed}, key=sorted)
            for r in range(len(orbits) + 1):
                for combo in itertools.combinations(orbits, r):
                    g = seed.union(*combo)
                    if len(g) <= cap:
                        found.add(g)
        for g in found:
            if anchor in g:
                out.append((c, g))
    out.sort(key=lambda t: (t[0][1], t[0][0], len(t[1]), sorted(t[1])))
    return out


def _grow_connected(seed: frozenset[Cell], orbit: dict[Cell, frozenset[Cell]], cap: int,
                    found: set[frozenset[Cell]]) -> None:
    """Connected unions of orbits containing ``seed``, each produced once (extension sets)."""
    if len(seed) > cap:
        return

    def frontier_of(cur: frozenset[Cell]) -> list[frozenset[Cell]]:
        fr = {orbit[q] for p in cur for q in _nbrs(p) if q in orbit and q not in cur}
        return sorted(fr, key=sorted)

    def rec(cur: frozenset[Cell], ext: list[frozenset[Cell]], banned: set[frozenset[Cell]]):
        found.add(cur)
        banned = set(banned)
        for k, o in enumerate(ext):
            if len(cur) + len(o) <= cap:
                nxt = cur | o
                new = [f for f in frontier_of(nxt) if f not in banned and f not in ext and f != o]
                rec(nxt, ext[k + 1:] + new, banned | set(ext[:k + 1]))
            banned.add(o)

    rec(seed, frontier_of(seed), set())


# ---------------------------------------------------------------- exact minimisation

@dataclass
class MinCentersResult:
    k_min: int | None
    placements: list[CenterPlacement]
    exact: bool
    node_count: int = 0
    seconds: float = 0.0


class _Minimiser:
    """Branch and bound over center sets.

    Every chosen center owns its own cells, so no other galaxy may pass through them;
    the reach of each center is recomputed with those cells blocked. A cell is *open*
    while no chosen center can reach it. The search picks the open cell with the fewest
    possible owners and branches on which of them joins the set; owners tried earlier
    are excluded in later branches, so every center set is visited at most once. When
    no cell is open the set goes to the fixed-center solver, and if the budget allows,
    further centers are added in increasing index order.
    """

    def __init__(self, s: Shape, size_cap: int | None, budget: SearchBudget):
        self.s = s
        self.size_cap = size_cap
        self.budget = budget
        self.deadline = time.monotonic() + budget.max_seconds if budget.max_seconds else None
        self.nodes = 0
        self.cands = candidate_centers(s)
        self.cells = sorted(s.cells, key=lambda c: (c[1], c[0]))
        index = {c: i for i, c in enumerate(self.cells)}
        self.nbr = [[index[q] for q in _nbrs(c) if q in index] for c in self.cells]
        self.owners: list[list[int]] = [[] for _ in self.cells]
        self.mirror: list[dict[int, int]] = []
        self.static: list[frozenset[int]] = []
        for j, c in enumerate(self.cands):
            r = reach(s, c)
            self.mirror.append({index[q]: index[rotate_cell(q, c)] for q in r})
            self.static.append(frozenset(index[q] for q in r))
            for q in r:
                self.owners[index[q]].append(j)
        self.seed_of = [frozenset(index[q] for q in incident_cells(c)) for c in self.cands]
        self._memo: dict[tuple[int, frozenset[int]], frozenset[int]] = {}

    def _tick(self):
        self.nodes += 1
        if self.budget.max_nodes is not None and self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def reach(self, j: int, blocked: frozenset[int]) -> frozenset[int]:
        """Cells a galaxy around candidate j could contain when ``blocked`` is off limits."""
        if not blocked or self.static[j].isdisjoint(blocked):
            return self.static[j]
        key = (j, blocked & self.static[j])
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        seeds = self.seed_of[j]
        if not seeds.isdisjoint(blocked):
            out: frozenset[int] = frozenset()
        else:
            mirror = self.mirror[j]
            seen = set(seeds)
            stack = list(seeds)
            while stack:
                p = stack.pop()
                for q in self.nbr[p]:
                    if q not in seen and q in mirror and q not in blocked and mirror[q] not in blocked:
                        seen.add(q)
                        stack.append(q)
            out = frozenset(seen)
        self._memo[key] = out
        return out

    def lower_bound(self) -> int:
        opts = sorted((set(o) for o in self.owners), key=len)
        used: set[int] = set()
        lb = 0
        for o in opts:
            if used.isdisjoint(o):
                lb += 1
                used |= o
        return lb

    def fixed(self, chosen: Sequence[int]) -> list[CenterPlacement]:
        centers = sorted((self.cands[j] for j in chosen), key=lambda c: (c[1], c[0]))
        board = Board(self.s.width, self.s.height, tuple(Center(c) for c in centers))
        left = None
        if self.deadline is not None:
            left = max(self.deadline - time.monotonic(), 0.001)
        search = _AnySearch(board, SearchBudget(max_seconds=left), set(self.s.cells), self.size_cap)
        out = []
        w = self.s.width
        for owner in search.solutions():
            self._tick()
            own = tuple(((p % w, p // w), i) for p, i in enumerate(owner) if i >= 0)
            out.append(CenterPlacement(tuple(centers), own))
        return out

    def search(self, k: int, first_only: bool = False) -> list[CenterPlacement]:
        found: dict[frozenset, CenterPlacement] = {}
        chosen: list[int] = []
        excluded: set[int] = set()

        def done() -> bool:
            return first_only and bool(found)

        def blocked_cells() -> frozenset[int]:
            return frozenset().union(*(self.seed_of[j] for j in chosen)) if chosen else frozenset()

        def usable(j: int, blocked: frozenset[int]) -> bool:
            return j not in excluded and j not in chosen and self.seed_of[j].isdisjoint(blocked)

        def leaf(start: int):
            for p in self.fixed(chosen):
                found.setdefault(p.key(), p)
            if len(chosen) >= k:
                return
            blocked = blocked_cells()
            for j in range(start, len(self.cands)):
                if done():
                    return
                if usable(j, blocked):
                    self._tick()
                    chosen.append(j)
                    leaf(j + 1)
                    chosen.pop()

        def rec():
            self._tick()
            if done():
                return
            blocked = blocked_cells()
            covered = set()
            for j in chosen:
                covered |= self.reach(j, blocked - self.seed_of[j])
            opts: dict[int, list[int]] = {p: [] for p in range(len(self.cells)) if p not in covered}
            if opts:
                for j in range(len(self.cands)):
                    if usable(j, blocked):
                        for p in self.reach(j, blocked):
                            if p in opts:
                                opts[p].append(j)
            open_opts = list(opts.values())
            if any(not o for o in open_opts):
                return
            if not open_opts:
                leaf(0)
                return
            open_opts.sort(key=len)
            used: set[int] = set()
            lb = 0
            for o in open_opts:
                if used.isdisjoint(o):
                    lb += 1
                    used.update(o)
            if len(chosen) + lb > k:
                return
            tried = []
            for j in open_opts[0]:
                chosen.append(j)
                rec()
                chosen.pop()
                excluded.add(j)
                tried.append(j)
                if done():
                    break
            excluded.difference_update(tried)

        rec()
        return sorted(found.values(), key=lambda p: (p.centers, p.owner))


def min_centers(s: Shape, size_cap: int | None = None, budget: SearchBudget = UNLIMITED,
                max_cells: int = DEFAULT_MAX_CELLS, k_max: int | None = None) -> MinCentersResult:
    """Fewest centers tiling S, with every optimal placement (owner-map identity).

    Tries k = lower bound, lower bound + 1, ... and proves each smaller k infeasible.
    ``exact`` is cleared when the budget runs out or ``size_cap`` is below |S|; then
    ``k_min`` is the best upper bound known (|S| if nothing better was found).
    """
    if not s.cells:
        raise ShapeError("empty shape")
    if len(s) > max_cells:
        raise ShapeError(f"shape has {len(s)} cells, above the engine bound {max_cells}")
    t0 = time.monotonic()
    m = _Minimiser(s, size_cap, budget)
    exact = size_cap is None or size_cap >= len(s)
    k = max(1, m.lower_bound())
    top = len(s) if k_max is None else min(k_max, len(s))
    try:
        while k <= top:
            found = m.search(k)
            if found:
                return MinCentersResult(k, found, exact, m.nodes, time.monotonic() - t0)
            k += 1
    except _OutOfBudget:
        pass
    return MinCentersResult(len(s) if k_max is None else None, [], False, m.nodes, time.monotonic() - t0)


# ---------------------------------------------------------------- gadgets

PITCH = 8          # distance between neighbouring block centers along a chain
BLOCK = 5
GADGET_KINDS = ("LocalCenter", "Block", "End", "Fix", "VariableChain", "Split")

# Upper arm of each local-center variant, relative to the center cell; the lower arm
# is its half-turn image. All arms share a three-cell stem and end in a different
# hook, so no variant's cells fit inside another's. Arms are one cell wide and keep
# clear of the neighbouring blocks, which end at height 2.
_STEM = ((0, 1), (0, 2), (0, 3))
ARMS: dict[int, tuple[Cell, ...]] = {
    0: _STEM + ((1, 3),),
    1: _STEM + ((-1, 3),),
    2: _STEM + ((0, 4), (1, 4)),
    3: _STEM + ((0, 4), (-1, 4)),
}


@dataclass(frozen=True)
class Pose:
    """Quarter turns about cell (0, 0), then a translation in cells."""

    dx: int = 0
    dy: int = 0
    quarter: int = 0

    def cell(self, c: Cell) -> Cell:
        x, y = c
        for _ in range(self.quarter % 4):
            x, y = -y, x
        return (x + self.dx, y + self.dy)

    def pos(self, p: Pos) -> Pos:
        a, b = p
        for _ in range(self.quarter % 4):
            a, b = 2 - b, a
        return (a + 2 * self.dx, b + 2 * self.dy)


@dataclass(frozen=True)
class ShapeGadget:
    kind: str
    pose: Pose = Pose()
    params: tuple[tuple[str, object], ...] = ()

    def param(self, name: str, default=None):
        return dict(self.params).get(name, default)


def local_center_cells(variant: int, w: int = 3) -> tuple[frozenset[Cell], Pos]:
    """Cells of a horizontal local center gadget and its center (doubled), before posing."""
    if variant not in ARMS:
        raise ShapeError(f"unknown local center variant {variant}")
    if w < 3:
        raise ShapeError("a local center gadget needs width at least 3")
    if w % 2:
        half = w // 2
        row = {(x, 0) for x in range(-half, half + 1)}
        up = set(ARMS[variant])
        center = (1, 1)
    else:
        half = w // 2
        row = {(x, 0) for x in range(-half, half)}
        up = {(ax + d, ay) for ax, ay in ARMS[variant] for d in (-1, 0)}
        center = (0, 1)
    down = {rotate_cell(q, center) for q in up}
    return frozenset(row | up | down), center


def room_cells(kind: str) -> frozenset[Cell]:
    """Rooms facing east: the chain leaves through the east side (x = 2)."""
    if kind in ("Block", "Clause"):
        return frozenset((x, y) for x in range(-2, 3) for y in range(-2, 3))
    if kind == "End":
        return frozenset((x, y) for x in range(-4, 3) for y in range(-2, 3))
    if kind == "Split":
        return frozenset((x, y) for x in range(-4, 3) for y in range(-7, 8))
    raise ShapeError(f"{kind} is not a room")


SPLIT_PORTS = (-5, 0, 5)   # rows of the three connections of a split room


def emit_gadget_shape(g: ShapeGadget) -> frozenset[Cell]:
    """Cells of a single gadget under its pose."""
    if g.kind == "LocalCenter":
        cells, _ = local_center_cells(int(g.param("variant", 0)), int(g.param("w", 3)))
    elif g.kind in ("Block", "End", "Split"):
        cells = room_cells(g.kind)
    elif g.kind == "Fix":
        cells = fix_assembly().cells()
    elif g.kind == "VariableChain":
        cells = chain_assembly(int(g.param("k", 4)), bool(g.param("fix", True))).cells()
    else:
        raise ShapeError(f"unknown gadget kind {g.kind!r}")
    return frozenset(g.pose.cell(c) for c in cells)


@dataclass
class Part:
    kind: str                 # LocalCenter, Block, End, Split or Clause
    name: str
    cells: frozenset[Cell]
    center: Pos               # center of the part's own galaxy when nothing is taken from it
    variant: int = -1
    width: int = 0


@dataclass
class Link:
    """A local center gadget inside a chain with the two 5x5 squares it may absorb."""

    lc: Part
    squares: tuple[frozenset[Cell], frozenset[Cell]]
    rooms: tuple[str, str]


def _square(p: Cell) -> frozenset[Cell]:
    return frozenset((p[0] + dx, p[1] + dy) for dx in range(-2, 3) for dy in range(-2, 3))


def _bbox_center(cells: Iterable[Cell]) -> Pos:
    xs = [x for x, _ in cells]
    ys = [y for _, y in cells]
    return (min(xs) + max(xs) + 1, min(ys) + max(ys) + 1)


_QUARTER = {(1, 0): 0, (0, 1): 1, (-1, 0): 2, (0, -1): 3}


@dataclass
class Assembly:
    """Gadgets placed in world coordinates, with the chains that connect them."""

    parts: dict[str, Part] = field(default_factory=dict)
    chains: list[list[Link]] = field(default_factory=list)
    chain_names: list[str] = field(default_factory=list)
    has_fix: list[bool] = field(default_factory=list)

    def cells(self) -> frozenset[Cell]:
        return frozenset().union(*(p.cells for p in self.parts.values())) if self.parts else frozenset()

    def add(self, part: Part) -> Part:
        if part.name in self.parts:
            raise ShapeError(f"duplicate gadget name {part.name}")
        taken = self.cells()
        if not part.cells.isdisjoint(taken):
            raise ShapeError(f"{part.name} overlaps an existing gadget")
        self.parts[part.name] = part
        return part

    def add_room(self, kind: str, name: str, at: Cell, facing: Cell = (1, 0)) -> Part:
        pose = Pose(at[0], at[1], _QUARTER[facing])
        cells = frozenset(pose.cell(c) for c in room_cells(kind))
        return self.add(Part(kind, name, cells, _bbox_center(cells)))

    def add_chain(self, name: str, nodes: Sequence[Cell], start: str | None = None,
                  end: str | None = None, variants: Sequence[int] | None = None) -> list[Link]:
        """Local centers between consecutive nodes, blocks on inner nodes.

        ``start``/``end`` name existing rooms at the first/last node, ``"End"`` to create an
        end gadget there, or None to leave the node empty (a dangling connection).
        """
        if len(nodes) < 2:
            raise ShapeError("a chain needs two nodes")
        dirs = []
        for a, b in zip(nodes, nodes[1:]):
            d = (b[0] - a[0], b[1] - a[1])
            if d[0] and d[1] or not any(d):
                raise ShapeError(f"chain {name}: step {a}->{b} is not axis-parallel")
            dirs.append(((d[0] > 0) - (d[0] < 0), (d[1] > 0) - (d[1] < 0)))
        room_names = []
        for idx, (tag, node) in enumerate(((start, nodes[0]), (end, nodes[-1]))):
            if tag == "End":
                dx, dy = dirs[0] if idx == 0 else dirs[-1]
                facing = (dx, dy) if idx == 0 else (-dx, -dy)
                room = self.add_room("End", f"{name}.end{idx}", node, facing)
                room_names.append(room.name)
            else:
                room_names.append(tag)
        inner = []
        for i, node in enumerate(nodes[1:-1], 1):
            blk = self.add(Part("Block", f"{name}.block{i}", _square(node), (2 * node[0] + 1, 2 * node[1] + 1)))
            inner.append(blk.name)
        owners = [room_names[0]] + inner + [room_names[1]]
        edges = list(zip(nodes, nodes[1:]))
        chosen = self._pick_variants(name, edges, variants)
        links = []
        for i, ((a, b), part) in enumerate(zip(edges, chosen)):
            self.add(part)
            links.append(Link(part, (_square(a), _square(b)), (owners[i], owners[i + 1])))
        self.chains.append(links)
        self.chain_names.append(name)
        self.has_fix.append(_has_u_turn(dirs))
        return links

    def _pick_variants(self, name: str, edges, variants) -> list[Part]:
        """Variants for the local centers of a chain, consecutive ones distinct, none touching."""
        n = len(ARMS)
        out: list[Part] = []
        deepest = [0]

        def rec(i: int, prev: int) -> bool:
            deepest[0] = max(deepest[0], i)
            if i == len(edges):
                return True
            a, b = edges[i]
            prefs = [variants[i]] if variants is not None else [(i + r) % n for r in range(n)]
            for v in prefs:
                if v == prev:
                    continue
                part = self._local_center(f"{name}.lc{i + 1}", a, b, v)
                if self._touches(part, (a, b), out):
                    continue
                out.append(part)
                if rec(i + 1, v):
                    return True
                out.pop()
            return False

        if not rec(0, -1):
            a, b = edges[deepest[0]]
            raise ShapeError(f"chain {name}: no local center variant fits between nodes {a} and {b}")
        return out

    def _local_center(self, name: str, a: Cell, b: Cell, variant: int) -> Part:
        horizontal = a[1] == b[1]
        lo, hi = (min(a[0], b[0]), max(a[0], b[0])) if horizontal else (min(a[1], b[1]), max(a[1], b[1]))
        w = hi - lo - BLOCK
        cells, center = local_center_cells(variant, w)
        if horizontal:
            pose = Pose((lo + hi) // 2 if w % 2 else (lo + hi + 1) // 2, a[1], 0)
        else:
            pose = Pose(a[0], (lo + hi) // 2 if w % 2 else (lo + hi + 1) // 2, 1)
        return Part("LocalCenter", name, frozenset(pose.cell(c) for c in cells), pose.pos(center), variant, w)

    def _touches(self, part: Part, ends: tuple[Cell, Cell], pending: Sequence[Part] = ()) -> bool:
        """Whether a candidate local center meets anything except its squares at its ports."""
        taken = self.cells().union(*(p.cells for p in pending))
        if not part.cells.isdisjoint(taken):
            return True
        ok = _port_contacts(part, ends)
        return any(q in taken and (p, q) not in ok for p in part.cells for q in _nbrs(p))

    # ------------------------------------------------------------ accounting

    def budget(self) -> int:
        """One center per local center gadget, end gadget and split room."""
        return sum(1 for p in self.parts.values() if p.kind in ("LocalCenter", "End", "Split"))

    def shape(self, margin: int = 1) -> tuple[Shape, Cell]:
        return Shape.from_cells(self.cells(), margin)

    def placement(self, states: Sequence[int], offset: Cell = (0, 0)) -> CenterPlacement | None:
        """The intended placement when chain i is in ``states[i]``.

        In state 0 the odd-numbered local centers of the chain (counting from its start)
        absorb both neighbouring squares; in state 1 the even-numbered ones do. Returns
        None when a square would be absorbed twice.
        """
        galaxies: list[tuple[Pos, set[Cell]]] = []
        taken: dict[str, set[Cell]] = {}
        for links, s in zip(self.chains, states):
            for i, link in enumerate(links, 1):
                g = set(link.lc.cells)
                if (i % 2 == 1) == (s == 0):
                    for sq, room in zip(link.squares, link.rooms):
                        if room is None:
                            return None
                        got = taken.setdefault(room, set())
                        if not got.isdisjoint(sq):
                            return None
                        got |= sq
                        g |= sq
                galaxies.append((link.lc.center, g))
        for part in self.parts.values():
            if part.kind == "LocalCenter":
                continue
            rest = set(part.cells) - taken.get(part.name, set())
            if rest:
                galaxies.append((_bbox_center(rest), rest))
        ox, oy = offset
        centers = tuple((c[0] - 2 * ox, c[1] - 2 * oy) for c, _ in galaxies)
        owner = tuple(sorted(((x - ox, y - oy), i) for i, (_, g) in enumerate(galaxies) for x, y in g))
        return CenterPlacement(centers, owner)

    def check(self) -> list[str]:
        """Structural invariants of the gadgets; an empty list means all hold."""
        problems = []
        allc = self.cells()
        for p in self.parts.values():
            if p.kind != "LocalCenter" or p.width % 2 == 0:
                continue
            cx, cy = (p.center[0] - 1) // 2, (p.center[1] - 1) // 2
            if any((cx + dx, cy + dy) in allc for dx in (-1, 1) for dy in (-1, 1)):
                problems.append(f"{p.name}: a diagonal neighbour of the center is in the shape")
            if any(q not in allc for q in _nbrs((cx, cy))):
                problems.append(f"{p.name}: a direct neighbour of the center is forbidden")
        where = {c: name for name, p in self.parts.items() for c in p.cells}
        ok: set[tuple[Cell, Cell]] = set()
        for links in self.chains:
            for link in links:
                nodes = tuple(_bbox_center(sq) for sq in link.squares)
                ok |= _port_contacts(link.lc, tuple((a // 2, b // 2) for a, b in nodes))
        ok |= {(q, p) for p, q in ok}
        for p, name in where.items():
            for q in _nbrs(p):
                if q in where and where[q] != name and (p, q) not in ok:
                    problems.append(f"{name} touches {where[q]} at {p}")
                    break
        for name, links, fix in zip(self.chain_names, self.chains, self.has_fix):
            if not fix:
                problems.append(f"chain {name} has no fix gadget")
            for a, b in zip(links, links[1:]):
                if a.lc.variant == b.lc.variant and a.lc.width == b.lc.width:
                    problems.append(f"chain {name}: {a.lc.name} and {b.lc.name} share a variant")
        return problems


def _port_contacts(part: Part, ends: tuple[Cell, Cell]) -> set[tuple[Cell, Cell]]:
    """The two allowed (port cell, square cell) contacts of a local center between two nodes."""
    out = set()
    for node in ends:
        sq = _square(node)
        for p in part.cells:
            for q in _nbrs(p):
                if q in sq and (p[0] == node[0] or p[1] == node[1]):
                    out.add((p, q))
    return out


def _has_u_turn(dirs: Sequence[Cell]) -> bool:
    """A corner, a straight block and a corner turning back: directions d, p, p, -d."""
    for i in range(len(dirs) - 3):
        d, p1, p2, e = dirs[i:i + 4]
        if p1 == p2 and d[0] * p1[0] + d[1] * p1[1] == 0 and e == (-d[0], -d[1]):
            return True
    return False


# ---------------------------------------------------------------- fixtures

def chain_assembly(k: int, fix: bool = True) -> Assembly:
    """A variable chain with k local centers between two end gadgets.

    With ``fix`` (k >= 4) the chain ends in a U-turn of a corner, a straight and a
    corner block. Without it the chain is bent into a U around two corner blocks when
    k = 3 (a wide local center joins them), and runs straight otherwise.
    """
    if k < 1:
        raise ShapeError("a chain needs at least one local center")
    a = Assembly()
    if fix:
        if k < 4:
            raise ShapeError("a fix gadget has four local centers, so the chain needs k >= 4")
        x = PITCH * (k - 3)
        nodes = [(PITCH * i, 0) for i in range(k - 2)] + [(x, PITCH), (x, 2 * PITCH), (x - PITCH, 2 * PITCH)]
    elif k == 3:
        nodes = [(0, 0), (PITCH, 0), (PITCH, 2 * PITCH), (0, 2 * PITCH)]
    else:
        nodes = [(PITCH * i, 0) for i in range(k + 1)]
    a.add_chain("chain", nodes, "End", "End")
    return a


def fix_assembly() -> Assembly:
    """The fix gadget alone: four local centers and three blocks turning back."""
    a = Assembly()
    a.add_chain("fix", [(0, 0), (PITCH, 0), (PITCH, PITCH), (PITCH, 2 * PITCH), (0, 2 * PITCH)])
    return a


def sealed_end() -> Shape:
    return Shape.from_cells(room_cells("End"), 1)[0]


def sealed_local_center(variant: int = 0, w: int = 3) -> tuple[Shape, Pos]:
    """A local center gadget whose two connections lead nowhere, and its intended center."""
    cells, center = local_center_cells(variant, w)
    s, (ox, oy) = Shape.from_cells(cells, 1)
    return s, (center[0] - 2 * ox, center[1] - 2 * oy)


def split_room(taken: Sequence[bool]) -> Shape:
    """The split room after the chains marked True have absorbed their 5x5 squares."""
    if len(taken) != 3:
        raise ShapeError("a split room has three connections")
    cells = set(room_cells("Split"))
    for port, t in zip(SPLIT_PORTS, taken):
        if t:
            cells -= _square((0, port))
    return Shape.from_cells(cells, 1)[0]


def block_owners(a: Assembly, p: CenterPlacement, offset: Cell) -> dict[str, set[int]]:
    """For every block, the set of galaxies its cells belong to."""
    own = p.owner_map
    ox, oy = offset
    return {name: {own[(x - ox, y - oy)] for x, y in part.cells}
            for name, part in a.parts.items() if part.kind == "Block"}


# ---------------------------------------------------------------- formula compiler

TILE = 9            # nodes per layout unit
_H = TILE // 2

# Paths inside a variable tile, entering from the east edge node (4, 0). Each holds a
# U-turn (a fix gadget). "straight" leaves through the west edge, "corner" through the
# north edge; the "_odd" forms use one wide local center, flipping the chain parity.
_MOTIFS: dict[str, list[Cell]] = {
    "end": [(4, 0), (3, 0), (2, 0), (1, 0), (0, 0), (0, 1), (0, 2), (1, 2)],
    "straight": [(4, 0), (3, 0), (2, 0), (1, 0), (1, 1), (1, 2), (2, 2), (2, 3), (2, 4), (1, 4),
                 (0, 4), (-1, 4), (-2, 4), (-2, 3), (-2, 2), (-2, 1), (-2, 0), (-3, 0), (-4, 0)],
    "corner": [(4, 0), (3, 0), (2, 0), (2, 1), (2, 2), (3, 2), (3, 3), (3, 4), (2, 4), (1, 4), (0, 4)],
}
_MOTIFS["straight_odd"] = [p for p in _MOTIFS["straight"] if p != (-2, 3)]
_MOTIFS["corner_odd"] = [p for p in _MOTIFS["corner"] if p != (1, 4)]


def _orient(p: Cell, entry: Cell, exit_: Cell | None) -> Cell:
    """Map a motif node so that east becomes ``entry`` and north becomes ``exit_``."""
    x, y = p
    q = _QUARTER[entry]
    if exit_ is not None:
        north = (0, 1)
        for _ in range(q):
            north = (-north[1], north[0])
        if north != exit_:
            y = -y
    for _ in range(q):
        x, y = -y, x
    return (x, y)


@dataclass
class ShapeCompilation:
    formula: object
    layout: object
    shape: Shape
    offset: Cell
    budget: int
    assembly: Assembly
    # per variable: (chain index, clause, positive) of its first occurrence, or None
    probes: dict[int, tuple[int, int, bool]]

    def placement_for(self, values: Sequence[bool]) -> CenterPlacement | None:
        """The intended placement for an assignment; None if some clause gets two true literals."""
        states = [0] * len(self.assembly.chains)
        for var, (chain, _, positive) in self.probes.items():
            states[chain] = 0 if values[var - 1] == positive else 1
        return self.assembly.placement(states, self.offset)

    def decode(self, p: CenterPlacement) -> tuple[bool, ...]:
        """Variable values read from whether each first local center absorbs its clause block."""
        own = p.owner_map
        ox, oy = self.offset
        values = [False] * self.formula.num_vars
        for var, (chain, clause, positive) in self.probes.items():
            lc = self.assembly.chains[chain][0].lc
            c = (lc.center[0] // 2 - ox, lc.center[1] // 2 - oy)
            blk = self.assembly.parts[f"clause{clause + 1}"]
            b = (blk.center[0] // 2 - ox, blk.center[1] // 2 - oy)
            takes = own.get(c) == own.get(b)
            values[var - 1] = takes == positive
        return tuple(values)


def compile_shape(f, layout) -> ShapeCompilation:
    """Shape whose minimum center count equals the budget exactly when f is 1-in-3 satisfiable.

    Each layout unit becomes a tile of 9x9 chain nodes. Clause blocks sit at clause tile
    centers, and the local center at each clause port is a wide one spanning two node
    steps so the three ports do not crowd each other. A variable used twice is a single chain joining its two clause blocks; a
    variable used once is a chain from its clause block to an end gadget. Every chain
    makes a U-turn inside its variable tile, and its number of local centers is odd for
    two literals of the same sign and even otherwise.
    """
    from .formula import LayoutError, validate_layout

    problems = validate_layout(f, layout)
    if problems:
        raise LayoutError("; ".join(problems))
    occ: dict[int, list[tuple[int, int, bool]]] = {}
    for ci, clause in enumerate(f.clauses):
        for slot, lit in enumerate(clause, 1):
            occ.setdefault(lit.var, []).append((ci, slot, lit.positive))
    for var, uses in occ.items():
        if len(uses) > 2:
            raise LayoutError(f"x{var} occurs {len(uses)} times; the shape compiler supports at most two")

    a = Assembly()
    for ci, (u, v) in enumerate(layout.clause_anchors):
        node = (TILE * u * PITCH, TILE * v * PITCH)
        a.add(Part("Clause", f"clause{ci + 1}", _square(node), (2 * node[0] + 1, 2 * node[1] + 1)))

    def route_nodes(ci: int, slot: int) -> tuple[list[Cell], Cell]:
        """Nodes from the clause center to the variable tile's entry node, and the entry side."""
        pts = layout.route(ci, slot).points
        nodes = [(TILE * pts[0][0], TILE * pts[0][1])]
        for i, (p, q) in enumerate(zip(pts, pts[1:])):
            d = (q[0] - p[0], q[1] - p[1])
            steps = TILE if i < len(pts) - 2 else TILE - _H
            for _ in range(steps):
                last = nodes[-1]
                nodes.append((last[0] + d[0], last[1] + d[1]))
        d = (pts[-1][0] - pts[-2][0], pts[-1][1] - pts[-2][1])
        # a wide local center at each clause port keeps the three ports' arms apart
        del nodes[1]
        return nodes, (-d[0], -d[1])

    probes: dict[int, tuple[int, int, bool]] = {}
    for var in sorted(occ):
        uses = occ[var]
        vu, vv = layout.var_anchors[var - 1]
        center = (TILE * vu, TILE * vv)
        first, entry = route_nodes(uses[0][0], uses[0][1])
        if len(uses) == 1:
            motif = [_orient(p, entry, None) for p in _MOTIFS["end"]]
            nodes = first + [(center[0] + x, center[1] + y) for x, y in motif[1:]]
            end = "End"
        else:
            second, exit_ = route_nodes(uses[1][0], uses[1][1])
            kind = "straight" if exit_ == (-entry[0], -entry[1]) else "corner"
            for name in (kind, kind + "_odd"):
                motif = [_orient(p, entry, None if kind == "straight" else exit_) for p in _MOTIFS[name]]
                nodes = first + [(center[0] + x, center[1] + y) for x, y in motif[1:-1]] + second[::-1]
                if (len(nodes) - 1) % 2 == (1 if uses[0][2] == uses[1][2] else 0):
                    break
            end = f"clause{uses[1][0] + 1}"
        cells = [(x * PITCH, y * PITCH) for x, y in nodes]
        try:
            a.add_chain(f"x{var}", cells, f"clause{uses[0][0] + 1}", end)
        except ShapeError as e:
            raise LayoutError(f"x{var}: chain does not fit the layout ({e})") from None
        probes[var] = (len(a.chains) - 1, uses[0][0], uses[0][2])
    problems = a.check()
    if problems:
        raise LayoutError("; ".join(problems[:3]))
    shape, offset = a.shape()
    return ShapeCompilation(f, layout, shape, offset, a.budget(), a, probes)
