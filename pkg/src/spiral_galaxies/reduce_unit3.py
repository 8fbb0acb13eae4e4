"""Parsimonious reduction from planar 1-in-3 SAT to Spiral Galaxies with Unit3 galaxies.

A board is described by its disks: cells without a center. Every cell halfway
between two disks two apart carries a center, every other non-disk cell carries a
filler center, and the Unit3 solutions are exactly the non-crossing perfect
matchings of the disks.

Variables are loops on even cells, each the boundary of a thick polyomino that
follows the variable's routes. A clause is a theta (three paths joining two disks)
on odd cells whose three matchings each single out one of three relay loops. Each
relay is coupled to a variable loop by a small odd-cell loop, the coupler; the two
coupler shapes give opposite polarities, which is how negated literals are wired.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from .board import Board, BoardError, Center, ShapeClass, Solution, verify
from .diskgeom import (Component, Edge, GeometryError, Point, Region, System, edge, edges_of,
                       loop_component, matchings, mid, polyline, theta_component)
from .formula import Assignment, Formula, Layout, LayoutError, one_in_three_models, validate_layout

LANE = 24          # width of a coarse block that only carries a route
STRIP = 8          # width of a variable or relay strip
GAP = 6            # distance between a variable strip end and its relay
MARGIN = 4         # empty border around the compiled board

# Clause fixture geometry, in the fixture's own coordinates.
CLAUSE_CENTER = (12, 12)
# port -> (origin, inward direction, across direction) of the coupler frame
CLAUSE_PORTS = {
    (-1, 0): ((-22, 8), (1, 0), (0, 1)),
    (1, 0): ((54, 16), (-1, 0), (0, -1)),
    (0, 1): ((8, 66), (0, -1), (1, 0)),
}
# distance from the clause center to the block edge, per direction
CLAUSE_EXTENT = {(-1, 0): 34, (1, 0): 42, (0, -1): 16, (0, 1): 54}

COUPLERS = {
    "TR-BR": ((STRIP - 1, -1), (STRIP + 3, -1), (STRIP + 3, GAP + 1), (STRIP - 1, GAP + 1)),
    "EL-EL": ((STRIP - 1, 1), (STRIP - 1, -1), (STRIP + 3, -1), (STRIP + 3, GAP - 1), (1, GAP - 1),
              (1, GAP + 1), (-3, GAP + 1), (-3, 1)),
}

GADGET_KINDS = ("VariableLoop", "Negation", "Clause")


class CompileError(RuntimeError):
    """The compiled board failed an internal consistency check or could not be routed."""


# ---------------------------------------------------------------- poses

@dataclass(frozen=True)
class Pose:
    """Rotation by ``quarter`` quarter turns counter-clockwise, optional mirror in x, then translation.

    The translation must be even in both coordinates so that sublattices are kept.
    """

    dx: int = 0
    dy: int = 0
    quarter: int = 0
    mirror: bool = False

    def __post_init__(self):
        if self.dx % 2 or self.dy % 2:
            raise GeometryError("pose translation must be even")

    def vec(self, v: Point) -> Point:
        x, y = v
        if self.mirror:
            x = -x
        for _ in range(self.quarter % 4):
            x, y = -y, x
        return (x, y)

    def __call__(self, p: Point) -> Point:
        x, y = self.vec(p)
        return (x + self.dx, y + self.dy)


# ---------------------------------------------------------------- disks to board

@dataclass(frozen=True)
class DiskLayout:
    disks: frozenset[Point]
    width: int
    height: int


def disks_to_board(disks, width: int, height: int) -> Board:
    """Board whose Unit3 solutions are the non-crossing perfect matchings of ``disks``."""
    disks = set(disks)
    for x, y in disks:
        if not (1 <= x <= width - 2 and 1 <= y <= height - 2):
            raise BoardError(f"disk {(x, y)} violates the one-cell margin")
        for q in ((x + 1, y), (x, y + 1)):
            if q in disks:
                raise BoardError(f"disks {(x, y)} and {q} are adjacent")
    centers = tuple(Center((2 * x + 1, 2 * y + 1)) for y in range(height) for x in range(width)
                    if (x, y) not in disks)
    return Board(width, height, centers)


def board_disks(board: Board) -> set[Point]:
    filled = {(c.pos[0] // 2, c.pos[1] // 2) for c in board.centers}
    return {p for p in board.cells() if p not in filled}


# ---------------------------------------------------------------- fixtures

def load_fixture(name: str) -> tuple[set[Point], Point]:
    """Disks of a ``.``/``#``/``*`` fixture and its origin."""
    text = resources.files("spiral_galaxies").joinpath("gadgets").joinpath("unit3").joinpath(name).read_text()
    return parse_fixture(text)


def parse_fixture(text: str) -> tuple[set[Point], Point]:
    origin = (0, 0)
    disks: set[Point] = set()
    k = 0
    for line in text.splitlines():
        if line.startswith("c ") or line == "c" or not line.strip():
            continue
        if line.startswith("origin"):
            _, x, y = line.split()
            origin = (int(x), int(y))
            continue
        for x, ch in enumerate(line):
            if ch == "*":
                disks.add((origin[0] + x, origin[1] + k))
            elif ch not in ".#":
                raise GeometryError(f"unexpected fixture character {ch!r}")
        k += 1
    return disks, origin


def fixture_text(disks, comments: Sequence[str] = (), margin: int = 2) -> str:
    xs = [p[0] for p in disks]
    ys = [p[1] for p in disks]
    x0, y0 = min(xs) - margin, min(ys) - margin
    x0 -= x0 % 2
    y0 -= y0 % 2
    rows = ["".join("*" if (x, y) in disks else "." for x in range(x0, max(xs) + margin + 1))
            for y in range(y0, max(ys) + margin + 1)]
    head = "".join(f"c {c}\n" for c in comments)
    return head + f"origin {x0} {y0}\n" + "\n".join(rows) + "\n"


def split_components(disks, prefix: str) -> list[Component]:
    """Connected disk groups as loops (all degree two) or thetas."""
    disks = set(disks)
    adj: dict[Point, list[Point]] = {d: [] for d in disks}
    for a, b in edges_of(disks):
        adj[a].append(b)
        adj[b].append(a)
    seen: set[Point] = set()
    out = []
    for start in sorted(disks, key=lambda p: (p[1], p[0])):
        if start in seen:
            continue
        group, stack = [], [start]
        seen.add(start)
        while stack:
            d = stack.pop()
            group.append(d)
            for e in adj[d]:
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        name = f"{prefix}{len(out)}"
        if all(len(adj[d]) == 2 for d in group):
            # the lowest, leftmost disk of a loop always continues to the right
            first = min(group, key=lambda p: (p[1], p[0]))
            cyc, prev, cur = [first], first, (first[0] + 2, first[1])
            while cur != first:
                cyc.append(cur)
                prev, cur = cur, next(n for n in adj[cur] if n != prev)
            out.append(loop_component(name, cyc))
        else:
            out.append(Component(name, sorted(group), edges_of(group), matchings(group), "theta"))
    return out


@dataclass
class ClauseTemplate:
    theta: Component
    relays: dict[Point, Component]    # keyed by native port direction
    distinguished: dict[Point, int]   # relay state that marks "this port carries the true literal"


_TEMPLATE: ClauseTemplate | None = None


def clause_template() -> ClauseTemplate:
    global _TEMPLATE
    if _TEMPLATE is None:
        disks, _ = load_fixture("clause.txt")
        parts = split_components(disks, "part")
        theta = next(c for c in parts if c.kind == "theta")
        relays = {}
        for port, (o, t, _u) in CLAUSE_PORTS.items():
            tip = (o[0] + GAP * t[0], o[1] + GAP * t[1])
            relays[port] = next(c for c in parts if tip in c.disks)
        system = System([theta] + list(relays.values()))
        sols = system.solutions()
        if len(sols) != 3 or sorted(s[0] for s in sols) != [0, 1, 2]:
            raise CompileError("clause fixture does not have exactly three states")
        dist = {}
        for k, port in enumerate(relays, 1):
            seen = [s[k] for s in sols]
            dist[port] = next(v for v in set(seen) if seen.count(v) == 1)
        _TEMPLATE = ClauseTemplate(theta, relays, dist)
    return _TEMPLATE


def _moved(c: Component, pose: Pose, name: str) -> Component:
    disks = [pose(d) for d in c.disks]
    es = {edge(pose(a), pose(b)) for a, b in c.edges}
    states = [frozenset(edge(pose(a), pose(b)) for a, b in s) for s in c.states]
    return Component(name, disks, es, states, c.kind)


def coupler_cycle(variant: str, origin: Point, inward: Point, across: Point) -> list[Point]:
    if variant not in COUPLERS:
        raise GeometryError(f"unknown coupler variant {variant!r}")
    pts = [(origin[0] + t * inward[0] + u * across[0], origin[1] + t * inward[1] + u * across[1])
           for u, t in COUPLERS[variant]]
    return polyline(pts + [pts[0]])[:-1]


def rect_loop_cycle(x0: int, y0: int, x1: int, y1: int) -> list[Point]:
    return Region(0).add_rect(x0, y0, x1, y1).cycle()


def emit_gadget_unit3(kind: str, pose: Pose = Pose(), params: dict | None = None,
                      bounds: tuple[int, int] | None = None) -> set[Point]:
    """Disks of one gadget under ``pose``.

    VariableLoop takes ``width`` and ``height`` (even, at least 4); Negation takes the
    coupler ``variant`` and is drawn for a strip ending at t = 0 and a strip starting
    at t = GAP; Clause is the fixture transcription.
    """
    params = dict(params or {})
    if kind == "VariableLoop":
        w, h = params.pop("width", STRIP), params.pop("height", 2 * STRIP)
        if w < 4 or h < 4 or w % 2 or h % 2:
            raise GeometryError("loop sides must be even and at least 4")
        disks = rect_loop_cycle(0, 0, w, h)
    elif kind == "Negation":
        disks = coupler_cycle(params.pop("variant", "TR-BR"), (0, 0), (0, 1), (1, 0))
    elif kind == "Clause":
        disks = list(load_fixture("clause.txt")[0])
    else:
        raise GeometryError(f"unknown gadget kind {kind!r}")
    if params:
        raise GeometryError(f"unexpected parameters {sorted(params)}")
    out = {pose(d) for d in disks}
    if bounds is not None:
        w, h = bounds
        if any(not (1 <= x <= w - 2 and 1 <= y <= h - 2) for x, y in out):
            raise GeometryError(f"{kind} does not fit on a {w}x{h} board")
    return out


# ---------------------------------------------------------------- compilation

@dataclass(frozen=True)
class PlacedGadget:
    kind: str
    name: str
    disks: frozenset[Point]
    detail: str = ""


@dataclass
class Unit3Compilation:
    formula: Formula
    board: Board
    disks: frozenset[Point]
    probes: tuple[tuple[Point, Point], ...]
    manifest: list[PlacedGadget] = field(default_factory=list)
    components: list[Component] = field(default_factory=list)


_QUARTER_FOR_MISSING = {(0, -1): 0, (1, 0): 1, (0, 1): 2, (-1, 0): 3}


def _round4(n: int) -> int:
    return -(-n // 4) * 4


def compile_unit3(f: Formula, layout: Layout, self_check: bool = True) -> Unit3Compilation:
    """Compile ``f`` along ``layout`` into a board with one Unit3 solution per 1-in-3 model.

    With ``self_check`` (and at most 16 variables) the component-level solution set is
    compared with the model oracle before the board is returned.
    """
    report = validate_layout(f, layout)
    if report:
        raise LayoutError("; ".join(report))
    template = clause_template()

    # keep only the coarse rows and columns that hold something
    pts = set(layout.var_anchors) | set(layout.clause_anchors)
    for r in layout.routes:
        pts.update(r.points)
    col_of = {x: i for i, x in enumerate(sorted({p[0] for p in pts}))}
    row_of = {y: i for i, y in enumerate(sorted({p[1] for p in pts}))}

    def coarse(p: Point) -> Point:
        return (col_of[p[0]], row_of[p[1]])

    clause_pose_q: list[int] = []
    clause_dirs: list[dict[int, Point]] = []
    for ci in range(f.num_clauses):
        dirs = {}
        for slot in (1, 2, 3):
            route = layout.route(ci, slot)
            a, b = coarse(route.points[0]), coarse(route.points[1])
            dirs[slot] = (b[0] - a[0], b[1] - a[1])
        missing = [d for d in _QUARTER_FOR_MISSING if d not in dirs.values()]
        clause_pose_q.append(_QUARTER_FOR_MISSING[missing[0]])
        clause_dirs.append(dirs)

    colw = [LANE] * len(col_of)
    rowh = [LANE] * len(row_of)
    for ci, anchor in enumerate(layout.clause_anchors):
        rot = Pose(quarter=clause_pose_q[ci])
        ext = {rot.vec(d): e for d, e in CLAUSE_EXTENT.items()}
        c, r = coarse(anchor)
        colw[c] = max(colw[c], _round4(2 * max(ext[(-1, 0)], ext[(1, 0)])))
        rowh[r] = max(rowh[r], _round4(2 * max(ext[(0, -1)], ext[(0, 1)])))
    xstart = [MARGIN + sum(colw[:i]) for i in range(len(colw))]
    ystart = [MARGIN + sum(rowh[:i]) for i in range(len(rowh))]
    width, height = 2 * MARGIN + sum(colw), 2 * MARGIN + sum(rowh)

    def center(p: Point) -> Point:
        c, r = coarse(p)
        return (xstart[c] + colw[c] // 2, ystart[r] + rowh[r] // 2)

    components: list[Component] = []
    manifest: list[PlacedGadget] = []
    relays: dict[tuple[int, int], tuple[Component, int, tuple[Point, Point, Point]]] = {}
    for ci, anchor in enumerate(layout.clause_anchors):
        q = clause_pose_q[ci]
        rot = Pose(quarter=q)
        cx, cy = center(anchor)
        lx, ly = rot.vec(CLAUSE_CENTER)
        pose = Pose(cx - lx, cy - ly, q)
        parts = [_moved(template.theta, pose, f"c{ci + 1}.theta")]
        for port, relay in template.relays.items():
            wport = rot.vec(port)
            slot = next((s for s, d in clause_dirs[ci].items() if d == wport), None)
            comp = _moved(relay, pose, f"c{ci + 1}.relay{slot}")
            parts.append(comp)
            if slot is not None:
                o, t, u = CLAUSE_PORTS[port]
                relays[(ci, slot)] = (comp, template.distinguished[port], (pose(o), rot.vec(t), rot.vec(u)))
        components.extend(parts)
        manifest.append(PlacedGadget("Clause", f"c{ci + 1}", frozenset(d for p in parts for d in p.disks),
                                     f"quarter turns {q}"))

    regions = {}
    for v, anchor in enumerate(layout.var_anchors):
        vx, vy = center(anchor)
        regions[v] = Region(0).add_rect(vx - STRIP // 2, vy - STRIP // 2, vx + STRIP // 2, vy + STRIP // 2)
    for route in layout.routes:
        var = f.clauses[route.clause][route.slot - 1].var - 1
        reg = regions[var]
        cs = [center(p) for p in route.points]
        for a, b in zip(cs[1:], cs[2:]):
            reg.add_rect(min(a[0], b[0]) - STRIP // 2, min(a[1], b[1]) - STRIP // 2,
                         max(a[0], b[0]) + STRIP // 2, max(a[1], b[1]) + STRIP // 2)
        o, t, u = relays[(route.clause, route.slot)][2]
        far = (o[0] + STRIP * u[0], o[1] + STRIP * u[1])
        lane = (cs[1][0] - STRIP // 2 * u[0], cs[1][1] - STRIP // 2 * u[1])
        if (lane[0] - o[0]) * t[1] != (lane[1] - o[1]) * t[0]:
            raise CompileError(f"route to clause {route.clause + 1} slot {route.slot} is off its port lane")
        xs = (o[0], far[0], lane[0], lane[0] + STRIP * u[0])
        ys = (o[1], far[1], lane[1], lane[1] + STRIP * u[1])
        reg.add_rect(min(xs), min(ys), max(xs), max(ys))

    loops = []
    for v in range(f.num_vars):
        try:
            loop = loop_component(f"x{v + 1}", regions[v].cycle())
        except GeometryError as exc:
            raise CompileError(f"variable x{v + 1}: {exc}") from exc
        loops.append(loop)
        manifest.append(PlacedGadget("VariableLoop", loop.name, frozenset(loop.disks)))
    components.extend(loops)

    for route in layout.routes:
        lit = f.clauses[route.clause][route.slot - 1]
        loop = loops[lit.var - 1]
        relay, dist, frame = relays[(route.clause, route.slot)]
        name = f"c{route.clause + 1}.coupler{route.slot}"
        for variant in COUPLERS:
            coupler = loop_component(name, coupler_cycle(variant, *frame))
            try:
                local = System([loop, coupler, relay])
            except GeometryError as exc:
                raise CompileError(f"{name}: {exc}") from exc
            pairs = {(s[0], s[2]) for s in local.solutions()}
            # loop state 0 holds the probe edge, which means TRUE
            want = {(s, dist if (s == 0) == lit.positive else 1 - dist) for s in (0, 1)}
            if pairs == want:
                break
        else:
            raise CompileError(f"{name}: no coupler gives the required polarity")
        components.append(coupler)
        manifest.append(PlacedGadget("Negation", name, frozenset(coupler.disks), variant))

    try:
        system = System(components)
    except GeometryError as exc:
        raise CompileError(f"gadgets interfere: {exc}") from exc
    if self_check and f.num_vars <= 16:
        nv = f.num_vars
        got = sorted(tuple(s[-len(layout.routes) - nv + k] == 0 for k in range(nv))
                     for s in system.solutions())
        want = sorted(a.values for a in one_in_three_models(f))
        if got != want:
            raise CompileError("compiled gadgets do not reproduce the model set")

    disks = frozenset(system.disks)
    board = disks_to_board(disks, width, height)
    probes = tuple((loop.disks[0], loop.disks[1]) for loop in loops)
    return Unit3Compilation(f, board, disks, probes, manifest, components)


def probe_value(sol: Solution, probe: tuple[Point, Point]) -> bool:
    a, b = probe
    m = ((a[0] + b[0]) // 2, (a[1] + b[1]) // 2)
    joined = sol[a] == sol[m] == sol[b]
    split = sol[a] != sol[m] and sol[b] != sol[m]
    if joined == split:
        raise CompileError(f"probe {a}-{b} is in an unrecognized state")
    return joined


def decode_unit3(c: Unit3Compilation, sol: Solution, check: bool = True) -> Assignment:
    if check and not verify(c.board, sol, ShapeClass.UNIT3).valid:
        raise BoardError("solution is not a valid Unit3 solution of the compiled board")
    return Assignment(tuple(probe_value(sol, p) for p in c.probes))


# ---------------------------------------------------------------- standalone fixtures

def standalone_board(disks, margin: int = 2) -> tuple[Board, Point]:
    """Board holding ``disks`` shifted by an even offset to leave ``margin`` empty cells around them."""
    xs = [p[0] for p in disks]
    ys = [p[1] for p in disks]
    dx, dy = margin - min(xs), margin - min(ys)
    dx += dx % 2
    dy += dy % 2
    moved = {(x + dx, y + dy) for x, y in disks}
    w = max(p[0] for p in moved) + margin + 1
    h = max(p[1] for p in moved) + margin + 1
    return disks_to_board(moved, w, h), (dx, dy)


def loop_probes(disks) -> list[tuple[Point, Point]]:
    """Probe pairs of the even-cell loops among ``disks``, lowest loop first."""
    loops = [c for c in split_components(disks, "l") if c.kind == "loop" and c.disks[0][0] % 2 == 0]
    return [(c.disks[0], c.disks[1]) for c in loops]


def variable_loop_fixture() -> tuple[Board, tuple[Point, Point]]:
    disks, _ = load_fixture("variable_loop.txt")
    board, _ = standalone_board(disks)
    return board, loop_probes(board_disks(board))[0]


def negation_fixture() -> tuple[Board, list[tuple[Point, Point]]]:
    """Two loops joined by a coupler whose probes always disagree."""
    disks, _ = load_fixture("negation.txt")
    board, _ = standalone_board(disks)
    return board, loop_probes(board_disks(board))


def clause_fixture_layout() -> tuple[Formula, Layout]:
    """The single clause (x1 or x2 or x3) with one short loop stub on each port."""
    from .formula import Route
    f = Formula.from_ints(3, [[1, 2, 3]])
    routes = (Route(0, 1, ((1, 1), (0, 1))), Route(0, 2, ((1, 1), (1, 2))), Route(0, 3, ((1, 1), (2, 1))))
    return f, Layout((3, 3), ((0, 1), (1, 2), (2, 1)), ((1, 1),), routes)


def clause_fixture() -> Unit3Compilation:
    return compile_unit3(*clause_fixture_layout())
