"""Reduction from planar 1-in-3 SAT to Spiral Galaxies with rectangular galaxies.

The variable loop is the corridor construction: two height-two corridors whose
centers sit on the middle edge every three cells, joined at both ends by a
width-one column of six cells with one center in its middle. Under rectangles it
has exactly two solutions, told apart by the width of the galaxy on the corner cell.

Whole formulas are compiled onto the disk boards of the Unit3 reduction. On such a
board every non-disk cell carries a cell-center and no two disks touch, so any
rectangle around a center other than 1x1, 1x3 or 3x1 would swallow a second center
or need two touching disks. The rectangular solutions are therefore exactly the
Unit3 ones, and the same probes decode them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .board import Board, BoardError, Center, ShapeClass, Solution, verify
from .diskgeom import GeometryError, Point, Region, edges_of, mid
from .formula import Assignment, Formula, Layout
from .reduce_unit3 import STRIP, Pose, Unit3Compilation, compile_unit3, coupler_cycle, load_fixture

RECT_KINDS = ("FaceFill", "VariableLoop", "Corridor", "Bend", "Shift", "Clause")
LOOP_SPACING = 3       # cells between consecutive corridor centers of a variable loop
COLUMN_LENGTH = 6      # cells in a width-one corridor, both corridor rows included
FACE_MARGIN = 2


@dataclass(frozen=True)
class RectGadget:
    """A placed gadget: the cells it owns and its centers in doubled coordinates."""

    kind: str
    cells: frozenset[Point]
    centers: frozenset[Point]
    name: str = ""


@dataclass
class RectCompilation:
    formula: Formula
    board: Board
    probes: tuple[Point, ...]
    manifest: list[RectGadget] = field(default_factory=list)
    unit3: Unit3Compilation | None = None


# ---------------------------------------------------------------- emitters

def _variable_loop(n: int) -> tuple[set[Point], set[Point]]:
    if n < 1 or n % 2 == 0:
        raise GeometryError("a variable loop needs an odd number of corridor centers")
    length = 4 + LOOP_SPACING * (n - 1)          # index of the last cell column
    gap = COLUMN_LENGTH - 4                      # rows strictly between the corridors
    top = (0, 1)
    bottom = (2 + gap, 3 + gap)
    cells = {(x, y) for x in range(length + 1) for y in top + bottom}
    cells |= {(x, y) for x in (0, length) for y in range(2, 2 + gap)}
    centers = set()
    for i in range(n):
        x = 2 + LOOP_SPACING * i
        centers.add((2 * x + 1, 2 * top[1]))
        centers.add((2 * x + 1, 2 * bottom[1]))
    for x in (0, length):
        centers.add((2 * x + 1, 2 * (top[1] + 1 + gap // 2)))
    return cells, centers


def _disk_fragment(disks: set[Point]) -> tuple[set[Point], set[Point]]:
    """Cells and centers of a disk pattern: disks, plus a cell-center on every edge midpoint."""
    mids = {mid(e) for e in edges_of(disks)}
    return set(disks) | mids, {(2 * x + 1, 2 * y + 1) for x, y in mids}


def _strip(points: list[Point]) -> set[Point]:
    reg = Region(0)
    h = STRIP // 2
    for a, b in zip(points, points[1:]):
        reg.add_rect(min(a[0], b[0]) - h, min(a[1], b[1]) - h, max(a[0], b[0]) + h, max(a[1], b[1]) + h)
    return set(reg.cycle())


def emit_gadget_rect(kind: str, pose: Pose = Pose(), params: dict | None = None,
                     bounds: tuple[int, int] | None = None) -> RectGadget:
    """One gadget under ``pose``.

    FaceFill takes ``width`` and ``height``; VariableLoop takes ``centers`` (odd, per
    corridor); Corridor takes ``length``; Bend takes ``arm``; Shift takes ``amount``
    (at least 4) and ``length``; Clause has no parameters.
    """
    params = dict(params or {})
    if kind == "FaceFill":
        w, h = params.pop("width", 1), params.pop("height", 1)
        cells = {(x, y) for x in range(w) for y in range(h)}
        centers = {(2 * x + 1, 2 * y + 1) for x, y in cells}
    elif kind == "VariableLoop":
        cells, centers = _variable_loop(params.pop("centers", 3))
    elif kind == "Corridor":
        length = params.pop("length", 16)
        cells, centers = _disk_fragment(_strip([(0, 0), (length, 0)]))
    elif kind == "Bend":
        arm = params.pop("arm", 16)
        cells, centers = _disk_fragment(_strip([(0, 0), (arm, 0), (arm, arm)]))
    elif kind == "Shift":
        amount, length = params.pop("amount", 4), params.pop("length", 16)
        if amount <= 3:
            raise GeometryError("a corridor shift must move the corridor by more than 3")
        if amount % 2:
            raise GeometryError("a corridor shift must keep the sublattice (even amount)")
        cells, centers = _disk_fragment(_strip([(0, 0), (length, 0), (length, amount), (2 * length, amount)]))
    elif kind == "Clause":
        cells, centers = _disk_fragment(load_fixture("clause.txt")[0])
    else:
        raise GeometryError(f"unknown gadget kind {kind!r}")
    if params:
        raise GeometryError(f"unexpected parameters {sorted(params)}")
    moved_cells, moved_centers = _apply(pose, cells, centers)
    if bounds is not None:
        w, h = bounds
        if any(not (0 <= x < w and 0 <= y < h) for x, y in moved_cells):
            raise GeometryError(f"{kind} does not fit on a {w}x{h} board")
    return RectGadget(kind, frozenset(moved_cells), frozenset(moved_centers))


def _apply(pose: Pose, cells: set[Point], centers: set[Point]) -> tuple[set[Point], set[Point]]:
    """Move cells and doubled centers together; cells turn about their own centers."""
    out_cells = set()
    for x, y in cells:
        a, b = pose.vec((2 * x + 1, 2 * y + 1))
        out_cells.add(((a - 1) // 2 + pose.dx, (b - 1) // 2 + pose.dy))
    out_centers = set()
    for a, b in centers:
        c, d = pose.vec((a, b))
        out_centers.add((c + 2 * pose.dx, d + 2 * pose.dy))
    return out_cells, out_centers


def face_filled_board(gadgets: list[RectGadget], margin: int = FACE_MARGIN) -> tuple[Board, Point]:
    """Board holding ``gadgets`` with face-fill cell-centers on every other cell.

    Returns the board and the cell offset applied to the gadgets.
    """
    cells = set().union(*(g.cells for g in gadgets))
    xs = [p[0] for p in cells]
    ys = [p[1] for p in cells]
    dx, dy = margin - min(xs), margin - min(ys)
    w = max(xs) + dx + margin + 1
    h = max(ys) + dy + margin + 1
    moved = {(x + dx, y + dy) for x, y in cells}
    centers = {(a + 2 * dx, b + 2 * dy) for g in gadgets for a, b in g.centers}
    for y in range(h):
        for x in range(w):
            if (x, y) not in moved:
                centers.add((2 * x + 1, 2 * y + 1))
    return Board(w, h, tuple(Center(p) for p in sorted(centers, key=lambda p: (p[1], p[0])))), (dx, dy)


def variable_loop_fixture() -> tuple[Board, Point]:
    """The transcribed loop with its face-fill margin, and its probe cell."""
    text = resources.files("spiral_galaxies").joinpath("gadgets").joinpath("rect") \
        .joinpath("variable_loop.txt").read_text()
    board = parse_rect_fixture(text)
    return board, _loop_probe(board)


def _loop_probe(board: Board) -> Point:
    """Leftmost cell of the top row of the first height-two corridor."""
    edge_centers = sorted((c.pos for c in board.centers if c.kind == "edge"), key=lambda p: (p[1], p[0]))
    a, b = edge_centers[0]
    y = b // 2 - 1
    return (a // 2 - 2, y)


def loop_probe_value(sol: Solution, board: Board, probe: Point) -> bool:
    """TRUE when the galaxy on the probe cell is five cells wide, FALSE when it is one cell wide."""
    owner = sol[probe]
    xs = {x for x, y in sol.galaxies()[owner]}
    width = max(xs) - min(xs) + 1
    if width == 5:
        return True
    if width == 1:
        return False
    raise BoardError(f"probe galaxy of width {width} matches neither loop state")


# ---------------------------------------------------------------- fixture format

def parse_rect_fixture(text: str) -> Board:
    """Grid of ``.`` (open gadget cell), ``#`` (face cell, gets a cell-center), ``o`` (open
    cell with a cell-center) and ``O`` (open cell next to a listed center); ``center a b``
    lines add centers in doubled coordinates. Row k of the grid is y = k."""
    rows, extra = [], []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("c ") or s == "c":
            continue
        if s.startswith("center"):
            _, a, b = s.split()
            extra.append((int(a), int(b)))
            continue
        rows.append(s)
    if not rows or len({len(r) for r in rows}) != 1:
        raise BoardError("fixture grid must be a non-empty rectangle")
    centers = set(extra)
    for y, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch in "#o":
                centers.add((2 * x + 1, 2 * y + 1))
            elif ch not in ".O":
                raise BoardError(f"unexpected fixture character {ch!r}")
    return Board(len(rows[0]), len(rows), tuple(Center(p) for p in sorted(centers, key=lambda p: (p[1], p[0]))))


def rect_fixture_text(board: Board, open_cells: set[Point], comments=()) -> str:
    cell_centers = {c.pos for c in board.centers if c.kind == "cell"}
    others = sorted((c.pos for c in board.centers if c.kind != "cell"), key=lambda p: (p[1], p[0]))
    marked = {(a // 2, b // 2) for a, b in others}
    rows = []
    for y in range(board.height):
        row = ""
        for x in range(board.width):
            has = (2 * x + 1, 2 * y + 1) in cell_centers
            if (x, y) not in open_cells:
                row += "#"
            elif has:
                row += "o"
            else:
                row += "O" if (x, y) in marked else "."
        rows.append(row)
    head = "".join(f"c {c}\n" for c in comments)
    return head + "".join(f"center {a} {b}\n" for a, b in others) + "\n".join(rows) + "\n"


# ---------------------------------------------------------------- compilation

def compile_rect(f: Formula, layout: Layout, self_check: bool = True) -> RectCompilation:
    u3 = compile_unit3(f, layout, self_check=self_check)
    probes = tuple(((a[0] + b[0]) // 2, (a[1] + b[1]) // 2) for a, b in u3.probes)
    manifest = []
    claimed: set[Point] = set()
    # odd-cell gadgets first so that crossing cells go to them
    order = sorted(u3.manifest, key=lambda g: g.kind == "VariableLoop")
    for g in order:
        cells, centers = _disk_fragment(set(g.disks))
        cells -= claimed
        claimed |= cells
        manifest.append(RectGadget(g.kind, frozenset(cells),
                                   frozenset((2 * x + 1, 2 * y + 1) for x, y in cells - set(g.disks)), g.name))
    face = {p for p in u3.board.cells() if p not in claimed}
    manifest.append(RectGadget("FaceFill", frozenset(face), frozenset((2 * x + 1, 2 * y + 1) for x, y in face),
                               "face"))
    return RectCompilation(f, u3.board, probes, manifest, u3)


def decode_rect(c: RectCompilation, sol: Solution, check: bool = True) -> Assignment:
    if check and not verify(c.board, sol, ShapeClass.RECT).valid:
        raise BoardError("solution is not a valid Rect solution of the compiled board")
    values = []
    for p, (a, b) in zip(c.probes, c.unit3.probes):
        # TRUE joins the probe cell with both pair cells; a 1x3 across the pair means FALSE
        hits = (sol[a] == sol[p]) + (sol[b] == sol[p])
        if hits == 1:
            raise BoardError(f"probe {p} galaxy covers only one side of its pair")
        values.append(hits == 2)
    return Assignment(tuple(values))
