"""Boards, centers and solutions in doubled coordinates, plus the rule verifier.

A center at doubled position (a, b) sits at the real point (a/2, b/2). Cell (x, y)
covers the real square [x, x+1] x [y, y+1], so its own center is (2x+1, 2y+1).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

Cell = tuple[int, int]
Pos = tuple[int, int]


class BoardError(ValueError):
    """Malformed board or solution text, or a board violating its invariants."""


class ShapeClass(enum.Enum):
    ANY = "any"
    RECT = "rect"
    UNIT3 = "unit3"

    @classmethod
    def parse(cls, name: str) -> "ShapeClass":
        try:
            return cls(name.lower())
        except ValueError:
            raise BoardError(f"unknown shape class {name!r}; use any, rect or unit3") from None


UNIT3_DIMS = {(1, 1), (1, 3), (3, 1)}


@dataclass(frozen=True)
class Center:
    pos: Pos
    black: bool = False

    @property
    def kind(self) -> str:
        a, b = self.pos
        odd = (a % 2) + (b % 2)
        return ("vertex", "edge", "cell")[odd]


@dataclass(frozen=True)
class Board:
    width: int
    height: int
    centers: tuple[Center, ...]
    allow_disconnected: bool = False

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise BoardError("board dimensions must be positive")
        seen = set()
        for c in self.centers:
            a, b = c.pos
            if not (0 < a < 2 * self.width and 0 < b < 2 * self.height):
                raise BoardError(f"center {c.pos} is on or outside the board boundary")
            if c.pos in seen:
                raise BoardError(f"duplicate center at {c.pos}")
            seen.add(c.pos)
        if not self.centers:
            raise BoardError("a non-empty board needs at least one center")

    @property
    def area(self) -> int:
        return self.width * self.height

    def cells(self):
        for y in range(self.height):
            for x in range(self.width):
                yield (x, y)

    def on_board(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def center_index(self) -> dict[Pos, int]:
        return {c.pos: i for i, c in enumerate(self.centers)}


@dataclass(frozen=True)
class Solution:
    """Owner map stored row by row: ``owner[y][x]`` is a center index."""

    owner: tuple[tuple[int, ...], ...]

    @classmethod
    def from_mapping(cls, board: Board, mapping: dict[Cell, int]) -> "Solution":
        if len(mapping) != board.area:
            raise BoardError("owner map is not total")
        return cls(tuple(tuple(mapping[(x, y)] for x in range(board.width)) for y in range(board.height)))

    @property
    def width(self) -> int:
        return len(self.owner[0]) if self.owner else 0

    @property
    def height(self) -> int:
        return len(self.owner)

    def __getitem__(self, cell: Cell) -> int:
        return self.owner[cell[1]][cell[0]]

    def galaxies(self) -> dict[int, list[Cell]]:
        out: dict[int, list[Cell]] = {}
        for y, row in enumerate(self.owner):
            for x, i in enumerate(row):
                out.setdefault(i, []).append((x, y))
        return out


@dataclass(frozen=True)
class Picture:
    bits: tuple[tuple[bool, ...], ...]

    def __str__(self) -> str:
        return "\n".join("".join("#" if b else "." for b in row) for row in self.bits)


@dataclass(frozen=True)
class Violation:
    galaxy: int
    rule: str
    witness: Cell | None

    def __str__(self) -> str:
        return f"galaxy {self.galaxy}: {self.rule} at {self.witness}"


@dataclass
class Verdict:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def rotate_cell(cell: Cell, center: Center | Pos) -> Cell:
    a, b = center.pos if isinstance(center, Center) else center
    return (a - cell[0] - 1, b - cell[1] - 1)


def incident_cells(pos: Pos) -> list[Cell]:
    """Cells whose closed square contains the doubled point ``pos`` (1, 2 or 4 cells)."""
    a, b = pos
    xs = [a // 2] if a % 2 else [a // 2 - 1, a // 2]
    ys = [b // 2] if b % 2 else [b // 2 - 1, b // 2]
    return [(x, y) for y in ys for x in xs]


def is_connected(cells: set[Cell]) -> bool:
    if not cells:
        return True
    start = next(iter(cells))
    stack, seen = [start], {start}
    while stack:
        x, y = stack.pop()
        for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if q in cells and q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(cells)


def shape_ok(cells: set[Cell], shapes: ShapeClass) -> Cell | None:
    """Return a witness cell when ``cells`` is not admitted by ``shapes``, else None."""
    if shapes is ShapeClass.ANY:
        return None
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            if (x, y) not in cells:
                return (x, y)
    if shapes is ShapeClass.UNIT3 and (x1 - x0 + 1, y1 - y0 + 1) not in UNIT3_DIMS:
        return (x0, y0)
    return None


def verify(board: Board, sol: Solution, shapes: ShapeClass = ShapeClass.ANY) -> Verdict:
    if sol.height != board.height or any(len(r) != board.width for r in sol.owner):
        raise BoardError("malformed solution: owner map does not match board dimensions")
    n = len(board.centers)
    for row in sol.owner:
        for i in row:
            if not 0 <= i < n:
                raise BoardError(f"malformed solution: owner index {i} out of range")
    verdict = Verdict()
    bad = verdict.violations.append
    groups = sol.galaxies()
    incident = [incident_cells(c.pos) for c in board.centers]
    # galaxy index -> some foreign center whose incident cells it owns entirely
    swallowed: dict[int, int] = {}
    for j, inc in enumerate(incident):
        owners = {sol[p] for p in inc}
        if len(owners) == 1 and j not in owners:
            swallowed.setdefault(owners.pop(), j)
    for i, center in enumerate(board.centers):
        cells = set(groups.get(i, ()))
        for p in incident[i]:
            if p not in cells:
                bad(Violation(i, "containment", p))
                break
        if not cells:
            continue
        for p in sorted(cells):
            q = rotate_cell(p, center)
            if not board.on_board(q) or sol[q] != i:
                bad(Violation(i, "symmetry", p))
                break
        if i in swallowed:
            bad(Violation(i, "uniqueness", incident[swallowed[i]][0]))
        if not board.allow_disconnected and not is_connected(cells):
            bad(Violation(i, "connectivity", min(cells)))
        witness = shape_ok(cells, shapes)
        if witness is not None:
            bad(Violation(i, "shape", witness))
    return verdict


def picture_of(board: Board, sol: Solution) -> Picture:
    return Picture(tuple(tuple(board.centers[i].black for i in row) for row in sol.owner))


# ---------------------------------------------------------------- text formats

def parse_board(text: str) -> Board:
    header = None
    centers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "galaxies" or len(parts) not in (3, 4):
                raise BoardError(f"line {lineno}: expected 'galaxies <width> <height> [disconnected]'")
            if len(parts) == 4 and parts[3] != "disconnected":
                raise BoardError(f"line {lineno}: unknown flag {parts[3]!r}")
            try:
                header = (int(parts[1]), int(parts[2]), len(parts) == 4)
            except ValueError:
                raise BoardError(f"line {lineno}: dimensions must be integers") from None
            continue
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "black"):
            raise BoardError(f"line {lineno}: expected '<a> <b> [black]'")
        try:
            pos = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise BoardError(f"line {lineno}: center coordinates must be integers") from None
        centers.append(Center(pos, len(parts) == 3))
    if header is None:
        raise BoardError("missing 'galaxies' header")
    try:
        return Board(header[0], header[1], tuple(centers), header[2])
    except BoardError as exc:
        raise BoardError(f"invalid board: {exc}") from None


def serialize_board(board: Board) -> str:
    head = f"galaxies {board.width} {board.height}" + (" disconnected" if board.allow_disconnected else "")
    lines = [head] + [f"{c.pos[0]} {c.pos[1]}" + (" black" if c.black else "") for c in board.centers]
    return "\n".join(lines) + "\n"


def parse_solution(text: str, board: Board | None = None) -> Solution:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rows.append(tuple(int(t) for t in raw.split()))
        except ValueError:
            raise BoardError(f"line {lineno}: solution entries must be integers") from None
        if any(v < 0 for v in rows[-1]):
            raise BoardError(f"line {lineno}: negative center index")
    if not rows or len({len(r) for r in rows}) != 1:
        raise BoardError("solution rows must be non-empty and of equal length")
    if board is not None:
        tokens = sum(len(r) for r in rows)
        if tokens != board.area or len(rows) != board.height:
            raise BoardError(f"solution has {tokens} entries in {len(rows)} rows, board needs "
                             f"{board.height} rows of {board.width}")
    return Solution(tuple(rows))


def serialize_solution(sol: Solution) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in sol.owner) + "\n"


# ---------------------------------------------------------------- rendering

def _border(board: Board, sol: Solution | None, a: Cell, b: Cell) -> bool:
    """True when the unit edge between cells a and b is a galaxy border."""
    if not board.on_board(a) or not board.on_board(b):
        return True
    return sol is not None and sol[a] != sol[b]


def render_ascii(board: Board, sol: Solution | None = None) -> str:
    marks = {c.pos: ("●" if c.black else "o") for c in board.centers}
    out = []
    for b in range(2 * board.height + 1):
        row = []
        for a in range(2 * board.width + 1):
            mark = marks.get((a, b))
            if a % 2 and b % 2:
                row.append(f" {mark or ' '} ")
            elif a % 2:  # horizontal edge between cells (x, y-1) and (x, y)
                x, y = a // 2, b // 2
                thick = _border(board, sol, (x, y - 1), (x, y))
                bar = "━" if thick else "─"
                row.append(bar + (mark or bar) + bar)
            elif b % 2:  # vertical edge between cells (x-1, y) and (x, y)
                x, y = a // 2, b // 2
                row.append(mark or ("┃" if _border(board, sol, (x - 1, y), (x, y)) else "│"))
            else:
                row.append(mark or "+")
        out.append("".join(row))
    return "\n".join(out) + "\n"


CELL_PX = 32


def render_svg(board: Board, sol: Solution | None = None) -> str:
    w, h = board.width * CELL_PX, board.height * CELL_PX
    pic = picture_of(board, sol) if sol is not None else None
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w + 8}" height="{h + 8}" '
        f'viewBox="-4 -4 {w + 8} {h + 8}">',
        f"<title>{escape(f'spiral galaxies {board.width}x{board.height}')}</title>",
    ]
    # row 0 is drawn at the top, matching the solution file layout
    def sy(y: float) -> float:
        return y

    for x, y in board.cells():
        fill = "#222" if pic is not None and pic.bits[y][x] else "#fff"
        parts.append(
            f'<rect class="cell" data-x="{x}" data-y="{y}" x="{x * CELL_PX}" y="{sy(y * CELL_PX)}" '
            f'width="{CELL_PX}" height="{CELL_PX}" fill="{fill}" stroke="#bbb" stroke-width="1"/>'
        )
    for x in range(board.width + 1):
        for y in range(board.height):
            if _border(board, sol, (x - 1, y), (x, y)):
                px = x * CELL_PX
                parts.append(f'<line class="border" x1="{px}" y1="{sy(y * CELL_PX)}" x2="{px}" '
                             f'y2="{sy((y + 1) * CELL_PX)}" stroke="#000" stroke-width="3"/>')
    for y in range(board.height + 1):
        for x in range(board.width):
            if _border(board, sol, (x, y - 1), (x, y)):
                py = sy(y * CELL_PX)
                parts.append(f'<line class="border" x1="{x * CELL_PX}" y1="{py}" '
                             f'x2="{(x + 1) * CELL_PX}" y2="{py}" stroke="#000" stroke-width="3"/>')
    for c in board.centers:
        cx, cy = c.pos[0] * CELL_PX / 2, sy(c.pos[1] * CELL_PX / 2)
        fill = "#000" if c.black else "#fff"
        parts.append(f'<circle cx="{cx:g}" cy="{cy:g}" r="6" fill="{fill}" stroke="#000" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def partition_from_svg(svg: str, width: int, height: int) -> list[set[Cell]]:
    """Recover the cell partition drawn by ``render_svg`` from its border strokes."""
    walls = set()
    for m in re.finditer(r'<line class="border" x1="([\d.]+)" y1="([\d.]+)" x2="([\d.]+)" y2="([\d.]+)"', svg):
        x1, y1, x2, y2 = (round(float(v)) for v in m.groups())
        if x1 == x2:
            x, y = x1 // CELL_PX, min(y1, y2) // CELL_PX
            walls.add(((x - 1, y), (x, y)))
        else:
            x, y = min(x1, x2) // CELL_PX, y1 // CELL_PX
            walls.add(((x, y - 1), (x, y)))
    parts, seen = [], set()
    for start in ((x, y) for y in range(height) for x in range(width)):
        if start in seen:
            continue
        comp, stack = {start}, [start]
        seen.add(start)
        while stack:
            x, y = stack.pop()
            for q, wall in (((x + 1, y), ((x, y), (x + 1, y))), ((x - 1, y), ((x - 1, y), (x, y))),
                            ((x, y + 1), ((x, y), (x, y + 1))), ((x, y - 1), ((x, y - 1), (x, y)))):
                if 0 <= q[0] < width and 0 <= q[1] < height and q not in seen and wall not in walls:
                    seen.add(q)
                    comp.add(q)
                    stack.append(q)
        parts.append(comp)
    return parts
