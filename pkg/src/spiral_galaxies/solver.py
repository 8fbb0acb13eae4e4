"""Exact search over Spiral Galaxies solutions.

Rect and Unit3 boards are solved as exact cover problems: one column per cell and
one per center, one row per admissible galaxy. The search always branches on the
first uncovered cell in row-major order and tries its candidate galaxies by size,
then by sorted cell list. Columns left with a single row are committed eagerly;
such moves belong to every solution below the current node, so they change node
counts but never the order in which solutions are produced.

Any-shaped galaxies are searched cell by cell instead (see ``_AnySearch``).
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .board import (Board, BoardError, Cell, ShapeClass, Solution, UNIT3_DIMS, incident_cells,
                    is_connected, rotate_cell, shape_ok, verify)

NAIVE_MAX_AREA = 12


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass(frozen=True)
class SearchBudget:
    max_solutions: int | None = None
    max_nodes: int | None = None
    max_seconds: float | None = None

    def __post_init__(self):
        for name in ("max_solutions", "max_nodes", "max_seconds"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive")


UNLIMITED = SearchBudget()


@dataclass
class SolveOutcome:
    status: Status
    solution: Solution | None = None
    node_count: int = 0


@dataclass
class CountResult:
    count: int
    complete: bool
    node_count: int = 0


@dataclass
class EnumerationResult:
    solutions: list[Solution] = field(default_factory=list)
    complete: bool = True
    node_count: int = 0


class _OutOfBudget(Exception):
    pass


# ---------------------------------------------------------------- candidates

class _CenterGrid:
    """Prefix sums over the doubled grid answering 'how many centers lie strictly inside'."""

    def __init__(self, board: Board):
        grid = np.zeros((2 * board.height + 1, 2 * board.width + 1), dtype=np.int32)
        for c in board.centers:
            grid[c.pos[1], c.pos[0]] += 1
        self.sums = np.zeros((grid.shape[0] + 1, grid.shape[1] + 1), dtype=np.int32)
        self.sums[1:, 1:] = grid.cumsum(0).cumsum(1)

    def inside(self, x0: int, y0: int, x1: int, y1: int) -> int:
        """Centers whose incident cells all lie in the cell rectangle [x0,x1] x [y0,y1]."""
        # doubled positions strictly between 2*x0 and 2*x1+2
        a0, a1, b0, b1 = 2 * x0 + 1, 2 * x1 + 1, 2 * y0 + 1, 2 * y1 + 1
        s = self.sums
        return int(s[b1 + 1, a1 + 1] - s[b0, a1 + 1] - s[b1 + 1, a0] + s[b0, a0])


def _extent(a: int, k: int) -> tuple[int, int]:
    """Cell interval of half-size k symmetric about doubled coordinate a."""
    if a % 2:
        m = (a - 1) // 2
        return m - k, m + k
    return a // 2 - 1 - k, a // 2 + k


def rect_candidates(board: Board, shapes: ShapeClass) -> list[list[tuple[int, int, int, int]]]:
    """Admissible rectangles per center as (x0, y0, x1, y1), unordered."""
    grid = _CenterGrid(board)
    out = []
    for c in board.centers:
        a, b = c.pos
        rects = []
        if shapes is ShapeClass.UNIT3:
            if a % 2 and b % 2:
                for kx, ky in ((0, 0), (1, 0), (0, 1)):
                    x0, x1 = _extent(a, kx)
                    y0, y1 = _extent(b, ky)
                    if x0 >= 0 and y0 >= 0 and x1 < board.width and y1 < board.height:
                        if grid.inside(x0, y0, x1, y1) == 1:
                            rects.append((x0, y0, x1, y1))
        else:
            # growing a rectangle can only swallow more centers, so both loops stop early
            for kx in itertools.count():
                x0, x1 = _extent(a, kx)
                if x0 < 0 or x1 >= board.width:
                    break
                grown = False
                for ky in itertools.count():
                    y0, y1 = _extent(b, ky)
                    if y0 < 0 or y1 >= board.height or grid.inside(x0, y0, x1, y1) > 1:
                        break
                    rects.append((x0, y0, x1, y1))
                    grown = True
                if not grown:
                    break
        out.append(rects)
    return out


# ---------------------------------------------------------------- exact cover

class _ExactCover:
    def __init__(self, board: Board, shapes: ShapeClass, budget: SearchBudget):
        self.board = board
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds if budget.max_seconds else None
        w = board.width
        ncell = board.area
        rows = []
        for i, rects in enumerate(rect_candidates(board, shapes)):
            for x0, y0, x1, y1 in rects:
                cells = tuple(y * w + x for y in range(y0, y1 + 1) for x in range(x0, x1 + 1))
                rows.append((len(cells), cells, i))
        rows.sort()
        self.row_center = [r[2] for r in rows]
        self.row_cells = [r[1] for r in rows]
        self.Y = [r[1] + (ncell + r[2],) for r in rows]
        self.X: dict[int, set[int]] = {j: set() for j in range(ncell + len(board.centers))}
        for r, cols in enumerate(self.Y):
            for j in cols:
                self.X[j].add(r)
        self.ncell = ncell
        self.small = {j for j, rs in self.X.items() if len(rs) <= 1}

    def _tick(self):
        self.nodes += 1
        if self.budget.max_nodes is not None and self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def _select(self, r: int) -> list[set[int]]:
        X, Y, small = self.X, self.Y, self.small
        removed = []
        for j in Y[r]:
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        col = X[k]
                        col.discard(i)
                        if len(col) <= 1:
                            small.add(k)
            removed.append(X.pop(j))
        return removed

    def _deselect(self, r: int, removed: list[set[int]]):
        X, Y = self.X, self.Y
        for j in reversed(Y[r]):
            X[j] = removed.pop()
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        X[k].add(i)

    def solutions(self) -> Iterator[list[int]]:
        chosen: list[int] = []
        yield from self._search(0, chosen)

    def _search(self, cursor: int, chosen: list[int]) -> Iterator[list[int]]:
        self._tick()
        X = self.X
        forced = []
        dead = False
        while self.small:
            j = self.small.pop()
            col = X.get(j)
            if col is None or len(col) > 1:
                continue
            if not col:
                dead = True
                break
            r = next(iter(col))
            forced.append((r, self._select(r)))
            chosen.append(r)
        if not dead:
            while cursor < self.ncell and cursor not in X:
                cursor += 1
            if cursor == self.ncell:
                if not X:
                    yield list(chosen)
                else:  # cells covered but a center is left without a galaxy
                    pass
            else:
                self.small.clear()
                for r in sorted(X[cursor]):
                    removed = self._select(r)
                    chosen.append(r)
                    yield from self._search(cursor, chosen)
                    chosen.pop()
                    self._deselect(r, removed)
                    self.small.clear()
        self.small.clear()
        for r, removed in reversed(forced):
            chosen.pop()
            self._deselect(r, removed)

    def to_solution(self, rows: list[int]) -> Solution:
        w = self.board.width
        owner = [0] * self.ncell
        for r in rows:
            for c in self.row_cells[r]:
                owner[c] = self.row_center[r]
        return Solution(tuple(tuple(owner[y * w:(y + 1) * w]) for y in range(self.board.height)))


# ---------------------------------------------------------------- any shapes

class _AnySearch:
    """Cell-assignment search for arbitrary symmetric galaxies.

    Incident cells are pre-assigned. Every free cell keeps the set of centers that
    could still take it together with its rotation partner; empty sets fail, single
    sets are committed, and otherwise the search branches on the free cell with the
    fewest options (earliest in row-major order on ties), trying centers by index.
    A galaxy whose cells can no longer be joined to its center is pruned early.
    """

    def __init__(self, board: Board, budget: SearchBudget, allowed: set[Cell] | None = None,
                 size_cap: int | None = None):
        self.board = board
        self.budget = budget
        self.allowed = allowed
        self.size_cap = size_cap
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds if budget.max_seconds else None

    def _tick(self):
        self.nodes += 1
        if self.budget.max_nodes is not None and self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def solutions(self) -> Iterator[list[int]]:
        """Owner lists in row-major order; cells outside ``allowed`` are marked -2."""
        b = self.board
        w, h = b.width, b.height
        n = len(b.centers)
        area = w * h
        owner = [-1] * area
        if self.allowed is not None:
            for p in range(area):
                if (p % w, p // w) not in self.allowed:
                    owner[p] = -2
        cap = self.size_cap if self.size_cap is not None else area
        base = [0] * n
        for i, c in enumerate(b.centers):
            for x, y in incident_cells(c.pos):
                if owner[y * w + x] not in (-1, i):
                    return
                owner[y * w + x] = i
                base[i] += 1
        size = list(base)
        partner = []
        for c in b.centers:
            row = []
            for p in range(area):
                q = rotate_cell((p % w, p // w), c)
                row.append(q[1] * w + q[0] if b.on_board(q) and owner[q[1] * w + q[0]] != -2 else -1)
            partner.append(row)
        if any(s > cap for s in base):
            return
        dom: list[set[int]] = [set() for _ in range(area)]
        for p in range(area):
            if owner[p] == -1:
                dom[p] = {i for i in range(n) if partner[i][p] >= 0 and owner[partner[i][p]] == -1}
        nbrs = [[q for q in ((p - 1) if p % w else -1, (p + 1) if p % w < w - 1 else -1,
                             p - w, p + w) if 0 <= q < area] for p in range(area)]
        anchors = [[y * w + x for x, y in incident_cells(c.pos)][0] for c in b.centers]
        check_conn = not b.allow_disconnected
        trail: list[tuple] = []

        def assign(p: int, i: int) -> set[int]:
            """Give p and its partner to i; return centers whose options shrank."""
            q = partner[i][p]
            touched = {i}
            for cell in {p, q}:
                owner[cell] = i
                size[i] += 1
                trail.append(("own", cell, dom[cell]))
                dom[cell] = set()
            for cell in {p, q}:
                for j in range(n):
                    r = partner[j][cell]
                    if r >= 0 and owner[r] == -1 and j in dom[r]:
                        dom[r].discard(j)
                        trail.append(("dom", r, j))
                        touched.add(j)
            return touched

        def undo(mark: int):
            while len(trail) > mark:
                entry = trail.pop()
                if entry[0] == "own":
                    _, cell, old = entry
                    size[owner[cell]] -= 1
                    owner[cell] = -1
                    dom[cell] = old
                else:
                    dom[entry[1]].add(entry[2])

        def joined(i: int) -> bool:
            if size[i] == base[i]:
                return True
            seen = {anchors[i]}
            stack = [anchors[i]]
            reached = 0
            while stack:
                p = stack.pop()
                if owner[p] == i:
                    reached += 1
                for q in nbrs[p]:
                    if q not in seen and (owner[q] == i or (owner[q] == -1 and i in dom[q])):
                        seen.add(q)
                        stack.append(q)
            return reached == size[i]

        def propagate(touched: set[int]) -> bool:
            while True:
                if any(size[i] > cap for i in touched):
                    return False
                if check_conn and not all(joined(i) for i in touched):
                    return False
                touched = set()
                forced = False
                for p in range(area):
                    if owner[p] == -1:
                        if not dom[p]:
                            return False
                        if len(dom[p]) == 1:
                            touched |= assign(p, next(iter(dom[p])))
                            forced = True
                if not forced:
                    return True

        def rec() -> Iterator[list[int]]:
            self._tick()
            best, best_len = -1, n + 1
            for p in range(area):
                if owner[p] == -1 and len(dom[p]) < best_len:
                    best, best_len = p, len(dom[p])
            if best < 0:
                yield list(owner)
                return
            for i in sorted(dom[best]):
                mark = len(trail)
                if propagate(assign(best, i)):
                    yield from rec()
                undo(mark)

        mark = len(trail)
        if propagate(set(range(n))):
            yield from rec()
        undo(mark)

    def to_solution(self, owner: list[int]) -> Solution:
        w = self.board.width
        return Solution(tuple(tuple(owner[y * w:(y + 1) * w]) for y in range(self.board.height)))


def _engine(board: Board, shapes: ShapeClass, budget: SearchBudget):
    if shapes is ShapeClass.ANY:
        return _AnySearch(board, budget)
    return _ExactCover(board, shapes, budget)


# ---------------------------------------------------------------- public operations

def enumerate_solutions(board: Board, shapes: ShapeClass = ShapeClass.ANY,
                        budget: SearchBudget = UNLIMITED) -> EnumerationResult:
    eng = _engine(board, shapes, budget)
    result = EnumerationResult()
    try:
        for raw in eng.solutions():
            if budget.max_solutions is not None and len(result.solutions) >= budget.max_solutions:
                result.complete = False
                break
            result.solutions.append(eng.to_solution(raw))
    except _OutOfBudget:
        result.complete = False
    result.node_count = eng.nodes
    return result


def count_solutions(board: Board, shapes: ShapeClass = ShapeClass.ANY,
                    budget: SearchBudget = UNLIMITED) -> CountResult:
    eng = _engine(board, shapes, budget)
    count, complete = 0, True
    try:
        for _ in eng.solutions():
            if budget.max_solutions is not None and count >= budget.max_solutions:
                complete = False
                break
            count += 1
    except _OutOfBudget:
        complete = False
    return CountResult(count, complete, eng.nodes)


def solve(board: Board, shapes: ShapeClass = ShapeClass.ANY, budget: SearchBudget = UNLIMITED) -> SolveOutcome:
    eng = _engine(board, shapes, budget)
    try:
        for raw in eng.solutions():
            return SolveOutcome(Status.SAT, eng.to_solution(raw), eng.nodes)
    except _OutOfBudget:
        return SolveOutcome(Status.BUDGET_EXCEEDED, None, eng.nodes)
    return SolveOutcome(Status.UNSAT, None, eng.nodes)


def another_solution(board: Board, shapes: ShapeClass, given: Solution,
                     budget: SearchBudget = UNLIMITED) -> SolveOutcome:
    """A solution different from ``given``; UNSAT means ``given`` is the only one."""
    if not verify(board, given, shapes).valid:
        raise BoardError("the given solution does not verify")
    eng = _engine(board, shapes, budget)
    try:
        for raw in eng.solutions():
            sol = eng.to_solution(raw)
            if sol != given:
                return SolveOutcome(Status.SAT, sol, eng.nodes)
    except _OutOfBudget:
        return SolveOutcome(Status.BUDGET_EXCEEDED, None, eng.nodes)
    return SolveOutcome(Status.UNSAT, None, eng.nodes)


# ---------------------------------------------------------------- naive oracle

def naive_count(board: Board, shapes: ShapeClass = ShapeClass.ANY) -> int:
    """Brute force: every cell subset per center, every disjoint cover, then ``verify``.

    Shares no candidate generation or pruning with the search engines above.
    """
    if board.area > NAIVE_MAX_AREA:
        raise BoardError(f"naive_count handles at most {NAIVE_MAX_AREA} cells")
    cells = list(board.cells())
    n = len(cells)
    full = (1 << n) - 1
    index = {c: k for k, c in enumerate(cells)}
    per_center = []
    for center in board.centers:
        need = 0
        for p in incident_cells(center.pos):
            need |= 1 << index[p]
        options = []
        for mask in range(1, full + 1):
            if mask & need != need:
                continue
            members = {cells[k] for k in range(n) if mask >> k & 1}
            if all(rotate_cell(p, center) in members for p in members):
                options.append(mask)
        per_center.append(options)
    count = 0

    def rec(i: int, used: int, picks: list[int]):
        nonlocal count
        if i == len(per_center):
            if used != full:
                return
            owner = {}
            for ci, mask in enumerate(picks):
                for k in range(n):
                    if mask >> k & 1:
                        owner[cells[k]] = ci
            if verify(board, Solution.from_mapping(board, owner), shapes).valid:
                count += 1
            return
        for mask in per_center[i]:
            if not mask & used:
                picks.append(mask)
                rec(i + 1, used | mask, picks)
                picks.pop()

    rec(0, 0, [])
    return count
