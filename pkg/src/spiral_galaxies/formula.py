"""Planar 1-in-3 SAT instances, rectilinear layouts and an exhaustive model oracle."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field

Point = tuple[int, int]

MAX_ORACLE_VARS = 24
MAX_AUTO_LAYOUT = 10


class FormulaError(ValueError):
    """Raised for malformed formula text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class LayoutError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    positive: bool = True

    def __str__(self) -> str:
        return str(self.var if self.positive else -self.var)

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        return cls(abs(value), value > 0)

    def to_int(self) -> int:
        return self.var if self.positive else -self.var

    def holds(self, values: tuple[bool, ...]) -> bool:
        return values[self.var - 1] == self.positive


Clause = tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.num_vars < 0:
            raise FormulaError("number of variables must be non-negative")
        for i, clause in enumerate(self.clauses):
            check_clause([lit.to_int() for lit in clause], self.num_vars, line=0, where=f"clause {i + 1}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses) -> "Formula":
        return cls(num_vars, tuple(tuple(Literal.from_int(v) for v in c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, values: tuple[bool, ...]) -> bool:
        return all(sum(lit.holds(values) for lit in clause) == 1 for clause in self.clauses)


@dataclass(frozen=True)
class Assignment:
    values: tuple[bool, ...]

    def __str__(self) -> str:
        return "".join("1" if v else "0" for v in self.values)


def check_clause(ints: list[int], num_vars: int, line: int = 0, where: str = "") -> None:
    prefix = f"{where}: " if where else ""
    if len(ints) != 3:
        raise FormulaError(f"{prefix}clause has {len(ints)} literals, expected 3", line)
    for v in ints:
        if v == 0 or abs(v) > num_vars:
            raise FormulaError(f"{prefix}variable index {v} out of range 1..{num_vars}", line)
    if len({abs(v) for v in ints}) != 3:
        raise FormulaError(f"{prefix}clause repeats a variable", line)


def parse_formula(text: str) -> Formula:
    """Parse the ``p 1in3 <vars> <clauses>`` format."""
    header = None
    clauses: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "1in3":
                raise FormulaError("expected header 'p 1in3 <vars> <clauses>'", lineno, 1)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormulaError("header counts must be integers", lineno, raw.index(parts[2]) + 1) from None
            if min(header) < 0:
                raise FormulaError("header counts must be non-negative", lineno, 1)
            continue
        ints = []
        col = 0
        for tok in line.split():
            col = raw.index(tok, col) + 1
            try:
                ints.append(int(tok))
            except ValueError:
                raise FormulaError(f"bad token {tok!r}", lineno, col) from None
            col += len(tok) - 1
        if not ints or ints[-1] != 0:
            raise FormulaError("clause must end with 0", lineno, len(raw))
        check_clause(ints[:-1], header[0], lineno)
        clauses.append(ints[:-1])
    if header is None:
        raise FormulaError("missing header line")
    if len(clauses) != header[1]:
        raise FormulaError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return Formula.from_ints(header[0], clauses)


def serialize_formula(f: Formula) -> str:
    lines = [f"p 1in3 {f.num_vars} {f.num_clauses}"]
    lines += [" ".join(str(lit) for lit in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def one_in_three_models(f: Formula) -> list[Assignment]:
    """All assignments with exactly one true literal per clause, in lexicographic order."""
    if f.num_vars > MAX_ORACLE_VARS:
        raise FormulaError(f"oracle limited to {MAX_ORACLE_VARS} variables")
    models = []
    for values in itertools.product((False, True), repeat=f.num_vars):
        if f.satisfied_by(values):
            models.append(Assignment(values))
    return models


def count_models_bitwise(f: Formula) -> int:
    """Second oracle: integer bitmask filter, written independently of ``satisfied_by``."""
    count = 0
    masks = []
    for clause in f.clauses:
        masks.append([(1 << (lit.var - 1), lit.positive) for lit in clause])
    for x in range(1 << f.num_vars):
        ok = True
        for clause in masks:
            hits = 0
            for bit, pos in clause:
                if bool(x & bit) == pos:
                    hits += 1
            if hits != 1:
                ok = False
                break
        count += ok
    return count


@dataclass(frozen=True)
class Route:
    clause: int  # 0-based
    slot: int  # 1..3
    points: tuple[Point, ...]


@dataclass(frozen=True)
class Layout:
    grid: tuple[int, int]
    var_anchors: tuple[Point, ...]
    clause_anchors: tuple[Point, ...]
    routes: tuple[Route, ...] = field(default=())

    def route(self, clause: int, slot: int) -> Route | None:
        for r in self.routes:
            if r.clause == clause and r.slot == slot:
                return r
        return None


def layout_to_json(layout: Layout) -> str:
    doc = {
        "grid": list(layout.grid),
        "vars": {f"x{i + 1}": list(p) for i, p in enumerate(layout.var_anchors)},
        "clauses": [list(p) for p in layout.clause_anchors],
        "routes": [
            {"clause": r.clause + 1, "slot": r.slot, "points": [list(p) for p in r.points]}
            for r in layout.routes
        ],
    }
    return json.dumps(doc, indent=1, sort_keys=False)


def layout_from_json(text: str) -> Layout:
    try:
        doc = json.loads(text)
        names = list(doc["vars"])
        # variables are named x1..xn; fall back to document order for other names
        if all(n.startswith("x") and n[1:].isdigit() for n in names):
            names.sort(key=lambda n: int(n[1:]))
        routes = tuple(
            Route(int(r["clause"]) - 1, int(r["slot"]), tuple(tuple(p) for p in r["points"]))
            for r in doc.get("routes", [])
        )
        return Layout(
            grid=tuple(doc["grid"]),
            var_anchors=tuple(tuple(doc["vars"][n]) for n in names),
            clause_anchors=tuple(tuple(p) for p in doc["clauses"]),
            routes=routes,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise LayoutError(f"malformed layout document: {exc}") from exc


def validate_layout(f: Formula, layout: Layout) -> list[str]:
    """Every violated layout invariant, as human-readable entries. Empty means valid."""
    report = []
    w, h = layout.grid
    anchors = list(layout.var_anchors) + list(layout.clause_anchors)
    if len(layout.var_anchors) != f.num_vars:
        report.append(f"layout has {len(layout.var_anchors)} variable anchors, formula has {f.num_vars}")
    if len(layout.clause_anchors) != f.num_clauses:
        report.append(f"layout has {len(layout.clause_anchors)} clause anchors, formula has {f.num_clauses}")
    if len(set(anchors)) != len(anchors):
        report.append("anchors are not pairwise distinct")
    for p in anchors:
        if not (0 <= p[0] < w and 0 <= p[1] < h):
            report.append(f"anchor {p} outside grid")
    anchor_set = set(anchors)
    owner: dict[Point, tuple[int, int]] = {}
    seen_slots = set()
    for r in layout.routes:
        tag = f"clause {r.clause + 1} slot {r.slot}"
        if (r.clause, r.slot) in seen_slots:
            report.append(f"duplicate route for {tag}")
        seen_slots.add((r.clause, r.slot))
        if not (0 <= r.clause < f.num_clauses and 1 <= r.slot <= 3):
            report.append(f"route {tag} does not name a literal")
            continue
        var = f.clauses[r.clause][r.slot - 1].var
        pts = r.points
        if len(pts) < 2:
            report.append(f"route {tag} has fewer than two points")
            continue
        if pts[0] != layout.clause_anchors[r.clause] or (
            var - 1 < len(layout.var_anchors) and pts[-1] != layout.var_anchors[var - 1]
        ):
            report.append(f"route {tag} does not join its clause anchor to x{var}")
        for a, b in zip(pts, pts[1:]):
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                report.append(f"route {tag} is not a unit-step orthogonal path at {a}->{b}")
                break
        if len(set(pts)) != len(pts):
            report.append(f"route {tag} is not simple")
        for p in pts:
            if not (0 <= p[0] < w and 0 <= p[1] < h):
                report.append(f"route {tag} leaves the grid at {p}")
                break
        for p in pts[1:-1]:
            if p in anchor_set:
                report.append(f"route {tag} passes through anchor {p}")
            elif p in owner:
                report.append(f"route crossing at {p} between {tag} and clause {owner[p][0] + 1} slot {owner[p][1]}")
            else:
                owner[p] = (r.clause, r.slot)
    for ci in range(f.num_clauses):
        for slot in (1, 2, 3):
            if (ci, slot) not in seen_slots:
                report.append(f"unrouted literal: clause {ci + 1} slot {slot}")
    return report


def _bfs_route(start: Point, goal: Point, blocked: set[Point], size: tuple[int, int]) -> list[Point] | None:
    w, h = size
    prev = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        if p == goal:
            path = [p]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            q = (p[0] + dx, p[1] + dy)
            if 0 <= q[0] < w and 0 <= q[1] < h and q not in prev and (q == goal or q not in blocked):
                prev[q] = p
                queue.append(q)
    return None


def _try_routes(f: Formula, vars_at, clauses_at, size) -> tuple[Route, ...] | None:
    anchors = set(vars_at) | set(clauses_at)
    used: set[Point] = set()
    # arms leaving the same anchor must use distinct sides; track consumed neighbours
    routes = []
    jobs = [(ci, s) for ci in range(f.num_clauses) for s in (1, 2, 3)]
    # short routes first keeps the search greedy but predictable
    jobs.sort(key=lambda j: _manhattan(clauses_at[j[0]], vars_at[f.clauses[j[0]][j[1] - 1].var - 1]))
    for ci, slot in jobs:
        start = clauses_at[ci]
        goal = vars_at[f.clauses[ci][slot - 1].var - 1]
        path = _bfs_route(start, goal, used | (anchors - {start, goal}), size)
        if path is None:
            return None
        used.update(path[1:-1])
        routes.append(Route(ci, slot, tuple(path)))
    routes.sort(key=lambda r: (r.clause, r.slot))
    return tuple(routes)


def _manhattan(a: Point, b: Point) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def auto_layout(f: Formula) -> Layout:
    """Find a small rectilinear layout by backtracking over anchor placements.

    Variables sit on one row and clauses above or below it; every candidate
    placement is routed with breadth-first shortest paths. The first layout that
    validates is returned, so the result is deterministic.
    """
    if f.num_vars + f.num_clauses > MAX_AUTO_LAYOUT:
        raise LayoutError(f"auto_layout handles at most {MAX_AUTO_LAYOUT} variables plus clauses")
    if f.num_vars == 0 and f.num_clauses == 0:
        return Layout((1, 1), (), (), ())
    bound = 4 * (f.num_vars + f.num_clauses)
    k = f.num_clauses
    for gap in (2, 3):
        width = max(1, gap * f.num_vars - 1) + 2
        height = 2 * k + 3 if k else 1
        if width > bound or height > bound:
            continue
        base_y = k + 1 if k else 0
        for order in itertools.permutations(range(f.num_vars)):
            vars_at = [None] * f.num_vars
            for pos, v in enumerate(order):
                vars_at[v] = (1 + gap * pos, base_y)
            for sides in itertools.product((1, -1), repeat=k):
                clauses_at = _place_clauses(f, vars_at, sides, base_y)
                if clauses_at is None:
                    continue
                routes = _try_routes(f, vars_at, clauses_at, (width, height))
                if routes is None:
                    continue
                layout = Layout((width, height), tuple(vars_at), tuple(clauses_at), routes)
                if not validate_layout(f, layout):
                    return layout
    raise LayoutError("no layout found within the grid bound; provide a layout explicitly")


def _place_clauses(f: Formula, vars_at, sides, base_y) -> list[Point] | None:
    """Stack clauses by span width so that nested spans sit closer to the variable row."""
    spans = []
    for ci, clause in enumerate(f.clauses):
        xs = sorted(vars_at[lit.var - 1][0] for lit in clause)
        spans.append((xs[2] - xs[0], ci, xs[1]))
    placed: list[Point | None] = [None] * f.num_clauses
    level = {1: 0, -1: 0}
    for _, ci, mid in sorted(spans):
        s = sides[ci]
        level[s] += 1
        placed[ci] = (mid, base_y + s * level[s])
    taken = set(placed) | set(vars_at)
    if len(taken) != len(placed) + len(vars_at):
        return None
    return placed
