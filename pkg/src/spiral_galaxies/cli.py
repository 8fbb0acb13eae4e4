"""Command-line entry point: ``galaxies <verb> [options] files...``.

Exit codes: 0 success, SAT or feasible; 1 UNSAT or infeasible; 2 usage or input
error; 3 budget exceeded. Results go to standard output, diagnostics to standard
error. With ``--json`` each verb prints one JSON document carrying ``schema``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .board import (
    BoardError, ShapeClass, parse_board, parse_solution, render_ascii, render_svg,
    serialize_board, serialize_solution, verify,
)
from .design_min import ShapeError, compile_shape, min_centers, parse_shape, serialize_shape
from .formula import FormulaError, LayoutError, auto_layout, layout_from_json, one_in_three_models, parse_formula
from .grid_matching import (
    GraphError, count_matchings, graph_to_puzzle, parse_graph, random_even_graph, serialize_graph,
    solve_matching, serialize_matching,
)
from .reduce_rect import compile_rect, decode_rect
from .reduce_unit3 import CompileError, compile_unit3, decode_unit3
from .diskgeom import GeometryError
from .solver import (
    SearchBudget, Status, another_solution, count_solutions, enumerate_solutions, solve,
)

SCHEMA = "spiral-galaxies-cli/1"
EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_TIMEOUT_S = 300.0

INPUT_ERRORS = (BoardError, FormulaError, LayoutError, GraphError, ShapeError, GeometryError,
                CompileError, OSError, UnicodeDecodeError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"galaxies: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _shape_class(name: str) -> ShapeClass:
    try:
        return ShapeClass.parse(name)
    except BoardError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _budget(args) -> SearchBudget:
    cap = getattr(args, "count_cap", None)
    limit = args.max_solutions if cap is None else cap
    return SearchBudget(max_solutions=limit, max_nodes=args.max_nodes, max_seconds=args.timeout_s)


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps({"schema": SCHEMA, "verb": args.verb, **doc}, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _svg(args, board, sol) -> None:
    if getattr(args, "svg", None):
        Path(args.svg).write_text(render_svg(board, sol))


def _owner(sol) -> list[list[int]]:
    return [list(r) for r in sol.owner]


# ---------------------------------------------------------------- verbs

def _verify(args) -> int:
    board = parse_board(_read(args.board))
    sol = parse_solution(_read(args.solution), board)
    verdict = verify(board, sol, args.shapes)
    lines = [str(v) for v in verdict.violations]
    _emit(args, {"valid": verdict.valid, "violations": lines},
          "valid\n" if verdict.valid else "".join(line + "\n" for line in lines))
    return EXIT_OK if verdict.valid else EXIT_NO


def _solve(args) -> int:
    board = parse_board(_read(args.board))
    out = solve(board, args.shapes, _budget(args))
    return _outcome(args, board, out)


def _outcome(args, board, out) -> int:
    if out.status is Status.BUDGET_EXCEEDED:
        print("budget exceeded", file=sys.stderr)
        _emit(args, {"status": "budget", "nodes": out.node_count}, "")
        return EXIT_BUDGET
    if out.status is Status.UNSAT:
        _emit(args, {"status": "unsat", "nodes": out.node_count}, "unsat\n")
        return EXIT_NO
    _svg(args, board, out.solution)
    _emit(args, {"status": "sat", "solution": _owner(out.solution), "nodes": out.node_count},
          serialize_solution(out.solution))
    return EXIT_OK


def _count(args) -> int:
    board = parse_board(_read(args.board))
    res = count_solutions(board, args.shapes, _budget(args))
    _emit(args, {"count": res.count, "complete": res.complete}, f"{res.count}\n")
    if not res.complete:
        print(f"count incomplete: at least {res.count}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if res.count else EXIT_NO


def _enumerate(args) -> int:
    board = parse_board(_read(args.board))
    res = enumerate_solutions(board, args.shapes, _budget(args))
    _emit(args, {"solutions": [_owner(s) for s in res.solutions], "complete": res.complete},
          "\n".join(serialize_solution(s) for s in res.solutions))
    if not res.complete:
        print(f"enumeration incomplete after {len(res.solutions)} solutions", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if res.solutions else EXIT_NO


def _another(args) -> int:
    board = parse_board(_read(args.board))
    given = parse_solution(_read(args.solution), board)
    return _outcome(args, board, another_solution(board, args.shapes, given, _budget(args)))


def _formula_and_layout(args):
    f = parse_formula(_read(args.formula))
    layout = layout_from_json(_read(args.layout)) if args.layout else auto_layout(f)
    return f, layout


def _reduce(args, compile_fn, decode_fn, shapes) -> int:
    f, layout = _formula_and_layout(args)
    comp = compile_fn(f, layout)
    doc = {"board": serialize_board(comp.board), "width": comp.board.width, "height": comp.board.height,
           "centers": len(comp.board.centers)}
    text = serialize_board(comp.board)
    if not args.decode:
        _emit(args, doc, text)
        return EXIT_OK
    res = enumerate_solutions(comp.board, shapes, _budget(args))
    models = sorted(str(decode_fn(comp, s)) for s in res.solutions)
    doc.update(count=len(res.solutions), complete=res.complete, models=models)
    _emit(args, doc, f"{len(res.solutions)}\n" + "".join(m + "\n" for m in models))
    if not res.complete:
        print("decoding incomplete", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if res.solutions else EXIT_NO


def _match(args) -> int:
    if args.graph is None:
        if args.seed is None:
            raise GraphError("give a graph file or --seed to generate one")
        g = random_even_graph(random.Random(args.seed))
    else:
        g = parse_graph(_read(args.graph))
    if args.emit_board:
        board, _ = graph_to_puzzle(g)
        _emit(args, {"graph": serialize_graph(g), "board": serialize_board(board)}, serialize_board(board))
        return EXIT_OK
    budget = _budget(args)
    res = count_matchings(g, budget)
    m = solve_matching(g, budget) if res.count else None
    doc = {"graph": serialize_graph(g), "count": res.count, "complete": res.complete,
           "matching": [list(map(list, e)) for e in m.edges] if m else None}
    _emit(args, doc, f"{res.count}\n" + (serialize_matching(m) if m else ""))
    if not res.complete:
        print("matching count incomplete", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if res.count else EXIT_NO


def _design_min(args) -> int:
    s = parse_shape(_read(args.shape))
    res = min_centers(s, size_cap=args.cap, budget=_budget(args))
    placements = sorted(sorted(p.centers) for p in res.placements)
    doc = {"k_min": res.k_min, "exact": res.exact, "optimal_placements": len(placements),
           "placements": [[list(c) for c in cs] for cs in placements], "nodes": res.node_count}
    text = f"{res.k_min}\n{len(placements)}\n" + "".join(
        " ".join(f"{a},{b}" for a, b in cs) + "\n" for cs in placements)
    _emit(args, doc, text)
    if not res.exact:
        print("search did not finish; k_min is an upper bound", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _design_compile(args) -> int:
    f, layout = _formula_and_layout(args)
    comp = compile_shape(f, layout)
    _emit(args, {"shape": serialize_shape(comp.shape), "budget": comp.budget, "cells": len(comp.shape)},
          f"c budget {comp.budget}\n" + serialize_shape(comp.shape))
    return EXIT_OK


def _render(args) -> int:
    board = parse_board(_read(args.board))
    sol = parse_solution(_read(args.solution), board) if args.solution else None
    _svg(args, board, sol)
    _emit(args, {"ascii": render_ascii(board, sol)}, render_ascii(board, sol))
    return EXIT_OK


def _oracle(args) -> int:
    f = parse_formula(_read(args.formula))
    models = [str(m) for m in one_in_three_models(f)]
    _emit(args, {"count": len(models), "models": models}, f"{len(models)}\n" + "".join(m + "\n" for m in models))
    return EXIT_OK if models else EXIT_NO


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")
    common.add_argument("--max-solutions", type=int, default=None)
    common.add_argument("--max-nodes", type=int, default=None)
    common.add_argument("--timeout-s", type=float, default=DEFAULT_TIMEOUT_S,
                        help=f"wall-clock limit in seconds (default {DEFAULT_TIMEOUT_S:g})")
    shapes = argparse.ArgumentParser(add_help=False)
    shapes.add_argument("--shapes", type=_shape_class, default=ShapeClass.ANY,
                        help="any, rect or unit3 (default any)")
    svg = argparse.ArgumentParser(add_help=False)
    svg.add_argument("--svg", metavar="OUT", help="also write an SVG rendering")
    lay = argparse.ArgumentParser(add_help=False)
    lay.add_argument("formula")
    lay.add_argument("--layout", help="layout JSON; an automatic layout is used otherwise")

    p = _Parser(prog="galaxies", description="Spiral Galaxies solver, reductions and design tools")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, parents, fn, help_):
        sp = sub.add_parser(name, parents=[common, *parents], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("verify", [shapes], _verify, "check a solution against a board")
    sp.add_argument("board")
    sp.add_argument("solution")
    verb("solve", [shapes, svg], _solve, "find one solution").add_argument("board")
    sp = verb("count", [shapes], _count, "count solutions")
    sp.add_argument("board")
    sp.add_argument("--count-cap", type=int, default=None, help="stop counting after N solutions")
    verb("enumerate", [shapes], _enumerate, "list solutions").add_argument("board")
    sp = verb("another", [shapes, svg], _another, "find a solution other than the given one")
    sp.add_argument("board")
    sp.add_argument("solution")
    for name, fn, help_ in (("reduce-rect", lambda a: _reduce(a, compile_rect, decode_rect, ShapeClass.RECT),
                             "compile a formula to a Rect board"),
                            ("reduce-unit3", lambda a: _reduce(a, compile_unit3, decode_unit3, ShapeClass.UNIT3),
                             "compile a formula to a Unit3 board")):
        sp = verb(name, [lay], fn, help_)
        sp.add_argument("--decode", action="store_true", help="solve the board and print decoded models")
    sp = verb("match", [], _match, "count non-crossing perfect matchings of a squared grid graph")
    sp.add_argument("graph", nargs="?")
    sp.add_argument("--seed", type=int, default=None, help="generate a random even graph instead")
    sp.add_argument("--emit-board", action="store_true", help="print the equivalent Unit3 board")
    sp = verb("design-min", [], _design_min, "fewest centers tiling a shape")
    sp.add_argument("shape")
    sp.add_argument("--cap", type=int, default=None, help="largest galaxy size considered")
    verb("design-compile", [lay], _design_compile, "compile a formula to a design shape")
    sp = verb("render", [svg], _render, "draw a board and optional solution")
    sp.add_argument("board")
    sp.add_argument("solution", nargs="?")
    verb("oracle", [], _oracle, "list 1-in-3 models by brute force").add_argument("formula")
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.fn(args)
    except INPUT_ERRORS as exc:
        print(f"galaxies: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # budgets and other argument values
        print(f"galaxies: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
