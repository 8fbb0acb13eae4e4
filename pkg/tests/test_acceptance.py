"""Acceptance criteria 1 to 10, one test each, each printing a PASS or FAIL line."""

from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import time

import pytest

from spiral_galaxies import cli
from spiral_galaxies.board import (
    ShapeClass, parse_board, parse_solution, serialize_board, serialize_solution, verify,
)
from spiral_galaxies.design_min import (
    block_owners, chain_assembly, check_placement, min_centers, parse_shape, sealed_end,
    sealed_local_center, serialize_shape, split_room,
)
from spiral_galaxies.formula import (
    auto_layout, layout_from_json, layout_to_json, one_in_three_models, parse_formula, serialize_formula,
)
from spiral_galaxies.grid_matching import (
    count_matchings, edges_cross, graph_to_puzzle, parse_graph, random_even_graph, serialize_graph,
)
from spiral_galaxies.reduce_rect import compile_rect, decode_rect, loop_probe_value
from spiral_galaxies.reduce_rect import variable_loop_fixture as rect_loop
from spiral_galaxies.reduce_unit3 import clause_fixture, decode_unit3, probe_value
from spiral_galaxies.reduce_unit3 import variable_loop_fixture as unit3_loop
from spiral_galaxies.solver import count_solutions, enumerate_solutions, naive_count, solve, Status

from helpers import FORMULAS, random_board


def _cli_count(tmp_path, board, shapes: str, capsys) -> tuple[int, str]:
    path = tmp_path / "board.txt"
    path.write_text(serialize_board(board))
    code = cli.run(["count", "--shapes", shapes, str(path)])
    return code, capsys.readouterr().out


def test_1_rect_variable_loop(record, tmp_path, capsys):
    t0 = time.monotonic()
    board, probe = rect_loop()
    code, out = _cli_count(tmp_path, board, "rect", capsys)
    sols = enumerate_solutions(board, ShapeClass.RECT).solutions
    values = sorted(loop_probe_value(s, board, probe) for s in sols)
    dt = time.monotonic() - t0
    ok = code == 0 and out == "2\n" and values == [False, True] and dt < 10
    record(1, ok, f"Rect loop: count prints {out.strip()}, probe states {values}, {dt:.1f}s")
    assert ok


def test_2_unit3_variable_loop(record, tmp_path, capsys):
    t0 = time.monotonic()
    board, probe = unit3_loop()
    code, out = _cli_count(tmp_path, board, "unit3", capsys)
    sols = enumerate_solutions(board, ShapeClass.UNIT3).solutions
    values = sorted(probe_value(s, probe) for s in sols)
    dt = time.monotonic() - t0
    ok = code == 0 and out == "2\n" and values == [False, True] and dt < 5
    record(2, ok, f"Unit3 loop: count prints {out.strip()}, probe states {values}, {dt:.1f}s")
    assert ok


def test_3_clause_states(record):
    t0 = time.monotonic()
    comp = clause_fixture()
    sols = enumerate_solutions(comp.board, ShapeClass.UNIT3).solutions
    decoded = sorted(str(decode_unit3(comp, s)) for s in sols)
    dt = time.monotonic() - t0
    ok = len(sols) == 3 and decoded == ["001", "010", "100"] and dt < 30
    record(3, ok, f"clause fixture: {len(sols)} solutions decoding to {decoded}, {dt:.1f}s")
    assert ok


def test_4_unit3_parsimony(record):
    t0 = time.monotonic()
    rows = []
    for text in FORMULAS:
        f = parse_formula(text)
        comp = compile_unit3_auto(f)
        sols = enumerate_solutions(comp.board, ShapeClass.UNIT3).solutions
        decoded = [decode_unit3(comp, s).values for s in sols]
        models = sorted(m.values for m in one_in_three_models(f))
        rows.append(len(sols) == len(models) and len(set(decoded)) == len(decoded)
                    and sorted(decoded) == models)
    dt = time.monotonic() - t0
    ok = all(rows) and dt < 300
    record(4, ok, f"Unit3 parsimony: {sum(rows)}/{len(rows)} formulas exact, {dt:.1f}s")
    assert ok


def compile_unit3_auto(f):
    from spiral_galaxies.reduce_unit3 import compile_unit3
    return compile_unit3(f, auto_layout(f))


def test_5_rect_soundness(record):
    t0 = time.monotonic()
    rows = []
    for text in FORMULAS:
        f = parse_formula(text)
        comp = compile_rect(f, auto_layout(f))
        sols = enumerate_solutions(comp.board, ShapeClass.RECT).solutions
        models = one_in_three_models(f)
        # solvable iff satisfiable, and every solution decodes to a model
        good = bool(sols) == bool(models)
        good = good and all(f.satisfied_by(decode_rect(comp, s).values) for s in sols)
        rows.append(good)
    dt = time.monotonic() - t0
    ok = all(rows) and dt < 300
    record(5, ok, f"Rect soundness: {sum(rows)}/{len(rows)} formulas agree with the oracle, {dt:.1f}s")
    assert ok


def _brute_matchings(g) -> int:
    """Every edge subset that covers each vertex once and has no crossing pair."""
    edges = g.edges()
    n = len(g.vertices)
    if n % 2:
        return 0
    total = 0
    for sub in itertools.combinations(edges, n // 2):
        ends = [v for e in sub for v in e]
        if len(set(ends)) == n and not any(edges_cross(a, b) for a, b in itertools.combinations(sub, 2)):
            total += 1
    return total


def test_6_matching_equivalence(record):
    t0 = time.monotonic()
    rng = random.Random(4101)
    agree, positive, trials = 0, 0, 120
    for _ in range(trials):
        g = random_even_graph(rng, max_vertices=12)
        board, _ = graph_to_puzzle(g)
        m = count_matchings(g).count
        brute = _brute_matchings(g)
        c = count_solutions(board, ShapeClass.UNIT3).count
        exists = solve(board, ShapeClass.UNIT3).status is Status.SAT
        agree += m == brute == c and exists == (m > 0)
        positive += m > 0
    dt = time.monotonic() - t0
    ok = agree == trials and dt < 120
    record(6, ok, f"matching equivalence: {agree}/{trials} graphs agree ({positive} matchable), {dt:.1f}s")
    assert ok


def _integrity(a, placements, offset) -> bool:
    return all(len(owners) == 1 for p in placements for owners in block_owners(a, p, offset).values())


def test_7_chain_k3(record):
    t0 = time.monotonic()
    a = chain_assembly(3, fix=False)
    s, offset = a.shape()
    res = min_centers(s)
    none_below = min_centers(s, k_max=4).k_min is None
    intended = {a.placement([st], offset).key() for st in (0, 1)}
    found = {p.key() for p in res.placements}
    dt = time.monotonic() - t0
    ok = (res.exact and res.k_min == 5 == a.budget() and len(res.placements) == 2 and found == intended
          and none_below and not any(check_placement(s, p) for p in res.placements) and dt < 600)
    record(7, ok, f"k=3 chain: k_min {res.k_min}, {len(res.placements)} optimal placements, "
                  f"none with <= 4 centers: {none_below}, {dt:.1f}s")
    assert ok


def test_8_blocks_sealed_split(record):
    t0 = time.monotonic()
    notes = []
    a3 = chain_assembly(3, fix=False)
    s3, off3 = a3.shape()
    blocks3 = _integrity(a3, min_centers(s3).placements, off3)
    a4 = chain_assembly(4, fix=True)
    s4, off4 = a4.shape()
    r4 = min_centers(s4)
    blocks4 = r4.exact and r4.k_min == a4.budget() and len(r4.placements) == 2 and _integrity(a4, r4.placements, off4)
    notes.append(f"block integrity k=3 {blocks3}, k=4 with fix {blocks4} (k_min {r4.k_min})")
    end = min_centers(sealed_end())
    sealed = end.exact and end.k_min == 1
    for variant, w in itertools.product(range(4), (3, 11)):
        s, center = sealed_local_center(variant, w)
        r = min_centers(s)
        sealed &= r.exact and r.k_min == 1 and [p.centers for p in r.placements] == [(center,)]
    notes.append(f"sealed End and LocalCenter k_min 1: {sealed}")
    split = True
    for taken in itertools.product((False, True), repeat=3):
        r = min_centers(split_room(taken))
        split &= r.exact and (r.k_min == 1) == (len(set(taken)) == 1)
    notes.append(f"split needs 1 iff states agree: {split}")
    dt = time.monotonic() - t0
    ok = blocks3 and blocks4 and sealed and split and dt < 600
    record(8, ok, "; ".join(notes) + f", {dt:.1f}s")
    assert ok


def test_9_solver_matches_naive(record):
    t0 = time.monotonic()
    rng = random.Random(909)
    lines, ok = [], True
    for shapes in ShapeClass:
        agree, solvable, n = 0, 0, 200
        for _ in range(n):
            board = random_board(rng, shapes)
            c = count_solutions(board, shapes).count
            agree += c == naive_count(board, shapes)
            solvable += c > 0
        ok &= agree == n
        lines.append(f"{shapes.value} {agree}/{n} ({solvable} solvable)")
    dt = time.monotonic() - t0
    ok &= dt < 300
    record(9, ok, "solver vs naive: " + ", ".join(lines) + f", {dt:.1f}s")
    assert ok


def _cli_bytes(args: list[str], seed: str) -> bytes:
    env = dict(os.environ, PYTHONHASHSEED=seed)
    return subprocess.run([sys.executable, "-m", "spiral_galaxies.cli", *args], capture_output=True,
                          env=env, check=False).stdout


def test_10_round_trips_and_determinism(record, tmp_path):
    t0 = time.monotonic()
    boards = [rect_loop()[0], unit3_loop()[0], clause_fixture().board]
    trips = all(parse_board(serialize_board(b)) == b for b in boards)
    for b in boards[:2]:
        for sol in enumerate_solutions(b, ShapeClass.ANY if b is boards[0] else ShapeClass.UNIT3).solutions[:2]:
            trips &= parse_solution(serialize_solution(sol), b) == sol
    rng = random.Random(10)
    for _ in range(20):
        g = random_even_graph(rng)
        trips &= parse_graph(serialize_graph(g)) == g
    shapes = [sealed_end(), split_room((True, False, True)), chain_assembly(3, fix=False).shape()[0]]
    trips &= all(parse_shape(serialize_shape(s)) == s for s in shapes)
    for text in FORMULAS:
        f = parse_formula(text)
        trips &= serialize_formula(f) == text and layout_from_json(layout_to_json(auto_layout(f))) == auto_layout(f)

    (tmp_path / "loop.txt").write_text(serialize_board(boards[1]))
    (tmp_path / "f.txt").write_text(FORMULAS[1])
    (tmp_path / "s.txt").write_text(serialize_shape(sealed_end()))
    loop, form, shape = (str(tmp_path / n) for n in ("loop.txt", "f.txt", "s.txt"))
    svg_a, svg_b = str(tmp_path / "a.svg"), str(tmp_path / "b.svg")
    runs = [
        ["solve", "--shapes", "unit3", loop, "--json"],
        ["enumerate", "--shapes", "unit3", loop],
        ["reduce-unit3", form],
        ["reduce-rect", form, "--json"],
        ["design-compile", form],
        ["design-min", shape, "--json"],
        ["match", "--seed", "7", "--json"],
        ["oracle", form],
    ]
    same = all(_cli_bytes(r, "1") == _cli_bytes(r, "2") != b"" for r in runs)
    _cli_bytes(["render", loop, "--svg", svg_a], "1")
    _cli_bytes(["render", loop, "--svg", svg_b], "2")
    same &= open(svg_a, "rb").read() == open(svg_b, "rb").read()
    dt = time.monotonic() - t0
    ok = trips and same
    record(10, ok, f"round trips {trips}, byte-identical CLI runs {same} ({len(runs) + 1} commands), {dt:.1f}s")
    assert ok


@pytest.mark.parametrize("text", FORMULAS[:1])
def test_compiled_shape_beyond_engine_bound(text):
    """Compiled design shapes are far above the exact engine bound; the minimiser says so."""
    from spiral_galaxies.design_min import ShapeError, compile_shape
    f = parse_formula(text)
    comp = compile_shape(f, auto_layout(f))
    with pytest.raises(ShapeError):
        min_centers(comp.shape)
    for model in one_in_three_models(f):
        p = comp.placement_for(model.values)
        assert len(p.centers) == comp.budget and not check_placement(comp.shape, p)
        assert comp.decode(p) == model.values
