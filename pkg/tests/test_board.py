import random

import pytest
from hypothesis import given, settings, strategies as st

from spiral_galaxies.board import (
    Board, BoardError, Center, ShapeClass, Solution, incident_cells, parse_board, parse_solution,
    partition_from_svg, picture_of, render_ascii, render_svg, rotate_cell, serialize_board,
    serialize_solution, verify,
)
from spiral_galaxies.solver import solve

from helpers import planted_board


def rules(board, owner, shapes=ShapeClass.ANY):
    return [v.rule for v in verify(board, Solution(owner), shapes).violations]


@pytest.mark.parametrize("pos, cells", [
    ((1, 1), [(0, 0)]),
    ((2, 1), [(0, 0), (1, 0)]),
    ((1, 2), [(0, 0), (0, 1)]),
    ((2, 2), [(0, 0), (1, 0), (0, 1), (1, 1)]),
])
def test_incident_cells(pos, cells):
    assert incident_cells(pos) == cells
    assert Center(pos).kind == {1: "cell", 2: "edge", 4: "vertex"}[len(cells)]


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 30), st.integers(1, 30))
def test_rotation_is_an_involution(x, y, a, b):
    assert rotate_cell(rotate_cell((x, y), (a, b)), (a, b)) == (x, y)


def test_valid_two_domino_board():
    board = Board(2, 2, (Center((2, 1)), Center((2, 3))))
    assert rules(board, ((0, 0), (1, 1))) == []
    assert rules(board, ((0, 0), (1, 1)), ShapeClass.UNIT3) == ["shape", "shape"]


def test_each_rule_detected():
    board = Board(3, 1, (Center((1, 1)), Center((5, 1))))
    assert "containment" in rules(board, ((0, 0, 0),))
    assert "symmetry" in rules(board, ((0, 1, 1),))
    wide = Board(3, 1, (Center((3, 1)), Center((5, 1))))
    assert "uniqueness" in rules(wide, ((0, 0, 0),))
    split = Board(3, 1, (Center((3, 1)), Center((1, 1)), Center((5, 1))))
    assert rules(split, ((1, 0, 2),)) == []
    gap = Board(3, 3, tuple(Center(p) for p in ((3, 3), (3, 1), (3, 5), (1, 3), (5, 3))))
    owner = ((0, 1, 0), (3, 0, 4), (0, 2, 0))
    assert rules(gap, owner) == ["connectivity"]
    assert rules(Board(3, 3, gap.centers, allow_disconnected=True), owner) == []


def test_rect_rejects_l_shape():
    board = Board(2, 2, (Center((2, 2)),))
    assert rules(board, ((0, 0), (0, 0)), ShapeClass.RECT) == []
    assert rules(board, ((0, 0), (0, 0)), ShapeClass.UNIT3) == ["shape"]


@pytest.mark.parametrize("width, height, centers", [(0, 1, [(1, 1)]), (2, 2, []), (2, 2, [(0, 1)]),
                                                    (2, 2, [(1, 1), (1, 1)]), (2, 2, [(4, 1)])])
def test_invalid_boards(width, height, centers):
    with pytest.raises(BoardError):
        Board(width, height, tuple(Center(p) for p in centers))


@pytest.mark.parametrize("text", ["", "galaxies 2\n", "galaxies 2 2 loose\n", "galaxies 2 2\n1\n",
                                  "galaxies 2 2\n1 a\n", "galaxies 2 2\n1 1 white\n", "galaxies 2 2\n9 9\n"])
def test_malformed_board_text(text):
    with pytest.raises(BoardError):
        parse_board(text)


def test_solution_shape_checked_against_board():
    board = Board(2, 1, (Center((2, 1)),))
    with pytest.raises(BoardError):
        parse_solution("0\n0\n", board)
    with pytest.raises(BoardError):
        parse_solution("0 -1\n")
    with pytest.raises(BoardError):
        verify(board, Solution(((0, 3),)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(list(ShapeClass)))
def test_round_trips_and_svg_partition(seed, shapes):
    board = planted_board(random.Random(seed), shapes)
    assert parse_board(serialize_board(board)) == board
    sol = solve(board, shapes).solution
    assert parse_solution(serialize_solution(sol), board) == sol
    parts = partition_from_svg(render_svg(board, sol), board.width, board.height)
    assert sorted(map(sorted, parts)) == sorted(map(sorted, sol.galaxies().values()))


def test_black_centers_and_picture():
    board = parse_board("galaxies 2 1\n1 1 black\n3 1\n")
    sol = Solution(((0, 1),))
    assert str(picture_of(board, sol)) == "#."
    assert "black" in serialize_board(board)
    assert render_ascii(board, sol).count("●") == 1
