import random

import pytest
from hypothesis import given, settings, strategies as st

from spiral_galaxies.board import Board, BoardError, Center, ShapeClass, Solution, verify
from spiral_galaxies.reduce_unit3 import variable_loop_fixture
from spiral_galaxies.solver import (
    SearchBudget, Status, another_solution, count_solutions, enumerate_solutions, naive_count, solve,
)

from helpers import random_board

seeds = st.integers(0, 100_000)
classes = st.sampled_from(list(ShapeClass))


@settings(max_examples=150, deadline=None)
@given(seeds, classes)
def test_count_matches_naive_oracle(seed, shapes):
    board = random_board(random.Random(seed), shapes)
    assert count_solutions(board, shapes).count == naive_count(board, shapes)


@settings(max_examples=80, deadline=None)
@given(seeds, classes)
def test_enumerated_solutions_are_valid_and_distinct(seed, shapes):
    board = random_board(random.Random(seed), shapes)
    sols = enumerate_solutions(board, shapes).solutions
    assert len(set(sols)) == len(sols)
    assert all(verify(board, s, shapes).valid for s in sols)
    out = solve(board, shapes)
    assert (out.status is Status.SAT) == bool(sols)
    if sols:
        alt = another_solution(board, shapes, sols[0])
        assert (alt.status is Status.SAT) == (len(sols) > 1)
        assert alt.solution is None or alt.solution != sols[0]


def test_shape_classes_nest():
    # a 2x2 square center: one 2x2 galaxy is Any and Rect but not Unit3
    board = Board(2, 2, (Center((2, 2)),))
    assert [count_solutions(board, s).count for s in ShapeClass] == [1, 1, 0]


def test_disconnected_flag_adds_solutions():
    centers = tuple(Center(p) for p in ((3, 3), (3, 1), (3, 5), (1, 3), (5, 3)))
    strict = count_solutions(Board(3, 3, centers)).count
    loose = count_solutions(Board(3, 3, centers, allow_disconnected=True)).count
    assert loose > strict


def test_budgets_are_reported():
    board, _ = variable_loop_fixture()
    assert count_solutions(board, ShapeClass.UNIT3, SearchBudget(max_solutions=1)).complete is False
    assert solve(board, ShapeClass.UNIT3, SearchBudget(max_nodes=1)).status is Status.BUDGET_EXCEEDED
    res = enumerate_solutions(board, ShapeClass.UNIT3, SearchBudget(max_nodes=1))
    assert not res.complete


@pytest.mark.parametrize("kwargs", [{"max_solutions": -1}, {"max_nodes": 0}, {"max_seconds": -2.0}])
def test_invalid_budget(kwargs):
    with pytest.raises(ValueError):
        SearchBudget(**kwargs)


def test_another_solution_rejects_invalid_given():
    board = Board(2, 1, (Center((1, 1)), Center((3, 1))))
    with pytest.raises(BoardError):
        another_solution(board, ShapeClass.ANY, Solution(((0, 0),)))


def test_deterministic_order():
    board, _ = variable_loop_fixture()
    first = enumerate_solutions(board, ShapeClass.UNIT3).solutions
    assert first == enumerate_solutions(board, ShapeClass.UNIT3).solutions
