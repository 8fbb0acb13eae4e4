import random

import pytest
from hypothesis import given, settings, strategies as st

from spiral_galaxies.board import ShapeClass
from spiral_galaxies.grid_matching import (
    GraphError, SquaredGridGraph, count_matchings, edges_cross, graph_to_puzzle, matching_from_solution,
    normalize_parity, parity_split, parse_graph, puzzle_to_graph, random_even_graph, serialize_graph,
    solve_matching,
)
from spiral_galaxies.solver import SearchBudget, count_solutions, enumerate_solutions

seeds = st.integers(0, 100_000)


def test_plus_sign_crossing():
    assert edges_cross(((0, 1), (2, 1)), ((1, 0), (1, 2)))
    assert not edges_cross(((0, 0), (2, 0)), ((0, 2), (2, 2)))
    with pytest.raises(GraphError):
        edges_cross(((0, 0), (2, 0)), ((2, 0), (4, 0)))


def test_square_of_four_has_two_matchings():
    g = SquaredGridGraph([(0, 0), (2, 0), (0, 2), (2, 2)])
    assert count_matchings(g).count == 2


def test_crossing_pairs_are_excluded():
    # the four arms of a plus: both perfect matchings would cross at the middle
    g = SquaredGridGraph([(1, 0), (1, 2), (0, 1), (2, 1)])
    g = normalize_parity(g) if not g.is_even() else g
    assert count_matchings(g).count == 0


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_matchings_equal_unit3_solutions(seed):
    g = random_even_graph(random.Random(seed))
    board, offset = graph_to_puzzle(g)
    assert puzzle_to_graph(board).translate(*offset) == g
    sols = enumerate_solutions(board, ShapeClass.UNIT3).solutions
    assert len(sols) == count_matchings(g).count
    for s in sols:
        m = matching_from_solution(board, s, offset)
        assert m.non_crossing and m.is_perfect_for(g)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_graph_text_round_trip(seed):
    g = random_even_graph(random.Random(seed))
    assert parse_graph(serialize_graph(g)) == g


def test_parity_split_and_normalize():
    g = SquaredGridGraph([(0, 0), (2, 0), (1, 0), (3, 0)])
    even, odd = parity_split(g)
    assert even.vertices == {(0, 0), (2, 0)} and odd.vertices == {(1, 0), (3, 0)}
    assert normalize_parity(odd).is_even()
    with pytest.raises(GraphError):
        normalize_parity(g)


@pytest.mark.parametrize("text", ["0\n", "0 a\n", "0 0\n0 0\n"])
def test_bad_graph_text(text):
    with pytest.raises(GraphError):
        parse_graph(text)


def test_odd_graph_rejected_by_solvers():
    g = SquaredGridGraph([(1, 0), (3, 0)])
    with pytest.raises(GraphError):
        count_matchings(g)
    with pytest.raises(GraphError):
        graph_to_puzzle(g)


def test_matching_budget():
    g = SquaredGridGraph([(x, y) for x in range(0, 8, 2) for y in range(0, 8, 2)])
    assert count_matchings(g, SearchBudget(max_nodes=3)).complete is False
    assert solve_matching(g) is not None
