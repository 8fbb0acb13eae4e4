import pytest
from hypothesis import given, strategies as st

from spiral_galaxies.diskgeom import GeometryError, Region, loop_component, matchings, polyline
from spiral_galaxies.grid_matching import SquaredGridGraph, count_matchings


@given(st.integers(2, 6), st.integers(2, 6))
def test_rectangle_loop_has_two_matchings(w, h):
    cycle = Region(0).add_rect(0, 0, 2 * w, 2 * h).cycle()
    comp = loop_component("r", cycle)
    assert len(comp.states) == 2
    assert set(matchings(cycle)) == set(comp.states)
    assert count_matchings(SquaredGridGraph(cycle)).count == 2


def test_polyline_spacing():
    assert polyline([(0, 0), (4, 0), (4, 2)]) == [(0, 0), (2, 0), (4, 0), (4, 2)]
    with pytest.raises(GeometryError):
        polyline([(0, 0), (2, 2)])
    with pytest.raises(GeometryError):
        polyline([(0, 0), (3, 0)])


@pytest.mark.parametrize("cycle", [
    [(0, 0), (2, 0), (2, 2)],
    [(0, 0), (2, 0), (4, 0), (4, 2), (2, 2), (0, 2)][:5] + [(0, 4)],
])
def test_bad_loops(cycle):
    with pytest.raises(GeometryError):
        loop_component("bad", cycle)


def test_loop_with_chord_rejected():
    # a 2x3 block of disks: the middle rung is a chord of the boundary cycle
    cycle = [(0, 0), (2, 0), (4, 0), (4, 2), (2, 2), (0, 2)]
    with pytest.raises(GeometryError):
        loop_component("chord", cycle)
