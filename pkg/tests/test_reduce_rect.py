import pytest

from spiral_galaxies.board import ShapeClass
from spiral_galaxies.diskgeom import GeometryError
from spiral_galaxies.formula import auto_layout, parse_formula
from spiral_galaxies.reduce_rect import (
    RECT_KINDS, compile_rect, decode_rect, emit_gadget_rect, face_filled_board, loop_probe_value,
    parse_rect_fixture, rect_fixture_text, variable_loop_fixture,
)
from spiral_galaxies.reduce_unit3 import Pose, decode_unit3
from spiral_galaxies.solver import count_solutions, enumerate_solutions

from helpers import FORMULAS


def test_transcribed_loop_has_two_states():
    board, probe = variable_loop_fixture()
    sols = enumerate_solutions(board, ShapeClass.RECT).solutions
    assert sorted(loop_probe_value(s, board, probe) for s in sols) == [False, True]


@pytest.mark.parametrize("centers", [3, 5, 7])
@pytest.mark.parametrize("quarter", [0, 1])
def test_emitted_loops_have_two_states(centers, quarter):
    g = emit_gadget_rect("VariableLoop", Pose(0, 0, quarter), {"centers": centers})
    board, _ = face_filled_board([g])
    assert count_solutions(board, ShapeClass.RECT).count == 2


@pytest.mark.parametrize("kind", [k for k in RECT_KINDS if k != "VariableLoop"])
def test_every_kind_emits(kind):
    g = emit_gadget_rect(kind)
    assert g.kind == kind and g.cells


@pytest.mark.parametrize("params", [{"amount": 3}, {"amount": 6, "length": 16, "depth": 1}, {"amount": 5}])
def test_bad_shift(params):
    with pytest.raises(GeometryError):
        emit_gadget_rect("Shift", params=params)


def test_fixture_text_round_trip():
    board, _ = variable_loop_fixture()
    open_cells = {(a // 2, b // 2) for c in board.centers if c.kind != "cell" for a, b in [c.pos]}
    open_cells |= {(x, y) for x, y in board.cells()
                   if (2 * x + 1, 2 * y + 1) not in {c.pos for c in board.centers}}
    assert parse_rect_fixture(rect_fixture_text(board, open_cells, ["loop"])) == board


@pytest.mark.parametrize("text", FORMULAS[1:3])
def test_rect_solutions_decode_like_unit3(text):
    # the probe galaxy may be a 1x3 across the probe pair; that reads FALSE
    f = parse_formula(text)
    comp = compile_rect(f, auto_layout(f))
    sols = enumerate_solutions(comp.board, ShapeClass.RECT).solutions
    assert sols
    for s in sols:
        assert decode_rect(comp, s) == decode_unit3(comp.unit3, s)
        assert f.satisfied_by(decode_rect(comp, s).values)


def test_manifest_covers_the_board():
    f = parse_formula(FORMULAS[0])
    comp = compile_rect(f, auto_layout(f))
    cells = [c for g in comp.manifest for c in g.cells]
    assert len(cells) == len(set(cells)) == comp.board.area
    assert comp.manifest[-1].kind == "FaceFill"
