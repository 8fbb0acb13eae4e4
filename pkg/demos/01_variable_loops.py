"""
Two-state variable loops
========================

A variable is a loop of galaxies that can be tiled in exactly two ways. This
script builds the rectangle-galaxy loop and the Unit3 (1x1, 1x3, 3x1) loop,
counts their solutions and shows the probe that tells the two states apart.
"""

from spiral_galaxies.board import ShapeClass, render_ascii
from spiral_galaxies.reduce_rect import loop_probe_value, variable_loop_fixture as rect_loop
from spiral_galaxies.reduce_unit3 import probe_value, variable_loop_fixture as unit3_loop
from spiral_galaxies.solver import count_solutions, enumerate_solutions

# %% Rect loop: two corridors joined by two thin columns, inside a face fill
board, probe = rect_loop()
print(f"Rect loop board {board.width}x{board.height}, {len(board.centers)} centers")
print("solutions under Rect:", count_solutions(board, ShapeClass.RECT).count)
for sol in enumerate_solutions(board, ShapeClass.RECT).solutions:
    print("  probe reads", loop_probe_value(sol, board, probe))

# %% Unit3 loop: a ring of disks; each solution is one of its two perfect matchings
board, pair = unit3_loop()
sols = enumerate_solutions(board, ShapeClass.UNIT3).solutions
print(f"\nUnit3 loop board {board.width}x{board.height}: {len(sols)} solutions")
print("probe values:", [probe_value(s, pair) for s in sols])

# %% The first state, drawn with galaxy borders
print(render_ascii(board, sols[0]))
