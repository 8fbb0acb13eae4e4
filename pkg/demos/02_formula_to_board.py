"""
From a 1-in-3 formula to a puzzle and back
==========================================

Compile a small planar 1-in-3 formula into a Unit3 board, count the board's
solutions, decode each one and compare with a brute-force model list. The
Unit3 reduction is parsimonious, so the two lists coincide.
"""

from spiral_galaxies.board import ShapeClass
from spiral_galaxies.formula import auto_layout, one_in_three_models, parse_formula
from spiral_galaxies.reduce_rect import compile_rect, decode_rect
from spiral_galaxies.reduce_unit3 import compile_unit3, decode_unit3
from spiral_galaxies.solver import enumerate_solutions, solve

text = """c (x1 + x2 + x3) and (not x1 + x2 + x4), exactly one true literal each
p 1in3 4 2
1 2 3 0
-1 2 4 0
"""
f = parse_formula(text)
layout = auto_layout(f)
print("layout grid", layout.grid, "with", len(layout.routes), "routes")

# %% Unit3: one solution per model
comp = compile_unit3(f, layout)
print(f"Unit3 board {comp.board.width}x{comp.board.height}, {len(comp.board.centers)} centers")
sols = enumerate_solutions(comp.board, ShapeClass.UNIT3).solutions
print("decoded:", sorted(str(decode_unit3(comp, s)) for s in sols))
print("oracle: ", [str(m) for m in one_in_three_models(f)])

# %% Rect: solvable exactly when the formula is satisfiable
rect = compile_rect(f, layout)
out = solve(rect.board, ShapeClass.RECT)
print("\nRect status:", out.status.name, "decodes to", decode_rect(rect, out.solution))
