"""
Puzzles as non-crossing matchings
=================================

Cells without a center ("disks") on an otherwise filled board behave like the
vertices of a squared grid graph: each Unit3 solution pairs them up with 1x3
galaxies, and the pairs never cross. Here the two counts are compared on a
batch of random graphs.
"""

import random

from spiral_galaxies.board import ShapeClass, render_ascii
from spiral_galaxies.grid_matching import count_matchings, graph_to_puzzle, random_even_graph
from spiral_galaxies.solver import count_solutions, solve

rng = random.Random(2024)
rows = []
for _ in range(15):
    g = random_even_graph(rng, max_vertices=10)
    board, _ = graph_to_puzzle(g)
    rows.append((g, board, count_matchings(g).count, count_solutions(board, ShapeClass.UNIT3).count))

print("vertices  matchings  puzzle solutions")
for g, _, m, c in rows:
    print(f"{len(g):8d}  {m:9d}  {c:16d}")

# %% The graph with the most matchings, drawn as a solved puzzle
g, board, m, _ = max(rows, key=lambda r: r[2])
print(f"\n{len(g)} vertices, {m} matchings; one of them:")
print(render_ascii(board, solve(board, ShapeClass.UNIT3).solution))
