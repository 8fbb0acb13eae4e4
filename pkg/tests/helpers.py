"""Shared generators for tests: random small boards and the formula suite."""

from __future__ import annotations

import random

from spiral_galaxies.board import Board, Center, ShapeClass

FORMULAS = [
    "p 1in3 3 1\n1 2 3 0\n",
    "p 1in3 4 2\n1 2 3 0\n-1 2 4 0\n",
    "p 1in3 4 2\n1 2 3 0\n1 2 -4 0\n",
    "p 1in3 3 2\n1 2 3 0\n-1 -2 -3 0\n",
    "p 1in3 4 2\n1 2 3 0\n1 2 4 0\n",
    "p 1in3 4 2\n-1 2 3 0\n1 -2 -4 0\n",
]

_PIECES = {
    ShapeClass.ANY: [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2)],
    ShapeClass.RECT: [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2)],
    ShapeClass.UNIT3: [(1, 1), (1, 3), (3, 1)],
}


def _dims(rng: random.Random, max_area: int) -> tuple[int, int]:
    while True:
        w, h = rng.randint(1, 6), rng.randint(1, 6)
        if w * h <= max_area:
            return w, h


def random_centers_board(rng: random.Random, max_area: int = 12) -> Board:
    """Centers at random interior doubled positions; often unsolvable."""
    w, h = _dims(rng, max_area)
    spots = [(a, b) for a in range(1, 2 * w) for b in range(1, 2 * h)]
    k = rng.randint(1, min(len(spots), max(1, w * h // 2 + 1)))
    return Board(w, h, tuple(Center(p) for p in sorted(rng.sample(spots, k))))


def planted_board(rng: random.Random, shapes: ShapeClass, max_area: int = 12) -> Board:
    """Centers of a random tiling by rectangles allowed in ``shapes``, so at least one solution exists."""
    w, h = _dims(rng, max_area)
    free = {(x, y) for x in range(w) for y in range(h)}
    centers = []
    while free:
        x, y = min(free, key=lambda c: (c[1], c[0]))
        fits = [(pw, ph) for pw, ph in _PIECES[shapes]
                if all((x + i, y + j) in free for i in range(pw) for j in range(ph))]
        pw, ph = rng.choice(fits)
        free -= {(x + i, y + j) for i in range(pw) for j in range(ph)}
        centers.append((2 * x + pw, 2 * y + ph))
    return Board(w, h, tuple(Center(p) for p in sorted(centers)))


def random_board(rng: random.Random, shapes: ShapeClass, max_area: int = 12) -> Board:
    return planted_board(rng, shapes, max_area) if rng.random() < 0.6 else random_centers_board(rng, max_area)
