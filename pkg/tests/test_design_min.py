import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from spiral_galaxies.board import incident_cells, rotate_cell
from spiral_galaxies.design_min import (
    CenterPlacement, Shape, ShapeError, chain_assembly, check_placement, compile_shape,
    enumerate_symmetric_galaxies, fix_assembly, min_centers, parse_shape, sealed_end,
    sealed_local_center, serialize_shape, split_room,
)
from spiral_galaxies.formula import Formula, LayoutError, auto_layout, one_in_three_models, parse_formula
from spiral_galaxies.solver import SearchBudget


def random_shape(seed: int, max_cells: int = 8) -> Shape:
    rng = random.Random(seed)
    box = [(x, y) for x in range(4) for y in range(3)]
    return Shape.from_cells(rng.sample(box, rng.randint(1, max_cells)))[0]


def _connected(cells) -> bool:
    cells = set(cells)
    start = next(iter(cells))
    seen, stack = {start}, [start]
    while stack:
        x, y = stack.pop()
        for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if q in cells and q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(cells)


def _galaxy_center(block):
    """The only possible center of a symmetric block: its bounding-box center."""
    xs = [x for x, _ in block]
    ys = [y for _, y in block]
    c = (min(xs) + max(xs) + 1, min(ys) + max(ys) + 1)
    ok = (all(rotate_cell(q, c) in block for q in block) and set(incident_cells(c)) <= block
          and _connected(block))
    return c if ok else None


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            left = [q for q in rest if q not in combo]
            for tail in _partitions(left):
                yield [{first, *combo}] + tail


def brute_min(s: Shape):
    best, keys = None, set()
    for part in _partitions(sorted(s.cells)):
        centers = [_galaxy_center(b) for b in part]
        if None in centers:
            continue
        key = frozenset((c, frozenset(b)) for c, b in zip(centers, part))
        if best is None or len(part) < best:
            best, keys = len(part), {key}
        elif len(part) == best:
            keys.add(key)
    return best, keys


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_min_centers_matches_partition_oracle(seed):
    s = random_shape(seed)
    k, keys = brute_min(s)
    res = min_centers(s)
    assert res.exact and res.k_min == k
    assert {p.key() for p in res.placements} == keys
    assert all(check_placement(s, p) == [] for p in res.placements)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_enumerated_galaxies_match_brute_force(seed):
    s = random_shape(seed, 7)
    anchor = min(s.cells)
    got = {(c, g) for c, g in enumerate_symmetric_galaxies(s, anchor)}
    cells = sorted(s.cells)
    want = set()
    for r in range(1, len(cells) + 1):
        for combo in itertools.combinations(cells, r):
            block = set(combo)
            c = _galaxy_center(block) if anchor in block else None
            if c is not None:
                want.add((c, frozenset(block)))
    assert got == want


def test_shape_text_round_trip_and_errors():
    s = parse_shape("c ring\n###\n#.#\n###\n")
    assert len(s) == 8 and parse_shape(serialize_shape(s)) == s
    for bad in ("", "##\n#\n", "#x\n"):
        with pytest.raises(ShapeError):
            parse_shape(bad)


def test_ring_needs_four_centers():
    res = min_centers(parse_shape("###\n#.#\n###\n"))
    assert res.k_min == 4 and res.exact


def test_check_placement_reports_asymmetry():
    s = parse_shape("##\n")
    bad = CenterPlacement(((1, 1),), (((0, 0), 0), ((1, 0), 0)))
    assert any("symmetric" in m for m in check_placement(s, bad))


def test_engine_bound_and_budget():
    big = Shape(30, 30, frozenset((x, y) for x in range(30) for y in range(30)))
    with pytest.raises(ShapeError):
        min_centers(big)
    s, _ = chain_assembly(3, fix=False).shape()
    res = min_centers(s, budget=SearchBudget(max_nodes=5))
    assert not res.exact


def test_size_cap_clears_exactness():
    s = parse_shape("####\n")
    assert min_centers(s).k_min == 1
    capped = min_centers(s, size_cap=2)
    assert capped.k_min == 2 and not capped.exact


@pytest.mark.parametrize("variant", range(4))
@pytest.mark.parametrize("w", [3, 11])
def test_sealed_local_center_needs_one(variant, w):
    s, center = sealed_local_center(variant, w)
    res = min_centers(s)
    assert res.k_min == 1 and [p.centers for p in res.placements] == [(center,)]


def test_sealed_end_and_split_room():
    assert min_centers(sealed_end()).k_min == 1
    assert min_centers(split_room((False, False, False))).k_min == 1
    assert min_centers(split_room((True, False, False))).k_min == 2
    with pytest.raises(ShapeError):
        split_room((True, False))


def test_assemblies_pass_their_own_checks():
    # the bare U chain is a standalone fixture, not a compiler chain, so it lacks a fix gadget
    assert chain_assembly(3, fix=False).check() == ["chain chain has no fix gadget"]
    assert chain_assembly(5).check() == []
    assert fix_assembly().check() == []
    with pytest.raises(ShapeError):
        chain_assembly(3, fix=True)


def test_intended_placements_are_valid():
    a = chain_assembly(5)
    s, offset = a.shape()
    for state in (0, 1):
        p = a.placement([state], offset)
        assert check_placement(s, p) == [] and len(p.centers) == a.budget()


@pytest.mark.parametrize("text", ["p 1in3 3 1\n1 2 3 0\n", "p 1in3 4 2\n1 2 3 0\n-1 2 4 0\n"])
def test_compiled_shape_encodes_models(text):
    f = parse_formula(text)
    comp = compile_shape(f, auto_layout(f))
    models = {m.values for m in one_in_three_models(f)}
    for values in itertools.product((False, True), repeat=f.num_vars):
        p = comp.placement_for(values)
        if values in models:
            assert len(p.centers) == comp.budget and check_placement(comp.shape, p) == []
            assert comp.decode(p) == values
        else:
            assert p is None or len(p.centers) > comp.budget


def test_three_occurrences_unsupported():
    f = Formula.from_ints(5, [[1, 2, 3], [1, 4, 5], [-1, 2, 4]])
    with pytest.raises(LayoutError):
        compile_shape(f, auto_layout(f))
