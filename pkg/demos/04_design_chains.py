"""
Designing pictures with few centers
===================================

Given a target shape, find the fewest galaxy centers whose galaxies tile it.
A variable chain of k local-center gadgets between two end rooms needs k + 2
centers and has exactly two optimal placements, one per truth value.
"""

import time

from spiral_galaxies.design_min import (
    block_owners, chain_assembly, min_centers, sealed_end, sealed_local_center, serialize_shape, split_room,
)

# %% Small pieces first: sealed gadgets need one center each
print("End room:", min_centers(sealed_end()).k_min)
for variant in range(4):
    s, center = sealed_local_center(variant)
    print(f"local center variant {variant}:", min_centers(s).k_min, "center at", center)

# %% A split room costs one center only when all three chains agree
for taken in [(False, False, False), (True, False, True), (True, True, True)]:
    print("split", taken, "->", min_centers(split_room(taken)).k_min)

# %% The k = 3 chain, bent into a U
a = chain_assembly(3, fix=False)
s, offset = a.shape()
print(serialize_shape(s))
t0 = time.monotonic()
res = min_centers(s)
print(f"k_min {res.k_min} with {len(res.placements)} optimal placements ({time.monotonic() - t0:.1f}s)")
for p in res.placements:
    whole = all(len(owners) == 1 for owners in block_owners(a, p, offset).values())
    print("  centers", sorted(p.centers), "blocks intact:", whole)
