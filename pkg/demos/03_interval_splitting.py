"""Every k-fold cover of a finite line by intervals splits into k subcovers.

Two splitters are compared on random covers: the greedy sweep, and a
divide-and-conquer that glues halves with ``merge_at_point``.
"""
import random

import numpy as np

from coversplit import SetInstance
from coversplit.intervals import (
    Interval,
    LinearCover,
    divide_and_conquer_split,
    merge_at_point,
    random_kfold_cover,
    sweep_split,
    thin_locally_finite,
)

lc = LinearCover(3, [Interval("A", 0, 1), Interval("B", 1, 2), Interval("C", 0, 2)])
print("sweep:", sweep_split(lc, 2).coloring)

# Gluing two colorings that disagree about the crossing sets.
lc = LinearCover(5, [Interval("A", 0, 2), Interval("B", 2, 4), Interval("C", 0, 4), Interval("D", 0, 4)])
left = {SetInstance("A"): 0, SetInstance("C"): 1}
right = {SetInstance("B"): 0, SetInstance("C"): 1}
print("merged:", merge_at_point(lc, left, right, 2, 2))

rng = random.Random(1)
colors_used = []
for _ in range(300):
    k = rng.randint(1, 5)
    cover = random_kfold_cover(rng, rng.randint(1, 15), k)
    a, b = sweep_split(cover, k), divide_and_conquer_split(cover, k)
    assert cover.verify(a.coloring, k).ok and cover.verify(b.coloring, k).ok
    colors_used.append(len(a.coloring) / max(1, sum(s.mult for s in cover.sets)))
print(f"sweep colors {np.mean(colors_used):.0%} of the set-instances on average")

# Thinning keeps a subcover in which each position meets few chosen sets.
cover = random_kfold_cover(random.Random(4), 12, 3)
t = thin_locally_finite(cover, 0)
print("layers:", t.layers)
depth = np.zeros(cover.n, dtype=int)
for h in t.selected:
    lo, hi = cover.bounds[h]
    depth[lo : hi + 1] += 1
print("chosen sets per position:", depth.tolist())
