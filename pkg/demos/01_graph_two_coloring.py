"""Two-good edge colorings of multigraphs.

A vertex of degree at least 2 should see both colors.  The only obstruction
is a component that is an odd cycle; everything else grows from a seed.
"""
import random

from coversplit import verify_coloring
from coversplit.graphs import (
    find_seed,
    gen_complete,
    graph_from_pairs,
    random_multigraph,
    two_good_coloring,
)

# A triangle is the smallest odd cycle, so it has no 2-good coloring.
triangle = gen_complete(3)
print(two_good_coloring(triangle).witness)

# Two triangles sharing a vertex: the seed is a dumbbell whose path is empty.
eight = graph_from_pairs([("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"), ("d", "e"), ("e", "a")])
seed = find_seed(eight)
print(seed.kind.value, [c.vertices for c in seed.cycles], "path", seed.path.vertices)

result = two_good_coloring(eight)
for h, color in result.coloring.items():
    print(f"  {h.set_id}: {color}")
print("verified:", verify_coloring(eight.to_instance(), result.coloring, 2).ok)

# Random multigraphs: count how often a component is an odd cycle.
rng = random.Random(0)
verdicts = [two_good_coloring(random_multigraph(rng)).feasible for _ in range(500)]
print(f"{sum(verdicts)}/500 random multigraphs are 2-splittable")
