"""Regular graphs without an n-good coloring, refuted by exhaustive search.

``exact_split`` is complete: it either returns a verified coloring, or
exhausts the search space and reports how many decision nodes it used.
"""
from coversplit import CoverInstance, CoverSet, exact_split
from coversplit.graphs import gen_complete, gen_dumbbell_Dn

for name, g, n in [("K3", gen_complete(3), 2), ("K5", gen_complete(5), 4), ("D3", gen_dumbbell_Dn(3), 3)]:
    r = exact_split(g.to_instance(), n)
    print(f"{name}: {n}-regular={g.is_regular(n)}  k={n}: {r.status.value} ({r.nodes} nodes)")

# The odd-n family D_n stays n-regular; D_5 is still small enough to refute.
d5 = gen_dumbbell_Dn(5)
print("D5 vertices/edges:", len(d5.vertices), len(d5.edges), exact_split(d5.to_instance(), 5).status.value)

# Multiplicity matters: K3 is trivially 3-good (every fold is 2 < 3), but
# doubling each edge raises the fold to 4 and a 4-good coloring is impossible.
k3 = gen_complete(3).to_instance()
doubled = CoverInstance(k3.points, [CoverSet(s.id, s.members, 2) for s in k3.sets], "graph")
print("K3, k=3:", exact_split(k3, 3).status.value)
print("2*K3, k=4:", exact_split(doubled, 4).status.value)

# Parallel search gives the same verdict and node count.
print(exact_split(d5.to_instance(), 5, jobs=2).nodes == exact_split(d5.to_instance(), 5).nodes)
