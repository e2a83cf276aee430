"""A cover without two disjoint subcovers, and its rectangle realization.

Run with a file name to also write the SVG picture.
"""
import sys
from collections import Counter

from coversplit import coverage_profile
from coversplit.geometry import (
    TreeCoverParams,
    adversary_walk,
    certify_tree_cover,
    check_incidence_isomorphism,
    export_svg,
    gen_tree_cover,
    realize_rectangles,
)

p = TreeCoverParams(2, 2)
tc = gen_tree_cover(p)
print(len(tc.points), "nodes,", len(tc.sets), "sets, fold counts", Counter(coverage_profile(tc).values()))

# Put the sets of the root into different parts and watch the adversary.
partition = {s.id: i % 2 for i, s in enumerate(tc.sets)}
print(adversary_walk(tc, partition))

cert = certify_tree_cover(p)
print(f"{cert.valid_witnesses}/{cert.total_partitions} partitions refuted "
      f"({cert.part0_witnesses} by part 0, {cert.part1_witnesses} by part 1)")

scene = realize_rectangles(p)
print("rectangle C<1>:", [[str(c) for c in rng] for rng in scene.rects["C<1>"]])
print("incidence preserved:", check_incidence_isomorphism(scene, tc))

svg = export_svg(scene)
if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(svg)
print(len(svg), "bytes of SVG")
