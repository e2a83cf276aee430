"""Indicator covers: vectors with at least t ones, one set per coordinate.

Any 2-partition of the coordinates leaves one side with at least t of them;
the vector supported on those t coordinates is missed by the other side.
"""
import numpy as np

from coversplit import coverage_profile, enumerate_partitions_check
from coversplit.geometry import gen_indicator_cover

for m in (3, 4, 5, 6):
    inst = gen_indicator_cover(m, 2)
    cert = enumerate_partitions_check(inst, audit=True)
    missed = np.array([p.count("1") for _, _, p in cert.failures])
    print(f"m={m}: {len(inst.points)} points, min fold {min(coverage_profile(inst).values())}, "
          f"{cert.failing_partitions}/{cert.total_partitions} partitions fail, "
          f"first missed point has {missed.min()}..{missed.max()} ones")

# With t = 1 on two coordinates the cover is still not 2-splittable.
print(enumerate_partitions_check(gen_indicator_cover(2, 1)).split_free)
