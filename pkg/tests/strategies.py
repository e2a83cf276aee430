"""Hypothesis strategies shared across test modules."""
from hypothesis import strategies as st

from coversplit.core import CoverInstance, CoverSet


@st.composite
def cover_instances(draw, max_points=6, max_sets=6, max_mult=3, allow_empty=False):
    n = draw(st.integers(0 if allow_empty else 1, max_points))
    points = [f"p{i}" for i in range(n)]
    count = draw(st.integers(0, max_sets))
    sets = []
    for i in range(count):
        members = draw(st.lists(st.sampled_from(points), unique=True, max_size=n) if points else st.just([]))
        if not members and not allow_empty:
            continue
        sets.append(CoverSet(f"S{i}", members, draw(st.integers(1, max_mult))))
    return CoverInstance(points, sets)


@st.composite
def instances_with_coloring(draw, k_max=3, **kw):
    inst = draw(cover_instances(**kw))
    k = draw(st.integers(1, k_max))
    coloring = {}
    for h in inst.instances:
        c = draw(st.one_of(st.none(), st.integers(0, k)))
        if c is not None:
            coloring[h] = c
    return inst, k, coloring
