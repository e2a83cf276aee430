import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coversplit.core import ContractError, SetInstance, ShapeError, instance_from_members
from coversplit.graphs import gen_complete
from coversplit.intervals import (
    Interval,
    LinearCover,
    divide_and_conquer_split,
    interval_components,
    layered_peel,
    merge_at_point,
    random_interval_cover,
    random_kfold_cover,
    sweep_split,
    thin_locally_finite,
    to_interval_cover,
)
from coversplit.oracle import exact_split

H = SetInstance


def lc_of(n, *spans, mult=None):
    mult = mult or {}
    return LinearCover(n, [Interval(name, lo, hi, mult.get(name, 1)) for name, lo, hi in spans])


@st.composite
def linear_covers(draw, max_n=8, max_sets=7):
    n = draw(st.integers(1, max_n))
    count = draw(st.integers(0, max_sets))
    sets = []
    for i in range(count):
        lo = draw(st.integers(0, n - 1))
        hi = draw(st.integers(lo, n - 1))
        sets.append(Interval(f"I{i}", lo, hi, draw(st.integers(1, 2))))
    return LinearCover(n, sets)


class TestConversion:
    def test_two_sets(self):
        inst = instance_from_members({"A": ["0", "1"], "B": ["1", "2"]}, points=["0", "1", "2"])
        lc = to_interval_cover(inst)
        assert [(s.lo, s.hi) for s in lc.sets] == [(0, 1), (1, 2)]

    def test_gap(self):
        inst = instance_from_members({"A": ["0", "2"]}, points=["0", "1", "2"])
        with pytest.raises(ShapeError, match="'A'.*gap at '1'"):
            to_interval_cover(inst)

    def test_singleton(self):
        inst = instance_from_members({"A": ["1"]}, points=["0", "1", "2"])
        s = to_interval_cover(inst).sets[0]
        assert (s.lo, s.hi) == (1, 1)

    def test_custom_order(self):
        inst = instance_from_members({"A": ["x", "z"]}, points=["x", "y", "z"])
        lc = to_interval_cover(inst, ["y", "x", "z"])
        assert (lc.sets[0].lo, lc.sets[0].hi) == (1, 2)
        with pytest.raises(ShapeError):
            to_interval_cover(inst, ["x", "y"])

    def test_bad_interval(self):
        with pytest.raises(ShapeError):
            lc_of(3, ("A", 1, 3))

    def test_components(self):
        lc = lc_of(6, ("A", 0, 1), ("B", 1, 2), ("C", 4, 5))
        assert interval_components(lc) == [(0, 2), (3, 3), (4, 5)]


class TestSweep:
    def test_worked_example(self):
        lc = lc_of(3, ("A", 0, 1), ("B", 1, 2), ("C", 0, 2))
        r = sweep_split(lc, 2)
        assert r.coloring == {H("C"): 0, H("A"): 1, H("B"): 1}
        assert lc.verify(r.coloring, 2).ok

    def test_single(self):
        assert sweep_split(lc_of(1, ("A", 0, 0)), 1).coloring == {H("A"): 0}

    def test_vacuous(self):
        r = sweep_split(lc_of(1, ("A", 0, 0)), 2)
        assert r.feasible and r.coloring == {}

    def test_multiplicity(self):
        lc = lc_of(2, ("A", 0, 1), mult={"A": 3})
        r = sweep_split(lc, 3)
        assert sorted(r.coloring.values()) == [0, 1, 2]


class TestMerge:
    def test_worked_example(self):
        lc = lc_of(5, ("A", 0, 2), ("B", 2, 4), ("C", 0, 4), ("D", 0, 4))
        merged = merge_at_point(lc, {H("A"): 0, H("C"): 1}, {H("B"): 0, H("C"): 1}, 2, 2)
        assert merged == {H("A"): 0, H("C"): 1, H("B"): 0}
        assert lc.verify(merged, 2).ok

    def test_identity(self):
        lc = lc_of(3, ("A", 0, 2))
        c = {H("A"): 0}
        assert merge_at_point(lc, c, c, 1, 1) == c

    def test_bad_left(self):
        lc = lc_of(3, ("A", 0, 1), ("B", 1, 2))
        with pytest.raises(ContractError) as err:
            merge_at_point(lc, {H("B"): 0}, {H("B"): 0}, 1, 1)
        assert err.value.report.violations[0].point == "0"

    def test_renaming(self):
        lc = lc_of(3, ("A", 0, 1), ("B", 0, 1), ("C", 1, 2), ("D", 1, 2))
        # The right side uses the opposite names for the crossing instances.
        left = {H("A"): 0, H("B"): 1}
        right = {H("A"): 1, H("B"): 0, H("C"): 0, H("D"): 1}
        merged = merge_at_point(lc, left, right, 1, 2)
        assert lc.verify(merged, 2).ok

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10_000))
    def test_halves(self, seed):
        rng = random.Random(seed)
        k = rng.randint(1, 4)
        lc = random_kfold_cover(rng, rng.randint(2, 10), k)
        y = rng.randrange(lc.n)
        left = {h: c for h, c in sweep_split(lc, k).coloring.items() if lc.bounds[h][0] <= y}
        right = sweep_split(LinearCover(lc.n, [s for s in reversed(lc.sets)]), k).coloring
        merged = merge_at_point(lc, left, right, y, k)
        assert lc.verify(merged, k, 0, y).ok
        assert lc.verify(merged, k, y, lc.n - 1).ok
        assert lc.verify(merged, k).ok


class TestDivideAndConquer:
    def test_worked_example(self):
        lc = lc_of(3, ("A", 0, 1), ("B", 1, 2), ("C", 0, 2))
        r = divide_and_conquer_split(lc, 2)
        assert r.feasible and lc.verify(r.coloring, 2).ok

    def test_components(self):
        lc = lc_of(4, ("A", 0, 1), ("B", 0, 1), ("C", 2, 3), ("D", 2, 3))
        r = divide_and_conquer_split(lc, 2)
        assert r.coloring[H("A")] != r.coloring[H("B")]
        assert r.coloring[H("C")] != r.coloring[H("D")]

    @pytest.mark.parametrize("seed", range(60))
    def test_random(self, seed):
        rng = random.Random(seed)
        k = rng.randint(1, 5)
        lc = random_kfold_cover(rng, rng.randint(1, 15), k)
        for algo in (sweep_split, divide_and_conquer_split):
            r = algo(lc, k)
            assert r.feasible and lc.verify(r.coloring, k).ok

    @settings(max_examples=200, deadline=None)
    @given(linear_covers(), st.integers(1, 3))
    def test_oracle_equivalence(self, lc, k):
        if sum(s.mult for s in lc.sets) > 12:
            return
        expected = exact_split(lc.instance, k).feasible
        for algo in (sweep_split, divide_and_conquer_split):
            r = algo(lc, k)
            assert r.feasible == expected
            if r.feasible:
                assert lc.verify(r.coloring, k).ok


def layers_by_definition(lc, z):
    """Layering computed straight from the definition, restarting when stuck."""
    members = [set(range(s.lo, s.hi + 1)) for s in lc.sets]
    layers, done = [], set()
    while len(done) < lc.n - z:
        start = min(set(range(z, lc.n)) - done)
        cur = {start}
        while cur:
            layers.append(sorted(cur))
            done |= cur
            reach = set().union(*[m for m in members if m & cur]) if members else set()
            cur = {p for p in reach if p > max(done)}
    return layers


def check_thinning(lc, z, t):
    sel = {h: lc.bounds[h] for h in t.selected}
    for p in range(z, lc.n):
        assert any(lo <= p <= hi for lo, hi in sel.values()), p
    layer = t.layer_of()
    for m, group in enumerate(t.chosen):
        for h in group:
            lo, hi = lc.bounds[h]
            for p in range(max(lo, z), hi + 1):
                assert layer[p] >= m - 1, (p, m, h)
    for p in range(z, lc.n):
        count = sum(lo <= p <= hi for lo, hi in sel.values())
        assert count <= 2 * (layer[p] + 2)


class TestThinning:
    def test_example(self):
        lc = lc_of(6, ("a", 0, 1), ("b", 1, 3), ("c", 2, 5), ("d", 0, 5), ("e", 0, 5))
        t = thin_locally_finite(lc, 0)
        assert t.layers == [[0], [1, 2, 3, 4, 5]]
        assert t.layers == layers_by_definition(lc, 0)
        check_thinning(lc, 0, t)
        assert t.selected == [H("d")]

    def test_chain_unchanged(self):
        lc = lc_of(5, ("a", 0, 1), ("b", 1, 2), ("c", 2, 3), ("d", 3, 4))
        t = thin_locally_finite(lc, 0)
        assert sorted(t.selected) == [H("a"), H("b"), H("c"), H("d")]
        check_thinning(lc, 0, t)

    def test_last_position(self):
        lc = lc_of(4, ("a", 0, 3), ("b", 2, 3), ("c", 3, 3))
        t = thin_locally_finite(lc, 3)
        assert t.layers == [[3]] and len(t.selected) == 1

    def test_uncovered(self):
        with pytest.raises(ContractError, match="not covered"):
            thin_locally_finite(lc_of(3, ("a", 0, 0), ("b", 2, 2)), 0)

    def test_restart(self):
        lc = lc_of(4, ("a", 0, 1), ("b", 2, 3))
        t = thin_locally_finite(lc, 0)
        assert t.layers == [[0], [1], [2], [3]]
        check_thinning(lc, 0, t)

    @pytest.mark.parametrize("seed", range(100))
    def test_random(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 15)
        lc = random_interval_cover(rng, n, rng.randint(1, 12))
        z = rng.randrange(n)
        t = thin_locally_finite(lc, z)
        assert t.layers == layers_by_definition(lc, z)
        check_thinning(lc, z, t)


class TestPeel:
    def test_two_copies(self):
        lay = layered_peel(lc_of(4, ("A", 0, 3), mult={"A": 2}).instance)
        assert lay.layers == [[H("A", 0)], [H("A", 1)]] and lay.residual == []

    def test_k3(self):
        lay = layered_peel(gen_complete(3).to_instance())
        assert len(lay.layers) == 1 and len(lay.layers[0]) == 2
        assert len(lay.residual) == 1

    def test_empty(self):
        lay = layered_peel(instance_from_members([]))
        assert lay.layers == [] and lay.residual == []

    @settings(max_examples=100, deadline=None)
    @given(linear_covers())
    def test_layers_cover_and_are_minimal(self, lc):
        inst = lc.instance
        lay = layered_peel(inst)
        members = {s.id: set(s.members) for s in inst.sets}
        target = set().union(*members.values()) if members else set()
        for layer in lay.layers:
            assert set().union(*[members[h.set_id] for h in layer]) == target
            for h in layer:
                rest = [x for x in layer if x != h]
                assert set().union(*[members[x.set_id] for x in rest]) != target
