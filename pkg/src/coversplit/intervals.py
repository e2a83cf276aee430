"""k-good colorings of covers of a finite linear order by intervals.

Positions are ``0..n-1``; a set is a closed interval ``[lo, hi]``.  Two
splitters are provided and cross-checked in the tests: a left-to-right
:func:`sweep_split` and :func:`divide_and_conquer_split`, which recursively
splits the order at a point and glues the halves with :func:`merge_at_point`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .core import (
    ContractError,
    CoverInstance,
    CoverSet,
    SetInstance,
    ShapeError,
    expand_multiplicity,
    verify_coloring,
)
from .oracle import SplitResult, Status


@dataclass(frozen=True)
class Interval:
    id: str
    lo: int
    hi: int
    mult: int = 1


@dataclass(frozen=True)
class LinearCover:
    n: int
    sets: tuple[Interval, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.n)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.n:
            raise ShapeError("need one label per position")
        for s in self.sets:
            if not 0 <= s.lo <= s.hi < self.n:
                raise ShapeError(f"interval {s.id!r} = [{s.lo}, {s.hi}] outside 0..{self.n - 1}")
            if s.mult < 1:
                raise ShapeError(f"interval {s.id!r} has multiplicity < 1")

    @cached_property
    def instance(self) -> CoverInstance:
        return CoverInstance(
            self.labels,
            [CoverSet(s.id, self.labels[s.lo : s.hi + 1], s.mult) for s in self.sets],
            "interval",
        )

    @cached_property
    def bounds(self) -> dict[SetInstance, tuple[int, int]]:
        """Set-instance -> (lo, hi), in set-instance order."""
        return {
            SetInstance(s.id, a): (s.lo, s.hi) for s in self.sets for a in range(s.mult)
        }

    @cached_property
    def fold(self) -> list[int]:
        f = [0] * self.n
        for s in self.sets:
            for p in range(s.lo, s.hi + 1):
                f[p] += s.mult
        return f

    def verify(self, coloring: Mapping[SetInstance, int], k: int, lo: int = 0, hi: int | None = None):
        hi = self.n - 1 if hi is None else hi
        return verify_coloring(self.instance, coloring, k, self.labels[lo : hi + 1])


def to_interval_cover(inst: CoverInstance, order: Sequence[str] | None = None) -> LinearCover:
    """View ``inst`` as intervals of ``order`` (default: the declared point order)."""
    order = list(inst.points if order is None else order)
    if sorted(order) != sorted(inst.points) or len(set(order)) != len(order):
        raise ShapeError("order must be a permutation of the instance points")
    pos = {p: i for i, p in enumerate(order)}
    sets = []
    for s in inst.sets:
        if not s.members:
            raise ShapeError(f"set {s.id!r} is empty")
        idx = sorted(pos[p] for p in s.members)
        for a, b in zip(idx, idx[1:]):
            if b != a + 1:
                raise ShapeError(f"set {s.id!r} is not contiguous: gap at {order[a + 1]!r}")
        sets.append(Interval(s.id, idx[0], idx[-1], s.mult))
    return LinearCover(len(order), sets, order)


def interval_components(lc: LinearCover) -> list[tuple[int, int]]:
    """Position ranges of the classes generated by co-membership in a set."""
    joined = [False] * max(lc.n - 1, 0)
    for s in lc.sets:
        for p in range(s.lo, s.hi):
            joined[p] = True
    out = []
    start = 0
    for p in range(lc.n):
        if p == lc.n - 1 or not joined[p]:
            out.append((start, p))
            start = p + 1
    return out


# --- sweep -----------------------------------------------------------------

def sweep_split(lc: LinearCover, k: int) -> SplitResult:
    """Left-to-right greedy k-good coloring.

    Each color has a responsible set-instance.  At every position of fold at
    least ``k``, a color whose responsible instance has ended takes the
    unassigned instance through that position reaching furthest right.
    """
    if k < 1:
        raise ContractError("k must be >= 1")
    starts: list[list[SetInstance]] = [[] for _ in range(lc.n)]
    for h, (lo, _) in lc.bounds.items():
        starts[lo].append(h)
    bounds = lc.bounds
    rank = {h: i for i, h in enumerate(bounds)}
    coloring: dict[SetInstance, int] = {}
    responsible: list[SetInstance | None] = [None] * k
    live: list[SetInstance] = []  # unassigned instances started so far
    for p in range(lc.n):
        live.extend(starts[p])
        live = [h for h in live if bounds[h][1] >= p]
        if lc.fold[p] < k:
            continue
        need = [j for j in range(k) if responsible[j] is None or bounds[responsible[j]][1] < p]
        if len(need) > len(live):
            return SplitResult(Status.INFEASIBLE, witness={"reason": "fold", "position": p})
        live.sort(key=lambda h: (-bounds[h][1], rank[h]))
        for j in need:
            h = live.pop(0)
            coloring[h] = j
            responsible[j] = h
    report = lc.verify(coloring, k)
    if not report.ok:  # pragma: no cover - the counting argument rules this out
        raise AssertionError(f"sweep produced a non-good coloring: {report}")
    return SplitResult(Status.FEASIBLE, coloring=coloring)


# --- merge at a point ------------------------------------------------------

def _merge(
    bounds: Mapping[SetInstance, tuple[int, int]],
    c_left: Mapping[SetInstance, int],
    c_right: Mapping[SetInstance, int],
    y: int,
    k: int,
) -> dict[SetInstance, int]:
    rank = {h: i for i, h in enumerate(bounds)}
    # Only instances reaching the respective side matter; colors >= k never do.
    left = {h: c for h, c in c_left.items() if c < k and bounds[h][0] <= y}
    right = {h: c for h, c in c_right.items() if c < k and bounds[h][1] >= y}

    def thin(coloring, key):
        reps: dict[int, SetInstance] = {}
        for h, c in coloring.items():
            lo, hi = bounds[h]
            if lo <= y <= hi and (c not in reps or key(h) < key(reps[c])):
                reps[c] = h
        for h, c in list(coloring.items()):
            lo, hi = bounds[h]
            if lo <= y <= hi and reps[c] != h:
                del coloring[h]
        return reps

    left_reps = thin(left, lambda h: (bounds[h][0], rank[h]))
    right_reps = thin(right, lambda h: (-bounds[h][1], rank[h]))

    f: dict[int, int] = {}
    for i, h in left_reps.items():
        if h in right:
            f[i] = right[h]
    free_right = [j for j in range(k) if j not in f.values()]
    for i in range(k):
        if i not in f:
            f[i] = free_right.pop(0)
    inverse = {j: i for i, j in f.items()}

    merged = dict(left)
    for h, j in right.items():
        if h not in merged:
            merged[h] = inverse[j]
    return merged


def merge_at_point(
    lc: LinearCover,
    c_left: Mapping[SetInstance, int],
    c_right: Mapping[SetInstance, int],
    y: int,
    k: int,
) -> dict[SetInstance, int]:
    """Glue a k-good coloring over ``[0..y]`` and one over ``[y..n-1]``.

    On each side the instances through ``y`` are thinned to one
    representative per color (smallest ``lo`` on the left, largest ``hi`` on
    the right).  Representatives shared by both sides fix a partial
    bijection between left and right colors, which is completed in ascending
    order; right-only instances are recolored through it.
    """
    if not 0 <= y < lc.n:
        raise ContractError(f"merge point {y} outside 0..{lc.n - 1}")
    rep = lc.verify(c_left, k, 0, y)
    if not rep.ok:
        raise ContractError(f"left coloring is not {k}-good over [0..{y}]", rep)
    rep = lc.verify(c_right, k, y, lc.n - 1)
    if not rep.ok:
        raise ContractError(f"right coloring is not {k}-good over [{y}..{lc.n - 1}]", rep)
    return _merge(lc.bounds, dict(c_left), dict(c_right), y, k)


# --- divide and conquer ----------------------------------------------------

def _solve_small(bounds, members: list[SetInstance], a: int, b: int, k: int, fold) -> dict:
    """Direct k-good coloring over one or two positions ``a <= b <= a + 1``."""
    both = [h for h in members if bounds[h][0] <= a and bounds[h][1] >= b]
    coloring = {h: j for j, h in enumerate(both[:k])}
    for p in range(a, b + 1):
        if fold[p] < k:
            continue
        seen = {coloring[h] for h in members if h in coloring and bounds[h][0] <= p <= bounds[h][1]}
        spare = [h for h in members if h not in coloring and bounds[h][0] <= p <= bounds[h][1]]
        for j in range(k):
            if j not in seen:
                coloring[spare.pop(0)] = j
    return coloring


def divide_and_conquer_split(lc: LinearCover, k: int) -> SplitResult:
    """k-good coloring by recursive halving and :func:`merge_at_point`.

    Each component of the co-membership relation is solved separately.  A
    range ``[a..b]`` with at least three positions is split at its median
    ``y`` into the closed halves ``[a..y]`` and ``[y..b]``; instances through
    ``y`` take part in both halves.
    """
    if k < 1:
        raise ContractError("k must be >= 1")
    bounds = lc.bounds
    fold = lc.fold

    def solve(a: int, b: int, members: list[SetInstance]) -> dict:
        if b - a <= 1:
            return _solve_small(bounds, members, a, b, k, fold)
        y = (a + b) // 2
        left = solve(a, y, [h for h in members if bounds[h][0] <= y])
        right = solve(y, b, [h for h in members if bounds[h][1] >= y])
        sub = {h: bounds[h] for h in members}
        return _merge(sub, left, right, y, k)

    coloring: dict[SetInstance, int] = {}
    for a, b in interval_components(lc):
        members = [h for h, (lo, hi) in bounds.items() if lo <= b and hi >= a]
        coloring.update(solve(a, b, members))
    report = lc.verify(coloring, k)
    if not report.ok:  # pragma: no cover - merge preserves goodness on both halves
        raise AssertionError(f"divide and conquer produced a non-good coloring: {report}")
    return SplitResult(Status.FEASIBLE, coloring=coloring)


# --- locally finite thinning ----------------------------------------------

@dataclass
class Thinning:
    selected: list[SetInstance]
    layers: list[list[int]]
    chosen: list[list[SetInstance]] = field(default_factory=list)

    def layer_of(self) -> dict[int, int]:
        return {p: m for m, layer in enumerate(self.layers) for p in layer}


def thin_locally_finite(lc: LinearCover, z: int) -> Thinning:
    """Subcover of ``[z..n-1]`` in which each position meets few chosen sets.

    Positions from ``z`` on are layered: ``L(0) = {z}`` and ``L(m)`` holds the
    new positions lying in a set that meets ``L(m-1)``.  Layer ``m`` is
    covered by at most two sets that both meet it: one also reaching the next
    layer, and one through its left end that meets ``L(m-1)``.  A set chosen
    for layer ``m + 2`` therefore misses all of ``L(m)``.  When the layers
    stop short of ``n - 1`` (the order splits into several co-membership
    classes) layering restarts at the first position not yet reached.
    """
    if not 0 <= z < lc.n:
        raise ContractError(f"start position {z} outside 0..{lc.n - 1}")
    reps = [(SetInstance(s.id, 0), s.lo, s.hi) for s in lc.sets]
    uncovered = [p for p in range(z, lc.n) if lc.fold[p] == 0]
    if uncovered:
        raise ContractError(f"positions {uncovered} are not covered")

    layers: list[list[int]] = []
    run_start: list[bool] = []
    reached = z - 1
    while reached < lc.n - 1:
        first = reached + 1
        layers.append([first])
        run_start.append(True)
        reached = first
        while True:
            prev = layers[-1]
            top = max([hi for _, lo, hi in reps if lo <= prev[-1] and hi >= prev[0]], default=reached)
            if top <= reached:
                break
            layers.append(list(range(reached + 1, top + 1)))
            run_start.append(False)
            reached = top

    def meets(lo, hi, layer):
        return lo <= layer[-1] and hi >= layer[0]

    def farthest(cands):
        return max(cands, key=lambda t: (t[2], -t[1]))

    chosen: list[list[SetInstance]] = []
    for m, layer in enumerate(layers):
        nxt = layers[m + 1] if m + 1 < len(layers) and not run_start[m + 1] else None
        if run_start[m]:
            p = layer[0]
            pick = farthest([t for t in reps if t[1] <= p <= t[2]])
            chosen.append([pick[0]])
        elif nxt is None:
            prev = layers[m - 1]
            top = layer[-1]
            pick = farthest([t for t in reps if t[1] <= top <= t[2] and meets(t[1], t[2], prev)])
            chosen.append([pick[0]])
        else:
            prev = layers[m - 1]
            y = nxt[0]
            first = farthest([t for t in reps if t[1] <= y <= t[2] and meets(t[1], t[2], layer)])
            y2 = max(layer[0], first[1])
            second = farthest([t for t in reps if t[1] <= y2 <= t[2] and meets(t[1], t[2], prev)])
            chosen.append(list(dict.fromkeys([second[0], first[0]])))
    selected = list(dict.fromkeys(h for group in chosen for h in group))
    return Thinning(selected, layers, chosen)


# --- layered peel ------------------------------------------------------------

@dataclass
class Layering:
    layers: list[list[SetInstance]]
    residual: list[SetInstance]


def layered_peel(inst: CoverInstance) -> Layering:
    """Peel off inclusion-minimal subcovers of the union until none is left.

    Each layer is obtained from the remaining set-instances by dropping
    instances in reverse id order whenever the rest still covers the union
    of the whole cover.  No k-goodness is claimed for the layers.
    """
    members = {s.id: frozenset(s.members) for s in inst.sets}
    target = frozenset(p for m in members.values() for p in m)
    remaining = expand_multiplicity(inst)

    def union(hs):
        out: set[str] = set()
        for h in hs:
            out |= members[h.set_id]
        return out

    layers = []
    while remaining and target and union(remaining) >= target:
        layer = list(remaining)
        for h in sorted(remaining, key=lambda h: (h.set_id, h.copy), reverse=True):
            rest = [x for x in layer if x != h]
            if union(rest) >= target:
                layer = rest
        layers.append(layer)
        taken = set(layer)
        remaining = [h for h in remaining if h not in taken]
    return Layering(layers, remaining)


# --- random generators -----------------------------------------------------

def random_kfold_cover(rng: random.Random, n: int, k: int, extra: int | None = None,
                       max_mult: int = 2) -> LinearCover:
    """Random interval cover of ``0..n-1`` in which every position has fold >= k."""
    sets: list[Interval] = []
    fold = [0] * n
    extra = rng.randint(0, n) if extra is None else extra

    def add(lo, hi, mult):
        sets.append(Interval(f"I{len(sets)}", lo, hi, mult))
        for p in range(lo, hi + 1):
            fold[p] += mult

    for _ in range(extra):
        lo = rng.randrange(n)
        add(lo, rng.randint(lo, min(n - 1, lo + rng.randint(0, n))), rng.randint(1, max_mult))
    for p in range(n):
        while fold[p] < k:
            lo = rng.randint(max(0, p - 3), p)
            hi = rng.randint(p, min(n - 1, p + 3))
            add(lo, hi, min(rng.randint(1, max_mult), k - fold[p]))
    return LinearCover(n, sets)


def random_interval_cover(rng: random.Random, n: int, count: int, max_len: int = 4) -> LinearCover:
    """Random interval cover of ``0..n-1`` (every position covered at least once)."""
    sets: list[Interval] = []
    for _ in range(count):
        lo = rng.randrange(n)
        sets.append(Interval(f"I{len(sets)}", lo, min(n - 1, lo + rng.randint(0, max_len))))
    covered = [False] * n
    for s in sets:
        for p in range(s.lo, s.hi + 1):
            covered[p] = True
    for p in range(n):
        if not covered[p]:
            hi = min(n - 1, p + rng.randint(0, max_len))
            sets.append(Interval(f"I{len(sets)}", p, hi))
            for q in range(p, hi + 1):
                covered[q] = True
    return LinearCover(n, sets)
