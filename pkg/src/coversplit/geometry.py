"""Finite truncations of two covers that admit no split into two subcovers.

The tree cover lives on all sequences over ``{0..b}`` of length at most ``d``.
For every internal node ``s`` (length < d) and child label ``n`` there is a set
``C(s, n)``: the node ``s`` itself plus every depth-``d`` node below ``s + (n,)``.
:func:`realize_rectangles` embeds this cover in the plane, internal nodes on a
short segment and depth-``d`` nodes on the diagonal, with one closed
axis-parallel rectangle per set; all coordinates are exact fractions.

The indicator cover on 0/1 vectors of length ``m`` with at least ``t`` ones
has one set per coordinate.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import ceil
from typing import Iterator, Mapping

from .core import ContractError, CoverInstance, CoverSet, coverage_profile

Node = tuple[int, ...]


class GeometryDomainError(ContractError):
    """Generator parameters outside their documented range."""


@dataclass(frozen=True)
class TreeCoverParams:
    b: int
    d: int

    def __post_init__(self):
        if self.b < 1 or self.d < 1:
            raise GeometryDomainError("tree cover needs b >= 1 and d >= 1")

    def nodes(self, length: int | None = None) -> Iterator[Node]:
        """Nodes in breadth-first order (by length, then lexicographically)."""
        lengths = range(self.d + 1) if length is None else [length]
        for L in lengths:
            yield from product(range(self.b + 1), repeat=L)

    def internal(self) -> Iterator[Node]:
        for L in range(self.d):
            yield from self.nodes(L)


def node_id(node: Node) -> str:
    return "<" + ",".join(map(str, node)) + ">"


def parse_node(text: str) -> Node:
    if not (text.startswith("<") and text.endswith(">")):
        raise ContractError(f"not a tree node id: {text!r}")
    body = text[1:-1]
    return tuple(int(x) for x in body.split(",")) if body else ()


def set_id(parent: Node, child: int) -> str:
    return "C" + node_id(parent + (child,))


@lru_cache(maxsize=32)
def gen_tree_cover(p: TreeCoverParams) -> CoverInstance:
    """The truncated tree cover; fold is ``b + 1`` at internal nodes and ``d`` at leaves."""
    points = [node_id(s) for s in p.nodes()]
    sets = []
    for s in p.internal():
        for n in range(p.b + 1):
            prefix = s + (n,)
            rest = p.d - len(prefix)
            leaves = [node_id(prefix + tail) for tail in product(range(p.b + 1), repeat=rest)]
            sets.append(CoverSet(set_id(s, n), [node_id(s)] + leaves))
    return CoverInstance(points, sets, "tree")


def tree_params_of(tc: CoverInstance) -> TreeCoverParams:
    """Recover ``(b, d)`` from a tree cover and check it is the generated one."""
    nodes = [parse_node(p) for p in tc.points]
    d = max(len(s) for s in nodes)
    b = max((x for s in nodes for x in s), default=0)
    params = TreeCoverParams(b, d)
    if gen_tree_cover(params) != tc:
        raise ContractError("instance is not a generated tree cover")
    return params


@dataclass(frozen=True)
class FailureWitness:
    part: int
    missed_node: Node
    path: tuple[int, ...] = ()


def adversary_walk(tc: CoverInstance, partition: Mapping[str, int]) -> FailureWitness:
    """Name a node that one part of a 2-partition of the sets fails to cover.

    If part 0 misses a node, that node is the witness.  Otherwise the walk
    descends from the root, always moving to the smallest child ``n`` whose
    set ``C(s, n)`` lies in part 0.  The depth-``d`` node reached is covered
    only by sets on the walk, so part 1 misses it.
    """
    params = tree_params_of(tc)
    if set(partition) != set(tc.set_by_id) or any(v not in (0, 1) for v in partition.values()):
        raise ContractError("partition must label every set with 0 or 1")
    for p in tc.points:
        if not any(partition[h.set_id] == 0 for h in tc.incidence[p]):
            return FailureWitness(0, parse_node(p), ())
    s: Node = ()
    while len(s) < params.d:
        child = next(n for n in range(params.b + 1) if partition[set_id(s, n)] == 0)
        s = s + (child,)
    return FailureWitness(1, s, s)


def witness_holds(tc: CoverInstance, partition: Mapping[str, int], w: FailureWitness) -> bool:
    """Check a witness against raw membership: no set of ``w.part`` contains the node."""
    return not any(partition[h.set_id] == w.part for h in tc.incidence[node_id(w.missed_node)])


@dataclass(frozen=True)
class TreeCertificate:
    params: TreeCoverParams
    total_partitions: int
    valid_witnesses: int
    part0_witnesses: int
    part1_witnesses: int

    @property
    def split_free(self) -> bool:
        return self.valid_witnesses == self.total_partitions


def _sweep_range(args) -> tuple[int, int, int]:
    tc, ids, start, stop = args
    valid = part0 = 0
    for mask in range(start, stop):
        partition = {cid: mask >> i & 1 for i, cid in enumerate(ids)}
        w = adversary_walk(tc, partition)
        if witness_holds(tc, partition, w):
            valid += 1
        part0 += w.part == 0
    return valid, part0, (stop - start) - part0


def certify_tree_cover(p: TreeCoverParams, jobs: int = 1, max_sets: int = 20) -> TreeCertificate:
    """Run :func:`adversary_walk` on every 2-partition and validate each witness.

    Partition ``mask`` puts set ``i`` (in generation order) into part 1 when
    bit ``i`` is set.  Work is sharded by contiguous mask ranges, so the
    certificate does not depend on ``jobs``.
    """
    tc = gen_tree_cover(p)
    ids = [s.id for s in tc.sets]
    if len(ids) > max_sets:
        raise ContractError(f"{len(ids)} sets exceed the exhaustive limit {max_sets}")
    total = 1 << len(ids)
    shards = max(1, min(jobs, total))
    bounds = [total * i // shards for i in range(shards + 1)]
    tasks = [(tc, ids, a, b) for a, b in zip(bounds, bounds[1:])]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_range, tasks))
    else:
        parts = [_sweep_range(t) for t in tasks]
    valid = sum(x[0] for x in parts)
    return TreeCertificate(p, total, valid, sum(x[1] for x in parts), sum(x[2] for x in parts))


def gen_indicator_cover(m: int, t: int) -> CoverInstance:
    """0/1 vectors of length ``m`` with at least ``t`` ones, covered by ``H_i = {x : x_i = 1}``."""
    if m < 2:
        raise GeometryDomainError("indicator cover needs m >= 2")
    if not 1 <= t <= ceil(m / 2):
        raise GeometryDomainError(f"t must lie in 1..{ceil(m / 2)} for m = {m}")
    points = ["".join(map(str, x)) for x in product((0, 1), repeat=m) if sum(x) >= t]
    sets = [CoverSet(f"H{i}", [x for x in points if x[i] == "1"]) for i in range(m)]
    return CoverInstance(points, sets, "indicator")


# --- planar realization ------------------------------------------------------

Point = tuple[Fraction, Fraction]
Rect = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]  # (x-range, y-range)


@dataclass
class RectScene:
    params: TreeCoverParams
    f1_points: dict[Node, Point]
    f2_points: dict[Node, Point]
    intervals: dict[Node, tuple[Fraction, Fraction]]
    rects: dict[str, Rect] = field(default_factory=dict)

    def point_of(self, node: Node) -> Point:
        return self.f1_points[node] if node in self.f1_points else self.f2_points[node]

    def points(self) -> dict[Node, Point]:
        return {**self.f1_points, **self.f2_points}


def realize_rectangles(p: TreeCoverParams) -> RectScene:
    """Exact-rational rectangle realization of the truncated tree cover.

    ``I(root) = [0, 1]``; an interval ``[u, v]`` is cut into ``2b + 1`` equal
    pieces and child ``n`` takes piece ``2n``, so siblings are separated by
    gaps, child 0 shares the left end and child ``b`` the right end.
    Internal nodes sit on the open segment from (-1, 1) to (0, 2) in
    breadth-first order; a depth-``d`` node ``s`` sits at ``(min I(s), min I(s))``.
    The rectangle of ``C(s, n)`` has upper-left corner at the point of ``s``
    and lower-right corner ``(max I(s+n), min I(s+n))``.
    """
    intervals: dict[Node, tuple[Fraction, Fraction]] = {(): (Fraction(0), Fraction(1))}
    for s in p.internal():
        u, v = intervals[s]
        w = (v - u) / (2 * p.b + 1)
        for n in range(p.b + 1):
            intervals[s + (n,)] = (u + 2 * n * w, u + (2 * n + 1) * w)
    internal = list(p.internal())
    count = len(internal)
    f1 = {}
    for rank, s in enumerate(internal, start=1):
        x = Fraction(-1) + Fraction(rank, count + 1)
        f1[s] = (x, x + 2)
    f2 = {s: (intervals[s][0], intervals[s][0]) for s in p.nodes(p.d)}
    rects = {}
    for s in internal:
        x0, y1 = f1[s]
        for n in range(p.b + 1):
            lo, hi = intervals[s + (n,)]
            rects[set_id(s, n)] = ((x0, hi), (lo, y1))
    return RectScene(p, f1, f2, intervals, rects)


def in_rect(pt: Point, r: Rect) -> bool:
    (x0, x1), (y0, y1) = r
    return x0 <= pt[0] <= x1 and y0 <= pt[1] <= y1


def realized_incidence(scene: RectScene) -> dict[str, set[Node]]:
    """Set id -> realized nodes whose point lies in the set's closed rectangle."""
    pts = scene.points()
    return {cid: {s for s, pt in pts.items() if in_rect(pt, r)} for cid, r in scene.rects.items()}


def check_incidence_isomorphism(scene: RectScene, tc: CoverInstance) -> bool:
    """True iff every rectangle meets the realized points in exactly the image of its set."""
    nodes = {parse_node(x) for x in tc.points}
    if nodes != set(scene.points()) or set(tc.set_by_id) != set(scene.rects):
        raise ContractError("scene and tree cover come from different parameters")
    inc = realized_incidence(scene)
    return all(inc[s.id] == {parse_node(x) for x in s.members} for s in tc.sets)


def realized_fold_profile(scene: RectScene) -> dict[str, int]:
    """Number of rectangles containing each realized point, keyed by node id."""
    fold = {node_id(s): 0 for s in scene.points()}
    for nodes in realized_incidence(scene).values():
        for s in nodes:
            fold[node_id(s)] += 1
    return fold


def check_interval_invariants(scene: RectScene) -> bool:
    """Sibling separation, width bound and shared endpoints, checked exactly."""
    p = scene.params
    I = scene.intervals
    for s in p.internal():
        kids = [I[s + (n,)] for n in range(p.b + 1)]
        if any(a[1] >= b[0] for a, b in zip(kids, kids[1:])):
            return False
        if any(hi - lo >= Fraction(1, 2 ** len(s)) for lo, hi in kids):
            return False
        if kids[0][0] != I[s][0] or kids[-1][1] != I[s][1]:
            return False
        if any(lo < I[s][0] or hi > I[s][1] for lo, hi in kids):
            return False
    return True


# --- SVG ---------------------------------------------------------------------

_SCALE = 240
_PAD = 20


def _fmt(x: Fraction | float) -> str:
    return f"{float(x):.4f}".rstrip("0").rstrip(".")


def export_svg(scene: RectScene) -> str:
    """Deterministic SVG: cover rectangles, realized points and the nested-interval strip."""
    p = scene.params

    def sx(x):
        return _PAD + (x + 1) * _SCALE

    def sy(y):
        return _PAD + (2 - y) * _SCALE

    strip_top = _PAD * 2 + 2 * _SCALE
    row = 14
    width = 2 * _PAD + 2 * _SCALE
    height = strip_top + row * (p.d + 1) + _PAD
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<g class="cover-rects" fill="none" stroke="#3366aa" stroke-width="0.8">',
    ]
    for cid, ((x0, x1), (y0, y1)) in scene.rects.items():
        out.append(
            f'<rect class="cover-rect" data-set="{cid}" x="{_fmt(sx(x0))}" y="{_fmt(sy(y1))}" '
            f'width="{_fmt((x1 - x0) * _SCALE)}" height="{_fmt((y1 - y0) * _SCALE)}"/>'
        )
    out.append("</g>")
    out.append('<g class="points">')
    for s, (x, y) in scene.points().items():
        color = "#aa3333" if s in scene.f1_points else "#222222"
        out.append(
            f'<circle data-node="{node_id(s)}" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="2.5" fill="{color}"/>'
        )
    out.append("</g>")
    out.append('<g class="interval-strip" stroke="#444444" stroke-width="3">')
    for s, (lo, hi) in scene.intervals.items():
        y = strip_top + row * len(s)
        out.append(
            f'<line data-node="{node_id(s)}" x1="{_fmt(sx(lo))}" y1="{y}" x2="{_fmt(sx(hi))}" y2="{y}"/>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

