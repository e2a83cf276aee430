"""Multigraph view of covers whose sets all have two elements.

The centerpiece is :func:`two_good_coloring`, which 2-colors the edges of a
finite multigraph so that every vertex of degree at least 2 sees both colors,
unless some connected component is an odd cycle.  It starts from a *seed*
that is already 2-good at its vertices (a degree-1 vertex, an even cycle, or a
dumbbell of two odd cycles) and grows the colored region one alternating path
at a time.
"""
from __future__ import annotations

import enum
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .core import CoverInstance, CoverSet, SetInstance, ShapeError, ContractError
from .oracle import SplitResult, Status


class CoverDomainError(ContractError):
    """Generator arguments outside their documented domain."""


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    mult: int = 1


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ShapeError("duplicate vertices")
        ids = set()
        for e in self.edges:
            if e.u == e.v:
                raise ShapeError(f"edge {e.id!r} is a loop")
            if e.u not in known or e.v not in known:
                raise ShapeError(f"edge {e.id!r} has an unknown endpoint")
            if e.mult < 1:
                raise ShapeError(f"edge {e.id!r} has multiplicity < 1")
            if e.id in ids:
                raise ShapeError(f"duplicate edge id {e.id!r}")
            ids.add(e.id)

    @cached_property
    def adjacency(self) -> dict[str, tuple[tuple[SetInstance, str], ...]]:
        """Vertex -> (edge-instance, other endpoint) pairs in edge order."""
        adj: dict[str, list] = {v: [] for v in self.vertices}
        for e in self.edges:
            for a in range(e.mult):
                h = SetInstance(e.id, a)
                adj[e.u].append((h, e.v))
                adj[e.v].append((h, e.u))
        return {v: tuple(x) for v, x in adj.items()}

    @cached_property
    def ends(self) -> dict[str, tuple[str, str]]:
        return {e.id: (e.u, e.v) for e in self.edges}

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> dict[str, int]:
        return {v: len(a) for v, a in self.adjacency.items()}

    @property
    def max_degree(self) -> int:
        return max(self.degrees.values(), default=0)

    @cached_property
    def pair_multiplicity(self) -> dict[frozenset, int]:
        pm: dict[frozenset, int] = {}
        for e in self.edges:
            key = frozenset((e.u, e.v))
            pm[key] = pm.get(key, 0) + e.mult
        return pm

    @property
    def mu(self) -> int:
        """Largest number of parallel edge-instances between two vertices."""
        return max(self.pair_multiplicity.values(), default=0)

    def edge_instances(self) -> list[SetInstance]:
        return [SetInstance(e.id, a) for e in self.edges for a in range(e.mult)]

    def is_regular(self, n: int) -> bool:
        return all(d == n for d in self.degrees.values())

    def components(self) -> list["Graph"]:
        seen: set[str] = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = {v}
            queue = deque([v])
            while queue:
                x = queue.popleft()
                for _, y in self.adjacency[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            out.append(self.subgraph(comp))
        return out

    def subgraph(self, vertices: Iterable[str]) -> "Graph":
        keep = set(vertices)
        return Graph(
            [v for v in self.vertices if v in keep],
            [e for e in self.edges if e.u in keep and e.v in keep],
        )

    def to_instance(self) -> CoverInstance:
        return CoverInstance(
            self.vertices, [CoverSet(e.id, (e.u, e.v), e.mult) for e in self.edges], "graph"
        )

    def to_dot(self) -> str:
        """Graphviz rendering; parallel edge-instances are drawn separately."""
        lines = ["graph G {"]
        lines += [f'  "{v}";' for v in self.vertices]
        for e in self.edges:
            for a in range(e.mult):
                lines.append(f'  "{e.u}" -- "{e.v}" [label="{e.id}#{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def to_graph(inst: CoverInstance) -> Graph:
    """Read a cover whose sets are all 2-element as a loopless multigraph."""
    for s in inst.sets:
        if len(s.members) != 2:
            raise ShapeError(
                f"set {s.id!r} has {len(s.members)} members; graph covers need exactly 2"
            )
    return Graph(inst.points, [Edge(s.id, s.members[0], s.members[1], s.mult) for s in inst.sets])


def graph_from_pairs(pairs: Sequence[tuple[str, str]], vertices: Sequence[str] | None = None) -> Graph:
    """Build a graph from an endpoint list; each pair becomes its own edge ``e0, e1, ...``."""
    if vertices is None:
        vertices = list(dict.fromkeys(v for pair in pairs for v in pair))
    return Graph(vertices, [Edge(f"e{i}", u, v) for i, (u, v) in enumerate(pairs)])


def gen_complete(n: int) -> Graph:
    """The complete graph K_n on ``v0 .. v{n-1}``."""
    if n < 2:
        raise CoverDomainError("K_n needs n >= 2")
    names = [f"v{i}" for i in range(n)]
    return Graph(names, [Edge(f"e{i}_{j}", names[i], names[j]) for i, j in combinations(range(n), 2)])


def _k_minus_pairs(n: int) -> list[tuple[int, int]]:
    """Index pairs of K_n with {0, n-1} and {2i, 2i+1} (i < (n-1)/2) deleted; n odd."""
    deleted = {(0, n - 1)} | {(2 * i, 2 * i + 1) for i in range((n - 1) // 2)}
    return [p for p in combinations(range(n), 2) if p not in deleted]


def gen_dumbbell_Dn(n: int) -> Graph:
    """Two copies of K^-_{n+2} joined by the bridge {v0, v0'}; n-regular for odd n >= 3."""
    if n < 3 or n % 2 == 0:
        raise CoverDomainError("D_n is defined for odd n >= 3")
    m = n + 2
    left = [f"v{i}" for i in range(m)]
    right = [f"v{i}'" for i in range(m)]
    edges = []
    for names, tag in ((left, ""), (right, "'")):
        edges += [Edge(f"e{i}_{j}{tag}", names[i], names[j]) for i, j in _k_minus_pairs(m)]
    edges.append(Edge("bridge", left[0], right[0]))
    return Graph(left + right, edges)


def check_gupta_precondition(g: Graph, X: Iterable[str], n: int) -> bool:
    """True iff every vertex of ``X`` has degree at least ``n + mu(G)``."""
    bound = n + g.mu
    return all(g.degrees[x] >= bound for x in X)


# --- seeds ---------------------------------------------------------------

class SeedKind(str, enum.Enum):
    DEGREE1 = "degree1"
    EVEN_CYCLE = "even_cycle"
    DUMBBELL = "dumbbell"


@dataclass(frozen=True)
class Walk:
    """``vertices[i]`` and ``vertices[i+1]`` are the ends of ``edges[i]``."""

    vertices: tuple[str, ...]
    edges: tuple[SetInstance, ...]

    @property
    def closed(self) -> bool:
        return len(self.edges) > 0 and self.vertices[0] == self.vertices[-1]

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Seed:
    kind: SeedKind
    vertex: str | None = None
    walk: Walk | None = None
    cycles: tuple[Walk, ...] = ()
    path: Walk | None = None

    @property
    def vertices(self) -> tuple[str, ...]:
        if self.kind is SeedKind.DEGREE1:
            return (self.vertex,)
        return tuple(dict.fromkeys(self.walk.vertices))

    def coloring(self) -> dict[SetInstance, int]:
        """Alternating coloring along the seed walk, starting with color 0."""
        if self.walk is None:
            return {}
        return {h: i % 2 for i, h in enumerate(self.walk.edges)}


class _OddCycleComponent:
    def __repr__(self):
        return "ODD_CYCLE"


ODD_CYCLE = _OddCycleComponent()


def is_odd_cycle(g: Graph) -> bool:
    """Connected, simple, 2-regular, odd number of vertices."""
    n = len(g.vertices)
    if n < 3 or n % 2 == 0 or len(g.components()) != 1:
        return False
    return g.mu == 1 and g.is_regular(2)


def _blocks(g: Graph) -> list[list[SetInstance]]:
    """Biconnected components as lists of edge-instances (parallel copies distinct)."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    blocks: list[list[SetInstance]] = []
    stack: list[SetInstance] = []
    counter = 0
    for root in g.vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        # frames: (vertex, edge used to enter, iterator over adjacency)
        frames = [(root, None, iter(g.adjacency[root]))]
        while frames:
            v, via, it = frames[-1]
            advanced = False
            for h, w in it:
                if h == via:
                    continue
                if w not in index:
                    stack.append(h)
                    index[w] = low[w] = counter
                    counter += 1
                    frames.append((w, h, iter(g.adjacency[w])))
                    advanced = True
                    break
                if index[w] < index[v]:
                    stack.append(h)
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            frames.pop()
            if frames:
                parent = frames[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    block = []
                    while True:
                        h = stack.pop()
                        block.append(h)
                        if h == via:
                            break
                    blocks.append(block[::-1])
    return blocks


def _block_vertices(g: Graph, block: Sequence[SetInstance]) -> list[str]:
    seen: dict[str, None] = {}
    for h in block:
        u, v = g.ends[h.set_id]
        seen.setdefault(u)
        seen.setdefault(v)
    return list(seen)


def _cycle_walk(g: Graph, block: Sequence[SetInstance], start: str | None = None) -> Walk:
    """Walk around a block that is a single cycle, from ``start`` (default: its first vertex)."""
    inc: dict[str, list[tuple[SetInstance, str]]] = {}
    for h in block:
        u, v = g.ends[h.set_id]
        inc.setdefault(u, []).append((h, v))
        inc.setdefault(v, []).append((h, u))
    if start is None:
        start = min(inc, key=g.vertices.index)
    verts, edges = [start], []
    used: set[SetInstance] = set()
    cur = start
    for _ in range(len(block)):
        h, nxt = next((h, w) for h, w in sorted(inc[cur], key=lambda t: t[0]) if h not in used)
        used.add(h)
        edges.append(h)
        verts.append(nxt)
        cur = nxt
    return Walk(tuple(verts), tuple(edges))


def _even_cycle_in_block(g: Graph, block: Sequence[SetInstance]) -> Walk | None:
    verts = _block_vertices(g, block)
    if len(block) == 1:
        return None
    if len(block) == len(verts):
        return _cycle_walk(g, block) if len(block) % 2 == 0 else None
    # Not a cycle: find a cycle C and an ear P; two of the three paths between
    # the ear's ends have equal parity and close an even cycle.
    in_block = set(block)
    inc: dict[str, list[tuple[SetInstance, str]]] = {v: [] for v in verts}
    for v in verts:
        inc[v] = [(h, w) for h, w in g.adjacency[v] if h in in_block]
    cycle = _some_cycle(inc, verts[0])
    if len(cycle) % 2 == 0:
        return cycle
    cyc_vertices = list(cycle.vertices[:-1])
    on_cycle = set(cyc_vertices)
    cyc_edges = set(cycle.edges)
    ear = None
    for c in cyc_vertices:
        for h, w in inc[c]:
            if h in cyc_edges:
                continue
            if w in on_cycle:
                ear = Walk((c, w), (h,))
            else:
                ear = _ear_from(inc, c, h, w, on_cycle)
            break
        if ear is not None:
            break
    x, y = ear.vertices[0], ear.vertices[-1]
    i, j = cyc_vertices.index(x), cyc_vertices.index(y)
    rotated = _rotate(cycle, i)
    j = (j - i) % len(cyc_vertices)
    arc1 = Walk(rotated.vertices[: j + 1], rotated.edges[:j])
    arc2_len = len(cycle) - j
    if len(arc1) % 2 == len(ear) % 2:
        arc = arc1
    else:
        # Reverse arc: from x the other way round to y.
        rev_v = rotated.vertices[::-1]
        rev_e = rotated.edges[::-1]
        arc = Walk(rev_v[: arc2_len + 1], rev_e[:arc2_len])
    back = Walk(ear.vertices[::-1], ear.edges[::-1])
    return Walk(arc.vertices + back.vertices[1:], arc.edges + back.edges)


def _rotate(cycle: Walk, i: int) -> Walk:
    n = len(cycle)
    vs = cycle.vertices[:-1]
    verts = vs[i:] + vs[:i]
    edges = cycle.edges[i:] + cycle.edges[:i]
    return Walk(verts + (verts[0],), edges)


def _some_cycle(inc, start: str) -> Walk:
    """Cycle closed by the first back edge met during a depth-first search."""
    visited = {start}
    stack = [(start, None, iter(inc[start]))]
    while stack:
        v, via, it = stack[-1]
        for h, w in it:
            if h == via:
                continue
            if w in visited:
                chain = [x for x, _, _ in stack]
                i = chain.index(w)
                verts = tuple(chain[i:]) + (w,)
                edges = tuple(e for _, e, _ in stack[i + 1:]) + (h,)
                return Walk(verts, edges)
            visited.add(w)
            stack.append((w, h, iter(inc[w])))
            break
        else:
            stack.pop()
    raise AssertionError("block without a cycle")  # pragma: no cover


def _ear_from(inc, c: str, h: SetInstance, z: str, on_cycle: set[str]) -> Walk:
    """Path c -h- z -> ... -> (cycle vertex != c) with interior off the cycle."""
    prev: dict[str, tuple[str, SetInstance] | None] = {z: None}
    queue = deque([z])
    while queue:
        x = queue.popleft()
        for h2, w in inc[x]:
            if w == c or w in prev:
                continue
            prev[w] = (x, h2)
            if w in on_cycle:
                verts, edges = [w], []
                cur = w
                while prev[cur] is not None:
                    p, e = prev[cur]
                    edges.append(e)
                    verts.append(p)
                    cur = p
                verts.append(c)
                edges.append(h)
                return Walk(tuple(verts[::-1]), tuple(edges[::-1]))
            queue.append(w)
    raise AssertionError("block is not 2-connected")  # pragma: no cover


def find_seed(component: Graph) -> Seed | _OddCycleComponent:
    """Seed of a connected graph, in priority order degree-1 vertex, even cycle, dumbbell.

    Returns :data:`ODD_CYCLE` when the component is itself an odd cycle.
    Even cycles are found through the block structure: a component has no
    even cycle exactly when each of its blocks is a single edge or an odd
    cycle.  A pair of parallel edge-instances is an even cycle of length 2.
    """
    g = component
    if not g.edges:
        raise ContractError("component has no edges")
    for v in g.vertices:
        if g.degrees[v] == 1:
            return Seed(SeedKind.DEGREE1, vertex=v)
    for e in g.edges:
        if e.mult >= 2:
            walk = Walk((e.u, e.v, e.u), (SetInstance(e.id, 0), SetInstance(e.id, 1)))
            return Seed(SeedKind.EVEN_CYCLE, walk=walk)
    parallel = {}
    for e in g.edges:
        key = frozenset((e.u, e.v))
        if key in parallel:
            first = parallel[key]
            walk = Walk((e.u, e.v, e.u), (SetInstance(e.id, 0), SetInstance(first.id, 0)))
            return Seed(SeedKind.EVEN_CYCLE, walk=walk)
        parallel[key] = e
    blocks = _blocks(g)
    for block in blocks:
        walk = _even_cycle_in_block(g, block)
        if walk is not None:
            return Seed(SeedKind.EVEN_CYCLE, walk=walk)
    if is_odd_cycle(g):
        return ODD_CYCLE
    return _dumbbell(g, [b for b in blocks if len(b) > 1])


def _dumbbell(g: Graph, cycle_blocks: list[list[SetInstance]]) -> Seed:
    pos = {v: i for i, v in enumerate(g.vertices)}
    vsets = [set(_block_vertices(g, b)) for b in cycle_blocks]
    order = sorted(range(len(cycle_blocks)), key=lambda i: sorted(pos[v] for v in vsets[i]))
    first = order[0]
    c1 = vsets[first]
    others = {v: i for i in order[1:] for v in vsets[i]}
    # Length-0 path: another cycle through a vertex of the first cycle.
    shared = sorted((v for v in c1 if v in others), key=pos.get)
    if shared:
        w = shared[0]
        path = Walk((w,), ())
        second = others[w]
    else:
        c1_edges = set(cycle_blocks[first])
        prev: dict[str, tuple[str, SetInstance] | None] = {v: None for v in sorted(c1, key=pos.get)}
        queue = deque(prev)
        end = None
        while queue and end is None:
            x = queue.popleft()
            for h, y in g.adjacency[x]:
                if h in c1_edges or y in prev:
                    continue
                prev[y] = (x, h)
                if y in others:
                    end = y
                    break
                queue.append(y)
        verts, edges = [end], []
        cur = end
        while prev[cur] is not None:
            p, h = prev[cur]
            edges.append(h)
            verts.append(p)
            cur = p
        path = Walk(tuple(verts[::-1]), tuple(edges[::-1]))
        w = path.vertices[0]
        second = others[end]
    cyc1 = _cycle_walk(g, cycle_blocks[first], start=w)
    cyc2 = _cycle_walk(g, cycle_blocks[second], start=path.vertices[-1])
    walk = Walk(
        cyc1.vertices + path.vertices[1:] + cyc2.vertices[1:],
        cyc1.edges + path.edges + cyc2.edges,
    )
    return Seed(SeedKind.DUMBBELL, walk=walk, cycles=(cyc1, cyc2), path=path)


# --- constructive 2-good coloring ------------------------------------------

def _extend(g: Graph, seed: Seed) -> dict[SetInstance, int]:
    """Grow the seed coloring by alternating paths until every edge is colored."""
    coloring = seed.coloring()
    region = dict.fromkeys(seed.vertices)
    while True:
        start = None
        for u in region:
            for h, v in g.adjacency[u]:
                if h not in coloring and v not in region:
                    start = (u, h, v)
                    break
            if start:
                break
        if start is None:
            break
        u, h, v = start
        path_edges = [h]
        on_path = {u, v}
        path_vertices = [u, v]
        used = {h}
        cur = v
        while cur not in region:
            nxt = next(((h2, w) for h2, w in g.adjacency[cur] if h2 not in coloring and h2 not in used), None)
            if nxt is None:
                break  # degree-1 end
            h2, w = nxt
            used.add(h2)
            path_edges.append(h2)
            path_vertices.append(w)
            if w in on_path:
                break
            on_path.add(w)
            cur = w
        for i, e in enumerate(path_edges):
            coloring[e] = i % 2
        for x in path_vertices:
            region.setdefault(x)
    # Edges inside the region: both ends already see both colors (or are
    # degree-1), so any color keeps the coloring 2-good.
    for h in g.edge_instances():
        coloring.setdefault(h, 0)
    return coloring


def two_good_coloring(g: Graph) -> SplitResult:
    """2-good edge coloring of ``g``, or an odd-cycle component as witness."""
    coloring: dict[SetInstance, int] = {}
    for comp in g.components():
        if not comp.edges:
            continue
        seed = find_seed(comp)
        if seed is ODD_CYCLE:
            return SplitResult(
                Status.INFEASIBLE,
                witness={"reason": "odd_cycle", "vertices": list(comp.vertices),
                         "edges": [e.id for e in comp.edges]},
            )
        coloring.update(_extend(comp, seed))
    return SplitResult(Status.FEASIBLE, coloring=coloring)


# --- random generators -----------------------------------------------------

def random_multigraph(rng: random.Random, max_vertices: int = 8, max_edges: int = 30,
                      max_mult: int = 3) -> Graph:
    """Random loopless multigraph; isolated vertices and several components allowed."""
    n = rng.randint(2, max_vertices)
    names = [f"v{i}" for i in range(n)]
    budget = rng.randint(1, max_edges)
    edges = []
    used = 0
    while used < budget:
        u, v = rng.sample(range(n), 2)
        m = min(rng.randint(1, max_mult), budget - used)
        edges.append(Edge(f"e{len(edges)}", names[u], names[v], m))
        used += m
    return Graph(names, edges)


def random_gupta_graph(rng: random.Random, n: int, max_vertices: int = 12,
                       max_mult: int = 3) -> tuple[Graph, list[str]]:
    """Random multigraph with a vertex set X meeting d(x) >= n + mu(G).

    Edges are drawn with multiplicity at most ``mu``; vertices of X short of
    the bound then receive extra parallel copies up to ``mu`` until they
    meet it, so mu(G) never grows during repair.
    """
    mu = rng.randint(1, max_mult)
    lo = max(3, (n + mu) // mu + 2)
    nv = rng.randint(lo, max(lo, max_vertices))
    names = [f"v{i}" for i in range(nv)]
    mult: dict[tuple[int, int], int] = {}
    for _ in range(rng.randint(nv, 2 * nv)):
        i, j = sorted(rng.sample(range(nv), 2))
        mult[(i, j)] = min(mu, mult.get((i, j), 0) + rng.randint(1, mu))
    i, j = sorted(rng.sample(range(nv), 2))
    mult[(i, j)] = mu
    X = sorted(rng.sample(range(nv), rng.randint(1, nv)))
    degree = [0] * nv
    for (i, j), m in mult.items():
        degree[i] += m
        degree[j] += m
    for x in X:
        while degree[x] < n + mu:
            options = [y for y in range(nv) if y != x and mult.get(tuple(sorted((x, y))), 0) < mu]
            y = rng.choice(options)
            key = tuple(sorted((x, y)))
            mult[key] = mult.get(key, 0) + 1
            degree[x] += 1
            degree[y] += 1
    edges = [Edge(f"e{i}_{j}", names[i], names[j], m) for (i, j), m in sorted(mult.items())]
    return Graph(names, edges), [names[x] for x in X]
