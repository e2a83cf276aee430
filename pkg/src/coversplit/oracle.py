"""Exact decision procedures used as ground truth by the algorithm modules.

:func:`exact_split` decides whether a cover has a k-good coloring over a
point set by backtracking with unit propagation.  :func:`enumerate_partitions_check`
walks every 2-partition of the set-instances and records why each one fails
to give two covers.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import (
    ContractError,
    CoverInstance,
    SetInstance,
    coverage_profile,
    verify_coloring,
)


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class SplitResult:
    status: Status
    coloring: dict[SetInstance, int] | None = None
    witness: dict | None = None
    nodes: int = 0

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


DEFAULT_BUDGET = 2_000_000


class _Conflict(Exception):
    pass


class _Budget(Exception):
    pass


class _Problem:
    """Bitmask encoding of a k-good coloring search.

    Variables are set-instances; the domain of a variable is a bitmask over
    colors ``0..k-1`` plus a spare value ``k`` meaning "left uncolored".  A
    variable is assigned once its domain is a single bit.
    """

    def __init__(self, inst: CoverInstance, k: int, points: Iterable[str] | None):
        self.k = k
        self.colors = (1 << k) - 1
        self.spare = 1 << k
        targets = inst.points if points is None else list(points)
        for p in targets:
            if p not in inst.point_index:
                raise ContractError(f"unknown point {p!r}")
        size = {s.id: len(s.members) for s in inst.sets}
        self.order = sorted(inst.instances, key=lambda h: (-size[h.set_id], h.set_id, h.copy))
        index = {h: i for i, h in enumerate(self.order)}
        self.n = len(self.order)
        constrained = [p for p in dict.fromkeys(targets) if len(inst.incidence[p]) >= k]
        self.points = constrained
        self.pvars = [tuple(sorted(index[h] for h in inst.incidence[p])) for p in constrained]
        touching = set(v for vs in self.pvars for v in vs)
        full = self.colors | self.spare
        self.initial = [full if i in touching else self.spare for i in range(self.n)]

    def propagate(self, dom: list[int]) -> None:
        k, colors = self.k, self.colors
        changed = True
        while changed:
            changed = False
            for vs in self.pvars:
                sat = 0
                free = []
                for v in vs:
                    d = dom[v]
                    if d & (d - 1):
                        free.append(v)
                    else:
                        sat |= d
                missing = colors & ~sat
                if not missing:
                    continue
                need = bin(missing).count("1")
                if need > len(free):
                    raise _Conflict
                for j in range(k):
                    bit = 1 << j
                    if not missing & bit:
                        continue
                    support = [v for v in free if dom[v] & bit]
                    if not support:
                        raise _Conflict
                    if len(support) == 1 and dom[support[0]] != bit:
                        dom[support[0]] = bit
                        changed = True
                if need == len(free):
                    for v in free:
                        d = dom[v] & missing
                        if not d:
                            raise _Conflict
                        if d != dom[v]:
                            dom[v] = d
                            changed = True
                if changed:
                    break

    def done(self, dom: list[int]) -> bool:
        for vs in self.pvars:
            sat = 0
            for v in vs:
                d = dom[v]
                if not d & (d - 1):
                    sat |= d
            if self.colors & ~sat:
                return False
        return True

    def branch_values(self, dom: list[int], var: int) -> list[int]:
        """Candidate values for ``var``: colors ascending, spare last.

        Colors not yet used by any assigned variable are interchangeable, so
        only the smallest of them is tried.
        """
        used = 0
        for d in dom:
            if d and not d & (d - 1):
                used |= d
        used &= self.colors
        vals = []
        fresh_tried = False
        for j in range(self.k):
            bit = 1 << j
            if not dom[var] & bit:
                continue
            if not used & bit:
                if fresh_tried:
                    continue
                fresh_tried = True
            vals.append(bit)
        if dom[var] & self.spare:
            vals.append(self.spare)
        return vals

    def next_var(self, dom: list[int]) -> int | None:
        for i, d in enumerate(dom):
            if d & (d - 1):
                return i
        return None

    def root(self) -> list[int]:
        dom = list(self.initial)
        self.propagate(dom)
        return dom

    def to_coloring(self, dom: list[int]) -> dict[SetInstance, int]:
        out = {}
        for i, d in enumerate(dom):
            if d & self.colors and not d & (d - 1):
                out[self.order[i]] = d.bit_length() - 1
        return out


class _Search:
    def __init__(self, problem: _Problem, budget: int):
        self.p = problem
        self.budget = budget
        self.nodes = 0

    def run(self, dom: list[int]) -> list[int] | None:
        p = self.p
        if p.done(dom):
            return dom
        var = p.next_var(dom)
        if var is None:
            return None
        for val in p.branch_values(dom, var):
            if self.nodes >= self.budget:
                raise _Budget
            self.nodes += 1
            child = list(dom)
            child[var] = val
            try:
                p.propagate(child)
            except _Conflict:
                continue
            found = self.run(child)
            if found is not None:
                return found
        return None


def _run_subtree(args):
    problem, dom, var, val, budget = args
    search = _Search(problem, budget)
    search.nodes = 1
    child = list(dom)
    child[var] = val
    try:
        problem.propagate(child)
        found = search.run(child)
    except _Conflict:
        found = None
    except _Budget:
        return "budget", None, search.nodes
    if found is None:
        return "exhausted", None, search.nodes
    return "found", found, search.nodes


def exact_split(
    inst: CoverInstance,
    k: int,
    points: Iterable[str] | None = None,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> SplitResult:
    """Decide whether ``inst`` has a k-good coloring over ``points``.

    The search is complete: it returns ``FEASIBLE`` with a verified coloring
    iff one exists, ``INFEASIBLE`` once the search space is exhausted, and
    ``BUDGET_EXCEEDED`` when more than ``budget`` decision nodes would be
    needed.  With ``jobs > 1`` the subtrees below the first decision are
    searched in worker processes; verdict, coloring and node count do not
    depend on ``jobs``.
    """
    if k < 1:
        raise ContractError("k must be >= 1")
    if budget < 1:
        raise ContractError("budget must be >= 1")
    problem = _Problem(inst, k, points)
    try:
        dom = problem.root()
    except _Conflict:
        return SplitResult(Status.INFEASIBLE, witness=_root_witness(inst, problem), nodes=0)
    if problem.done(dom):
        return _feasible(inst, problem, dom, 0, points)
    var = problem.next_var(dom)
    vals = problem.branch_values(dom, var)

    tasks = [(problem, dom, var, val, budget) for val in vals]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_subtree, tasks))
    else:
        outcomes = []
        spent = 0
        for task in tasks:
            outcome = _run_subtree(task[:4] + (budget - spent,))
            outcomes.append(outcome)
            if outcome[0] != "exhausted":
                break
            spent += outcome[2]

    spent = 0
    for tag, found, nodes in outcomes:
        if tag == "budget" or spent + nodes > budget:
            return SplitResult(Status.BUDGET_EXCEEDED, witness={"reason": "budget"}, nodes=budget)
        spent += nodes
        if tag == "found":
            return _feasible(inst, problem, found, spent, points)
    return SplitResult(Status.INFEASIBLE, witness={"reason": "exhausted"}, nodes=spent)


def _feasible(inst, problem, dom, nodes, points) -> SplitResult:
    coloring = problem.to_coloring(dom)
    report = verify_coloring(inst, coloring, problem.k, points)
    if not report.ok:  # pragma: no cover - soundness guard
        raise AssertionError(f"oracle produced a non-good coloring: {report}")
    return SplitResult(Status.FEASIBLE, coloring=coloring, nodes=nodes)


def _root_witness(inst: CoverInstance, problem: _Problem) -> dict:
    fold = coverage_profile(inst)
    bad = [p for p, vs in zip(problem.points, problem.pvars) if len(vs) < problem.k]
    if bad:
        return {"reason": "fold", "points": bad, "folds": [fold[p] for p in bad]}
    return {"reason": "propagation"}


# --- exhaustive 2-partition certification ----------------------------------

DEFAULT_PARTITION_LIMIT = 16
PARTITION_HARD_CAP = 24
_CHUNK = 1 << 16


@dataclass
class IndecomposabilityCertificate:
    total_partitions: int
    failing_partitions: int
    exhaustive: bool
    instances: tuple[SetInstance, ...] = ()
    splitting_partition: int | None = None
    failures: list[tuple[int, int, str]] | None = field(default=None, repr=False)

    @property
    def split_free(self) -> bool:
        """True iff no 2-partition gives two covers of the covered points."""
        return self.exhaustive and self.failing_partitions == self.total_partitions

    def parts(self, mask: int) -> tuple[list[SetInstance], list[SetInstance]]:
        """Decode a partition index: bit i set puts instance i in part 1."""
        part0 = [h for i, h in enumerate(self.instances) if not mask >> i & 1]
        part1 = [h for i, h in enumerate(self.instances) if mask >> i & 1]
        return part0, part1


def enumerate_partitions_check(
    inst: CoverInstance,
    limit: int = DEFAULT_PARTITION_LIMIT,
    audit: bool = False,
) -> IndecomposabilityCertificate:
    """Examine every 2-partition of the set-instances of ``inst``.

    Partition ``mask`` puts instance ``i`` (in :func:`expand_multiplicity`
    order) into part 1 when bit ``i`` is set.  A partition fails when some
    covered point is missed by one of the parts.  In audit mode the first
    such point (in point order), and which part missed it, is stored per
    partition as ``(mask, part, point)``.
    """
    limit = min(limit, PARTITION_HARD_CAP)
    instances = inst.instances
    n = len(instances)
    if n > limit:
        raise ContractError(
            f"{n} set-instances exceed the partition limit {limit}; use exact_split with k=2"
        )
    index = {h: i for i, h in enumerate(instances)}
    covered = [p for p in inst.points if inst.incidence[p]]
    pmasks = np.array(
        [sum(1 << index[h] for h in inst.incidence[p]) for p in covered], dtype=np.int64
    )
    full = (1 << n) - 1
    total = 1 << n
    failing = 0
    splitting = None
    failures: list[tuple[int, int, str]] | None = [] if audit else None
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        if len(pmasks):
            miss1 = (masks[:, None] & pmasks[None, :]) == 0
            miss0 = ((full ^ masks)[:, None] & pmasks[None, :]) == 0
            either = miss0 | miss1
            fails = either.any(axis=1)
        else:
            fails = np.zeros(len(masks), dtype=bool)
        failing += int(fails.sum())
        if splitting is None and not fails.all():
            splitting = int(masks[np.argmin(fails)])
        if audit:
            first = np.argmax(either, axis=1) if len(pmasks) else None
            for row in np.flatnonzero(fails):
                j = int(first[row])
                part = 0 if miss0[row, j] else 1
                failures.append((int(masks[row]), part, covered[j]))
    return IndecomposabilityCertificate(
        total_partitions=total,
        failing_partitions=failing,
        exhaustive=True,
        instances=instances,
        splitting_partition=splitting,
        failures=failures,
    )
