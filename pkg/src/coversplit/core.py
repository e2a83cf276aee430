"""Cover and coloring data model shared by every other module.

A cover is a finite point universe together with a family of sets, each
carrying a positive multiplicity.  Every copy of a set is a separate
*set-instance* ``(set_id, copy)``; colorings are partial maps from
set-instances to non-negative integers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

KINDS = ("generic", "graph", "interval", "tree", "indicator")
MAX_MULT = 2 ** 16


class CoverError(ValueError):
    """Base class for all errors raised by this package."""


class ParseError(CoverError):
    """A document is not well-formed; ``locus`` names the offending line or field."""

    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)


class ValidationError(CoverError):
    """A document parsed but violates an instance invariant."""


class ShapeError(CoverError):
    """An instance does not have the shape an algorithm requires."""


class ContractError(CoverError):
    """A precondition of an operation does not hold."""

    def __init__(self, message: str, report: "VerifyReport | None" = None):
        self.report = report
        super().__init__(message)


class SetInstance(NamedTuple):
    set_id: str
    copy: int = 0


Coloring = dict  # SetInstance -> int; colorings are partial


@dataclass(frozen=True)
class CoverSet:
    id: str
    members: tuple[str, ...]
    mult: int = 1

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class CoverInstance:
    points: tuple[str, ...]
    sets: tuple[CoverSet, ...]
    kind: str = "generic"

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "sets", tuple(self.sets))
        _validate(self)

    @cached_property
    def point_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def set_by_id(self) -> dict[str, CoverSet]:
        return {s.id: s for s in self.sets}

    @cached_property
    def instances(self) -> tuple[SetInstance, ...]:
        return tuple(expand_multiplicity(self))

    @cached_property
    def incidence(self) -> dict[str, tuple[SetInstance, ...]]:
        """Point -> set-instances containing it (the family H(x))."""
        inc: dict[str, list[SetInstance]] = {p: [] for p in self.points}
        for s in self.sets:
            for p in s.members:
                inc[p].extend(SetInstance(s.id, a) for a in range(s.mult))
        return {p: tuple(v) for p, v in inc.items()}

    @property
    def size(self) -> int:
        """Number of set-instances."""
        return sum(s.mult for s in self.sets)


def _validate(inst: CoverInstance) -> None:
    if inst.kind not in KINDS:
        raise ValidationError(f"unknown kind {inst.kind!r}")
    if len(set(inst.points)) != len(inst.points):
        raise ValidationError("duplicate point identifiers")
    known = set(inst.points)
    seen: set[str] = set()
    for s in inst.sets:
        if s.id in seen:
            raise ValidationError(f"duplicate set id {s.id!r}")
        seen.add(s.id)
        if isinstance(s.mult, bool) or not isinstance(s.mult, int) or s.mult < 1:
            raise ValidationError(f"set {s.id!r}: multiplicity must be an integer >= 1")
        if s.mult > MAX_MULT:
            raise ValidationError(f"set {s.id!r}: multiplicity {s.mult} exceeds {MAX_MULT}")
        if len(set(s.members)) != len(s.members):
            raise ValidationError(f"set {s.id!r}: duplicate members")
        missing = [p for p in s.members if p not in known]
        if missing:
            raise ValidationError(f"set {s.id!r}: unknown points {missing}")


def expand_multiplicity(inst: CoverInstance) -> list[SetInstance]:
    """All set-instances, in set order and then copy index ascending."""
    return [SetInstance(s.id, a) for s in inst.sets for a in range(s.mult)]


def coverage_profile(inst: CoverInstance) -> dict[str, int]:
    """Fold of every point: the number of set-instances containing it."""
    fold = dict.fromkeys(inst.points, 0)
    for s in inst.sets:
        for p in s.members:
            fold[p] += s.mult
    return fold


def min_fold(inst: CoverInstance, points: Iterable[str] | None = None) -> int:
    fold = coverage_profile(inst)
    vals = [fold[p] for p in (inst.points if points is None else points)]
    return min(vals) if vals else 0


@dataclass(frozen=True)
class Violation:
    point: str
    fold: int
    missing: tuple[int, ...]


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)


def verify_coloring(
    inst: CoverInstance,
    coloring: Mapping[SetInstance, int],
    k: int,
    points: Iterable[str] | None = None,
) -> VerifyReport:
    """Check that ``coloring`` is k-good over ``points`` (default: all points).

    A point is constrained only when its fold is at least ``k``; it then has
    to see every color ``0..k-1`` among the set-instances that contain it.
    Colors ``>= k`` are allowed and ignored.
    """
    if k < 1:
        raise ContractError("k must be >= 1")
    valid = set(inst.instances)
    for key, color in coloring.items():
        if SetInstance(*key) not in valid:
            raise ContractError(f"coloring references unknown set-instance {tuple(key)}")
        if isinstance(color, bool) or not isinstance(color, int) or color < 0:
            raise ContractError(f"color of {tuple(key)} must be a non-negative integer")
    coloring = {SetInstance(*key): c for key, c in coloring.items()}
    targets = inst.points if points is None else list(points)
    violations = []
    for p in targets:
        if p not in inst.point_index:
            raise ContractError(f"unknown point {p!r}")
        hx = inst.incidence[p]
        if len(hx) < k:
            continue
        seen = {coloring[h] for h in hx if h in coloring}
        missing = tuple(j for j in range(k) if j not in seen)
        if missing:
            violations.append(Violation(p, len(hx), missing))
    return VerifyReport(not violations, tuple(violations))


def verify_all_k(
    inst: CoverInstance,
    coloring: Mapping[SetInstance, int],
    points: Iterable[str] | None = None,
) -> dict[int, VerifyReport]:
    """Run :func:`verify_coloring` for every k from 1 to the largest fold in ``points``."""
    targets = inst.points if points is None else list(points)
    fold = coverage_profile(inst)
    top = max((fold[p] for p in targets), default=0)
    return {k: verify_coloring(inst, coloring, k, targets) for k in range(1, top + 1)}


def decompose_components(inst: CoverInstance) -> list[CoverInstance]:
    """Split ``inst`` along the equivalence relation generated by co-membership.

    Components come in order of their first point.  Uncovered points become
    components without sets; empty sets, which touch no point, are collected
    in one trailing component with no points.
    """
    parent = {p: p for p in inst.points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for s in inst.sets:
        for a, b in zip(s.members, s.members[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

    order: dict[str, int] = {}
    groups: list[list[str]] = []
    for p in inst.points:
        r = find(p)
        if r not in order:
            order[r] = len(groups)
            groups.append([])
        groups[order[r]].append(p)
    set_groups: list[list[CoverSet]] = [[] for _ in groups]
    empties = []
    for s in inst.sets:
        if s.members:
            set_groups[order[find(s.members[0])]].append(s)
        else:
            empties.append(s)
    out = [CoverInstance(g, sg, inst.kind) for g, sg in zip(groups, set_groups)]
    if empties:
        out.append(CoverInstance((), empties, inst.kind))
    return out


def restrict(inst: CoverInstance, points: Iterable[str]) -> CoverInstance:
    """Restrict the cover to ``points``; sets keep their ids and multiplicities.

    Sets meeting ``points`` in nothing are dropped.  Two sets may end up with
    equal members; they stay distinct.
    """
    keep = set(points)
    unknown = keep - set(inst.points)
    if unknown:
        raise ContractError(f"restriction to unknown points {sorted(unknown)}")
    new_points = [p for p in inst.points if p in keep]
    new_sets = []
    for s in inst.sets:
        members = [p for p in s.members if p in keep]
        if members:
            new_sets.append(CoverSet(s.id, members, s.mult))
    kind = inst.kind
    if kind == "graph" and any(len(s.members) != 2 for s in new_sets):
        kind = "generic"
    elif kind in ("tree", "indicator"):
        kind = "generic"
    return CoverInstance(new_points, new_sets, kind)


# --- documents -------------------------------------------------------------

def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n"


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _expect(cond: bool, message: str, locus: str):
    if not cond:
        raise ParseError(message, locus)


def instance_to_dict(inst: CoverInstance) -> dict:
    return {
        "kind": inst.kind,
        "points": list(inst.points),
        "sets": [{"id": s.id, "members": list(s.members), "mult": s.mult} for s in inst.sets],
    }


def instance_from_dict(doc) -> CoverInstance:
    _expect(isinstance(doc, dict), "instance document must be an object", "$")
    extra = set(doc) - {"kind", "points", "sets"}
    _expect(not extra, f"unknown fields {sorted(extra)}", "$")
    kind = doc.get("kind", "generic")
    _expect(isinstance(kind, str), "must be a string", "kind")
    points = doc.get("points")
    _expect(isinstance(points, list), "must be a list", "points")
    for i, p in enumerate(points):
        _expect(isinstance(p, str), "point identifiers must be strings", f"points[{i}]")
    raw_sets = doc.get("sets")
    _expect(isinstance(raw_sets, list), "must be a list", "sets")
    sets = []
    for i, s in enumerate(raw_sets):
        loc = f"sets[{i}]"
        _expect(isinstance(s, dict), "must be an object", loc)
        extra = set(s) - {"id", "members", "mult"}
        _expect(not extra, f"unknown fields {sorted(extra)}", loc)
        _expect(isinstance(s.get("id"), str), "must be a string", f"{loc}.id")
        members = s.get("members")
        _expect(isinstance(members, list), "must be a list", f"{loc}.members")
        for j, p in enumerate(members):
            _expect(isinstance(p, str), "must be a string", f"{loc}.members[{j}]")
        mult = s.get("mult", 1)
        _expect(isinstance(mult, int) and not isinstance(mult, bool), "must be an integer", f"{loc}.mult")
        sets.append(CoverSet(s["id"], members, mult))
    return CoverInstance(points, sets, kind)


def load_instance(text: str) -> CoverInstance:
    """Parse an instance document (see :func:`emit_instance` for the format)."""
    return instance_from_dict(_loads(text))


def emit_instance(inst: CoverInstance) -> str:
    """Canonical serialization: fixed field order, compact separators, trailing newline."""
    return _dumps(instance_to_dict(inst))


def coloring_to_dict(inst: CoverInstance, coloring: Mapping[SetInstance, int], k: int) -> dict:
    assignments = [
        {"set": h.set_id, "copy": h.copy, "color": coloring[h]}
        for h in inst.instances
        if h in coloring
    ]
    return {"k": k, "assignments": assignments}


def emit_coloring(inst: CoverInstance, coloring: Mapping[SetInstance, int], k: int) -> str:
    """Coloring document; assignments follow the instance's set-instance order."""
    return _dumps(coloring_to_dict(inst, coloring, k))


def load_coloring(text: str) -> tuple[int, dict[SetInstance, int]]:
    """Parse a coloring document into ``(k, coloring)``."""
    doc = _loads(text)
    _expect(isinstance(doc, dict), "coloring document must be an object", "$")
    k = doc.get("k")
    _expect(isinstance(k, int) and not isinstance(k, bool) and k >= 1, "must be a positive integer", "k")
    raw = doc.get("assignments")
    _expect(isinstance(raw, list), "must be a list", "assignments")
    coloring: dict[SetInstance, int] = {}
    for i, a in enumerate(raw):
        loc = f"assignments[{i}]"
        _expect(isinstance(a, dict), "must be an object", loc)
        _expect(isinstance(a.get("set"), str), "must be a string", f"{loc}.set")
        copy = a.get("copy", 0)
        color = a.get("color")
        _expect(isinstance(copy, int) and not isinstance(copy, bool) and copy >= 0,
                "must be a non-negative integer", f"{loc}.copy")
        _expect(isinstance(color, int) and not isinstance(color, bool) and color >= 0,
                "must be a non-negative integer", f"{loc}.color")
        key = SetInstance(a["set"], copy)
        if key in coloring:
            raise ValidationError(f"{loc}: set-instance {tuple(key)} assigned twice")
        coloring[key] = color
    return k, coloring


def instance_from_members(
    sets: Sequence[Sequence[str]] | Mapping[str, Sequence[str]],
    points: Sequence[str] | None = None,
    kind: str = "generic",
    mult: Mapping[str, int] | None = None,
) -> CoverInstance:
    """Convenience constructor from member lists; ids default to ``S0, S1, ...``."""
    items = list(sets.items()) if isinstance(sets, Mapping) else [(f"S{i}", m) for i, m in enumerate(sets)]
    if points is None:
        seen: dict[str, None] = {}
        for _, members in items:
            for p in members:
                seen.setdefault(p, None)
        points = list(seen)
    mult = mult or {}
    return CoverInstance(points, [CoverSet(i, m, mult.get(i, 1)) for i, m in items], kind)
