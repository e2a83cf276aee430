import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coversplit.core import (
    ContractError,
    CoverInstance,
    CoverSet,
    ParseError,
    SetInstance,
    ValidationError,
    coverage_profile,
    decompose_components,
    emit_coloring,
    emit_instance,
    expand_multiplicity,
    instance_from_members,
    load_coloring,
    load_instance,
    min_fold,
    restrict,
    verify_all_k,
    verify_coloring,
)

from strategies import cover_instances, instances_with_coloring

K3_DOC = (
    '{"kind":"graph","points":["a","b","c"],"sets":['
    '{"id":"ab","members":["a","b"],"mult":1},'
    '{"id":"ac","members":["a","c"],"mult":1},'
    '{"id":"bc","members":["b","c"],"mult":1}]}\n'
)


def k3():
    return load_instance(K3_DOC)


def c4():
    return instance_from_members({"e0": ["0", "1"], "e1": ["1", "2"], "e2": ["2", "3"], "e3": ["3", "0"]},
                                 points=["0", "1", "2", "3"], kind="graph")


class TestLoad:
    def test_two_points_one_set(self):
        inst = load_instance('{"points":["p0","p1"],"sets":[{"id":"A","members":["p0","p1"],"mult":1}]}')
        assert len(inst.sets) == 1
        assert inst.kind == "generic"
        assert inst.points == ("p0", "p1")

    def test_duplicate_set_id(self):
        doc = '{"points":["p0"],"sets":[{"id":"A","members":["p0"]},{"id":"A","members":["p0"]}]}'
        with pytest.raises(ValidationError, match="duplicate set id"):
            load_instance(doc)

    def test_k3_round_trip(self):
        inst = k3()
        assert inst.kind == "graph"
        assert len(inst.sets) == 3
        assert emit_instance(inst) == K3_DOC

    def test_malformed_json_has_line_locus(self):
        with pytest.raises(ParseError) as err:
            load_instance('{"points": [\n  "a",\n  ]')
        assert err.value.locus.startswith("line 3")

    def test_field_locus(self):
        with pytest.raises(ParseError) as err:
            load_instance('{"points":["a"],"sets":[{"id":"A","members":["a"]},{"id":"B","members":[3]}]}')
        assert err.value.locus == "sets[1].members[0]"

    @pytest.mark.parametrize("mult", [0, -1, 1 << 17, True])
    def test_bad_multiplicity(self, mult):
        with pytest.raises((ValidationError, ParseError)):
            load_instance(json.dumps({"points": ["a"], "sets": [{"id": "A", "members": ["a"], "mult": mult}]}))

    def test_unknown_member(self):
        with pytest.raises(ValidationError, match="unknown points"):
            CoverInstance(["a"], [CoverSet("A", ["a", "b"])])

    def test_duplicate_member(self):
        with pytest.raises(ValidationError):
            CoverInstance(["a"], [CoverSet("A", ["a", "a"])])

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            CoverInstance([], [], kind="weird")

    def test_empty_set_accepted(self):
        inst = load_instance('{"points":["a"],"sets":[{"id":"E","members":[]}]}')
        assert coverage_profile(inst) == {"a": 0}


class TestEmit:
    def test_empty_instance(self):
        assert emit_instance(CoverInstance([], [])) == '{"kind":"generic","points":[],"sets":[]}\n'

    def test_deterministic(self):
        assert emit_instance(k3()) == emit_instance(k3())

    @settings(max_examples=200, deadline=None)
    @given(cover_instances(allow_empty=True))
    def test_round_trip(self, inst):
        text = emit_instance(inst)
        again = load_instance(text)
        assert again == inst
        assert emit_instance(again) == text


class TestMultiplicity:
    def test_expand(self):
        inst = CoverInstance(["x"], [CoverSet("A", ["x"], 3)])
        assert expand_multiplicity(inst) == [("A", 0), ("A", 1), ("A", 2)]

    def test_all_single(self):
        assert expand_multiplicity(k3()) == [SetInstance("ab"), SetInstance("ac"), SetInstance("bc")]

    def test_doubled_triangle(self):
        inst = instance_from_members([["a", "b"], ["a", "c"], ["b", "c"]], mult={"S0": 2, "S1": 2, "S2": 2})
        assert len(expand_multiplicity(inst)) == 6

    @given(cover_instances())
    def test_length_is_total_mult(self, inst):
        assert len(expand_multiplicity(inst)) == sum(s.mult for s in inst.sets) == inst.size


class TestProfile:
    def test_k3(self):
        assert coverage_profile(k3()) == {"a": 2, "b": 2, "c": 2}
        assert min_fold(k3()) == 2

    def test_mult_counts(self):
        inst = CoverInstance(["x", "y"], [CoverSet("A", ["x"], 4), CoverSet("B", ["x", "y"])])
        assert coverage_profile(inst) == {"x": 5, "y": 1}
        assert min_fold(inst, ["x"]) == 5


class TestVerify:
    def test_c4_alternating(self):
        c = {SetInstance(f"e{i}"): i % 2 for i in range(4)}
        assert verify_coloring(c4(), c, 2).ok

    def test_k3_pigeonhole(self):
        c = {SetInstance("ab"): 0, SetInstance("ac"): 1, SetInstance("bc"): 0}
        report = verify_coloring(k3(), c, 2)
        assert not report.ok
        assert [(v.point, v.missing) for v in report.violations] == [("b", (1,))]

    def test_path_endpoints_unconstrained(self):
        inst = instance_from_members({"ab": ["a", "b"], "bc": ["b", "c"]})
        assert verify_coloring(inst, {SetInstance("ab"): 0, SetInstance("bc"): 1}, 2).ok

    def test_large_colors_ignored(self):
        inst = instance_from_members({"ab": ["a", "b"], "bc": ["b", "c"]})
        report = verify_coloring(inst, {SetInstance("ab"): 0, SetInstance("bc"): 7}, 2)
        assert report.violations[0].missing == (1,)

    def test_unknown_instance_rejected(self):
        with pytest.raises(ContractError):
            verify_coloring(k3(), {SetInstance("ab", 1): 0}, 1)

    def test_restricted_points(self):
        c = {SetInstance("ab"): 0, SetInstance("ac"): 1, SetInstance("bc"): 0}
        assert verify_coloring(k3(), c, 2, ["a", "c"]).ok

    def test_all_k(self):
        inst = CoverInstance(["x"], [CoverSet("A", ["x"], 3)])
        c = {SetInstance("A", 0): 0, SetInstance("A", 1): 1, SetInstance("A", 2): 1}
        reports = verify_all_k(inst, c)
        assert [k for k, r in reports.items() if r.ok] == [1, 2]

    @given(instances_with_coloring(), st.data())
    def test_monotone(self, case, data):
        inst, k, coloring = case
        if not verify_coloring(inst, coloring, k).ok:
            return
        extra = {h: data.draw(st.integers(0, k)) for h in inst.instances if h not in coloring}
        assert verify_coloring(inst, {**coloring, **extra}, k).ok

    @given(instances_with_coloring())
    def test_k1_is_coverage(self, case):
        inst, _, coloring = case
        touched = {p for h, c in coloring.items() if c == 0 for p in inst.set_by_id[h.set_id].members}
        covered = {p for p in inst.points if inst.incidence[p]}
        assert verify_coloring(inst, coloring, 1).ok == (covered <= touched)

    @given(instances_with_coloring())
    def test_components_independent(self, case):
        inst, k, coloring = case
        parts = decompose_components(inst)
        per = all(
            verify_coloring(part, {h: c for h, c in coloring.items() if h.set_id in part.set_by_id}, k).ok
            for part in parts
        )
        assert per == verify_coloring(inst, coloring, k).ok


class TestComponents:
    def test_disjoint(self):
        inst = instance_from_members([["0", "1"], ["2", "3"]])
        assert len(decompose_components(inst)) == 2

    def test_chained(self):
        assert len(decompose_components(instance_from_members([["0", "1"], ["1", "2"]]))) == 1

    def test_shared(self):
        parts = decompose_components(instance_from_members([["0"], ["1"], ["0", "1"]]))
        assert len(parts) == 1
        assert len(parts[0].sets) == 3

    def test_uncovered_points_are_singletons(self):
        parts = decompose_components(instance_from_members([["a"]], points=["a", "b"]))
        assert [p.points for p in parts] == [("a",), ("b",)]
        assert parts[1].sets == ()

    @given(cover_instances(allow_empty=True))
    def test_partition_of_sets(self, inst):
        parts = decompose_components(inst)
        ids = [s.id for part in parts for s in part.sets]
        assert sorted(ids) == sorted(s.id for s in inst.sets)
        assert sorted(p for part in parts for p in part.points) == sorted(inst.points)


class TestRestrict:
    def test_k3_two_vertices(self):
        r = restrict(k3(), ["a", "b"])
        assert {s.id: len(s.members) for s in r.sets} == {"ab": 2, "ac": 1, "bc": 1}
        assert r.kind == "generic"

    def test_empty(self):
        r = restrict(k3(), [])
        assert r.points == () and r.sets == ()

    def test_intervals_stay_distinct(self):
        inst = instance_from_members({"A": ["0", "1", "2"], "B": ["1", "2", "3"]}, kind="interval")
        r = restrict(inst, ["1", "2"])
        assert [(s.id, s.members) for s in r.sets] == [("A", ("1", "2")), ("B", ("1", "2"))]

    def test_unknown_point(self):
        with pytest.raises(ContractError):
            restrict(k3(), ["z"])

    @given(cover_instances(allow_empty=True), st.data())
    def test_never_increases_fold(self, inst, data):
        keep = data.draw(st.lists(st.sampled_from(inst.points), unique=True) if inst.points else st.just([]))
        before = coverage_profile(inst)
        after = coverage_profile(restrict(inst, keep))
        assert all(after[p] <= before[p] for p in after)


class TestColoringDocument:
    def test_round_trip(self):
        c = {SetInstance("ab"): 1, SetInstance("bc"): 0}
        text = emit_coloring(k3(), c, 2)
        assert text == '{"k":2,"assignments":[{"set":"ab","copy":0,"color":1},{"set":"bc","copy":0,"color":0}]}\n'
        assert load_coloring(text) == (2, c)

    def test_double_assignment(self):
        with pytest.raises(ValidationError):
            load_coloring('{"k":1,"assignments":[{"set":"A","color":0},{"set":"A","color":1}]}')

    def test_bad_k(self):
        with pytest.raises(ParseError) as err:
            load_coloring('{"k":0,"assignments":[]}')
        assert err.value.locus == "k"
