import numpy as np
import pytest

from fuzzysumm.domain import AttributeSpec, LinguisticLabel
from fuzzysumm.errors import SemanticError, UsageError
from fuzzysumm.fsql import Condition, parse_query
from fuzzysumm.lattice import build_lattice, enumerate_concepts
from fuzzysumm.query import (
    Grade,
    Verdict,
    default_alpha,
    evaluate,
    grade,
    overlaps_everywhere,
    partition_attributes,
    resolve_comparator,
    rewrite,
    satisfaction_degree,
    satisfaction_degrees,
    search,
)
from fuzzysumm.summary import ConceptSummary, SummaryHierarchy, build_hierarchy

from conftest import random_schema_context


def ordered_attr(name="Age", labels=("Young", "Adult", "Old"), ftype=1):
    return AttributeSpec(name, ftype, tuple(LinguisticLabel(n, i) for i, n in enumerate(labels)))


def summary(sid, intent_keys, extent=None):
    pairs = frozenset(tuple(k.split("::", 1)) for k in intent_keys)
    return ConceptSummary(sid, extent or {}, pairs)


Q1 = "Select Income, ProfessionalBackground From Employee Where Age FEQ $Young THOLD 0.5;"
Q2 = ("Select ProfessionalBackground From Employee Where Age FEQ $Young THOLD 0.3 "
      "AND Income FEQ $Comfortable THOLD 0.3;")
Q3 = ("Select * From Employee Where Age FEQ ($Young, $Adult) THOLD 0.3 "
      "And Income FEQ ($Poor, $Modest) THOLD 0.3;")


class TestResolveComparator:
    def test_feq_keeps_listed_labels(self):
        age = ordered_attr()
        assert resolve_comparator(Condition("Age", "FEQ", ("Young",)), age) == {"Young"}

    def test_fgeq_selects_upward(self):
        age = ordered_attr()
        got = resolve_comparator(Condition("Age", "FGEQ", ("Adult",)), age)
        assert got == {"Adult", "Old"}

    def test_fgt_is_strict(self):
        age = ordered_attr()
        assert resolve_comparator(Condition("Age", "FGT", ("Adult",)), age) == {"Old"}

    def test_fleq_and_flt(self):
        age = ordered_attr()
        assert resolve_comparator(Condition("Age", "FLEQ", ("Adult",)), age) == {"Young", "Adult"}
        assert resolve_comparator(Condition("Age", "FLT", ("Adult",)), age) == {"Young"}

    def test_mgt_needs_a_two_step_gap(self):
        age = ordered_attr()
        assert resolve_comparator(Condition("Age", "MGT", ("Young",)), age) == {"Old"}

    def test_mlt(self):
        age = ordered_attr()
        assert resolve_comparator(Condition("Age", "MLT", ("Old",)), age) == {"Young"}

    def test_mgt_empty_selection_is_an_error(self):
        age = ordered_attr()
        with pytest.raises(SemanticError):
            resolve_comparator(Condition("Age", "MGT", ("Adult",)), age)

    def test_necessity_comparators_unsupported(self):
        age = ordered_attr()
        with pytest.raises(SemanticError, match="unsupported"):
            resolve_comparator(Condition("Age", "NFEQ", ("Young",)), age)

    def test_order_comparator_on_unordered_attribute(self):
        hair = ordered_attr("Hair", ("Blond", "Red", "Brown"), ftype=4)
        with pytest.raises(SemanticError):
            resolve_comparator(Condition("Hair", "FGEQ", ("Red",)), hair)

    def test_multi_label_pivots(self):
        five = ordered_attr("L", ("a", "b", "c", "d", "e"))
        assert resolve_comparator(Condition("L", "FGEQ", ("b", "d")), five) == {
            "b", "c", "d", "e"}
        assert resolve_comparator(Condition("L", "MGT", ("a", "c")), five) == {"e"}


class TestPartition:
    def test_q2_partition(self, employee_schema):
        part = partition_attributes(parse_query(Q2, employee_schema), employee_schema)
        assert part.inputs == {"Age", "Income"}
        assert part.outputs == {"ProfessionalBackground"}

    def test_q1_partition(self, employee_schema):
        part = partition_attributes(parse_query(Q1, employee_schema), employee_schema)
        assert part.inputs == {"Age"}
        assert part.outputs == {"Income", "ProfessionalBackground"}

    def test_no_where_clause(self, employee_schema):
        part = partition_attributes(
            parse_query("Select Age From Employee", employee_schema), employee_schema
        )
        assert part.inputs == frozenset()
        assert part.outputs == {"Age"}

    def test_star_projection_covers_the_rest(self, employee_schema):
        part = partition_attributes(parse_query(Q3, employee_schema), employee_schema)
        assert part.inputs == {"Age", "Income"}
        assert part.outputs == {"ProfessionalBackground"}
        assert not (part.inputs & part.outputs)


class TestDefaultAlpha:
    def test_two_three_cluster_attributes(self, employee_schema):
        q = parse_query("Select * From Employee Where Age FEQ $Young And Income FEQ $Poor",
                        employee_schema)
        assert default_alpha(q, employee_schema) == pytest.approx(1 / 3, abs=1e-12)

    def test_single_two_cluster_attribute(self):
        size = ordered_attr("Size", ("Small", "Big"))
        q = parse_query("Select * From T Where Size FEQ $Small", (size,))
        assert default_alpha(q, (size,)) == 0.5

    def test_max_over_cluster_counts(self):
        three = ordered_attr("A3", ("x", "y", "z"))
        four = ordered_attr("A4", ("p", "q", "r", "s"))
        q = parse_query("Select * From T Where A3 FEQ $x And A4 FEQ $p", (three, four))
        assert default_alpha(q, (three, four)) == 0.25

    def test_requires_a_condition(self, employee_schema):
        q = parse_query("Select Age From Employee", employee_schema)
        with pytest.raises(UsageError):
            default_alpha(q, employee_schema)


class TestRewrite:
    def test_q3_clauses(self, employee_schema):
        prop = rewrite(parse_query(Q3, employee_schema), employee_schema)
        assert [(c.attribute, set(c.labels), c.alpha) for c in prop.clauses] == [
            ("Age", {"Young", "Adult"}, 0.3),
            ("Income", {"Poor", "Modest"}, 0.3),
        ]

    def test_q1_clause(self, employee_schema):
        prop = rewrite(parse_query(Q1, employee_schema), employee_schema)
        assert [(c.attribute, set(c.labels), c.alpha) for c in prop.clauses] == [
            ("Age", {"Young"}, 0.5)
        ]

    def test_no_conditions_rewrite_to_empty_proposition(self, employee_schema):
        prop = rewrite(parse_query("Select Age From Employee", employee_schema),
                       employee_schema)
        assert prop.clauses == ()
        assert prop.alpha == 0.0

    def test_thold_defaults_to_cluster_count_rule(self, employee_schema):
        q = parse_query("Select * From Employee Where Age FEQ $Young", employee_schema)
        prop = rewrite(q, employee_schema)
        assert prop.clauses[0].alpha == pytest.approx(1 / 3)

    def test_select_level_override_beats_thold(self, employee_schema):
        q = parse_query("Select 5 0.9 * From Employee Where Age FEQ $Young THOLD 0.2",
                        employee_schema)
        prop = rewrite(q, employee_schema)
        assert prop.clauses[0].alpha == 0.9


class TestGrade:
    def make_prop(self, schema, text):
        return rewrite(parse_query(text, schema), schema)

    def test_exact_when_labels_inside_clause(self, employee_schema, employee_hierarchy):
        prop = self.make_prop(employee_schema, Q1)
        corr = grade(employee_hierarchy.summary("z13"), prop)
        assert corr.verdict is Verdict.EXACT
        assert corr.per_attribute == {"Age": Grade.SATISFIED}

    def test_violated_makes_false(self, employee_schema, employee_hierarchy):
        prop = self.make_prop(employee_schema, Q2)
        corr = grade(employee_hierarchy.summary("z11"), prop)
        assert corr.per_attribute["Age"] is Grade.VIOLATED
        assert corr.verdict is Verdict.FALSE

    def test_root_is_all_pending(self, employee_schema, employee_hierarchy):
        prop = self.make_prop(employee_schema, Q3)
        corr = grade(employee_hierarchy.summary("z0"), prop)
        assert set(corr.per_attribute.values()) == {Grade.PENDING}
        assert corr.verdict is Verdict.INDECISION

    def test_partial_overlap(self, employee_schema, employee_hierarchy):
        prop = self.make_prop(employee_schema, Q2)  # Age = {Young}
        corr = grade(employee_hierarchy.summary("z24"), prop)  # Age = {Young, Adult}
        assert corr.per_attribute["Age"] is Grade.PARTIAL
        assert corr.verdict is Verdict.INDECISION

    def test_tolerant_upgrades_partial(self, employee_schema, employee_hierarchy):
        prop = self.make_prop(employee_schema, Q2)
        corr = grade(employee_hierarchy.summary("z34"), prop, tolerant=True)
        assert corr.per_attribute["Age"] is Grade.SATISFIED
        assert corr.verdict is Verdict.EXACT

    def test_empty_proposition_is_vacuously_exact(self, employee_schema, employee_hierarchy):
        prop = self.make_prop(employee_schema, "Select Age From Employee")
        assert grade(employee_hierarchy.summary("z0"), prop).verdict is Verdict.EXACT


class TestSearch:
    def run(self, schema, h, text, mode):
        prop = rewrite(parse_query(text, schema), schema)
        return search(h, prop, mode=mode)

    def test_q1_strict_returns_only_the_general_answer(self, employee_schema,
                                                       employee_hierarchy):
        outcome = self.run(employee_schema, employee_hierarchy, Q1, "strict")
        assert outcome.results == ["z13"]

    def test_q3_strict(self, employee_schema, employee_hierarchy):
        outcome = self.run(employee_schema, employee_hierarchy, Q3, "strict")
        assert set(outcome.results) == {"z21", "z22", "z23"}

    def test_q2_three_modes(self, employee_schema, employee_hierarchy):
        assert self.run(employee_schema, employee_hierarchy, Q2, "strict").results == []
        assert self.run(employee_schema, employee_hierarchy, Q2, "tolerant").results == ["z34"]
        exhaustive = self.run(employee_schema, employee_hierarchy, Q2, "exhaustive")
        assert set(exhaustive.results) == {"z34", "z42", "z5"}  # z5 dies at the alpha cut

    def test_results_never_contain_violations(self, employee_schema, employee_hierarchy):
        for text in (Q1, Q2, Q3):
            for mode in ("strict", "tolerant", "exhaustive"):
                outcome = self.run(employee_schema, employee_hierarchy, text, mode)
                prop = rewrite(parse_query(text, employee_schema), employee_schema)
                for sid in outcome.results:
                    corr = grade(employee_hierarchy.summary(sid), prop)
                    assert Grade.VIOLATED not in corr.per_attribute.values()
                    if mode == "strict":
                        assert corr.verdict is Verdict.EXACT

    def test_empty_proposition_matches_root(self, employee_schema, employee_hierarchy):
        outcome = self.run(employee_schema, employee_hierarchy,
                           "Select Age From Employee", "strict")
        assert outcome.results == ["z0"]

    def test_bad_mode(self, employee_schema, employee_hierarchy):
        prop = rewrite(parse_query(Q1, employee_schema), employee_schema)
        with pytest.raises(UsageError):
            search(employee_hierarchy, prop, mode="eager")


class TestSatisfactionDegree:
    def test_root_is_zero(self, employee_hierarchy):
        assert satisfaction_degree("z0", employee_hierarchy) == 0.0

    def test_single_edge_is_one_overlap(self, employee_hierarchy):
        # z0 covers all six tuples at 1; z11 sigma-count 2.8 -> 2.8/6
        assert satisfaction_degree("z11", employee_hierarchy) == pytest.approx(2.8 / 6,
                                                                               abs=1e-12)

    def test_max_over_paths_on_a_diamond(self):
        h = SummaryHierarchy([
            summary("r", [], {"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0}),
            summary("p1", ["X::p"], {"a": 1.0, "b": 0.5}),
            summary("p2", ["Y::q"], {"a": 0.5, "b": 1.0, "c": 1.0}),
            summary("leaf", ["X::p", "Y::q"], {"a": 0.5}),
        ])
        sds = satisfaction_degrees(h)
        assert sds["p1"] == pytest.approx(1.5 / 4)
        assert sds["p2"] == pytest.approx(2.5 / 4)
        # via p1: 0.375 + 0.5/1.5 ; via p2: 0.625 + 0.5/2.5 -> the larger wins
        assert sds["leaf"] == pytest.approx(max(1.5 / 4 + 0.5 / 1.5, 2.5 / 4 + 0.5 / 2.5))

    def test_path_max_recurrence(self, employee_hierarchy):
        from fuzzysumm.lattice import sigma_jaccard

        sds = satisfaction_degrees(employee_hierarchy)
        for sid, s in employee_hierarchy.summaries.items():
            parents = employee_hierarchy.parents(sid)
            if not parents:
                continue
            through = [
                sds[pid] + sigma_jaccard(s.extent, employee_hierarchy.summary(pid).extent)
                for pid in parents
            ]
            for total in through:
                assert sds[sid] >= total - 1e-12
            assert sds[sid] == pytest.approx(max(through), abs=1e-12)

    def test_unknown_id(self, employee_hierarchy):
        with pytest.raises(UsageError):
            satisfaction_degree("zz", employee_hierarchy)


class TestTopK:
    def test_q1_pipeline(self, employee_schema, employee_hierarchy):
        q = parse_query(Q1, employee_schema)
        _, _, results = evaluate(employee_hierarchy, employee_schema, q, mode="strict", k=3)
        assert len(results) == 1
        r = results[0]
        assert r.summary_id == "z13"
        assert r.extent == {"t1": 0.5, "t3": 0.7, "t5": 0.6, "t6": 0.5}
        assert r.alpha == 0.5

    def test_q3_ranking_by_satisfaction_degree(self, employee_schema, employee_hierarchy):
        q = parse_query(Q3, employee_schema)
        _, _, results = evaluate(employee_hierarchy, employee_schema, q)
        assert [r.summary_id for r in results] == ["z22", "z21", "z23"]
        assert results[0].sd >= results[1].sd >= results[2].sd

    def test_k_truncates(self, employee_schema, employee_hierarchy):
        q = parse_query(Q3, employee_schema)
        _, _, results = evaluate(employee_hierarchy, employee_schema, q, k=2)
        assert len(results) == 2

    def test_k_larger_than_result_count(self, employee_schema, employee_hierarchy):
        q = parse_query(Q3, employee_schema)
        _, _, results = evaluate(employee_hierarchy, employee_schema, q, k=50)
        assert len(results) == 3

    def test_empty_alpha_cuts_are_dropped(self, employee_schema, employee_hierarchy):
        q = parse_query(Q2, employee_schema)
        _, _, results = evaluate(employee_hierarchy, employee_schema, q, mode="exhaustive")
        assert [r.summary_id for r in results] == ["z42", "z34"]  # z5 filtered out

    def test_equal_sd_breaks_on_extent_size(self):
        h = SummaryHierarchy([
            summary("r", [], {"a": 1.0, "b": 1.0, "c": 1.0, "d": 1.0}),
            summary("s1", ["X::p"], {"a": 1.0, "b": 1.0}),
            summary("s2", ["X::q"], {"a": 0.4, "c": 0.8, "d": 0.8}),
        ])
        schema = (ordered_attr("X", ("p", "q")),)
        q = parse_query("Select * From T Where X FEQ ($p, $q) THOLD 0.1", schema)
        prop, outcome, results = evaluate(h, schema, q)
        assert results[0].sd == pytest.approx(results[1].sd, abs=1e-12)
        assert [r.summary_id for r in results] == ["s2", "s1"]  # 3 tuples beat 2

    def test_raising_thold_never_adds_tuples(self, employee_schema, employee_hierarchy):
        low = parse_query("Select * From Employee Where Age FEQ $Young THOLD 0.3",
                          employee_schema)
        high = parse_query("Select * From Employee Where Age FEQ $Young THOLD 0.6",
                           employee_schema)
        _, _, low_results = evaluate(employee_hierarchy, employee_schema, low)
        _, _, high_results = evaluate(employee_hierarchy, employee_schema, high)
        low_by_id = {r.summary_id: set(r.extent) for r in low_results}
        for r in high_results:
            # the label sets are unchanged, so every summary surviving the
            # higher cut was already an answer, with a superset extent
            assert r.summary_id in low_by_id
            assert set(r.extent) <= low_by_id[r.summary_id]


class TestSearchOracle:
    def full_scan(self, h, prop):
        return {
            sid for sid, s in h.summaries.items() if overlaps_everywhere(s, prop)
        }

    def test_exhaustive_equals_full_scan_on_random_hierarchies(self):
        from fuzzysumm.query import Clause, ConjunctiveProposition

        rng = np.random.default_rng(1234)
        for _ in range(25):
            ctx, names = random_schema_context(rng)
            h = build_hierarchy(build_lattice(enumerate_concepts(ctx, 0.5), 0.5))
            n_clauses = int(rng.integers(1, min(3, len(names)) + 1))
            chosen = list(rng.choice(names, size=n_clauses, replace=False))
            clauses = []
            for name in chosen:
                vocab = sorted({l for a, l in ctx.attributes if a == name})
                size = int(rng.integers(1, len(vocab) + 1))
                labels = frozenset(rng.choice(vocab, size=size, replace=False))
                clauses.append(Clause(name, labels, 0.0))
            prop = ConjunctiveProposition(tuple(clauses))

            exhaustive = search(h, prop, mode="exhaustive")
            assert set(exhaustive.results) == self.full_scan(h, prop)

            strict = search(h, prop, mode="strict")
            assert set(strict.results) <= set(exhaustive.results)
            for pruned_id in strict.pruned:
                for below in h.descendants(pruned_id):
                    assert grade(h.summary(below), prop).verdict is not Verdict.EXACT
