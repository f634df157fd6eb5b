
import pytest
from hypothesis import given, strategies as st

from fuzzysumm.domain import (
    NULL,
    UNDEFINED,
    UNKNOWN,
    AttributeSpec,
    FuzzyValue,
    LinguisticLabel,
    load_schema,
    schema_from_dict,
    schema_to_dict,
    trapezoid_membership,
    trapezoid_overlap,
    validate_schema,
    value_label_membership,
)
from fuzzysumm.errors import ConfigurationError, SchemaError

from conftest import FIXTURES


def shapes(min_value=-50.0, max_value=50.0):
    return (
        st.lists(
            st.floats(min_value, max_value, allow_nan=False, allow_infinity=False),
            min_size=4,
            max_size=4,
        )
        .map(sorted)
        .map(tuple)
    )


class TestTrapezoidMembership:
    def test_core_is_one(self):
        assert trapezoid_membership(20.0, (0, 20, 30, 40)) == 1.0
        assert trapezoid_membership(25.0, (0, 20, 30, 40)) == 1.0

    def test_outside_support_is_zero(self):
        assert trapezoid_membership(-1.0, (0, 20, 30, 40)) == 0.0
        assert trapezoid_membership(41.0, (0, 20, 30, 40)) == 0.0

    def test_ramp_midpoint(self):
        # linear ramp: ((a+b)/2 - a) / (b - a) = 1/2
        assert trapezoid_membership(10.0, (0, 20, 30, 40)) == pytest.approx(0.5, abs=1e-12)
        assert trapezoid_membership(35.0, (0, 20, 30, 40)) == pytest.approx(0.5, abs=1e-12)

    def test_degenerate_edges_are_steps(self):
        assert trapezoid_membership(5.0, (5, 5, 6, 7)) == 1.0
        assert trapezoid_membership(4.999, (5, 5, 6, 7)) == 0.0
        assert trapezoid_membership(6.0, (4, 5, 6, 6)) == 1.0
        assert trapezoid_membership(6.001, (4, 5, 6, 6)) == 0.0

    def test_malformed_shape_rejected(self):
        with pytest.raises(ConfigurationError):
            trapezoid_membership(1.0, (10, 5, 20, 30))

    @given(shapes(), st.floats(-60, 60, allow_nan=False))
    def test_range(self, shape, x):
        assert 0.0 <= trapezoid_membership(x, shape) <= 1.0

    @given(shapes(), st.floats(-60, 60, allow_nan=False), st.floats(1e-9, 1e-3))
    def test_continuity_for_nondegenerate(self, shape, x, eps):
        a, b, c, d = shape
        if a == b or c == d:
            return
        slope = max(1.0 / (b - a), 1.0 / (d - c))
        left = trapezoid_membership(x, shape)
        right = trapezoid_membership(x + eps, shape)
        assert abs(right - left) <= slope * eps + 1e-12


def grid_supmin(value_shape, label_shape, points=4001):
    """Numeric oracle for the sup of min(value(x), label(x)).

    The supremum lives where both supports overlap, so that window gets a
    dense grid of its own; all breakpoints are sampled too, which keeps
    degenerate spikes visible.
    """
    xs = list(value_shape) + list(label_shape)
    lo = min(value_shape[0], label_shape[0]) - 1.0
    hi = max(value_shape[3], label_shape[3]) + 1.0
    xs.extend(lo + (hi - lo) * i / (points - 1) for i in range(points))
    wlo = max(value_shape[0], label_shape[0])
    whi = min(value_shape[3], label_shape[3])
    if whi > wlo:
        xs.extend(wlo + (whi - wlo) * i / (points - 1) for i in range(points))
    best = 0.0
    for x in xs:
        best = max(
            best,
            min(trapezoid_membership(x, value_shape), trapezoid_membership(x, label_shape)),
        )
    return best


class TestTrapezoidOverlap:
    def test_core_overlap_gives_one(self):
        assert trapezoid_overlap((0, 1, 3, 4), (2, 3, 5, 6)) == 1.0

    def test_disjoint_supports_give_zero(self):
        assert trapezoid_overlap((0, 1, 2, 3), (4, 5, 6, 7)) == 0.0
        assert trapezoid_overlap((0, 1, 2, 3), (3, 4, 5, 6)) == 0.0  # touching

    def test_crossing_value(self):
        # falling edge (2,1) -> (4,0) meets rising edge (3,0) -> (5,1):
        # mu = (4-3)/((4-2)+(5-3)) = 0.25
        assert trapezoid_overlap((0, 1, 2, 4), (3, 5, 6, 7)) == pytest.approx(0.25, abs=1e-12)

    def test_symmetric(self):
        a, b = (0, 1, 2, 4), (3, 5, 6, 7)
        assert trapezoid_overlap(a, b) == pytest.approx(trapezoid_overlap(b, a), abs=1e-12)

    @given(shapes(0, 20), shapes(0, 20))
    def test_matches_grid_oracle(self, va, la):
        exact = trapezoid_overlap(va, la)
        approx = grid_supmin(va, la)
        assert 0.0 <= exact <= 1.0
        assert approx <= exact + 1e-9  # grid never exceeds the true sup
        assert exact - approx <= 5e-3


def make_age(ftype=1, with_trapezoids=True, similarity=None):
    shapes_by_name = {
        "Young": (0, 0, 25, 35),
        "Adult": (25, 35, 55, 65),
        "Old": (55, 65, 100, 100),
    }
    labels = tuple(
        LinguisticLabel(name, i, shapes_by_name[name] if with_trapezoids else None)
        for i, name in enumerate(["Young", "Adult", "Old"])
    )
    return AttributeSpec("Age", ftype, labels, similarity=similarity)


SIM = ((1.0, 0.4, 0.0), (0.4, 1.0, 0.3), (0.0, 0.3, 1.0))


class TestValueLabelMembership:
    def test_unknown_matches_everything(self):
        age = make_age()
        for lab in age.labels:
            assert value_label_membership(UNKNOWN, lab, age) == 1.0

    def test_undefined_and_null_match_nothing(self):
        age = make_age()
        for value in (UNDEFINED, NULL):
            for lab in age.labels:
                assert value_label_membership(value, lab, age) == 0.0

    def test_crisp_against_trapezoid(self):
        age = make_age()
        assert value_label_membership(FuzzyValue.crisp(30.0), age.label("Young"), age) == 0.5
        assert value_label_membership(FuzzyValue.crisp(10.0), age.label("Young"), age) == 1.0

    def test_trapezoid_value_possibility(self):
        age = make_age()
        v = FuzzyValue.trapezoid(20, 30, 40, 50)
        assert value_label_membership(v, age.label("Adult"), age) == 1.0

    def test_label_identity_without_similarity(self):
        age = make_age(ftype=4, with_trapezoids=False)
        young = FuzzyValue.label("Young")
        assert value_label_membership(young, age.label("Young"), age) == 1.0
        assert value_label_membership(young, age.label("Adult"), age) == 0.0

    def test_label_through_similarity_matrix(self):
        age = make_age(ftype=3, with_trapezoids=False, similarity=SIM)
        young = FuzzyValue.label("Young")
        assert value_label_membership(young, age.label("Adult"), age) == 0.4
        assert value_label_membership(young, age.label("Young"), age) == 1.0

    def test_ftype3_without_matrix_degrades_to_identity(self):
        age = make_age(ftype=3, with_trapezoids=False)
        young = FuzzyValue.label("Young")
        assert value_label_membership(young, age.label("Adult"), age) == 0.0

    def test_crisp_without_trapezoids_is_a_configuration_error(self):
        age = make_age(ftype=4, with_trapezoids=False)
        with pytest.raises(ConfigurationError):
            value_label_membership(FuzzyValue.crisp(30.0), age.label("Young"), age)

    def test_foreign_label_rejected(self):
        age = make_age()
        with pytest.raises(SchemaError):
            value_label_membership(
                FuzzyValue.crisp(1.0), LinguisticLabel("Cheap", 0, (0, 1, 2, 3)), age
            )

    @given(st.floats(-10, 110, allow_nan=False))
    def test_unknown_dominates_crisp(self, x):
        age = make_age()
        for lab in age.labels:
            crisp = value_label_membership(FuzzyValue.crisp(x), lab, age)
            assert value_label_membership(UNKNOWN, lab, age) >= crisp

    @given(st.sampled_from(["Young", "Adult", "Old"]))
    def test_identity_degrees_stay_in_unit_range(self, name):
        age = make_age(ftype=4, with_trapezoids=False)
        value = FuzzyValue.label(name)
        degrees = [value_label_membership(value, lab, age) for lab in age.labels]
        assert all(0.0 <= d <= 1.0 for d in degrees)
        assert sum(degrees) >= 0.0


class TestValidateSchema:
    def test_wellformed_schema_ok(self):
        assert validate_schema([make_age()]) == []

    def test_duplicate_label(self):
        bad = AttributeSpec(
            "Age", 1, (LinguisticLabel("Young", 0), LinguisticLabel("Young", 1))
        )
        assert any("duplicate label" in p for p in validate_schema([bad]))

    def test_malformed_trapezoid(self):
        bad = AttributeSpec("Age", 1, (LinguisticLabel("Young", 0, (10, 5, 20, 30)),))
        assert any("malformed trapezoid" in p for p in validate_schema([bad]))

    def test_cluster_count_mismatch(self):
        bad = AttributeSpec(
            "Age", 1, (LinguisticLabel("Young", 0), LinguisticLabel("Old", 1)), cluster_count=3
        )
        assert any("cluster_count" in p for p in validate_schema([bad]))

    def test_asymmetric_similarity(self):
        sim = ((1.0, 0.4, 0.0), (0.5, 1.0, 0.3), (0.0, 0.3, 1.0))
        bad = make_age(ftype=3, with_trapezoids=False, similarity=sim)
        assert any("not symmetric" in p for p in validate_schema([bad]))

    def test_bad_diagonal(self):
        sim = ((0.9, 0.4, 0.0), (0.4, 1.0, 0.3), (0.0, 0.3, 1.0))
        bad = make_age(ftype=3, with_trapezoids=False, similarity=sim)
        assert any("diagonal" in p for p in validate_schema([bad]))


class TestSchemaJson:
    def test_fixture_schema_loads(self):
        schema = load_schema(FIXTURES / "employee_schema.json")
        names = [a.name for a in schema]
        assert names == ["Age", "Income", "ProfessionalBackground"]
        assert schema[0].label_names == ("Young", "Adult", "Old")
        assert schema[2].labels == ()

    def test_round_trip(self):
        hair = AttributeSpec(
            "Hair",
            3,
            (LinguisticLabel("Blond", 0), LinguisticLabel("Red", 1)),
            similarity=((1.0, 0.6), (0.6, 1.0)),
        )
        schema = (make_age(), hair)
        again = schema_from_dict(schema_to_dict(schema))
        assert again == schema

    def test_invalid_schema_raises(self):
        with pytest.raises(SchemaError):
            schema_from_dict(
                {"attributes": [{"name": "A", "ftype": 1,
                                 "labels": [{"name": "x"}, {"name": "x"}]}]}
            )
