import itertools
from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filtersort.dsl import parse_procedure
from filtersort.formats import catalog_from_doc, dumps_catalog, loads_catalog
from filtersort.model import (
    AttributeDecl,
    Catalog,
    Number,
    Ordering,
    Ordinal,
    PreferenceSpec,
    Procedure,
    SchemaError,
    bind_procedure,
    compare_values,
    validate_procedure,
)
from filtersort.testkit import gen_universe

BRANDS = ("Samsung", "Seagate", "Toshiba")


class TestCompareValues:
    def test_decimal_order(self):
        assert compare_values(Number("9.99"), Number("10")) is Ordering.LESS

    def test_trailing_zero_is_equal(self):
        assert compare_values(Number("10.0"), Number("10")) is Ordering.EQUAL
        assert Number("10.0") == Number("10")
        assert hash(Number("10.0")) == hash(Number("10"))

    def test_declared_order_position(self):
        assert compare_values(Ordinal("Samsung", BRANDS), Ordinal("Toshiba", BRANDS)) is Ordering.LESS

    def test_kind_mismatch(self):
        with pytest.raises(SchemaError):
            compare_values(Number("1"), Ordinal("Samsung", BRANDS))

    def test_different_orders(self):
        with pytest.raises(SchemaError):
            compare_values(Ordinal("a", ("a", "b")), Ordinal("a", ("b", "a")))

    def test_unbound_label_is_not_comparable(self):
        with pytest.raises(SchemaError):
            compare_values(Ordinal("Samsung"), Ordinal("Samsung", BRANDS))

    def test_float_rejected(self):
        with pytest.raises(SchemaError):
            Number(0.1)

    @pytest.mark.parametrize("text", ["abc", "NaN", "Infinity", ""])
    def test_bad_literals(self, text):
        with pytest.raises(SchemaError):
            Number(text)

    def test_exactness_beyond_float(self):
        a, b = Number("0.1000000000000000000001"), Number("0.1")
        assert compare_values(a, b) is Ordering.GREATER

    def test_total_order_on_exhaustive_triples(self):
        pool = [Number(s) for s in ("-1", "0", "0.0", "0.5", "1", "1.00", "2")]
        for a, b in itertools.product(pool, repeat=2):
            ab, ba = compare_values(a, b), compare_values(b, a)
            assert ab == -ba
            assert (ab is Ordering.EQUAL) == (a.value == b.value)
        for a, b, c in itertools.product(pool, repeat=3):
            if compare_values(a, b) <= 0 and compare_values(b, c) <= 0:
                assert compare_values(a, c) <= 0
        ordinals = [Ordinal(x, BRANDS) for x in BRANDS]
        for a, b, c in itertools.product(ordinals, repeat=3):
            if compare_values(a, b) <= 0 and compare_values(b, c) <= 0:
                assert compare_values(a, c) <= 0

    @given(st.decimals(allow_nan=False, allow_infinity=False), st.decimals(allow_nan=False, allow_infinity=False))
    def test_matches_decimal_comparison(self, a, b):
        expected = Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL
        assert compare_values(Number(a), Number(b)) is expected


class TestSchemaAndCatalog:
    def test_duplicate_attribute(self):
        with pytest.raises(SchemaError):
            Catalog.build([AttributeDecl("a"), AttributeDecl("a")], {})

    def test_duplicate_labels(self):
        with pytest.raises(SchemaError):
            AttributeDecl("brand", "ordinal", ("a", "a"))

    def test_missing_value(self):
        with pytest.raises(SchemaError, match="no value"):
            Catalog.build([AttributeDecl("a"), AttributeDecl("b")], {"x": {"a": "1"}})

    def test_wrong_kind(self):
        with pytest.raises(SchemaError):
            Catalog.build([AttributeDecl("brand", "ordinal", BRANDS)], {"x": {"brand": "Maxtor"}})

    def test_duplicate_ids(self):
        with pytest.raises(SchemaError):
            Catalog(
                (AttributeDecl("a"),),
                (("x", {"a": "1"}), ("x", {"a": "2"})),
            )

    def test_round_trip_is_bit_exact(self):
        cat = catalog_from_doc(
            {
                "attributes": [{"name": "p", "kind": "numeric"}, {"name": "b", "kind": "ordinal", "order": list(BRANDS)}],
                "items": [
                    {"id": "x1", "values": {"p": "10.0", "b": "Seagate"}},
                    {"id": "x2", "values": {"p": "1E+2", "b": "Samsung"}},
                ],
            }
        )
        text = dumps_catalog(cat)
        again = loads_catalog(text)
        assert again == cat
        assert dumps_catalog(again) == text
        assert '"10.0"' in text

    def test_generated_catalogs_round_trip(self):
        for seed in range(30):
            cat = gen_universe(5, 3, 3, seed, ordinal=seed % 2 == 0)
            text = dumps_catalog(cat)
            assert loads_catalog(text) == cat
            assert dumps_catalog(loads_catalog(text)) == text

    def test_float_values_rejected_in_documents(self):
        with pytest.raises(SchemaError):
            catalog_from_doc({"attributes": [{"name": "p"}], "items": [{"id": "x", "values": {"p": 0.5}}]})


class TestValidateProcedure:
    schema = Catalog.build([AttributeDecl("price"), AttributeDecl("brand", "ordinal", BRANDS)], {}).schema

    def test_undeclared_attribute_is_named(self):
        errors = validate_procedure(parse_procedure("filter weight <= 3 |> sort asc price"), self.schema)
        assert len(errors) == 1 and "weight" in errors[0]

    def test_identity_is_valid(self):
        assert validate_procedure(Procedure(), self.schema) == []

    def test_reports_every_violation(self):
        p = parse_procedure('filter weight <= 3 |> sort asc height |> filter price >= "cheap" |> filter brand <= 2')
        assert len(validate_procedure(p, self.schema)) == 4

    def test_unknown_label(self):
        p = parse_procedure('filter brand >= "Maxtor"')
        assert validate_procedure(p, self.schema)

    def test_bind_resolves_labels(self):
        p = bind_procedure(parse_procedure('filter brand >= "Seagate"'), self.schema)
        assert p.stages[0].pred.bound == Ordinal("Seagate", BRANDS)


def test_spec_rejects_duplicate_ordering_attributes():
    with pytest.raises(SchemaError, match="duplicate"):
        PreferenceSpec(None, (("asc", "price"), ("desc", "price")))


def test_values_are_immutable():
    n = Number("1")
    with pytest.raises(AttributeError):
        n.value = Decimal(2)
