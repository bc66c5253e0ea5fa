import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filtersort.dsl import (
    ParseError,
    display_procedure,
    parse_filter,
    parse_preference_spec,
    parse_procedure,
    print_procedure,
    spec_to_doc,
)
from filtersort.model import (
    And,
    Atom,
    Direction,
    Filter,
    Number,
    Op,
    Or,
    Ordinal,
    Procedure,
    SchemaError,
    Sort,
    bind_procedure,
)
from filtersort.normalizer import normalize
from filtersort.testkit import gen_procedure, gen_spec, gen_universe


def test_cheapest_rated_example():
    p = parse_procedure("filter rating >= 3 |> sort asc price |> first")
    assert p == Procedure(
        (Filter(Atom("rating", Op.GE, Number("3"))), Sort(Direction.ASC, "price")),
        take_first=True,
    )


def test_house_query_is_and_of_or():
    p = parse_procedure("filter (bedrooms >= 3 or distance <= 1) |> filter price <= 2000")
    first_pred, second_pred = (s.pred for s in p.stages)
    assert first_pred == Or((Atom("bedrooms", Op.GE, Number("3")), Atom("distance", Op.LE, Number("1"))))
    assert second_pred == Atom("price", Op.LE, Number("2000"))


def test_and_binds_tighter_than_or():
    e = parse_filter("a >= 1 or b >= 2 and c <= 3")
    assert isinstance(e, Or)
    assert isinstance(e.children[1], And)


def test_quoted_label():
    e = parse_filter('brand >= "Seagate"')
    assert e == Atom("brand", Op.GE, Ordinal("Seagate"))


def test_negative_and_fractional_literals():
    e = parse_filter("price <= -2.50")
    assert e.bound == Number("-2.5")


class TestErrors:
    def test_empty_input(self):
        with pytest.raises(ParseError, match="expected stage") as info:
            parse_procedure("")
        assert info.value.span.start == info.value.span.end == 0

    def test_whitespace_only(self):
        with pytest.raises(ParseError, match="expected stage"):
            parse_procedure("   \n")

    def test_first_must_be_terminal(self):
        with pytest.raises(ParseError) as info:
            parse_procedure("first |> sort asc price")
        assert info.value.span.start == 6

    def test_first_twice(self):
        with pytest.raises(ParseError):
            parse_procedure("sort asc price |> first |> first")

    def test_span_points_at_bad_token(self):
        text = "filter price 3"
        with pytest.raises(ParseError) as info:
            parse_procedure(text)
        err = info.value
        assert text[err.span.start : err.span.end] == "3"
        assert err.expected == {">=", "<="}

    def test_lexical_error_has_span(self):
        text = "filter price => 3"
        with pytest.raises(ParseError) as info:
            parse_procedure(text)
        assert text[info.value.span.start : info.value.span.end] == "="

    def test_bad_direction(self):
        with pytest.raises(ParseError) as info:
            parse_procedure("sort up price")
        assert info.value.expected == {"asc", "desc"}

    def test_unclosed_paren(self):
        with pytest.raises(ParseError):
            parse_procedure("filter (a >= 1 or b <= 2")

    def test_keyword_is_not_an_attribute(self):
        with pytest.raises(ParseError):
            parse_procedure("sort asc first")

    def test_spans_are_byte_offsets(self):
        text = 'filter brand >= "É" |> sort up price'
        with pytest.raises(ParseError) as info:
            parse_procedure(text)
        raw = text.encode("utf-8")
        assert raw[info.value.span.start : info.value.span.end] == b"up"


class TestPrinting:
    def test_identity(self):
        assert print_procedure(Procedure()) == ""
        assert display_procedure(Procedure()) == "<identity>"
        assert parse_procedure("<identity>") == Procedure()

    def test_worked_example_round_trip(self):
        text = "sort desc price |> filter rating >= 4 |> sort asc price |> sort desc rating"
        assert print_procedure(parse_procedure(text)) == text
        messy = "sort   desc price|>filter rating>=4 |>sort asc price\n|> sort desc rating"
        assert print_procedure(parse_procedure(messy)) == text

    def test_normal_form_rendering(self):
        p = parse_procedure("sort desc price |> filter rating >= 4 |> sort asc price |> sort desc rating")
        assert print_procedure(normalize(p).to_procedure()) == "filter rating >= 4 |> sort asc price |> sort desc rating"

    def test_or_parenthesized_inside_and(self):
        e = And((Or((Atom("a", Op.GE, Number(1)), Atom("b", Op.LE, Number(2)))), Atom("c", Op.GE, Number(0))))
        text = print_procedure(Procedure((Filter(e),)))
        assert text == "filter (a >= 1 or b <= 2) and c >= 0"

    def test_nested_and_keeps_structure(self):
        inner = And((Atom("a", Op.GE, Number(1)), Atom("b", Op.GE, Number(1))))
        e = And((inner, Atom("c", Op.GE, Number(0))))
        p = Procedure((Filter(e),))
        assert parse_procedure(print_procedure(p)) == p

    def test_label_escaping(self):
        p = Procedure((Filter(Atom("brand", Op.GE, Ordinal('we"ird'))),))
        assert parse_procedure(print_procedure(p)) == p


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10_000), st.booleans(), st.booleans())
def test_round_trip_generated(seed, general, ordinal):
    schema = gen_universe(3, 3, 3, seed, ordinal=ordinal).schema
    p = gen_procedure(schema, 6, seed, general=general, first_prob=0.3)
    text = print_procedure(p)
    if p == Procedure():
        assert text == ""
        return
    parsed = parse_procedure(text)
    if ordinal:
        parsed = bind_procedure(parsed, schema)
    assert parsed == p


_ALPHABET = st.sampled_from(
    ["filter", "sort", "asc", "desc", "first", "and", "or", "|>", "(", ")", ">=", "<=", "a", "b",
     "1", "-2.5", '"L"', '"', " ", "=", "|", "é", "\n", "<identity>", "3x", "."]
)


@settings(max_examples=500, deadline=None)
@given(st.lists(_ALPHABET, max_size=14))
def test_parser_is_total_on_token_soup(parts):
    text = " ".join(parts) if len(parts) % 2 else "".join(parts)
    try:
        p = parse_procedure(text)
    except ParseError as err:
        assert 0 <= err.span.start <= err.span.end <= len(text.encode("utf-8"))
    else:
        assert isinstance(p, Procedure)


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=40))
def test_parser_is_total_on_text(text):
    try:
        parse_procedure(text)
    except ParseError as err:
        assert err.span.start <= err.span.end


class TestSpecDocuments:
    def test_simple_spec(self):
        spec = parse_preference_spec(
            {"property": "rating >= 4", "ordering": [{"dir": "desc", "attr": "rating"}, {"dir": "asc", "attr": "price"}]}
        )
        assert spec.mode == "simple"
        assert spec.ordering == ((Direction.DESC, "rating"), (Direction.ASC, "price"))

    def test_listed_order_spec_is_simple(self):
        spec = parse_preference_spec(
            '{"property": "rating >= 4", "ordering": [{"dir": "asc", "attr": "price"}, {"dir": "desc", "attr": "rating"}]}'
        )
        assert spec.mode == "simple"
        assert spec.ordering[0] == (Direction.ASC, "price")

    def test_duplicate_ordering_attribute(self):
        with pytest.raises(SchemaError, match="duplicate"):
            parse_preference_spec(
                {"property": None, "ordering": [{"dir": "asc", "attr": "price"}, {"dir": "desc", "attr": "price"}]}
            )

    def test_general_spec(self):
        spec = parse_preference_spec({"property": "(bedrooms >= 3 or distance <= 1)", "ordering": []})
        assert spec.mode == "general"

    def test_property_syntax_error(self):
        with pytest.raises(ParseError):
            parse_preference_spec({"property": "rating >=", "ordering": []})

    def test_doc_round_trip(self):
        for seed in range(100):
            schema = gen_universe(4, 3, 3, seed).schema
            spec = gen_spec(schema, seed, general=seed % 2 == 1)
            assert parse_preference_spec(spec_to_doc(spec)) == spec
