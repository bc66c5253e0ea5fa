import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filtersort.dsl import parse_procedure, print_procedure
from filtersort.model import (
    Atom,
    AttributeDecl,
    Catalog,
    Direction,
    Filter,
    NotSimple,
    Number,
    Op,
    Procedure,
    ResourceLimit,
    Sort,
)
from filtersort.normalizer import (
    Interval,
    check_equivalence,
    distinct_attribute_count,
    length,
    normalize,
)
from filtersort.testkit import gen_procedure, gen_universe

WORKED = "sort desc price |> filter rating >= 4 |> sort asc price |> sort desc rating"


def test_worked_example():
    nf = normalize(parse_procedure(WORKED))
    assert nf.filters == (("rating", Interval(Number("4"), None)),)
    assert nf.sorts == ((Direction.ASC, "price"), (Direction.DESC, "rating"))
    assert length(nf) == 3


def test_lower_bounds_merge_by_max():
    nf = normalize(parse_procedure("filter price >= 5 |> filter price >= 9"))
    assert nf.atoms() == (Atom("price", Op.GE, Number("9")),)
    assert length(nf) == 1


def test_upper_bounds_merge_by_min():
    nf = normalize(parse_procedure("filter price <= 5 |> filter price <= 9.5 |> filter price >= 1"))
    assert nf.atoms() == (Atom("price", Op.GE, Number("1")), Atom("price", Op.LE, Number("5")))


def test_empty_interval():
    nf = normalize(parse_procedure("filter price <= 3 |> filter price >= 7"))
    assert nf.empty_attributes == ("price",)
    assert length(nf) == 2


def test_identity():
    assert length(normalize(Procedure())) == 0
    assert length(normalize(Procedure(take_first=True))) == 0


def test_bound_attained():
    p = parse_procedure(
        "filter a >= 1 |> filter b <= 2 |> sort asc a |> filter a <= 3 |> sort desc b |> filter b >= 0"
    )
    nf = normalize(p)
    assert length(nf) == 6 == 3 * distinct_attribute_count(p)


def test_canonical_filter_order():
    nf = normalize(parse_procedure("filter z <= 1 |> filter b <= 1 |> filter z >= 0 |> filter a >= 1"))
    assert [(a.attr, a.op) for a in nf.atoms()] == [("a", Op.GE), ("b", Op.LE), ("z", Op.GE), ("z", Op.LE)]


def test_take_first_passes_through():
    nf = normalize(parse_procedure("sort asc a |> first"))
    assert nf.take_first and nf.to_procedure().take_first


def test_or_is_not_simple():
    with pytest.raises(NotSimple):
        normalize(parse_procedure("filter a >= 1 or b >= 1"))


def test_ordinal_bounds_need_schema(disks):
    p = parse_procedure('filter brand >= "Samsung" |> filter brand >= "Seagate"')
    nf = normalize(p, disks.schema)
    assert [a.bound.label for a in nf.atoms()] == ["Seagate"]


def test_last_sort_per_attribute_survives():
    nf = normalize(parse_procedure("sort asc a |> sort desc b |> sort desc a |> sort asc c |> sort asc b"))
    assert nf.sorts == ((Direction.DESC, "a"), (Direction.ASC, "c"), (Direction.ASC, "b"))


@pytest.fixture
def pair():
    return Catalog.build([AttributeDecl("price")], {"x1": {"price": "1"}, "x2": {"price": "2"}})


class TestCheckEquivalence:
    def test_asc_vs_desc(self, pair):
        res = check_equivalence(parse_procedure("sort asc price"), parse_procedure("sort desc price"), pair)
        assert not res.equivalent
        assert len(res.counterexample) == 2

    def test_reflexive(self, books):
        small = Catalog.build(books.schema.attributes, {x: {a: str(books.value(x, a).value) for a in ("price", "rating")} for x in books.ids[:5]})
        p = parse_procedure(WORKED)
        assert check_equivalence(p, p, small)

    def test_attrs_restrict_comparison(self):
        cat = Catalog.build(
            [AttributeDecl("a"), AttributeDecl("b")],
            {"x1": {"a": "1", "b": "1"}, "x2": {"a": "1", "b": "2"}},
        )
        p1, p2 = parse_procedure("sort asc b"), parse_procedure("sort desc b")
        assert not check_equivalence(p1, p2, cat)
        assert check_equivalence(p1, p2, cat, attrs=["a"])

    def test_empty_choice_on_one_side_only(self, pair):
        p1 = parse_procedure("filter price >= 5 |> first")
        p2 = parse_procedure("filter price >= 5")
        assert check_equivalence(p1, p1, pair)
        assert not check_equivalence(p1, p2, pair)

    def test_guard(self):
        cat = Catalog.build([AttributeDecl("a")], {f"x{i}": {"a": "0"} for i in range(7)})
        with pytest.raises(ResourceLimit):
            check_equivalence(Procedure(), Procedure(), cat)


SEEDS = st.integers(0, 100_000)


@settings(max_examples=150, deadline=None)
@given(SEEDS)
def test_sound_on_generated(seed):
    u = gen_universe(5, 3, 3, seed, ordinal=seed % 4 == 0)
    p = gen_procedure(u.schema, 6, seed, first_prob=0.3)
    nf = normalize(p)
    assert check_equivalence(p, nf.to_procedure(), u, max_len=3)
    assert length(nf) <= 3 * distinct_attribute_count(p)


@settings(max_examples=300, deadline=None)
@given(SEEDS)
def test_idempotent(seed):
    u = gen_universe(4, 3, 3, seed, ordinal=seed % 2 == 0)
    p = gen_procedure(u.schema, 8, seed, first_prob=0.3)
    nf = normalize(p)
    assert normalize(nf.to_procedure()) == nf


def _shuffle_commuting(p, rng):
    # filters commute with everything, so move each filter to a random position
    filters = [s for s in p.stages if isinstance(s, Filter)]
    stages = [s for s in p.stages if isinstance(s, Sort)]
    for f in filters:
        stages.insert(rng.randint(0, len(stages)), f)
    return Procedure(tuple(stages), p.take_first)


@settings(max_examples=300, deadline=None)
@given(SEEDS)
def test_commuting_permutations_normalize_identically(seed):
    u = gen_universe(4, 3, 3, seed)
    rng = random.Random(seed)
    p = gen_procedure(u.schema, 8, rng)
    assert normalize(_shuffle_commuting(p, rng)) == normalize(p)


def test_normal_form_prints_filters_first():
    text = print_procedure(normalize(parse_procedure("sort asc a |> filter b >= 1 |> sort desc b")).to_procedure())
    assert text == "filter b >= 1 |> sort asc a |> sort desc b"
