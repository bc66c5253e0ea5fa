"""Translating between procedures and definable preference relations.

A spec pairs a property ``F`` with a lexicographic ordering and defines

    x is weakly preferred to y  iff  not F(y) or (F(x) and x >=_lex y)

Priority convention: ``spec.ordering[0]`` is the primary key. In a
procedure the *last-applied* sort is the primary key, because each stable
sort only breaks ties left by the sorts applied after it. For example::

    filter rating >= 4 |> sort asc price |> sort desc rating

ranks by rating first (highest first) and by price among equal ratings, so
its spec ordering is ``[(desc, rating), (asc, price)]``.
"""
from __future__ import annotations

import enum
from typing import Callable, FrozenSet, Optional, Sequence, Tuple

from .engine import compile_filter, run_stages
from .model import (
    Catalog,
    Direction,
    Filter,
    NotSimple,
    PreferenceSpec,
    Procedure,
    RankedList,
    Schema,
    Sort,
    atom_order,
    atoms_of,
    conjunction,
)
from .normalizer import normalize
from .testkit import DEFAULT_LIST_LIMIT, enumerate_lists


class Lex(enum.Enum):
    X_BETTER = "x"
    Y_BETTER = "y"
    TIE = "tie"


class Pref(enum.Enum):
    STRICTLY_PREFER = "x>y"
    INDIFFERENT = "x~y"
    STRICTLY_DISPREFER = "x<y"


def lex_compare(ordering: Sequence[Tuple[Direction, str]], x: str, y: str, catalog: Catalog) -> Lex:
    for direction, attr in ordering:
        column = catalog.column(attr)
        vx, vy = column[x], column[y]
        if vx == vy:
            continue
        x_wins = vx < vy if Direction(direction) is Direction.ASC else vx > vy
        return Lex.X_BETTER if x_wins else Lex.Y_BETTER
    return Lex.TIE


def weak_preference(spec: PreferenceSpec, catalog: Catalog) -> Callable[[str, str], bool]:
    """Compile the relation ``A(x, y)`` of ``spec`` over ``catalog``."""
    prop = compile_filter(spec.prop, catalog) if spec.prop is not None else (lambda item: True)
    ordering = spec.ordering

    def relation(x: str, y: str) -> bool:
        if not prop(y):
            return True
        return prop(x) and lex_compare(ordering, x, y, catalog) is not Lex.Y_BETTER

    return relation


def weakly_prefers(spec: PreferenceSpec, x: str, y: str, catalog: Catalog) -> bool:
    return weak_preference(spec, catalog)(x, y)


def pref_compare(spec: PreferenceSpec, x: str, y: str, catalog: Catalog) -> Pref:
    relation = weak_preference(spec, catalog)
    xy, yx = relation(x, y), relation(y, x)
    if xy and yx:
        return Pref.INDIFFERENT
    if xy:
        return Pref.STRICTLY_PREFER
    # completeness guarantees at least one direction holds
    return Pref.STRICTLY_DISPREFER


def derive_spec(p: Procedure, schema: Optional[Schema] = None) -> PreferenceSpec:
    """The spec whose relation equals the derived preference of ``p``."""
    if not p.is_simple:
        raise NotSimple("procedure has disjunctive filters; use derive_general_spec")
    nf = normalize(p, schema)
    return PreferenceSpec(conjunction(nf.atoms()), tuple(reversed(nf.sorts)))


def synthesize_procedure(spec: PreferenceSpec) -> Procedure:
    """Filters for every property atom, then sorts from lowest to highest priority."""
    if spec.mode != "simple":
        raise NotSimple("spec property has disjunctions; use synthesize_general_procedure")
    atoms = atom_order(atoms_of(spec.prop)) if spec.prop is not None else ()
    stages = [Filter(a) for a in atoms]
    stages.extend(Sort(d, a) for d, a in reversed(spec.ordering))
    return Procedure(tuple(stages))


def _witnesses(out: RankedList, x: str, y: str) -> bool:
    # every occurrence of y in the output has an x somewhere before it
    if y not in out:
        return True
    return x in out[: out.index(y)]


def derived_preference_oracle(
    p: Procedure,
    x: str,
    y: str,
    universe: Catalog,
    max_len: int = 4,
    limit: Optional[int] = DEFAULT_LIST_LIMIT,
) -> bool:
    """Literal search for a list witnessing that ``x`` is weakly P-preferred to ``y``.

    A trailing ``first`` is ignored: the relation is defined on list-to-list
    procedures. Read literally the definition never relates an item to
    itself once it survives the filters, so compare distinct items only.
    """
    for l in enumerate_lists(universe, max_len, limit):
        if x in l and y in l and _witnesses(run_stages(p.stages, l, universe), x, y):
            return True
    return False


def derived_preference_relation(
    p: Procedure,
    universe: Catalog,
    max_len: int = 4,
    limit: Optional[int] = DEFAULT_LIST_LIMIT,
) -> FrozenSet[Tuple[str, str]]:
    """All pairs related by the derived preference, one evaluation per list."""
    related = set()
    for l in enumerate_lists(universe, max_len, limit):
        members = set(l)
        if len(members) < 2:
            continue
        out = run_stages(p.stages, l, universe)
        for x in members:
            for y in members:
                if x != y and (x, y) not in related and _witnesses(out, x, y):
                    related.add((x, y))
    return frozenset(related)


def spec_relation(spec: PreferenceSpec, universe: Catalog) -> FrozenSet[Tuple[str, str]]:
    """All pairs of distinct items related by ``spec``."""
    relation = weak_preference(spec, universe)
    ids = universe.ids
    return frozenset((x, y) for x in ids for y in ids if x != y and relation(x, y))


def maximal_elements(spec: PreferenceSpec, universe: Catalog) -> FrozenSet[str]:
    relation = weak_preference(spec, universe)
    ids = universe.ids
    return frozenset(x for x in ids if all(relation(x, y) for y in ids))
