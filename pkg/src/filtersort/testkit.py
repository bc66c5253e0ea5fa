"""Small-universe generators and exhaustive list enumeration.

Value pools are deliberately tiny so that ties are common: the stability
rules for filters and sorts, and indifference between alternatives, only
show up when values collide.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Optional, Sequence, Union

from .model import (
    And,
    Atom,
    AttributeDecl,
    Catalog,
    Direction,
    Filter,
    FilterExpr,
    Number,
    Op,
    Or,
    Ordinal,
    PreferenceSpec,
    Procedure,
    RankedList,
    ResourceLimit,
    Schema,
    Sort,
    atom_order,
    conjunction,
)

Seed = Union[int, random.Random]


def _rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def count_lists(n_items: int, max_len: int) -> int:
    """Number of lists of length 0..max_len over ``n_items`` symbols."""
    return sum(n_items ** k for k in range(max_len + 1))


#: Enumeration budget: every list up to length 4 over 6 items.
DEFAULT_LIST_LIMIT = count_lists(6, 4)


def enumerate_lists(
    universe: Union[Catalog, Sequence[str]], max_len: int, limit: Optional[int] = DEFAULT_LIST_LIMIT
) -> Iterator[RankedList]:
    """All lists with repetition of length 0..max_len, shortest first, lexicographic within a length."""
    ids = universe.ids if isinstance(universe, Catalog) else tuple(universe)
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    total = count_lists(len(ids), max_len)
    if limit is not None and total > limit:
        raise ResourceLimit(f"{total} lists over {len(ids)} items up to length {max_len} exceeds the limit of {limit}")
    return _lists(ids, max_len)


def _lists(ids, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(ids, repeat=k)


def gen_universe(
    max_items: int, max_attrs: int, value_pool_size: int, seed: Seed, ordinal: bool = False
) -> Catalog:
    """A random catalog with integer values in ``0..value_pool_size-1``.

    With ``ordinal=True`` the last attribute is an ordinal one whose declared
    order has ``value_pool_size`` labels.
    """
    if min(max_items, max_attrs, value_pool_size) < 1:
        raise ValueError("bounds must be positive")
    rng = _rng(seed)
    n_items = rng.randint(min(2, max_items), max_items)
    n_attrs = rng.randint(1, max_attrs)
    decls = [AttributeDecl(f"a{k}") for k in range(n_attrs)]
    if ordinal:
        labels = tuple(f"L{k}" for k in range(value_pool_size))
        decls[-1] = AttributeDecl(decls[-1].name, "ordinal", labels)
    items = {}
    for i in range(n_items):
        values = {}
        for d in decls:
            v = rng.randrange(value_pool_size)
            values[d.name] = d.order[v] if d.kind == "ordinal" else str(v)
        items[f"x{i + 1}"] = values
    return Catalog.build(decls, items)


def _bound(decl: AttributeDecl, rng: random.Random, pool_size: int):
    if decl.kind == "ordinal":
        return Ordinal(rng.choice(decl.order), decl.order)
    # one step outside the pool on either side, so empty and vacuous filters occur
    return Number(rng.randint(-1, pool_size))


def gen_atom(schema: Schema, rng: random.Random, pool_size: int) -> Atom:
    decl = rng.choice(schema.attributes)
    return Atom(decl.name, rng.choice((Op.GE, Op.LE)), _bound(decl, rng, pool_size))


def gen_filter_expr(schema: Schema, seed: Seed, pool_size: int = 3, general: bool = True, depth: int = 2) -> FilterExpr:
    rng = _rng(seed)
    if depth <= 0 or rng.random() < 0.4:
        return gen_atom(schema, rng, pool_size)
    width = rng.randint(2, 3)
    parts = tuple(gen_filter_expr(schema, rng, pool_size, general, depth - 1) for _ in range(width))
    if general and rng.random() < 0.5:
        return Or(parts)
    if not general:
        # flatten so conjunctions stay conjunctions of atoms
        parts = tuple(a for p in parts for a in (p.children if isinstance(p, And) else (p,)))
    return And(parts)


def gen_procedure(
    schema: Schema,
    max_stages: int,
    seed: Seed,
    pool_size: int = 3,
    general: bool = False,
    first_prob: float = 0.0,
) -> Procedure:
    """A random procedure with 0..max_stages stages over declared attributes."""
    rng = _rng(seed)
    stages: List = []
    for _ in range(rng.randint(0, max_stages)):
        if rng.random() < 0.5:
            expr = gen_filter_expr(schema, rng, pool_size, general=general, depth=1)
            stages.append(Filter(expr))
        else:
            stages.append(Sort(rng.choice((Direction.ASC, Direction.DESC)), rng.choice(schema.names)))
    return Procedure(tuple(stages), rng.random() < first_prob)


def gen_spec(schema: Schema, seed: Seed, pool_size: int = 3, general: bool = False) -> PreferenceSpec:
    """A random spec; simple ones use at most one bound per side per attribute.

    Simple specs are generated already canonical (atoms in name order, lower
    bound first) so that they are fixed points of derive-after-synthesize.
    """
    rng = _rng(seed)
    names = list(schema.names)
    ordering_attrs = rng.sample(names, rng.randint(0, len(names)))
    ordering = tuple((rng.choice((Direction.ASC, Direction.DESC)), a) for a in ordering_attrs)
    if general:
        prop = gen_filter_expr(schema, rng, pool_size, general=True) if rng.random() < 0.9 else None
        return PreferenceSpec(prop, ordering)
    atoms = []
    for decl in schema.attributes:
        for op in (Op.GE, Op.LE):
            if rng.random() < 0.35:
                atoms.append(Atom(decl.name, op, _bound(decl, rng, pool_size)))
    return PreferenceSpec(conjunction(atom_order(atoms)), ordering)
