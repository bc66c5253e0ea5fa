"""Evaluation of filter and sort stages over ranked lists.

Filters keep the relative order of surviving items and sorts are stable, so
every output is uniquely determined by the input list.
"""
from __future__ import annotations

import operator
from typing import Callable, Iterable, Sequence

from .model import (
    And,
    Atom,
    Catalog,
    Direction,
    EmptyChoice,
    FilterExpr,
    Op,
    Or,
    Procedure,
    RankedList,
    Sort,
)

Predicate = Callable[[str], bool]


def compile_filter(expr: FilterExpr, catalog: Catalog) -> Predicate:
    """Turn ``expr`` into a membership test on item ids of ``catalog``."""
    if isinstance(expr, Atom):
        bound = catalog.schema.decl(expr.attr).coerce(expr.bound).key
        column = catalog.column(expr.attr)
        cmp = operator.ge if expr.op is Op.GE else operator.le
        return lambda item: cmp(column[item], bound)
    parts = [compile_filter(c, catalog) for c in expr.children]
    if isinstance(expr, And):
        return lambda item: all(p(item) for p in parts)
    if isinstance(expr, Or):
        return lambda item: any(p(item) for p in parts)
    raise TypeError(f"not a filter expression: {expr!r}")


def satisfies(expr: FilterExpr, item: str, catalog: Catalog) -> bool:
    return compile_filter(expr, catalog)(item)


def apply_filter(pred: FilterExpr, l: Sequence[str], catalog: Catalog) -> RankedList:
    test = compile_filter(pred, catalog)
    return tuple(x for x in l if test(x))


def apply_sort(direction: Direction, attr: str, l: Sequence[str], catalog: Catalog) -> RankedList:
    # sorted() stays stable under reverse=True, which is exactly the
    # tie rule for the decreasing order.
    column = catalog.column(attr)
    return tuple(sorted(l, key=column.__getitem__, reverse=Direction(direction) is Direction.DESC))


def apply_stage(stage, l: Sequence[str], catalog: Catalog) -> RankedList:
    if isinstance(stage, Sort):
        return apply_sort(stage.direction, stage.attr, l, catalog)
    return apply_filter(stage.pred, l, catalog)


def run_stages(stages: Iterable, l: Sequence[str], catalog: Catalog) -> RankedList:
    out = tuple(l)
    for stage in stages:
        out = apply_stage(stage, out, catalog)
    return out


def first(l: Sequence[str]) -> str:
    if not l:
        raise EmptyChoice("no alternative left to choose from")
    return l[0]


def apply_procedure(p: Procedure, l: Sequence[str], catalog: Catalog) -> RankedList:
    """Run ``p`` on ``l``; with ``take_first`` the result is a singleton."""
    out = run_stages(p.stages, l, catalog)
    if p.take_first:
        return (first(out),)
    return out


def choose(p: Procedure, l: Sequence[str], catalog: Catalog) -> str:
    """``first`` applied after the stages of ``p``."""
    return first(run_stages(p.stages, l, catalog))


def a_equivalent_items(x: str, y: str, attrs: Iterable[str], catalog: Catalog) -> bool:
    return all(catalog.key(x, a) == catalog.key(y, a) for a in attrs)


def a_equivalent_lists(l1: Sequence[str], l2: Sequence[str], attrs: Iterable[str], catalog: Catalog) -> bool:
    if len(l1) != len(l2):
        return False
    columns = [catalog.column(a) for a in attrs]
    return all(col[x] == col[y] for x, y in zip(l1, l2) for col in columns)

