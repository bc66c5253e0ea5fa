"""Filters built from unions and intersections, in conjunctive normal form.

Atoms are treated as opaque propositions during conversion: ``a >= 5`` and
``a >= 3`` are never simplified against each other, so the canonical CNF
depends only on the boolean structure of the expression.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .engine import compile_filter
from .model import (
    And,
    Atom,
    Catalog,
    Direction,
    Filter,
    FilterExpr,
    Number,
    Op,
    Or,
    PreferenceSpec,
    Procedure,
    RankedList,
    ResourceLimit,
    Schema,
    Sort,
    bind_procedure,
    conjunction,
    disjunction,
)
from .normalizer import dedupe_sorts, merge_atoms
from .preference import derive_spec, synthesize_procedure

DEFAULT_MAX_CLAUSES = 4096

Clause = Tuple[Atom, ...]


def atom_key(a: Atom):
    if isinstance(a.bound, Number):
        bound = (0, a.bound.value)
    elif a.bound.order is not None:
        bound = (1, a.bound.level, a.bound.label)
    else:
        bound = (2, 0, a.bound.label)
    return (a.attr, 0 if a.op is Op.GE else 1, bound)


def _clause_key(clause: Clause):
    return [atom_key(a) for a in clause]


@dataclass(frozen=True)
class CnfFilter:
    """A conjunction of clauses, each clause a disjunction of atoms."""

    clauses: Tuple[Clause, ...]

    @classmethod
    def of(cls, clauses: Iterable[Iterable[Atom]]) -> "CnfFilter":
        """Canonicalize: sort atoms and clauses, drop duplicates of either."""
        unique = {frozenset(c) for c in clauses}
        if frozenset() in unique:
            raise ValueError("a clause needs at least one atom")
        ordered = [tuple(sorted(c, key=atom_key)) for c in unique]
        return cls(tuple(sorted(ordered, key=_clause_key)))

    def to_expr(self) -> Optional[FilterExpr]:
        return conjunction([disjunction(c) for c in self.clauses])

    def atoms(self) -> Tuple[Atom, ...]:
        return tuple(a for c in self.clauses for a in c)

    @property
    def is_conjunctive(self) -> bool:
        return all(len(c) == 1 for c in self.clauses)

    def holds_under(self, valuation) -> bool:
        """Truth value when every atom is looked up in ``valuation``."""
        return all(any(valuation[a] for a in c) for c in self.clauses)


def _cnf_sets(expr: FilterExpr, cap: int) -> FrozenSet[FrozenSet[Atom]]:
    if isinstance(expr, Atom):
        return frozenset({frozenset({expr})})
    parts = [_cnf_sets(c, cap) for c in expr.children]
    if isinstance(expr, And):
        out = frozenset().union(*parts)
    else:
        acc = {frozenset()}
        for part in parts:
            acc = {c1 | c2 for c1 in acc for c2 in part}
            if len(acc) > cap:
                break
        out = frozenset(acc)
    if len(out) > cap:
        raise ResourceLimit(f"conjunctive normal form needs more than {cap} clauses")
    return out


def to_cnf(expr: Optional[FilterExpr], max_clauses: int = DEFAULT_MAX_CLAUSES) -> CnfFilter:
    """Distribute ``or`` over ``and``; None (always true) gives no clauses."""
    if expr is None:
        return CnfFilter(())
    return CnfFilter.of(_cnf_sets(expr, max_clauses))


def evaluate_expr(expr: FilterExpr, valuation) -> bool:
    """Truth value of ``expr`` with atoms looked up in ``valuation``."""
    if isinstance(expr, Atom):
        return valuation[expr]
    if isinstance(expr, And):
        return all(evaluate_expr(c, valuation) for c in expr.children)
    return any(evaluate_expr(c, valuation) for c in expr.children)


def apply_general_filter(f: CnfFilter, l: Sequence[str], catalog: Catalog) -> RankedList:
    tests: List = [[compile_filter(a, catalog) for a in clause] for clause in f.clauses]
    return tuple(x for x in l if all(any(t(x) for t in clause) for clause in tests))


@dataclass(frozen=True)
class GeneralNormalForm:
    cnf: CnfFilter
    sorts: Tuple[Tuple[Direction, str], ...]
    take_first: bool = False

    def to_procedure(self) -> Procedure:
        expr = self.cnf.to_expr()
        stages: List = [] if expr is None else [Filter(expr)]
        stages.extend(Sort(d, a) for d, a in self.sorts)
        return Procedure(tuple(stages), self.take_first)


def general_length(nf: GeneralNormalForm) -> int:
    """Clause count plus sort count. No 3N bound is claimed for this measure."""
    return len(nf.cnf.clauses) + len(nf.sorts)


def normalize_general(
    p: Procedure, schema: Optional[Schema] = None, max_clauses: int = DEFAULT_MAX_CLAUSES
) -> GeneralNormalForm:
    """One CNF filter stage followed by the surviving sorts."""
    if schema is not None:
        p = bind_procedure(p, schema)
    preds = [s.pred for s in p.stages if isinstance(s, Filter)]
    sorts = [s for s in p.stages if isinstance(s, Sort)]
    return GeneralNormalForm(to_cnf(conjunction(preds), max_clauses), dedupe_sorts(sorts), p.take_first)


def derive_general_spec(
    p: Procedure, schema: Optional[Schema] = None, max_clauses: int = DEFAULT_MAX_CLAUSES
) -> PreferenceSpec:
    """Spec for any procedure; conjunctive ones go through :func:`derive_spec`."""
    if p.is_simple:
        return derive_spec(p, schema)
    nf = normalize_general(p, schema, max_clauses)
    return PreferenceSpec(nf.cnf.to_expr(), tuple(reversed(nf.sorts)))


def synthesize_general_procedure(spec: PreferenceSpec, max_clauses: int = DEFAULT_MAX_CLAUSES) -> Procedure:
    """A single CNF filter stage, then sorts from lowest to highest priority."""
    expr = to_cnf(spec.prop, max_clauses).to_expr()
    stages: List = [] if expr is None else [Filter(expr)]
    stages.extend(Sort(d, a) for d, a in reversed(spec.ordering))
    return Procedure(tuple(stages))


def synthesize_any(spec: PreferenceSpec) -> Procedure:
    if spec.mode == "simple":
        return synthesize_procedure(spec)
    return synthesize_general_procedure(spec)


def canonical_general_spec(spec: PreferenceSpec, max_clauses: int = DEFAULT_MAX_CLAUSES) -> PreferenceSpec:
    """Spec with its property replaced by the expression of its canonical CNF.

    A CNF made of singleton clauses is a plain conjunction, so its bounds are
    merged per attribute the same way the simple normal form merges them.
    """
    cnf = to_cnf(spec.prop, max_clauses)
    if cnf.is_conjunctive:
        atoms = [a for attr, iv in merge_atoms(cnf.atoms()) for a in iv.atoms(attr)]
        return PreferenceSpec(conjunction(atoms), spec.ordering)
    return PreferenceSpec(cnf.to_expr(), spec.ordering)
