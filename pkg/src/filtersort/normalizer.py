"""Rewriting procedures into their canonical filters-then-sorts form.

The rewrite uses four facts about the stage algebra:

* any two filters commute, and a filter commutes with any sort (the outputs
  are the same list, not just equivalent ones);
* two lower bounds on one attribute merge into their maximum, two upper
  bounds into their minimum;
* a sort on attribute ``a`` makes every earlier sort on ``a`` irrelevant.

So a conjunctive procedure reduces to one interval per attribute followed by
the last-applied sort of each attribute, in their original relative order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .engine import apply_procedure
from .model import (
    Atom,
    Catalog,
    Direction,
    EmptyChoice,
    Filter,
    NotSimple,
    Op,
    Ordering,
    Procedure,
    RankedList,
    Schema,
    Sort,
    Value,
    atoms_of,
    bind_procedure,
    compare_values,
    conjunction,
    is_conjunctive,
    value_max,
    value_min,
)
from .testkit import DEFAULT_LIST_LIMIT, enumerate_lists


@dataclass(frozen=True)
class Interval:
    lower: Optional[Value] = None
    upper: Optional[Value] = None

    @property
    def empty(self) -> bool:
        """True when the bounds cross, so the pair of filters rejects everything."""
        if self.lower is None or self.upper is None:
            return False
        return compare_values(self.lower, self.upper) is Ordering.GREATER

    @property
    def length(self) -> int:
        return (self.lower is not None) + (self.upper is not None)

    def atoms(self, attr: str) -> Tuple[Atom, ...]:
        out = []
        if self.lower is not None:
            out.append(Atom(attr, Op.GE, self.lower))
        if self.upper is not None:
            out.append(Atom(attr, Op.LE, self.upper))
        return tuple(out)


@dataclass(frozen=True)
class NormalForm:
    filters: Tuple[Tuple[str, Interval], ...]
    sorts: Tuple[Tuple[Direction, str], ...]
    take_first: bool = False

    @property
    def empty_attributes(self) -> Tuple[str, ...]:
        return tuple(a for a, iv in self.filters if iv.empty)

    @property
    def is_empty(self) -> bool:
        return bool(self.empty_attributes)

    def atoms(self) -> Tuple[Atom, ...]:
        return tuple(atom for attr, iv in self.filters for atom in iv.atoms(attr))

    def to_procedure(self) -> Procedure:
        stages = [Filter(a) for a in self.atoms()]
        stages.extend(Sort(d, a) for d, a in self.sorts)
        return Procedure(tuple(stages), self.take_first)


def length(nf: NormalForm) -> int:
    """Filter plus sort stages; a crossed interval still counts both bounds."""
    return sum(iv.length for _, iv in nf.filters) + len(nf.sorts)


def merge_atoms(atoms: Iterable[Atom]) -> Tuple[Tuple[str, Interval], ...]:
    bounds = {}
    for atom in atoms:
        lo, hi = bounds.get(atom.attr, (None, None))
        if atom.op is Op.GE:
            lo = atom.bound if lo is None else value_max(lo, atom.bound)
        else:
            hi = atom.bound if hi is None else value_min(hi, atom.bound)
        bounds[atom.attr] = (lo, hi)
    return tuple((attr, Interval(*bounds[attr])) for attr in sorted(bounds))


def dedupe_sorts(sorts: Sequence[Sort]) -> Tuple[Tuple[Direction, str], ...]:
    """Keep the last-applied sort per attribute, preserving survivor order."""
    seen = set()
    kept = []
    for s in reversed(sorts):
        if s.attr not in seen:
            seen.add(s.attr)
            kept.append((s.direction, s.attr))
    return tuple(reversed(kept))


def normalize(p: Procedure, schema: Optional[Schema] = None) -> NormalForm:
    """Canonical form of a conjunctive procedure.

    Ordinal bounds must be bound to a declared order before they can be
    merged; pass ``schema`` when the procedure came straight from the parser.
    """
    if schema is not None:
        p = bind_procedure(p, schema)
    atoms = []
    sorts = []
    for stage in p.stages:
        if isinstance(stage, Sort):
            sorts.append(stage)
        elif not is_conjunctive(stage.pred):
            raise NotSimple("filter contains 'or'; use the general module to normalize it")
        else:
            atoms.extend(atoms_of(stage.pred))
    return NormalForm(merge_atoms(atoms), dedupe_sorts(sorts), p.take_first)


@dataclass(frozen=True)
class EquivalenceResult:
    counterexample: Optional[RankedList] = None

    @property
    def equivalent(self) -> bool:
        return self.counterexample is None

    def __bool__(self):
        return self.equivalent


def _outcome(p: Procedure, l: RankedList, catalog: Catalog):
    try:
        return apply_procedure(p, l, catalog)
    except EmptyChoice:
        return EmptyChoice


def check_equivalence(
    p1: Procedure,
    p2: Procedure,
    universe: Catalog,
    attrs: Optional[Iterable[str]] = None,
    max_len: int = 4,
    limit: Optional[int] = DEFAULT_LIST_LIMIT,
) -> EquivalenceResult:
    """Compare two procedures on every list up to ``max_len`` over ``universe``.

    Outputs must be A-equivalent for ``attrs`` (all schema attributes by
    default). Two runs that both end in an empty ``first`` count as agreeing.
    """
    attrs = tuple(universe.schema.names if attrs is None else attrs)
    columns = [universe.column(a) for a in attrs]
    for l in enumerate_lists(universe, max_len, limit):
        r1 = _outcome(p1, l, universe)
        r2 = _outcome(p2, l, universe)
        if r1 is EmptyChoice or r2 is EmptyChoice:
            if r1 is not r2:
                return EquivalenceResult(l)
            continue
        if len(r1) != len(r2) or any(col[x] != col[y] for x, y in zip(r1, r2) for col in columns):
            return EquivalenceResult(l)
    return EquivalenceResult()


def distinct_attribute_count(p: Procedure) -> int:
    return len(p.attributes())


def conjunctive_filter(nf: NormalForm):
    """The normal form's filters as one expression (None when there are none)."""
    return conjunction(nf.atoms())
