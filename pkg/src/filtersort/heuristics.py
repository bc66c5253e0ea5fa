"""Fallback choice rules and the step-count cost model.

Step model: a filter or sort stage costs one step, one pairwise comparison
costs one step, and inspecting one element while satisficing costs one step.
Verdicts compare a procedure against element-by-element maximization,
which always needs ``n - 1`` comparisons.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence, Tuple, Union

from .engine import apply_filter, compile_filter, first, run_stages
from .general import general_length, normalize_general, synthesize_any, synthesize_general_procedure
from .model import (
    Catalog,
    CostReport,
    Direction,
    EmptyChoice,
    FilterExpr,
    NoSatisfactoryElement,
    PreferenceSpec,
    Procedure,
    RankedList,
    Sort,
)
from .normalizer import EquivalenceResult, length, normalize
from .preference import maximal_elements, synthesize_procedure, weak_preference
from .testkit import DEFAULT_LIST_LIMIT, enumerate_lists

PROCEDURE_QUICKER = "procedureQuicker"
BASELINE_QUICKER = "baselineQuicker"
EQUAL = "equal"


@dataclass(frozen=True)
class SatisficingSet:
    """Satisfactory alternatives, given by a predicate or by explicit ids."""

    expr: Optional[FilterExpr] = None
    ids: Optional[FrozenSet[str]] = None

    def __post_init__(self):
        if (self.expr is None) == (self.ids is None):
            raise ValueError("give exactly one of expr or ids")
        if self.ids is not None:
            object.__setattr__(self, "ids", frozenset(self.ids))

    def membership(self, catalog: Catalog):
        if self.ids is not None:
            return self.ids.__contains__
        return compile_filter(self.expr, catalog)


def _as_set(s: Union[SatisficingSet, FilterExpr, FrozenSet[str], set]) -> SatisficingSet:
    if isinstance(s, SatisficingSet):
        return s
    if isinstance(s, (set, frozenset)):
        return SatisficingSet(ids=frozenset(s))
    return SatisficingSet(expr=s)


def satisfice(s, l: Sequence[str], catalog: Catalog) -> str:
    """First satisfactory element of ``l``, or its last element if there is none."""
    if not l:
        raise EmptyChoice("cannot satisfice over an empty list")
    member = _as_set(s).membership(catalog)
    for x in l:
        if member(x):
            return x
    return l[-1]


def local_max(
    target: str,
    keys: Sequence[str],
    l: Sequence[str],
    catalog: Catalog,
    direction: Direction = Direction.DESC,
) -> str:
    """Best ``target`` value within the leading run that shares ``keys`` values.

    ``direction`` DESC picks the largest value, ASC the smallest; ties go to
    the earliest element.
    """
    if not l:
        raise EmptyChoice("cannot maximize over an empty list")
    key_columns = [catalog.column(k) for k in keys]
    column = catalog.column(target)
    lead = l[0]
    signature = [col[lead] for col in key_columns]
    best = lead
    for x in l[1:]:
        if [col[x] for col in key_columns] != signature:
            break
        better = column[x] > column[best] if direction is Direction.DESC else column[x] < column[best]
        if better:
            best = x
    return best


def element_by_element_max(spec: PreferenceSpec, l: Sequence[str], catalog: Catalog) -> Tuple[str, int]:
    """Pairwise tournament; the incumbent is kept unless strictly beaten."""
    if not l:
        raise EmptyChoice("cannot maximize over an empty list")
    relation = weak_preference(spec, catalog)
    best = l[0]
    comparisons = 0
    for x in l[1:]:
        comparisons += 1
        if not relation(best, x):
            best = x
    return best, comparisons


def _verdict(procedure_steps: int, baseline_steps: int) -> str:
    if procedure_steps < baseline_steps:
        return PROCEDURE_QUICKER
    if procedure_steps > baseline_steps:
        return BASELINE_QUICKER
    return EQUAL


def compare_costs(spec: PreferenceSpec, n: int, filtered_length: Optional[int] = None) -> CostReport:
    """Filter-and-sort versus element-by-element cost for a list of length ``n``.

    The verdict uses the normal-form bound of three stages per attribute,
    so it is ``procedureQuicker`` exactly when ``3N < n - 1``. The actual
    normal-form length of the synthesized procedure is reported alongside.
    """
    if spec.mode == "simple":
        nf_length = length(normalize(synthesize_procedure(spec)))
    else:
        nf_length = general_length(normalize_general(synthesize_general_procedure(spec)))
    n_attrs = len(spec.attributes())
    return CostReport(
        procedure_length=nf_length,
        attribute_count=n_attrs,
        input_length=n,
        filtered_length=filtered_length,
        verdict=_verdict(3 * n_attrs, max(n - 1, 0)),
    )


def satisfice_cost_check(n_attrs: int, n: int, n_filtered: int) -> str:
    """Filter/sort then satisfice (``3N + n'`` steps) against ``n`` for maximizing."""
    if not 0 <= n_filtered <= n:
        raise ValueError("need 0 <= n' <= n")
    return _verdict(3 * n_attrs + n_filtered, n)


def satisfice_after_procedure(p: Procedure, missing: FilterExpr, l: Sequence[str], catalog: Catalog) -> str:
    """Run ``p`` then satisfice on the predicate the platform cannot filter by."""
    out = run_stages(p.stages, l, catalog)
    if not apply_filter(missing, out, catalog):
        raise NoSatisfactoryElement("no element of the procedure's output satisfies the missing predicate")
    return satisfice(missing, out, catalog)


@dataclass(frozen=True)
class StepCount:
    procedure_steps: int
    satisfice_inspections: int
    item_visits: int
    baseline_comparisons: int


def step_counts(p: Procedure, missing: Optional[FilterExpr], l: Sequence[str], catalog: Catalog) -> StepCount:
    """Literal stage/comparison steps plus raw item visits (a secondary metric)."""
    visits = 0
    out = tuple(l)
    for stage in p.stages:
        visits += len(out)
        out = run_stages((stage,), out, catalog)
    inspections = 0
    if missing is not None and out:
        member = compile_filter(missing, catalog)
        for x in out:
            inspections += 1
            if member(x):
                break
    return StepCount(len(p.stages), inspections, visits + inspections, max(len(l) - 1, 0))


def _outcome(fn):
    try:
        return fn()
    except EmptyChoice:
        return EmptyChoice


def local_max_equivalence_check(
    target: str,
    keys: Sequence[Tuple[Direction, str]],
    p: Procedure,
    universe: Catalog,
    max_len: int = 4,
    direction: Direction = Direction.DESC,
    limit: Optional[int] = DEFAULT_LIST_LIMIT,
) -> EquivalenceResult:
    """Check sorting by ``target`` then ``keys`` + first against local maximization.

    ``keys`` are in priority order (first entry primary); both sides apply
    them last-to-first after ``p``.
    """
    key_sorts = tuple(Sort(d, a) for d, a in reversed(keys))
    key_names = [a for _, a in keys]
    lhs_stages = p.stages + (Sort(direction, target),) + key_sorts
    rhs_stages = p.stages + key_sorts
    for l in enumerate_lists(universe, max_len, limit):
        lhs = _outcome(lambda: first(run_stages(lhs_stages, l, universe)))
        rhs = _outcome(lambda: local_max(target, key_names, run_stages(rhs_stages, l, universe), universe, direction))
        if lhs != rhs:
            return EquivalenceResult(l)
    return EquivalenceResult()


@dataclass(frozen=True)
class SatisficingCheck:
    procedure_choice: str
    satisficing_choice: str

    @property
    def holds(self) -> bool:
        return self.procedure_choice == self.satisficing_choice


def satisficing_as_maximal_set(spec: PreferenceSpec, l: Sequence[str], universe: Catalog) -> SatisficingCheck:
    """Compare ``first`` after the synthesized procedure with satisficing on the maximal set.

    The satisficing set is the set of maximal elements of ``universe``. The
    list must contain one of them that also satisfies the spec's property;
    when nothing in the universe satisfies the property every item is
    maximal while the procedure empties every list.
    """
    maximal = maximal_elements(spec, universe)
    prop = compile_filter(spec.prop, universe) if spec.prop is not None else (lambda item: True)
    if not any(x in maximal and prop(x) for x in l):
        raise NoSatisfactoryElement("list holds no maximal element satisfying the property")
    chosen = first(run_stages(synthesize_any(spec).stages, l, universe))
    return SatisficingCheck(chosen, satisfice(maximal, l, universe))


def filtered_length(spec: PreferenceSpec, l: RankedList, catalog: Catalog) -> int:
    if spec.prop is None:
        return len(l)
    return len(apply_filter(spec.prop, l, catalog))
