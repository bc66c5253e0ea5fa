"""Domain types shared by every other module.

Values are exact: numeric attributes carry :class:`decimal.Decimal` scalars and
ordinal attributes carry a position in an explicitly declared label order.
Everything here is immutable after construction.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

#: An ordered sequence of item ids drawn from one catalog; duplicates allowed.
RankedList = Tuple[str, ...]


class SchemaError(ValueError):
    """A value, predicate or stage does not fit the declared schema."""


class EmptyChoice(LookupError):
    """A choice was requested from an empty list."""


class NoSatisfactoryElement(LookupError):
    """A satisficing guard failed: no acceptable element exists."""


class ResourceLimit(RuntimeError):
    """An enumeration or expansion would exceed its configured bound."""


class NotSimple(ValueError):
    """A disjunctive filter reached an operation that needs pure conjunctions."""


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


# --------------------------------------------------------------------------
# Values
# --------------------------------------------------------------------------


class Number:
    """An exact decimal scalar. ``Number("10")`` equals ``Number("10.0")``."""

    __slots__ = ("value",)

    def __init__(self, value: Union[str, int, Decimal]):
        if isinstance(value, Decimal):
            dec = value
        else:
            if isinstance(value, float) or isinstance(value, bool):
                raise SchemaError(f"numeric values must be exact, got {value!r}")
            try:
                dec = Decimal(str(value).strip())
            except InvalidOperation:
                raise SchemaError(f"not a decimal literal: {value!r}") from None
        if not dec.is_finite():
            raise SchemaError(f"not a finite decimal: {value!r}")
        object.__setattr__(self, "value", dec)

    def __setattr__(self, name, value):
        raise AttributeError("Number is immutable")

    @property
    def key(self) -> Decimal:
        return self.value

    def __eq__(self, other):
        if isinstance(other, Number):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(("num", self.value))

    def __repr__(self):
        return f"Number({str(self.value)!r})"

    def __str__(self):
        return str(self.value)


class Ordinal:
    """A label from a finite declared order, ``order[0]`` being the lowest.

    ``order`` may be ``None`` for a label read from source text that has not
    yet been bound to a schema; such a label only compares equal to itself.
    """

    __slots__ = ("label", "order")

    def __init__(self, label: str, order: Optional[Sequence[str]] = None):
        order = tuple(order) if order is not None else None
        if order is not None and label not in order:
            raise SchemaError(f"label {label!r} not in declared order {list(order)}")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    @property
    def bound(self) -> bool:
        return self.order is not None

    @property
    def level(self) -> int:
        if self.order is None:
            raise SchemaError(f"label {self.label!r} is not bound to a declared order")
        return self.order.index(self.label)

    @property
    def key(self) -> int:
        return self.level

    def __eq__(self, other):
        if isinstance(other, Ordinal):
            return self.label == other.label and self.order == other.order
        return NotImplemented

    def __hash__(self):
        return hash(("ord", self.label, self.order))

    def __repr__(self):
        if self.order is None:
            return f"Ordinal({self.label!r})"
        return f"Ordinal({self.label!r}, order={list(self.order)!r})"

    def __str__(self):
        return self.label


Value = Union[Number, Ordinal]


def compare_values(a: Value, b: Value) -> Ordering:
    """Exact three-way comparison of two values of the same kind."""
    if isinstance(a, Number) and isinstance(b, Number):
        x, y = a.value, b.value
    elif isinstance(a, Ordinal) and isinstance(b, Ordinal):
        if a.order != b.order:
            raise SchemaError(f"ordinals {a.label!r} and {b.label!r} belong to different orders")
        x, y = a.level, b.level
    else:
        raise SchemaError(f"cannot compare {a!r} with {b!r}: kind mismatch")
    if x < y:
        return Ordering.LESS
    if x > y:
        return Ordering.GREATER
    return Ordering.EQUAL


def value_max(a: Value, b: Value) -> Value:
    return b if compare_values(a, b) is Ordering.LESS else a


def value_min(a: Value, b: Value) -> Value:
    return b if compare_values(a, b) is Ordering.GREATER else a


# --------------------------------------------------------------------------
# Schema and catalog
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    kind: str = "numeric"
    order: Tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.name, str) or not IDENT_RE.match(self.name):
            raise SchemaError(f"invalid attribute name {self.name!r}")
        if self.kind not in ("numeric", "ordinal"):
            raise SchemaError(f"attribute {self.name!r}: unknown kind {self.kind!r}")
        object.__setattr__(self, "order", tuple(self.order))
        if self.kind == "ordinal":
            if not self.order:
                raise SchemaError(f"ordinal attribute {self.name!r} needs a declared order")
            if len(set(self.order)) != len(self.order):
                raise SchemaError(f"ordinal attribute {self.name!r} has duplicate labels")
        elif self.order:
            raise SchemaError(f"numeric attribute {self.name!r} cannot declare an order")

    def coerce(self, raw) -> Value:
        """Turn a raw document value (or an unbound label) into a typed Value."""
        if self.kind == "numeric":
            if isinstance(raw, Number):
                return raw
            if isinstance(raw, Ordinal):
                raise SchemaError(f"attribute {self.name!r} is numeric, got label {raw.label!r}")
            return Number(raw)
        if isinstance(raw, Number):
            raise SchemaError(f"attribute {self.name!r} is ordinal, got number {raw}")
        label = raw.label if isinstance(raw, Ordinal) else raw
        if not isinstance(label, str):
            raise SchemaError(f"attribute {self.name!r} is ordinal, got {raw!r}")
        return Ordinal(label, self.order)

    def accepts(self, v: Value) -> bool:
        if self.kind == "numeric":
            return isinstance(v, Number)
        return isinstance(v, Ordinal) and v.order == self.order


@dataclass(frozen=True)
class Schema:
    attributes: Tuple[AttributeDecl, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        names = [a.name for a in self.attributes]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise SchemaError(f"duplicate attribute names: {', '.join(dupes)}")

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def __contains__(self, name: str) -> bool:
        return any(a.name == name for a in self.attributes)

    def decl(self, name: str) -> AttributeDecl:
        for a in self.attributes:
            if a.name == name:
                return a
        raise SchemaError(f"undeclared attribute {name!r}")


@dataclass(frozen=True)
class Catalog:
    """A universe of alternatives with a total attribute map for each item."""

    schema: Schema
    items: Tuple[Tuple[str, Mapping[str, Value]], ...]
    _index: dict = field(init=False, repr=False, compare=False)
    _columns: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        schema = self.schema
        if not isinstance(schema, Schema):
            schema = Schema(tuple(schema))
            object.__setattr__(self, "schema", schema)
        index = {}
        items = []
        for item_id, raw_values in self.items:
            if not isinstance(item_id, str) or not IDENT_RE.match(item_id):
                raise SchemaError(f"invalid item id {item_id!r}")
            if item_id in index:
                raise SchemaError(f"duplicate item id {item_id!r}")
            extra = set(raw_values) - set(schema.names)
            if extra:
                raise SchemaError(f"item {item_id!r} has undeclared attributes {sorted(extra)}")
            values = {}
            for decl in schema.attributes:
                if decl.name not in raw_values:
                    raise SchemaError(f"item {item_id!r} has no value for {decl.name!r}")
                values[decl.name] = decl.coerce(raw_values[decl.name])
            index[item_id] = values
            items.append((item_id, values))
        object.__setattr__(self, "items", tuple(items))
        object.__setattr__(self, "_index", index)
        columns = {d.name: {i: vals[d.name].key for i, vals in index.items()} for d in schema.attributes}
        object.__setattr__(self, "_columns", columns)

    @classmethod
    def build(cls, schema: Iterable[AttributeDecl], items: Mapping[str, Mapping[str, object]]) -> "Catalog":
        """Convenience constructor from ``{id: {attr: raw}}`` in insertion order."""
        return cls(Schema(tuple(schema)), tuple((k, dict(v)) for k, v in items.items()))

    @property
    def ids(self) -> RankedList:
        return tuple(item_id for item_id, _ in self.items)

    def __len__(self):
        return len(self.items)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._index

    def value(self, item_id: str, attr: str) -> Value:
        try:
            values = self._index[item_id]
        except KeyError:
            raise SchemaError(f"unknown item id {item_id!r}") from None
        try:
            return values[attr]
        except KeyError:
            raise SchemaError(f"undeclared attribute {attr!r}") from None

    def key(self, item_id: str, attr: str):
        """Raw comparable key (Decimal or ordinal level) for fast evaluation."""
        return self.value(item_id, attr).key

    def column(self, attr: str) -> Mapping[str, object]:
        """``{item id: raw key}`` for one attribute."""
        try:
            return self._columns[attr]
        except KeyError:
            raise SchemaError(f"undeclared attribute {attr!r}") from None

    def check_list(self, ids: Iterable[str]) -> RankedList:
        ids = tuple(ids)
        missing = [i for i in ids if i not in self._index]
        if missing:
            raise SchemaError(f"unknown item ids: {', '.join(missing)}")
        return ids


# --------------------------------------------------------------------------
# Predicates, stages, procedures
# --------------------------------------------------------------------------


class Op(str, enum.Enum):
    GE = ">="
    LE = "<="

    def __str__(self):
        return self.value


class Direction(str, enum.Enum):
    ASC = "asc"
    DESC = "desc"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Atom:
    attr: str
    op: Op
    bound: Value

    def __post_init__(self):
        object.__setattr__(self, "op", Op(self.op))

    def holds(self, v: Value) -> bool:
        c = compare_values(v, self.bound)
        if self.op is Op.GE:
            return c is not Ordering.LESS
        return c is not Ordering.GREATER


@dataclass(frozen=True)
class And:
    children: Tuple["FilterExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two operands")


@dataclass(frozen=True)
class Or:
    children: Tuple["FilterExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two operands")


FilterExpr = Union[Atom, And, Or]


def conjunction(parts: Sequence[FilterExpr]) -> Optional[FilterExpr]:
    """Smallest expression for the conjunction of ``parts``; None means always true."""
    parts = tuple(parts)
    if not parts:
        return None
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disjunction(parts: Sequence[FilterExpr]) -> FilterExpr:
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty disjunction")
    return parts[0] if len(parts) == 1 else Or(parts)


def atoms_of(expr: FilterExpr) -> Tuple[Atom, ...]:
    if isinstance(expr, Atom):
        return (expr,)
    return tuple(a for child in expr.children for a in atoms_of(child))


def atom_order(atoms: Iterable[Atom]) -> Tuple[Atom, ...]:
    """Canonical filter order: attribute name, then lower bound before upper."""
    return tuple(sorted(atoms, key=lambda a: (a.attr, 0 if a.op is Op.GE else 1)))


def is_conjunctive(expr: Optional[FilterExpr]) -> bool:
    if expr is None or isinstance(expr, Atom):
        return True
    if isinstance(expr, Or):
        return False
    return all(is_conjunctive(c) for c in expr.children)


@dataclass(frozen=True)
class Filter:
    pred: FilterExpr


@dataclass(frozen=True)
class Sort:
    direction: Direction
    attr: str

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))


Stage = Union[Filter, Sort]


@dataclass(frozen=True)
class Procedure:
    """Filter/sort stages in application order, plus an optional ``first``.

    Application order is the reverse of composition notation:
    ``sort desc rating . sort asc price . filter rating >= 4`` (composed) is
    stored as ``(Filter(rating >= 4), Sort(asc, price), Sort(desc, rating))``.
    """

    stages: Tuple[Stage, ...] = ()
    take_first: bool = False

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))

    @property
    def length(self) -> int:
        return len(self.stages)

    @property
    def is_simple(self) -> bool:
        return all(is_conjunctive(s.pred) for s in self.stages if isinstance(s, Filter))

    def attributes(self) -> Tuple[str, ...]:
        """Distinct attributes referenced, in first-use order."""
        seen = []
        for s in self.stages:
            names = [s.attr] if isinstance(s, Sort) else [a.attr for a in atoms_of(s.pred)]
            for n in names:
                if n not in seen:
                    seen.append(n)
        return tuple(seen)

    def then(self, *stages: Stage, take_first: Optional[bool] = None) -> "Procedure":
        return Procedure(self.stages + stages, self.take_first if take_first is None else take_first)


@dataclass(frozen=True)
class PreferenceSpec:
    """A definable property plus a lexicographic ordering, highest priority first.

    ``prop`` is None for the always-true property.
    """

    prop: Optional[FilterExpr]
    ordering: Tuple[Tuple[Direction, str], ...] = ()

    def __post_init__(self):
        ordering = tuple((Direction(d), a) for d, a in self.ordering)
        object.__setattr__(self, "ordering", ordering)
        names = [a for _, a in ordering]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise SchemaError(f"duplicate attribute in ordering: {', '.join(dupes)}")

    @property
    def mode(self) -> str:
        return "simple" if is_conjunctive(self.prop) else "general"

    def attributes(self) -> Tuple[str, ...]:
        seen = []
        for a in ([x.attr for x in atoms_of(self.prop)] if self.prop is not None else []) + [a for _, a in self.ordering]:
            if a not in seen:
                seen.append(a)
        return tuple(seen)


@dataclass(frozen=True)
class CostReport:
    procedure_length: int
    attribute_count: int
    input_length: int
    filtered_length: Optional[int]
    verdict: str

    @property
    def procedure_bound(self) -> int:
        return 3 * self.attribute_count

    @property
    def baseline_comparisons(self) -> int:
        return max(self.input_length - 1, 0)


# --------------------------------------------------------------------------
# Validation and binding
# --------------------------------------------------------------------------


def _check_atom(atom: Atom, schema: Schema, errors: list) -> None:
    if atom.attr not in schema:
        errors.append(f"undeclared attribute {atom.attr!r}")
        return
    decl = schema.decl(atom.attr)
    b = atom.bound
    if decl.kind == "numeric" and not isinstance(b, Number):
        errors.append(f"attribute {atom.attr!r} is numeric but bound {b} is a label")
    elif decl.kind == "ordinal":
        if not isinstance(b, Ordinal):
            errors.append(f"attribute {atom.attr!r} is ordinal but bound {b} is a number")
        elif b.label not in decl.order or (b.bound and b.order != decl.order):
            errors.append(f"label {b.label!r} is not in the declared order of {atom.attr!r}")


def validate_expr(expr: Optional[FilterExpr], schema: Schema) -> list:
    errors: list = []
    if expr is not None:
        for atom in atoms_of(expr):
            _check_atom(atom, schema, errors)
    return errors


def validate_procedure(p: Procedure, schema: Schema) -> list:
    """Return every schema violation in ``p``; an empty list means valid."""
    errors: list = []
    for stage in p.stages:
        if isinstance(stage, Sort):
            if stage.attr not in schema:
                errors.append(f"undeclared attribute {stage.attr!r}")
        else:
            errors.extend(validate_expr(stage.pred, schema))
    return errors


def bind_expr(expr: Optional[FilterExpr], schema: Schema) -> Optional[FilterExpr]:
    """Resolve unbound ordinal labels against ``schema``."""
    if expr is None:
        return None
    errors = validate_expr(expr, schema)
    if errors:
        raise SchemaError("; ".join(errors))

    def go(e):
        if isinstance(e, Atom):
            return Atom(e.attr, e.op, schema.decl(e.attr).coerce(e.bound))
        return type(e)(tuple(go(c) for c in e.children))

    return go(expr)


def bind_procedure(p: Procedure, schema: Schema) -> Procedure:
    errors = validate_procedure(p, schema)
    if errors:
        raise SchemaError("; ".join(errors))
    stages = tuple(Filter(bind_expr(s.pred, schema)) if isinstance(s, Filter) else s for s in p.stages)
    return Procedure(stages, p.take_first)


def bind_spec(spec: PreferenceSpec, schema: Schema) -> PreferenceSpec:
    missing = [a for _, a in spec.ordering if a not in schema]
    if missing:
        raise SchemaError("; ".join(f"undeclared attribute {a!r}" for a in missing))
    return PreferenceSpec(bind_expr(spec.prop, schema), spec.ordering)
