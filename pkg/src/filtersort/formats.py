"""JSON documents for catalogs and procedure ASTs.

Catalog layout::

    {"attributes": [{"name": "price", "kind": "numeric"},
                    {"name": "brand", "kind": "ordinal", "order": ["Samsung", "Seagate"]}],
     "items": [{"id": "x1", "values": {"price": "9.99", "brand": "Seagate"}}]}

Numbers travel as strings so they stay exact.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Union

from .model import (
    And,
    Atom,
    AttributeDecl,
    Catalog,
    Filter,
    Number,
    Or,
    Procedure,
    Schema,
    SchemaError,
)


def catalog_from_doc(doc: Mapping) -> Catalog:
    if not isinstance(doc, Mapping) or "attributes" not in doc or "items" not in doc:
        raise SchemaError("catalog needs 'attributes' and 'items'")
    decls = []
    for entry in doc["attributes"]:
        kind = entry.get("kind", "numeric")
        decls.append(AttributeDecl(entry["name"], kind, tuple(entry.get("order", ()))))
    items = []
    for entry in doc["items"]:
        values = entry.get("values", {})
        for name, raw in values.items():
            if isinstance(raw, (float, bool)):
                raise SchemaError(f"item {entry.get('id')!r}: {name} must be a decimal string, got {raw!r}")
        items.append((entry["id"], dict(values)))
    return Catalog(Schema(tuple(decls)), tuple(items))


def catalog_to_doc(catalog: Catalog) -> dict:
    attributes = []
    for d in catalog.schema.attributes:
        entry = {"name": d.name, "kind": d.kind}
        if d.kind == "ordinal":
            entry["order"] = list(d.order)
        attributes.append(entry)
    items = [
        {"id": item_id, "values": {name: str(values[name]) for name in catalog.schema.names}}
        for item_id, values in catalog.items
    ]
    return {"attributes": attributes, "items": items}


def dumps_catalog(catalog: Catalog) -> str:
    return json.dumps(catalog_to_doc(catalog), indent=2) + "\n"


def loads_catalog(text: str) -> Catalog:
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise SchemaError(f"catalog is not valid JSON: {exc}") from None
    return catalog_from_doc(doc)


def load_catalog(path: Union[str, Path]) -> Catalog:
    return loads_catalog(Path(path).read_text(encoding="utf-8"))


def expr_to_doc(expr) -> dict:
    if isinstance(expr, Atom):
        kind = "number" if isinstance(expr.bound, Number) else "label"
        return {"atom": {"attr": expr.attr, "op": expr.op.value, kind: str(expr.bound)}}
    tag = "and" if isinstance(expr, And) else "or"
    assert isinstance(expr, (And, Or))
    return {tag: [expr_to_doc(c) for c in expr.children]}


def procedure_to_doc(p: Procedure) -> dict:
    stages = []
    for s in p.stages:
        if isinstance(s, Filter):
            stages.append({"filter": expr_to_doc(s.pred)})
        else:
            stages.append({"sort": {"dir": s.direction.value, "attr": s.attr}})
    return {"stages": stages, "takeFirst": p.take_first}
