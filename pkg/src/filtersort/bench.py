"""Seeded step-count benchmark: filter-and-sort against element-by-element."""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from typing import List

from .heuristics import compare_costs, filtered_length
from .model import Atom, AttributeDecl, Catalog, Direction, Number, Op, PreferenceSpec, atom_order, conjunction

VALUE_RANGE = (0, 99)
COLUMNS = ("trial", "N", "n", "n'", "procSteps", "baselineSteps", "verdict")


@dataclass(frozen=True)
class BenchRow:
    trial: int
    n_attrs: int
    n: int
    n_filtered: int
    proc_steps: int
    baseline_steps: int
    verdict: str

    def as_tuple(self):
        return (self.trial, self.n_attrs, self.n, self.n_filtered, self.proc_steps, self.baseline_steps, self.verdict)


def random_instance(n_attrs: int, n_items: int, rng: random.Random):
    """A catalog of ``n_items`` items and a spec that sorts by all ``n_attrs`` attributes.

    Each attribute gets one filter bound with probability one half, placed
    at a uniformly drawn quantile of that attribute's values.
    """
    names = [f"a{k}" for k in range(n_attrs)]
    lo, hi = VALUE_RANGE
    items = {f"x{i + 1}": {a: str(rng.randint(lo, hi)) for a in names} for i in range(n_items)}
    catalog = Catalog.build([AttributeDecl(a) for a in names], items)
    atoms = []
    for a in names:
        if rng.random() < 0.5 and n_items:
            column = sorted(int(v[a]) for v in items.values())
            bound = column[min(int(rng.random() * n_items), n_items - 1)]
            atoms.append(Atom(a, rng.choice((Op.GE, Op.LE)), Number(bound)))
    order = rng.sample(names, n_attrs)
    ordering = tuple((rng.choice((Direction.ASC, Direction.DESC)), a) for a in order)
    return catalog, PreferenceSpec(conjunction(atom_order(atoms)), ordering)


def run_bench(n_attrs: int, n_items: int, trials: int, seed: int) -> List[BenchRow]:
    if n_attrs < 1 or n_items < 0 or trials < 0:
        raise ValueError("need attrs >= 1, items >= 0, trials >= 0")
    rng = random.Random(seed)
    rows = []
    for trial in range(trials):
        catalog, spec = random_instance(n_attrs, n_items, rng)
        report = compare_costs(spec, n_items, filtered_length(spec, catalog.ids, catalog))
        rows.append(
            BenchRow(
                trial,
                report.attribute_count,
                n_items,
                report.filtered_length,
                report.procedure_bound,
                report.baseline_comparisons,
                report.verdict,
            )
        )
    return rows


def rows_to_csv(rows: List[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.as_tuple())
    return buf.getvalue()
