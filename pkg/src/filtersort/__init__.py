"""Filter/sort decision procedures over attribute-tagged catalogs."""

from .dsl import ParseError, parse_filter, parse_preference_spec, parse_procedure, print_procedure
from .engine import a_equivalent_lists, apply_filter, apply_procedure, apply_sort, first
from .general import (
    CnfFilter,
    apply_general_filter,
    derive_general_spec,
    synthesize_general_procedure,
    to_cnf,
)
from .heuristics import (
    compare_costs,
    element_by_element_max,
    local_max,
    satisfice,
    satisfice_after_procedure,
    satisfice_cost_check,
)
from .model import (
    Atom,
    AttributeDecl,
    Catalog,
    Direction,
    EmptyChoice,
    Number,
    Op,
    Ordinal,
    PreferenceSpec,
    Procedure,
    SchemaError,
    compare_values,
    validate_procedure,
)
from .normalizer import NormalForm, check_equivalence, length, normalize
from .preference import derive_spec, derived_preference_oracle, lex_compare, pref_compare, synthesize_procedure

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "AttributeDecl",
    "Catalog",
    "CnfFilter",
    "Direction",
    "EmptyChoice",
    "NormalForm",
    "Number",
    "Op",
    "Ordinal",
    "ParseError",
    "PreferenceSpec",
    "Procedure",
    "SchemaError",
    "a_equivalent_lists",
    "apply_filter",
    "apply_general_filter",
    "apply_procedure",
    "apply_sort",
    "check_equivalence",
    "compare_costs",
    "compare_values",
    "derive_general_spec",
    "derive_spec",
    "derived_preference_oracle",
    "element_by_element_max",
    "first",
    "length",
    "lex_compare",
    "local_max",
    "normalize",
    "parse_filter",
    "parse_preference_spec",
    "parse_procedure",
    "pref_compare",
    "print_procedure",
    "satisfice",
    "satisfice_after_procedure",
    "satisfice_cost_check",
    "synthesize_general_procedure",
    "synthesize_procedure",
    "to_cnf",
    "validate_procedure",
]
