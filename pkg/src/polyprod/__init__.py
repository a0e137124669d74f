"""Polyadic algebraic structures: checkers, products and a command-line front end."""

from .carriers import (CycShiftMatrix, ExactScalar, Mod, ProductCarrier, contains, modular, sample,
                       scalar, shift_matrix)
from .errors import PolyprodError
from .exemplars import catalog_get, catalog_names, derived_group_zm
from .products import (arity_compatible, full_product, hetero_arity, hetero_power,
                       make_quiver_postlike, mixed_product, quantization_table, quiver_search,
                       validate_quiver)
from .programs import QuiverSpec
from .ringsfields import classify, field_product, ring, ring_full_product, ring_mixed_product
from .structures import (check_commutativity, check_dornte, check_solvability,
                         check_total_associativity, evaluate, find_identity, find_zero,
                         querelement, structure)

__version__ = "0.1.0"

__all__ = [
    "CycShiftMatrix", "ExactScalar", "Mod", "ProductCarrier", "contains", "modular", "sample",
    "scalar", "shift_matrix", "PolyprodError", "catalog_get", "catalog_names", "derived_group_zm",
    "arity_compatible", "full_product", "hetero_arity", "hetero_power", "make_quiver_postlike",
    "mixed_product", "quantization_table", "quiver_search", "validate_quiver", "QuiverSpec",
    "classify", "field_product", "ring", "ring_full_product", "ring_mixed_product",
    "check_commutativity", "check_dornte", "check_solvability", "check_total_associativity",
    "evaluate", "find_identity", "find_zero", "querelement", "structure",
]
