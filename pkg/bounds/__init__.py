"""
Closed-form density bounds and the reference table
"""

from .formulas import (
    CAPPED_THRESHOLD,
    PLANAR,
    T0,
    UNCAPPED_THRESHOLD,
    BoundResult,
    DominanceResult,
    HalfInfiniteResult,
    asymptotic_coefficient,
    capped_bound,
    capped_raw,
    conjectured_density,
    dominance_check,
    half_infinite_bound,
    mixed_length_bound,
    mixed_length_bound_from_lengths,
    nesting_identity_residual,
    rule_of_thumb,
    uncapped_bound,
    uncapped_raw,
)
from .table import ITEMS, make_table, table_csv, table_json, printed_digits

__all__ = [
    'CAPPED_THRESHOLD', 'PLANAR', 'T0', 'UNCAPPED_THRESHOLD', 'BoundResult',
    'DominanceResult', 'HalfInfiniteResult', 'asymptotic_coefficient', 'capped_bound',
    'capped_raw', 'conjectured_density', 'dominance_check', 'half_infinite_bound',
    'mixed_length_bound', 'mixed_length_bound_from_lengths', 'nesting_identity_residual',
    'rule_of_thumb', 'uncapped_bound', 'uncapped_raw',
    'ITEMS', 'make_table', 'table_csv', 'table_json', 'printed_digits',
]
