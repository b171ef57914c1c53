"""rcl: exact counting of restricted combinations on a line.

Counts subsets of {1..n} whose pairwise differences avoid a prescribed set
Q, through the equivalent restricted-overlap tilings of boards with squares
and combs: brute-force oracles, a metatile-digraph transfer DP, synthesized
and closed-form recurrences, rational generating functions, and bijections
to restricted permutations and subword occurrence classes.
"""

from .core import (
    CombShape,
    DifferenceSet,
    LimitError,
    allowed_differences,
    comb_from_differences,
    is_well_based,
    parse_differences,
)
from .digraph import (
    analyze_cycles,
    build_digraph,
    count_via_transfer,
    enumerate_metatiles,
    find_common_node,
    has_inner_cycle,
    is_finite_family,
    to_dot,
)
from .oracles import (
    CountTable,
    format_table,
    format_totals,
    shift_to_subsets,
    subset_count_oracle,
    subword_class_oracle,
    tiling_count_oracle,
)
from .recurrences import (
    RationalGF,
    Recurrence,
    classify,
    evaluate_recurrence,
    from_common_node,
    from_finite_metatiles,
    gf_from_recurrence,
    gf_well_based,
    recurrence_for,
    series_expand,
)
from .bijections import (
    perm_count_1m,
    perm_count_jm,
    subset_to_tiling,
    subword_to_differences,
    tiling_to_subset,
    verify_subword_theorem,
)

__all__ = [
    "CombShape",
    "CountTable",
    "DifferenceSet",
    "LimitError",
    "RationalGF",
    "Recurrence",
    "allowed_differences",
    "analyze_cycles",
    "build_digraph",
    "classify",
    "comb_from_differences",
    "count_via_transfer",
    "enumerate_metatiles",
    "find_common_node",
    "evaluate_recurrence",
    "format_table",
    "format_totals",
    "from_common_node",
    "from_finite_metatiles",
    "gf_from_recurrence",
    "gf_well_based",
    "has_inner_cycle",
    "is_finite_family",
    "is_well_based",
    "parse_differences",
    "perm_count_1m",
    "perm_count_jm",
    "recurrence_for",
    "series_expand",
    "shift_to_subsets",
    "subset_count_oracle",
    "subset_to_tiling",
    "subword_class_oracle",
    "subword_to_differences",
    "tiling_count_oracle",
    "tiling_to_subset",
    "to_dot",
    "verify_subword_theorem",
]

__version__ = "0.1.0"
