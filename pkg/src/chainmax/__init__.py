"""chainmax: exact tools for maximal-chain extremal problems.

Counts maximal chains of the subset lattice inside arbitrary set
systems, builds tower-of-cubes candidate extremal families, applies
ij-compressions, runs exact branch-and-bound maximisation, constructs
large families with a prescribed chain fraction, and extends the
machinery to posets (linear extensions / antichains) and grids
(monotone lattice paths).  All arithmetic is exact.
"""

from .lattice import (
    ClaimViolation,
    FormatError,
    SetSystem,
    chain_of_permutation,
    elements_of,
    full_mask,
    is_upset,
    layer_profile,
    mask_from,
    parse_set_system,
    permutation_of_chain,
    set_system_from_json,
)
from .counting import (
    DensityBoundReport,
    check_density_bound,
    count_maximal_chains,
    count_maximal_chains_oracle,
    layer_bound,
)
from .towers import (
    TowerSpec,
    best_small_block_tower,
    generalized_tower,
    tower_chain_count,
    tower_of_cubes,
    tower_size,
)
from .compression import (
    compress_set,
    compress_system,
    compression_partners,
    compression_weight,
    is_left_compressed,
    left_compress,
)
from .search import (
    SearchOptions,
    SearchReport,
    max_chains,
    two_per_layer_search,
    verify_t2_bound,
    verify_tower_conjecture,
)
from .threshold import (
    ThresholdPlan,
    build_upset,
    chain_fraction_plan,
    choose_probe_size,
    exact_membership_probability,
    family_size,
    solve_threshold,
    union_size,
    upset_probability,
)
from .posets import (
    Poset,
    count_antichains,
    count_antichains_oracle,
    count_linear_extensions,
    count_linear_extensions_oracle,
    downset_family,
    parse_poset,
    poset_search,
)
from .grids import (
    GridSystem,
    antidiagonal_bound,
    count_grid_chains,
    count_grid_chains_oracle,
    full_grid_chain_count,
    grid_max_chains,
    parse_grid,
)

__version__ = "0.1.0"

__all__ = [
    "ClaimViolation",
    "FormatError",
    "SetSystem",
    "chain_of_permutation",
    "permutation_of_chain",
    "mask_from",
    "elements_of",
    "full_mask",
    "is_upset",
    "layer_profile",
    "parse_set_system",
    "set_system_from_json",
    "count_maximal_chains",
    "count_maximal_chains_oracle",
    "layer_bound",
    "check_density_bound",
    "DensityBoundReport",
    "TowerSpec",
    "tower_of_cubes",
    "generalized_tower",
    "tower_size",
    "tower_chain_count",
    "best_small_block_tower",
    "compress_set",
    "compress_system",
    "compression_partners",
    "compression_weight",
    "is_left_compressed",
    "left_compress",
    "SearchOptions",
    "SearchReport",
    "max_chains",
    "two_per_layer_search",
    "verify_t2_bound",
    "verify_tower_conjecture",
    "ThresholdPlan",
    "build_upset",
    "upset_probability",
    "solve_threshold",
    "choose_probe_size",
    "chain_fraction_plan",
    "exact_membership_probability",
    "family_size",
    "union_size",
    "Poset",
    "downset_family",
    "count_linear_extensions",
    "count_linear_extensions_oracle",
    "count_antichains",
    "count_antichains_oracle",
    "poset_search",
    "parse_poset",
    "GridSystem",
    "count_grid_chains",
    "count_grid_chains_oracle",
    "antidiagonal_bound",
    "full_grid_chain_count",
    "grid_max_chains",
    "parse_grid",
    "__version__",
]
