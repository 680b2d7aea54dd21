"""Randomized online algorithms as finite zero-sum ratio games.

Solve for optimal algorithm/input distributions, then certify them with
Yao-style lower bounds, equalization conditions and saddle-point checks.
"""

__version__ = "0.1.0"

from .core import (
    CostModel,
    MixedStrategy,
    RatioMatrix,
    bilinear_value_h,
    deterministic_cr,
    expected_ratio_u,
    expected_ratio_v,
    ratio_from_costs,
    u_vector,
    v_vector,
    validate,
)
from .equalizer import (
    EqualizerSolution,
    full_support_equalizer_f,
    full_support_equalizer_g,
    support_search,
)
from .problems import (
    SkiRentalSpec,
    from_file,
    grid_discretize,
    random_instance,
    ski_rental,
    to_file,
)
from .solver import (
    SolveResult,
    SolverConfig,
    best_response_col,
    best_response_row,
    fictitious_play,
    solve,
)
from .verify import (
    Certificate,
    certify_saddle,
    check_necessary,
    check_sufficient,
    gap,
    yao_lower_bound,
)
