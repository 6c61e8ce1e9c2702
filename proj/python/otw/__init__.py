"""Linear-time optimal-transport warping distances for time series.

Thin re-export of the compiled extension; see the README for the full CLI.
"""

from ._core import (
    DataError,
    agglomerative_cluster,
    check_shift_sensitivity,
    check_upper_bound,
    dtw,
    dtw_brute_force,
    extend_with_sink,
    make_synthetic,
    minkowski,
    one_nn,
    otw,
    otw_grad,
    pairwise_matrix,
    prefix_sums,
    rand_index,
    sink_cost_matrix,
    smooth_l1,
    smooth_l1_deriv,
    solve_transport_lp,
    split_signs,
    upper_bound_sweep,
    unbalanced_ot,
    wasserstein_1d,
    windowed_prefix_sums,
    z_normalize,
)

__all__ = [
    "DataError",
    "agglomerative_cluster",
    "check_shift_sensitivity",
    "check_upper_bound",
    "dtw",
    "dtw_brute_force",
    "extend_with_sink",
    "make_synthetic",
    "minkowski",
    "one_nn",
    "otw",
    "otw_grad",
    "pairwise_matrix",
    "prefix_sums",
    "rand_index",
    "sink_cost_matrix",
    "smooth_l1",
    "smooth_l1_deriv",
    "solve_transport_lp",
    "split_signs",
    "upper_bound_sweep",
    "unbalanced_ot",
    "wasserstein_1d",
    "windowed_prefix_sums",
    "z_normalize",
]

__version__ = "0.1.0"
