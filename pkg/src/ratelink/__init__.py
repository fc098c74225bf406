"""Rate-constrained on-off link activation in Rayleigh-fading single-hop networks.

The Python API uses 0-based link indices; JSON documents, edge lists and the
command line use 1-based indices.
"""

from .bounds import (
    BRUTE_FORCE_MAX_N, UpperBoundReport, T_upper, brute_force_optimum, kappa_upper,
    sinr_ccdf_random_set, upper_bound_report,
)
from .clique import Graph, clique_number, max_clique_exact, max_clique_greedy
from .dtblas import (
    DtblasParams, DtblasResult, build_conflict_graph, dtblas_select,
    dtblas_throughput_lower_bound, phase1_select, predicted_k2_window,
)
from .errors import (
    ConfigError, EmptySetError, InvalidArgument, NoConvergence, RegimeError, SizeCapError,
)
from .model import (
    ActivationSet, FeasibilityReport, NetworkInstance, RateConstraint, annotate, average_rate,
    check_feasibility, from_gains, generate_network, load_instance, rate, save_instance, sinr,
    throughput,
)
from .noise_limited import (
    NoiseLimitedParams, delta0_threshold, interference_deviation, nl_select,
    nl_throughput_window, predicted_active_nl, solve_delta_nl,
)
from .optimizer import (
    OptimalOperatingPoint, alpha_prime_from_delta, asymptotic_point, mu_hat, objective,
    optimal_point, scaling_factors, sigma_hat_sq, solve_delta_star, stationarity_residual,
    sweep_operating_points,
)
from .random_graph import (
    CliqueWindow, GnpSpec, clique_window_fixed_p, clique_window_vanishing_p,
    count_cliques_exhaustive, expected_clique_count, gen_gnp, variance_ratio,
)
from .tblas import (
    TblasParams, alpha_for_lambda, predicted_scaling, rate_concentration_bound, tblas_select,
)

__version__ = "0.1.0"
