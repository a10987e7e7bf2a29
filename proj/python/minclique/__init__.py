"""Bounds, exact solver and simulation for the minimum-weight clique in a
complete graph with i.i.d. random edge weights."""

from ._core import (
    DomainError,
    Graph,
    GraphParseError,
    GuardError,
    QuadratureError,
    ValidityError,
    cdf_bounds,
    cdf_curve,
    min_weight_clique,
    min_weight_subgraph,
    run_cli,
    sample_weights,
    scaled_weight,
    significance_test,
    simulate,
    table_stats,
    weight_from_scaled,
)

__version__ = "0.1.0"
