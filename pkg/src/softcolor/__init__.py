"""Exact uniform sampling of proper graph colorings by soft-constraint
partial resampling.

The sampler family shares one idea: pair every vertex with a label
value in (0, 1), soften the coloring constraints by a factor gamma, and
repeatedly redraw only a boundary-closed set around the vertices that
violate the softened constraints. Walking gamma down a geometric
schedule turns the soft target into the uniform distribution over
proper colorings, exactly and without mixing-time assumptions.
"""

from .analysis import (
    alpha,
    effective_level_count,
    expected_bad_graph,
    expected_bad_regular,
    expected_cluster_size,
    gamma_critical,
    k_hybrid_bound,
    k_sufficient,
    lll_margin,
    lll_satisfied,
    nrs_component_acceptance_bound,
    nrs_fullgraph_expected_iterations_bound,
    p_bad_general,
    p_bad_regular,
    p_passive,
    percolation_decay_rate,
    site_open_probability,
)
from .errors import (
    BudgetExhaustedError,
    CapacityError,
    FormatError,
    ParameterError,
    SolverTimeoutError,
    SupercriticalError,
)
from .experiments import (
    ExperimentReport,
    ExperimentSpec,
    run_comparison_suite,
    run_component_structure,
    run_effective_levels,
    run_experiment,
    run_level_growth,
)
from .graph import (
    Graph,
    complete_graph,
    cycle_graph,
    family_graph,
    from_edges,
    grid_graph,
    load_edge_list,
    parse_family,
    petersen_graph,
    random_regular_graph,
)
from .hybrid import (
    DispatchPlan,
    HybridConfig,
    component_speedup_estimator,
    plan_parallel_dispatch,
    run_adaptive_gamma,
    sample_hybrid,
)
from .prs import (
    RunStats,
    SampleResult,
    SweepRecord,
    gamma_prs_at_level,
    sample_iterative,
    sample_recursive,
    sample_rejection,
)
from .records import ColoringRecord, deserialize, serialize
from .rng import RandomStream
from .softstate import (
    GammaSchedule,
    ResamplingSet,
    SoftState,
    bad_mask,
    bad_set,
    build_resampling_set,
    conflict_counts,
    is_bad,
    is_passive,
    is_proper,
    resample_vertices,
    sample_reference,
)
from .solvers import (
    ComponentProblem,
    SolverKind,
    make_component_problem,
    solve_cftp_huber,
    solve_cftp_sweep,
    solve_nrs,
)
from .verify import (
    ChiSquareReport,
    EnumerationResult,
    chi_square_from_counts,
    enumerate_proper,
    eta_gamma_oracle,
    pair_marginal,
    two_sample_from_counts,
    two_sample_test,
    uniformity_test,
)

__version__ = "0.1.0"
