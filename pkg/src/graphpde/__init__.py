"""Variational calculus and solvers for reaction-diffusion equations on
finite weighted graphs with Dirichlet boundary data.

The pieces, bottom up: weighted graphs and interior/boundary partitions
(graphs), the measure-weighted Laplacian with its quadratic form, norms
and integrals (calculus), the first Dirichlet eigenvalue and embedding
constants (spectral), reaction-term families with sampled hypothesis
checks (nonlinearity), the energy functional and its derivatives
(variational), and the critical-point solvers (solver).  The cli module
wraps everything behind the `graphpde` command.
"""

from .graphs import (
    DomainPartition,
    GraphError,
    GraphFile,
    GraphParseError,
    WeightedGraph,
    build_graph,
    compute_boundary,
    enforce_dirichlet,
    format_graph_text,
    function_from_dict,
    graph_distance,
    is_dirichlet,
    parse_graph_file,
    parse_graph_text,
)
from .calculus import (
    DIRICHLET_W12,
    FULL_W12,
    H_NORM,
    NormKind,
    dirichlet_energy,
    edge_energy,
    gradient_form,
    gradient_length,
    green_residual,
    inner_product,
    integrate,
    laplacian,
    lp,
    norm,
)
from .spectral import (
    ConstantsReport,
    EigenResult,
    embedding_constants,
    first_eigenvalue,
    rayleigh_quotient,
)
from .nonlinearity import (
    GridSpec,
    HypothesisVerdict,
    Nonlinearity,
    ar_lower_bound,
    check_f,
    check_h,
    evaluate,
    f1_verdict,
    odd_poly,
    parse_nonlinearity,
    power,
    power_plus_const,
    smoothness_note,
)
from .variational import (
    BallConstants,
    EnergyReport,
    Problem,
    ball_constants,
    ball_kappa,
    directional_derivative,
    energy,
    energy_report,
    gradient,
    pointwise_residual,
)
from .solver import (
    Solution,
    SolveReport,
    SolverConfig,
    SolverError,
    StepRule,
    ball_minimize,
    build_spike_endpoint,
    mountain_pass,
    two_solutions,
)

__version__ = "0.1.0"

__all__ = [
    "BallConstants", "ConstantsReport", "DIRICHLET_W12", "DomainPartition",
    "EigenResult", "EnergyReport", "FULL_W12", "GraphError", "GraphFile",
    "GraphParseError", "GridSpec", "H_NORM", "HypothesisVerdict",
    "Nonlinearity", "NormKind", "Problem", "Solution",
    "SolveReport", "SolverConfig", "SolverError", "StepRule", "WeightedGraph",
    "ar_lower_bound", "ball_constants", "ball_kappa", "ball_minimize",
    "build_graph", "build_spike_endpoint", "check_f", "check_h",
    "compute_boundary", "dirichlet_energy", "directional_derivative",
    "edge_energy", "embedding_constants", "energy", "energy_report",
    "enforce_dirichlet", "evaluate", "f1_verdict", "first_eigenvalue",
    "format_graph_text", "function_from_dict", "gradient", "gradient_form",
    "gradient_length", "graph_distance", "green_residual", "inner_product",
    "integrate", "is_dirichlet", "laplacian", "lp", "mountain_pass", "norm",
    "odd_poly", "parse_graph_file", "parse_graph_text", "parse_nonlinearity",
    "pointwise_residual", "power", "power_plus_const", "rayleigh_quotient",
    "smoothness_note", "two_solutions",
]
