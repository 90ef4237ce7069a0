"""Ground-state entanglement and energy gaps along interpolating Hamiltonians.

The package generates random Exact Cover instances with a unique satisfying
assignment, applies H(s) = (1-s) H0 + s HP matrix-free, converges the two
lowest eigenpairs along an s grid, measures bipartite entanglement of the
ground state, aggregates ensembles into scaling statistics, and carries an
exact two-level treatment of the adiabatic search (Grover) Hamiltonian.
"""

from .entanglement import (
    Bipartition,
    EntanglementRecord,
    bipartition_entropy,
    default_bipartition,
    reduced_density,
    schmidt_rank,
    von_neumann_entropy,
)
from .eigensolver import EigenResult, NonConvergenceError, dense_lowest_two, lowest_two_iterative
from .grover import (
    entropy_asymptote,
    grover_dense_oracle,
    grover_effective,
    grover_entropy,
    grover_gap,
    grover_ground_state,
    grover_schmidt_rank,
)
from .hamiltonian import (
    DriverDegrees,
    InterpolatedOperator,
    ProblemDiagonal,
    apply_hamiltonian,
    build_problem_diagonal,
    clause_energy,
    dense_matrix,
    driver_degrees,
    operator_from_instance,
)
from .instances import (
    Clause,
    GenerationError,
    Instance,
    clause_degrees,
    clause_satisfied,
    generate_instance,
    instance_from_json,
    instance_to_json,
    satisfying_set,
    validate_instance,
    violation_count,
)
from .sweep import (
    EnsembleRun,
    GroupStats,
    InstanceResult,
    LinearFit,
    PeakFit,
    ScalingSummary,
    SweepError,
    SweepPoint,
    aggregate,
    fit_linear,
    fit_peak_asymmetry,
    run_ensemble,
    s_grid,
    sweep_instance,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "Clause",
    "DriverDegrees",
    "EigenResult",
    "EnsembleRun",
    "EntanglementRecord",
    "GenerationError",
    "GroupStats",
    "Instance",
    "InstanceResult",
    "InterpolatedOperator",
    "LinearFit",
    "NonConvergenceError",
    "PeakFit",
    "ProblemDiagonal",
    "ScalingSummary",
    "SweepError",
    "SweepPoint",
    "aggregate",
    "apply_hamiltonian",
    "bipartition_entropy",
    "build_problem_diagonal",
    "clause_degrees",
    "clause_energy",
    "clause_satisfied",
    "default_bipartition",
    "dense_lowest_two",
    "dense_matrix",
    "driver_degrees",
    "entropy_asymptote",
    "fit_linear",
    "fit_peak_asymmetry",
    "generate_instance",
    "grover_dense_oracle",
    "grover_effective",
    "grover_entropy",
    "grover_gap",
    "grover_ground_state",
    "grover_schmidt_rank",
    "instance_from_json",
    "instance_to_json",
    "lowest_two_iterative",
    "operator_from_instance",
    "reduced_density",
    "run_ensemble",
    "s_grid",
    "satisfying_set",
    "schmidt_rank",
    "sweep_instance",
    "validate_instance",
    "violation_count",
    "von_neumann_entropy",
]
