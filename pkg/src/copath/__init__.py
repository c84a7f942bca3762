"""Optimal low-conflict path selection across timed pathway graphs.

Compiles multi-graph path/resource/timing selection to SMT-LIB 2, solves it
through any external SMT process, and cross-checks against an exhaustive
oracle at desk scale.
"""

from .model import (
    ConflictRecord,
    Edge,
    Infeasible,
    Instance,
    InteractionTable,
    InvalidGraph,
    InvalidInstance,
    NodeSpec,
    PathwayGraph,
    Resource,
    SeverityMap,
    Solution,
    ThresholdCombiner,
    ValidationReport,
    WalkReport,
    audit_solution,
    check_walk,
    enumerate_chordless_paths,
    enumerate_paths,
    graph_sinks,
    graph_sources,
    validate_instance,
)
from .scoring import (
    ObjectiveBreakdown,
    UnassignedNode,
    UnknownSeverity,
    eval_f,
    evaluate_objective,
    objective_bounds,
    severity_to_interaction,
)
from .oracle import BudgetExceeded, OracleResult, oracle_agrees, oracle_solve
from .encoding import (
    STRATEGY_NATIVE,
    STRATEGY_SATISFACTION,
    SmtArtifact,
    encode_efficient,
    encode_equivalence,
    encode_formal,
    encode_full,
)
from .solver import (
    BackendConfig,
    BackendError,
    EquivalenceOutcome,
    ModelMismatch,
    SolveOutcome,
    SolveTimeout,
    check_equivalence,
    default_backend,
    extract_solution,
    run_artifact,
    solve_maximize,
)
from .dataio import (
    GeneratorSpec,
    ParseError,
    ValidationError,
    export_dot,
    generate_synthetic,
    load_csv,
    load_instance,
    load_json,
    save_csv,
    save_json,
    solution_records,
)
from .whatif import (
    Diff,
    GraphDiff,
    InfeasibleDelta,
    UnknownEntity,
    WhatIfDelta,
    apply_delta,
    diff_solutions,
    resolve,
)

__all__ = [
    "BackendConfig",
    "BackendError",
    "Diff",
    "EquivalenceOutcome",
    "GeneratorSpec",
    "GraphDiff",
    "InfeasibleDelta",
    "ModelMismatch",
    "ParseError",
    "STRATEGY_NATIVE",
    "STRATEGY_SATISFACTION",
    "SmtArtifact",
    "SolveOutcome",
    "SolveTimeout",
    "UnknownEntity",
    "ValidationError",
    "WhatIfDelta",
    "apply_delta",
    "check_equivalence",
    "default_backend",
    "diff_solutions",
    "encode_efficient",
    "encode_equivalence",
    "encode_formal",
    "encode_full",
    "export_dot",
    "extract_solution",
    "generate_synthetic",
    "load_csv",
    "load_instance",
    "load_json",
    "resolve",
    "run_artifact",
    "save_csv",
    "save_json",
    "solution_records",
    "solve_maximize",
    "BudgetExceeded",
    "ConflictRecord",
    "Edge",
    "Infeasible",
    "Instance",
    "InteractionTable",
    "InvalidGraph",
    "InvalidInstance",
    "NodeSpec",
    "ObjectiveBreakdown",
    "OracleResult",
    "PathwayGraph",
    "Resource",
    "SeverityMap",
    "Solution",
    "ThresholdCombiner",
    "UnassignedNode",
    "UnknownSeverity",
    "ValidationReport",
    "WalkReport",
    "audit_solution",
    "check_walk",
    "enumerate_chordless_paths",
    "enumerate_paths",
    "eval_f",
    "evaluate_objective",
    "graph_sinks",
    "graph_sources",
    "objective_bounds",
    "oracle_agrees",
    "oracle_solve",
    "severity_to_interaction",
    "validate_instance",
]
