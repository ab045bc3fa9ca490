"""Temporal platform rotation defenses: analytics, scheduling, simulation.

The library models a defense that migrates a critical application across
heterogeneous platforms. It provides closed-form combinatorial and
Markov-chain attacker metrics, diversity-optimal migration scheduling
over a platform similarity matrix, an interval Monte Carlo study of
competing policies, and an event-driven continuous-time scenario engine.
"""

__version__ = "0.1.0"

from .analytic import (
    MarkovParams,
    RepeatMode,
    RunLengthChain,
    choose,
    expected_control_fraction,
    expected_time_to_compromise,
    p_success_aggregate,
    p_success_finite_window,
    run_length_chain,
    steady_state,
)
from .core import (
    ControlRequirement,
    MigrationPolicy,
    PayoffModel,
    PlatformSet,
    PolicyKind,
    SimilarityMatrix,
    ThreatModel,
    VulnerabilityLabeling,
    bundled_similarity_path,
    load_bundled_similarity,
    load_similarity_matrix,
    save_similarity_matrix,
)
from .rng import as_generator, substream
from .scenario import (
    DEFAULT_EXPLOITS,
    ExploitSpec,
    GridPoint,
    ScenarioConfig,
    max_control_run,
    run_scenario_study,
)
from .scheduler import (
    Periodicity,
    ScheduleState,
    detect_periodicity,
    diversity_schedule,
    heron_area,
    make_random_k_policy,
    new_schedule_state,
    next_platform,
    next_platform_diversity,
    next_platform_uniform,
    step_schedule,
)
from .simulator import (
    EmpiricalCdf,
    McConfig,
    MetricsReport,
    PolicyMetrics,
    TrialTrace,
    assign_vulnerabilities,
    compute_metrics,
    run_mc_study,
    run_mc_trial,
)

__all__ = [
    "__version__",
    "ControlRequirement",
    "DEFAULT_EXPLOITS",
    "EmpiricalCdf",
    "ExploitSpec",
    "GridPoint",
    "MarkovParams",
    "McConfig",
    "MetricsReport",
    "MigrationPolicy",
    "PayoffModel",
    "Periodicity",
    "PlatformSet",
    "PolicyKind",
    "PolicyMetrics",
    "RepeatMode",
    "RunLengthChain",
    "ScenarioConfig",
    "ScheduleState",
    "SimilarityMatrix",
    "ThreatModel",
    "TrialTrace",
    "VulnerabilityLabeling",
    "as_generator",
    "assign_vulnerabilities",
    "bundled_similarity_path",
    "choose",
    "compute_metrics",
    "detect_periodicity",
    "diversity_schedule",
    "expected_control_fraction",
    "expected_time_to_compromise",
    "heron_area",
    "load_bundled_similarity",
    "load_similarity_matrix",
    "make_random_k_policy",
    "max_control_run",
    "new_schedule_state",
    "next_platform",
    "next_platform_diversity",
    "next_platform_uniform",
    "p_success_aggregate",
    "p_success_finite_window",
    "run_length_chain",
    "run_mc_study",
    "run_mc_trial",
    "run_scenario_study",
    "save_similarity_matrix",
    "steady_state",
    "step_schedule",
    "substream",
]
