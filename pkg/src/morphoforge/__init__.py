"""Multi-objective design search over modular serial robots.

Robots are serial chains of parameterized joint modules (roll, pitch, yaw,
orthogonal two-axis, prismatic, fixed).  An elitist multi-objective genetic
search minimizes inverse-kinematics task error against a scenario's target
poses together with a design cost (joint count plus total length), and the
full sampling archive, its Pareto front, URDF exports, and report figures
are the run's deliverables.
"""

from .archive import (
    ArchiveRecord,
    ParetoArchive,
    export_csv,
    export_pareto,
    export_pareto_json,
    extract_pareto,
    hypervolume,
    pareto_ranks,
)
from .ik import IkConfig, IkResult, solve_ik
from .kinematics import Pose, chain_reach, forward_kinematics, jacobian, pose_error
from .modules import (
    DEFAULT_MODULE_COUNT,
    Genome,
    JointKind,
    JointModule,
    RobotDesign,
    ValidationError,
    decode_genome,
    design_dof,
    parse_design,
    random_genome,
)
from .nsga2 import (
    Individual,
    OptimizerConfig,
    ProgressEvent,
    crossover,
    crowding_distance,
    dominates,
    mutate,
    non_dominated_sort,
    run,
    select_parent,
)
from .objectives import (
    EvaluationCache,
    EvaluationResult,
    eval_design,
    eval_task,
    evaluate,
    evaluate_cached,
    solve_targets,
)
from .scenario import (
    BUILTIN_NAMES,
    Scenario,
    builtin_scenario,
    builtin_scenarios,
    load_scenario,
    save_scenario,
)
from .urdf import export_urdf

__version__ = "0.1.0"

__all__ = [
    "ArchiveRecord",
    "BUILTIN_NAMES",
    "DEFAULT_MODULE_COUNT",
    "EvaluationCache",
    "EvaluationResult",
    "Genome",
    "IkConfig",
    "IkResult",
    "Individual",
    "JointKind",
    "JointModule",
    "OptimizerConfig",
    "ParetoArchive",
    "Pose",
    "ProgressEvent",
    "RobotDesign",
    "Scenario",
    "ValidationError",
    "builtin_scenario",
    "builtin_scenarios",
    "chain_reach",
    "crossover",
    "crowding_distance",
    "decode_genome",
    "design_dof",
    "dominates",
    "eval_design",
    "eval_task",
    "evaluate",
    "evaluate_cached",
    "export_csv",
    "export_pareto",
    "export_pareto_json",
    "export_urdf",
    "extract_pareto",
    "forward_kinematics",
    "hypervolume",
    "jacobian",
    "load_scenario",
    "mutate",
    "non_dominated_sort",
    "pareto_ranks",
    "parse_design",
    "pose_error",
    "random_genome",
    "run",
    "save_scenario",
    "select_parent",
    "solve_ik",
    "solve_targets",
]
