"""Two-layer networks with cosine-series adaptive activations.

The hidden and output nonlinearities are truncated cosine expansions whose
coefficients train alongside the linear weights through closed-form LMS
updates.  Benchmarks with fixed activations, synthetic task generators,
and analysis exports round out the toolkit.
"""

from .activations import AdaptiveActivation, FixedActivation, identity_init, sigmoid_dct_init
from .analysis import GridMap, activation_report, bump, decision_map, redundancy_report, response_surface
from .basis import BasisConfig, DctCoefficients, analyze, cos_basis, sin_basis, synthesize, truncation_tail
from .network import (
    ForwardTrace,
    Network,
    forward,
    forward_batch,
    init_benchmark,
    init_network,
    load_model,
    predict_class,
    save_model,
)
from .tasks import Dataset, ProblemSpec, accuracy, generate_dataset, get_problem, label, mse
from .training import (
    GradCheckResult,
    LmsConfig,
    PowerEstimates,
    TrainingDiverged,
    TrainReport,
    default_config,
    finite_difference_gradient,
    gradient_check,
    lms_step,
    train,
    update_power,
)

__all__ = [
    "AdaptiveActivation",
    "BasisConfig",
    "Dataset",
    "DctCoefficients",
    "FixedActivation",
    "ForwardTrace",
    "GradCheckResult",
    "GridMap",
    "LmsConfig",
    "Network",
    "PowerEstimates",
    "ProblemSpec",
    "TrainReport",
    "TrainingDiverged",
    "accuracy",
    "activation_report",
    "analyze",
    "bump",
    "cos_basis",
    "decision_map",
    "default_config",
    "finite_difference_gradient",
    "forward",
    "forward_batch",
    "generate_dataset",
    "get_problem",
    "gradient_check",
    "identity_init",
    "init_benchmark",
    "init_network",
    "label",
    "lms_step",
    "load_model",
    "mse",
    "predict_class",
    "redundancy_report",
    "response_surface",
    "save_model",
    "sigmoid_dct_init",
    "sin_basis",
    "synthesize",
    "train",
    "truncation_tail",
    "update_power",
]

__version__ = "0.1.0"
