"""Variational image classifiers on pixel lattices, with exact and
frontier-limited circuit simulation, shot sampling, and a reproducible
training protocol."""

from .baseline import (
    ClassicalKernel,
    classical_evaluate,
    classical_forward,
    classical_loss_and_grad,
    classical_train,
    classical_update,
    init_classical,
)
from .dataset import (
    VALID_SIDES,
    DatasetFormatError,
    LabeledImage,
    gen_dataset,
    gen_sample,
    load_dataset,
    save_dataset,
)
from .encoding import AngleImage, encode_image, image_angles, pixel_to_angle, prob_to_angle
from .frontier import DEFAULT_WIDTH_CAP, FrontierState, FrontierWidthError, frontier_run
from .gates import CFLIP_X, CFLIP_Y, CFLIP_Z, Angle, GateKind, GateOp, gate_matrix, rx_matrix, ry_matrix
from .network import (
    Architecture,
    LayerBoundary,
    LayerSpec,
    ModelParams,
    build_plan,
    conv_feature_map,
    group_plan,
    init_params,
    layer_structure,
    load_params,
    save_params,
)
from .pgm import PgmFormatError, read_pgm, write_pgm
from .plans import CircuitPlan
from .runner import FactorSim, run_plan, run_plan_batch
from .statevec import PureState, apply_gate, exact_prob_one, run_pure, run_pure_many, sample_shots
from .training import (
    EvalMode,
    GradMethod,
    LossCurve,
    MeasureMode,
    Prediction,
    TrainConfig,
    TrainingObjective,
    UpdateStrategy,
    activate,
    activate_deriv,
    evaluate,
    forward,
    grad_combined,
    grad_shift,
    grad_sigmoid_update,
    loss_gradient,
    mse,
    save_curve,
    sigmoid,
    sigmoid_deriv,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "AngleImage",
    "Architecture",
    "CFLIP_X",
    "CFLIP_Y",
    "CFLIP_Z",
    "CircuitPlan",
    "ClassicalKernel",
    "DEFAULT_WIDTH_CAP",
    "DatasetFormatError",
    "EvalMode",
    "FactorSim",
    "FrontierState",
    "FrontierWidthError",
    "GateKind",
    "GateOp",
    "GradMethod",
    "LabeledImage",
    "LayerBoundary",
    "LayerSpec",
    "LossCurve",
    "MeasureMode",
    "ModelParams",
    "PgmFormatError",
    "Prediction",
    "PureState",
    "TrainConfig",
    "TrainingObjective",
    "UpdateStrategy",
    "VALID_SIDES",
    "activate",
    "activate_deriv",
    "apply_gate",
    "build_plan",
    "classical_evaluate",
    "classical_forward",
    "classical_loss_and_grad",
    "classical_train",
    "classical_update",
    "conv_feature_map",
    "encode_image",
    "evaluate",
    "exact_prob_one",
    "forward",
    "frontier_run",
    "gate_matrix",
    "gen_dataset",
    "gen_sample",
    "grad_combined",
    "grad_shift",
    "grad_sigmoid_update",
    "group_plan",
    "image_angles",
    "init_classical",
    "init_params",
    "layer_structure",
    "load_dataset",
    "load_params",
    "loss_gradient",
    "mse",
    "pixel_to_angle",
    "prob_to_angle",
    "read_pgm",
    "run_plan",
    "run_plan_batch",
    "run_pure",
    "run_pure_many",
    "sample_shots",
    "save_curve",
    "save_dataset",
    "save_params",
    "sigmoid",
    "sigmoid_deriv",
    "train",
    "write_pgm",
]
