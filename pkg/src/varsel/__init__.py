"""Variable selection with LARS, RIC stepwise regression, C_p and S_p."""

__version__ = "0.1.0"

from .criteria import (
    CriterionTrace,
    cp_estimated,
    cp_known_sigma,
    delta,
    estimate_sigma2_twostep,
    select_min,
    sp,
    spacing_approx,
)
from .crossval import CvConfig, CvReport, CvRow, reversed_cv, rmse
from .data_model import (
    ColumnMeta,
    Dataset,
    StandardizedDataset,
    augment_spurious,
    expand_quadratic,
    load_diabetes,
    make_dataset,
    read_csv,
    standardize,
)
from .lars import LarsPath, PathStep, cp_drop, lars_path, lars_path_arrays, soft_threshold_rss
from .ortho_sim import SimConfig, SimSummary, simulate_orthogonal
from .stepwise import StepwiseFit, forward_stepwise, forward_stepwise_ric, ric_threshold

__all__ = [
    "ColumnMeta",
    "CriterionTrace",
    "CvConfig",
    "CvReport",
    "CvRow",
    "Dataset",
    "LarsPath",
    "PathStep",
    "SimConfig",
    "SimSummary",
    "StandardizedDataset",
    "StepwiseFit",
    "augment_spurious",
    "cp_drop",
    "cp_estimated",
    "cp_known_sigma",
    "delta",
    "estimate_sigma2_twostep",
    "expand_quadratic",
    "forward_stepwise",
    "forward_stepwise_ric",
    "lars_path",
    "lars_path_arrays",
    "load_diabetes",
    "make_dataset",
    "read_csv",
    "reversed_cv",
    "ric_threshold",
    "rmse",
    "select_min",
    "simulate_orthogonal",
    "soft_threshold_rss",
    "sp",
    "spacing_approx",
    "standardize",
]
