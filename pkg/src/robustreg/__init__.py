"""Robust sparse and low-rank regression via projected sub-gradient descent."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .datagen import (ContaminationSpec, DesignSpec, LowRankTruth, NoiseSpec,
                      SparseTruth, calibrate_noise, gen_lowrank_problem,
                      gen_sparse_problem, smoothing_demo, snr_to_gamma)
from .linalg import (LowRankFactors, SvdTriple, hard_threshold, qr_thin,
                     retract_dense, retract_fast, svd_top, tangent_project)
from .losses import (LossSpec, full_subgradient_mat, full_subgradient_vec,
                     loss_subgrad, loss_value, objective)
from .lowrank import (HUBER_AUTO, RsGradConfig, TheoryConstants,
                      estimate_noise_scale_mat, rsgrad_solve, theory_stepsizes)
from .problem import (ErrorToTruth, MatrixProblem, VectorProblem,
                      error_to_truth, holdout_mae, residuals_mat,
                      residuals_vec)
from .schedule import (DECAY_ONLY, DivergenceError, TWO_PHASE, TraceRecord)
from .sparse import IhtConfig, estimate_noise_scale_vec, iht_solve
from .spectral import estimate_init_distance, spectral_init

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND", "ContaminationSpec", "DesignSpec", "LowRankTruth",
    "NoiseSpec", "SparseTruth", "calibrate_noise", "gen_lowrank_problem",
    "gen_sparse_problem", "smoothing_demo", "snr_to_gamma",
    "LowRankFactors", "SvdTriple", "hard_threshold", "qr_thin",
    "retract_dense", "retract_fast", "svd_top", "tangent_project",
    "LossSpec", "full_subgradient_mat", "full_subgradient_vec",
    "loss_subgrad", "loss_value", "objective",
    "HUBER_AUTO", "RsGradConfig", "TheoryConstants",
    "estimate_noise_scale_mat", "rsgrad_solve", "theory_stepsizes",
    "ErrorToTruth", "MatrixProblem", "VectorProblem", "error_to_truth",
    "holdout_mae", "residuals_mat", "residuals_vec",
    "DECAY_ONLY", "DivergenceError", "TWO_PHASE", "TraceRecord",
    "IhtConfig", "estimate_noise_scale_vec", "iht_solve",
    "estimate_init_distance", "spectral_init",
    "__version__",
]
