"""Problem containers for the linear model Y_i = <X_i, truth> + noise."""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .linalg import LowRankFactors


def _frozen_array(a, dtype=np.float64):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


def _check_finite(a, name):
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")


@dataclass(frozen=True)
class VectorProblem:
    """Design rows X_i^T, responses Y_i, optional ground truth beta*."""

    design: np.ndarray
    responses: np.ndarray
    truth: Optional[np.ndarray] = None

    def __post_init__(self):
        design = _frozen_array(self.design)
        responses = _frozen_array(self.responses)
        if design.ndim != 2 or responses.ndim != 1:
            raise ValueError("design must be n x d, responses length n")
        if design.shape[0] != responses.shape[0] or design.shape[0] < 1:
            raise ValueError(
                f"inconsistent sizes: design {design.shape}, "
                f"responses {responses.shape}")
        _check_finite(design, "design")
        _check_finite(responses, "responses")
        object.__setattr__(self, "design", design)
        object.__setattr__(self, "responses", responses)
        if self.truth is not None:
            truth = _frozen_array(self.truth)
            if truth.shape != (design.shape[1],):
                raise ValueError(f"truth shape {truth.shape} != "
                                 f"({design.shape[1]},)")
            _check_finite(truth, "truth")
            object.__setattr__(self, "truth", truth)

    @property
    def n(self) -> int:
        return self.design.shape[0]

    @property
    def d(self) -> int:
        return self.design.shape[1]


@dataclass(frozen=True)
class MatrixProblem:
    """Measurement matrices X_i (stored densely), responses, optional M*."""

    measurements: np.ndarray
    responses: np.ndarray
    truth: Optional[np.ndarray] = None
    # flattened (n, d1*d2) view shared with the solvers
    design_2d: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        meas = _frozen_array(self.measurements)
        responses = _frozen_array(self.responses)
        if meas.ndim != 3 or responses.ndim != 1:
            raise ValueError("measurements must be n x d1 x d2")
        if meas.shape[0] != responses.shape[0] or meas.shape[0] < 1:
            raise ValueError(
                f"inconsistent sizes: measurements {meas.shape}, "
                f"responses {responses.shape}")
        _check_finite(meas, "measurements")
        _check_finite(responses, "responses")
        object.__setattr__(self, "measurements", meas)
        object.__setattr__(self, "responses", responses)
        object.__setattr__(self, "design_2d",
                           meas.reshape(meas.shape[0], -1))
        if self.truth is not None:
            truth = self.truth
            if isinstance(truth, LowRankFactors):
                truth = truth.reconstruct()
            truth = _frozen_array(truth)
            if truth.shape != meas.shape[1:]:
                raise ValueError(f"truth shape {truth.shape} != "
                                 f"{meas.shape[1:]}")
            _check_finite(truth, "truth")
            object.__setattr__(self, "truth", truth)

    @property
    def n(self) -> int:
        return self.measurements.shape[0]

    @property
    def shape(self) -> tuple:
        return self.measurements.shape[1:]


class ErrorToTruth(NamedTuple):
    absolute: float
    relative: float


def residuals_vec(problem: VectorProblem, beta):
    """u_i = Y_i - <beta, X_i>."""
    beta = np.ascontiguousarray(beta, dtype=np.float64)
    if beta.shape != (problem.d,):
        raise ValueError(f"beta shape {beta.shape} != ({problem.d},)")
    return _kernels.residuals(problem.design, beta, problem.responses)


def residuals_mat(problem: MatrixProblem, m):
    """u_i = Y_i - <M, X_i>."""
    if isinstance(m, LowRankFactors):
        m = m.reconstruct()
    m = np.ascontiguousarray(m, dtype=np.float64)
    if m.shape != problem.shape:
        raise ValueError(f"estimate shape {m.shape} != {problem.shape}")
    return _kernels.residuals(problem.design_2d, m.ravel(), problem.responses)


def error_to_truth(problem, estimate) -> ErrorToTruth:
    """Absolute and relative distance of an estimate to the stored truth.

    Vector problems use the l2 norm, matrix problems the Frobenius norm
    (identical on flattened arrays). Raises if the problem has no truth.
    """
    if problem.truth is None:
        raise ValueError("problem carries no ground truth")
    if isinstance(estimate, LowRankFactors):
        estimate = estimate.reconstruct()
    estimate = np.asarray(estimate, dtype=np.float64)
    if estimate.shape != problem.truth.shape:
        raise ValueError(f"estimate shape {estimate.shape} != "
                         f"truth shape {problem.truth.shape}")
    absolute = float(np.linalg.norm(estimate - problem.truth))
    denom = float(np.linalg.norm(problem.truth))
    if denom > 0.0:
        relative = absolute / denom
    else:
        relative = 0.0 if absolute == 0.0 else float("inf")
    return ErrorToTruth(absolute, relative)


def holdout_mae(train: VectorProblem, test: VectorProblem, beta) -> float:
    """Mean absolute prediction error of beta on the test rows."""
    if train.d != test.d:
        raise ValueError(f"train d={train.d} and test d={test.d} disagree")
    if test.n == 0:
        raise ValueError("empty test set")
    return float(np.mean(np.abs(residuals_vec(test, beta))))
