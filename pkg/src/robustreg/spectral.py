"""Spectral initialization for low-rank problems.

M0 is the rank-r truncation of the moment estimator
n^-1 sum_i Y_i * Sigma_i^-1 vec(X_i) (identity covariance: just
n^-1 sum_i Y_i X_i), which lands inside the basin of the solver for
reasonable sample sizes.
"""

import logging

import numpy as np

from .linalg import LowRankFactors, svd_top
from .problem import MatrixProblem, residuals_mat

log = logging.getLogger(__name__)


def _inverse_diag_weights(covariances, d1, d2, n):
    """Per-sample 1/variance weight arrays from a diagonal description.

    Accepts a single shared diagonal (length d1*d2, or shaped d1 x d2)
    or a length-n sequence of such diagonals.
    """
    cov = np.asarray(covariances, dtype=np.float64)
    if cov.shape in ((d1 * d2,), (d1, d2)):
        cov = cov.reshape(1, d1, d2)
    elif cov.shape in ((n, d1 * d2), (n, d1, d2)):
        cov = cov.reshape(n, d1, d2)
    else:
        raise ValueError(
            f"covariance description shape {cov.shape} not understood for "
            f"n={n}, d1={d1}, d2={d2}")
    if np.any(cov <= 0.0):
        raise ValueError("supplied covariance is singular "
                         "(nonpositive diagonal entry)")
    return 1.0 / cov


def spectral_init(problem: MatrixProblem, covariances=None,
                  r: int = 1) -> LowRankFactors:
    """Rank-r truncation of the unbiased moment estimator.

    covariances, when given, describes the per-sample diagonal design
    covariances; omitted means identity (a warning is logged since a
    mis-specified covariance biases the moment sum).
    """
    d1, d2 = problem.shape
    meas = problem.measurements
    if covariances is None:
        log.debug("spectral_init: assuming identity design covariance")
        moment = np.tensordot(problem.responses, meas, axes=(0, 0))
    else:
        w = _inverse_diag_weights(covariances, d1, d2, problem.n)
        moment = np.tensordot(problem.responses, meas * w, axes=(0, 0))
    return svd_top(moment / problem.n, r)


def estimate_init_distance(problem: MatrixProblem, m0) -> float:
    """Mean absolute residual at m0; same order as ||M0 - M*||_F."""
    return float(np.mean(np.abs(residuals_mat(problem, m0))))
