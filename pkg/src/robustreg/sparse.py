"""Iterative hard thresholding for robust sparse regression.

Each iteration takes a full sub-gradient step and projects back onto
the set of s-sparse vectors by hard thresholding. Stepsizes follow the
two-phase schedule: geometric decay while far from the truth, then a
constant noise-scaled stepsize once the switch rule fires.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels
from .linalg import hard_threshold
from .losses import LossSpec
from .problem import VectorProblem, error_to_truth, residuals_vec
from .schedule import (DivergenceError, SWITCH_STEPSIZE, TWO_PHASE,
                       TraceRecord, TwoPhaseStepsize, robust_residual_scale,
                       validate_schedule_fields)


@dataclass(frozen=True)
class IhtConfig:
    """Two-phase schedule parameters for the IHT solver.

    eta0 is either an explicit stepsize or "scaled", meaning
    c0 * D0 / n with D0 an estimate of the initial distance to the
    truth (override via d0). eta2 is explicit or "noise-scaled",
    c2 * gamma_hat / n with gamma_hat the mean absolute residual at the
    phase switch. The square loss uses curvature-based variants of both
    rules since its gradient already scales with the residuals.
    """

    sparsity: int
    eta0: Union[float, str] = "scaled"
    c0: float = 0.25
    d0: Optional[float] = None
    decay_q: float = 0.91
    switch_rule: str = SWITCH_STEPSIZE
    switch_threshold: float = 1e-10
    plateau_window: int = 10
    plateau_rtol: float = 1e-6
    eta2: Union[float, str] = "noise-scaled"
    c2: float = 1.0
    max_iters_phase1: int = 500
    max_iters_phase2: int = 500
    mode: str = TWO_PHASE

    def __post_init__(self):
        if self.sparsity < 1:
            raise ValueError(f"sparsity must be >= 1, got {self.sparsity}")
        if isinstance(self.eta0, str) and self.eta0 != "scaled":
            raise ValueError(f"eta0 must be a number or 'scaled', "
                             f"got {self.eta0!r}")
        if isinstance(self.eta2, str) and self.eta2 != "noise-scaled":
            raise ValueError(f"eta2 must be a number or 'noise-scaled', "
                             f"got {self.eta2!r}")
        if self.d0 is not None and not self.d0 > 0:
            raise ValueError("d0 override must be positive")
        validate_schedule_fields(self)


def estimate_noise_scale_vec(problem: VectorProblem, beta) -> float:
    """gamma_hat = mean |Y_i - <beta, X_i>|."""
    return float(np.mean(np.abs(residuals_vec(problem, beta))))


def resolve_eta2(loss: LossSpec, gamma_hat: float, n: int, c2: float) -> float:
    """Constant phase-two stepsize from the estimated noise scale."""
    if loss.kind == "square":
        return c2 * 0.25 / n
    if loss.kind == "huber":
        return c2 * min(gamma_hat / (2.0 * loss.delta), 0.25) / n
    return c2 * gamma_hat / n


def _resolve_eta0(config: IhtConfig, loss: LossSpec,
                  problem: VectorProblem, beta0) -> float:
    if not isinstance(config.eta0, str):
        return float(config.eta0)
    n = problem.n
    if loss.kind == "square":
        return config.c0 / n
    d0 = config.d0
    if d0 is None:
        # mean |residual| undershoots the distance by sqrt(2/pi) under a
        # standardized Gaussian design; rescale to a distance estimate
        u0 = residuals_vec(problem, beta0)
        d0 = robust_residual_scale(u0) * math.sqrt(math.pi / 2.0)
    return config.c0 * d0 / n


def iht_solve(problem: VectorProblem, loss: LossSpec, config: IhtConfig,
              beta0=None):
    """Run IHT on a vector problem.

    Returns (beta_hat, trace). beta0 defaults to the zero vector and
    must have at most `config.sparsity` nonzeros. Raises
    DivergenceError (trace attached) if the objective blows up.
    """
    d, n = problem.d, problem.n
    if config.sparsity > d:
        raise ValueError(f"sparsity {config.sparsity} exceeds dimension {d}")
    if beta0 is None:
        beta = np.zeros(d)
    else:
        beta = np.array(beta0, dtype=np.float64)
        if beta.shape != (d,):
            raise ValueError(f"beta0 shape {beta.shape} != ({d},)")
        if np.count_nonzero(beta) > config.sparsity:
            raise ValueError("beta0 support exceeds the sparsity budget")

    sched = TwoPhaseStepsize(_resolve_eta0(config, loss, problem, beta),
                             config)
    trace = []
    objectives = []
    obj_limit = None
    has_truth = problem.truth is not None

    def rel_err(b):
        return error_to_truth(problem, b).relative if has_truth else None

    it = 0
    phase2_iters = 0
    total_budget = config.max_iters_phase1 + config.max_iters_phase2
    while True:
        u, g = _kernels.subgradient_core(problem.design, beta,
                                         problem.responses, loss.code,
                                         loss.param)
        obj = _kernels.objective_from_residuals(u, loss.code, loss.param)
        if obj_limit is None:
            obj_limit = 1e6 * obj if obj > 0 else math.inf
        if not math.isfinite(obj) or obj > obj_limit:
            raise DivergenceError(
                f"objective blew up at iteration {it} ({obj:.3e})",
                trace, beta)
        objectives.append(obj)
        if sched.should_switch(objectives):
            gamma_hat = robust_residual_scale(u)
            eta2 = (config.eta2 if not isinstance(config.eta2, str)
                    else resolve_eta2(loss, gamma_hat, n, config.c2))
            sched.enter_phase2(eta2)
        done = (phase2_iters >= config.max_iters_phase2
                if sched.phase == 2 else it >= total_budget)
        record = TraceRecord(it, sched.phase, sched.eta, obj, rel_err(beta),
                             int(np.count_nonzero(beta)))
        trace.append(record)
        if done:
            break
        beta = hard_threshold(beta - sched.eta * g, config.sparsity)
        if sched.phase == 2:
            phase2_iters += 1
        sched.advance()
        it += 1

    return beta, trace
