"""Riemannian sub-gradient descent over fixed-rank matrices.

Each iteration assembles the vanilla sub-gradient densely, projects it
onto the tangent space at the current iterate, steps, and retracts back
to rank r through the fast QR + small-SVD path. Stepsizes follow the
same two-phase schedule as the sparse solver.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from . import _kernels
from .linalg import LowRankFactors, retract_fast, svd_top
from .losses import LossSpec
from .problem import MatrixProblem, residuals_mat
from .schedule import (DivergenceError, SWITCH_STEPSIZE, TWO_PHASE,
                       TraceRecord, TwoPhaseStepsize, robust_residual_scale,
                       validate_schedule_fields)
from .sparse import resolve_eta2

# sentinel for a Huber loss whose delta is calibrated by the solver:
# the mean absolute residual at the start, re-estimated at the phase switch
HUBER_AUTO = "huber-auto"


@dataclass(frozen=True)
class RsGradConfig:
    """Two-phase schedule parameters for the low-rank solver.

    eta0 is explicit or "operator-norm" (c1 * ||M0||_op / n); eta2 is
    explicit or "noise-scaled" (c2 * gamma_hat / n at the switch). The
    Huber and square losses use curvature-corrected variants; see
    `resolve_eta2`.
    """

    rank: int
    loss: Union[LossSpec, str] = LossSpec("absolute")
    eta0: Union[float, str] = "operator-norm"
    c1: float = 1.0
    decay_q: float = 0.91
    switch_rule: str = SWITCH_STEPSIZE
    switch_threshold: float = 1e-10
    plateau_window: int = 10
    plateau_rtol: float = 1e-6
    eta2: Union[float, str] = "noise-scaled"
    c2: float = 1.0
    max_iters_phase1: int = 500
    max_iters_phase2: int = 300
    mode: str = TWO_PHASE

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if isinstance(self.loss, str) and self.loss != HUBER_AUTO:
            raise ValueError(f"loss must be a LossSpec or {HUBER_AUTO!r}")
        if isinstance(self.eta0, str) and self.eta0 != "operator-norm":
            raise ValueError(f"eta0 must be a number or 'operator-norm', "
                             f"got {self.eta0!r}")
        if isinstance(self.eta2, str) and self.eta2 != "noise-scaled":
            raise ValueError(f"eta2 must be a number or 'noise-scaled', "
                             f"got {self.eta2!r}")
        validate_schedule_fields(self)


@dataclass(frozen=True)
class TheoryConstants:
    """Regularity constants of the two-phase analysis.

    mu/L are the sharpness and sub-gradient bound scales per phase and
    tau_comp > tau_stat > 0 delimit the two regions around the truth.
    """

    mu_comp: float
    L_comp: float
    mu_stat: float
    L_stat: float
    tau_comp: float
    tau_stat: float

    def __post_init__(self):
        for name in ("mu_comp", "L_comp", "mu_stat", "L_stat",
                     "tau_comp", "tau_stat"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.tau_comp > self.tau_stat:
            raise ValueError("tau_comp must exceed tau_stat")
        if self.L_comp < self.mu_comp or self.L_stat < self.mu_stat:
            raise ValueError("sub-gradient bound L cannot fall below the "
                             "sharpness scale mu within a phase")


class StepsizeIntervals(NamedTuple):
    eta0_range: tuple
    eta2_range: tuple


def theory_stepsizes(constants: TheoryConstants, d0: float) -> StepsizeIntervals:
    """Admissible initial and phase-two stepsize intervals.

    d0 is the initial distance ||M0 - M*||_F (an upper bound suffices).
    """
    if not d0 > 0:
        raise ValueError(f"d0 must be positive, got {d0}")
    base0 = d0 * constants.mu_comp / constants.L_comp ** 2
    base2 = constants.mu_stat / constants.L_stat ** 2
    return StepsizeIntervals((0.2 * base0, 0.3 * base0),
                             (0.125 * base2, 0.75 * base2))


def estimate_noise_scale_mat(problem: MatrixProblem, m) -> float:
    """gamma_hat = mean |Y_i - <M, X_i>|."""
    return float(np.mean(np.abs(residuals_mat(problem, m))))


def _resolve_phase1_loss(config: RsGradConfig,
                         problem: MatrixProblem, m0_dense) -> LossSpec:
    if not isinstance(config.loss, str):
        return config.loss
    # huber-auto: calibrate delta to the current residual scale
    u = problem.responses - problem.design_2d @ m0_dense.ravel()
    delta = robust_residual_scale(u)
    return LossSpec("huber", max(delta, 1e-12))


def _resolve_eta0(config: RsGradConfig, loss: LossSpec,
                  m0: LowRankFactors, n: int) -> float:
    if not isinstance(config.eta0, str):
        return float(config.eta0)
    if loss.kind == "square":
        return config.c1 / (4.0 * n)
    eta0 = config.c1 * m0.operator_norm() / n
    if loss.kind == "huber":
        eta0 /= 2.0 * loss.delta
    return eta0


def rsgrad_solve(problem: MatrixProblem, config: RsGradConfig,
                 m0: Optional[LowRankFactors] = None):
    """Run RsGrad on a matrix problem.

    Returns (factors, trace). m0 defaults to the spectral initializer.
    Raises DivergenceError (trace attached) if the objective blows up.
    """
    d1, d2 = problem.shape
    if config.rank > min(d1, d2):
        raise ValueError(f"rank {config.rank} exceeds min{problem.shape}")
    if m0 is None:
        from .spectral import spectral_init
        factors = spectral_init(problem, r=config.rank)
    else:
        if m0.shape != problem.shape:
            raise ValueError(f"m0 shape {m0.shape} != {problem.shape}")
        if m0.rank > config.rank:
            raise ValueError(f"m0 rank {m0.rank} exceeds {config.rank}")
        factors = m0

    n = problem.n
    m_dense = factors.reconstruct()
    loss = _resolve_phase1_loss(config, problem, m_dense)
    auto_delta = isinstance(config.loss, str)
    sched = TwoPhaseStepsize(_resolve_eta0(config, loss, factors, n), config)

    trace = []
    objectives = []
    obj_limit = None
    has_truth = problem.truth is not None
    truth_norm = (float(np.linalg.norm(problem.truth)) if has_truth else 0.0)

    it = 0
    phase2_iters = 0
    total_budget = config.max_iters_phase1 + config.max_iters_phase2
    while True:
        u, gvec = _kernels.subgradient_core(problem.design_2d,
                                            m_dense.ravel(),
                                            problem.responses,
                                            loss.code, loss.param)
        obj = _kernels.objective_from_residuals(u, loss.code, loss.param)
        if obj_limit is None:
            obj_limit = 1e6 * obj if obj > 0 else math.inf
        if not math.isfinite(obj) or obj > obj_limit:
            raise DivergenceError(
                f"objective blew up at iteration {it} ({obj:.3e})",
                trace, factors)
        objectives.append(obj)
        if sched.should_switch(objectives):
            gamma_hat = robust_residual_scale(u)
            if auto_delta:
                loss = LossSpec("huber", max(gamma_hat, 1e-12))
            eta2 = (config.eta2 if not isinstance(config.eta2, str)
                    else resolve_eta2(loss, gamma_hat, n, config.c2))
            sched.enter_phase2(eta2)
        rel = None
        if has_truth:
            err = float(np.linalg.norm(m_dense - problem.truth))
            rel = err / truth_norm if truth_norm > 0 else (
                0.0 if err == 0.0 else float("inf"))
        done = (phase2_iters >= config.max_iters_phase2
                if sched.phase == 2 else it >= total_budget)
        trace.append(TraceRecord(it, sched.phase, sched.eta, obj, rel))
        if done:
            break
        g = gvec.reshape(problem.shape)
        factors = retract_fast(factors, g, sched.eta)
        m_dense = factors.reconstruct()
        if sched.phase == 2:
            phase2_iters += 1
        sched.advance()
        it += 1

    return factors, trace
