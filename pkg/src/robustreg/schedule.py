"""Two-phase stepsize schedule shared by the sparse and low-rank solvers.

Phase one decays the stepsize geometrically (eta_{l+1} = q * eta_l);
once the switch rule fires the solver moves to a constant phase-two
stepsize. Decay-only mode never switches and reproduces the prior-work
baseline schedule.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

TWO_PHASE = "two-phase"
DECAY_ONLY = "decay-only"
MODES = (TWO_PHASE, DECAY_ONLY)

SWITCH_STEPSIZE = "stepsize"
SWITCH_PLATEAU = "objective-plateau"
SWITCH_RULES = (SWITCH_STEPSIZE, SWITCH_PLATEAU)

# smallest admissible stepsize; keeps degenerate zero-scale rules positive
ETA_FLOOR = float(np.finfo(np.float64).tiny)


def robust_residual_scale(u) -> float:
    """Noise-scale estimate from residuals for the stepsize rules.

    The mean absolute residual, capped at three times the median so a
    contaminated minority cannot inflate the phase-two stepsize; for the
    supported (uncontaminated) noise families the cap never binds.
    """
    au = np.abs(u)
    return float(min(np.mean(au), 3.0 * np.median(au)))


@dataclass(frozen=True)
class TraceRecord:
    """Per-iteration solver log entry."""

    iteration: int
    phase: int
    stepsize: float
    objective: float
    rel_error: Optional[float] = None
    support_size: Optional[int] = None


class DivergenceError(RuntimeError):
    """Raised when a solver run blows up; carries the partial trace."""

    def __init__(self, message, trace, last_estimate):
        super().__init__(message)
        self.trace = trace
        self.last_estimate = last_estimate


def validate_schedule_fields(cfg):
    """Shared config checks for the two-phase schedule parameters."""
    if not 0.0 < cfg.decay_q < 1.0:
        raise ValueError(f"decay_q must lie in (0, 1), got {cfg.decay_q}")
    if cfg.mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {cfg.mode!r}")
    if cfg.switch_rule not in SWITCH_RULES:
        raise ValueError(
            f"switch_rule must be one of {SWITCH_RULES}, got {cfg.switch_rule!r}")
    if not cfg.switch_threshold > 0.0:
        raise ValueError("switch_threshold must be positive")
    if isinstance(cfg.eta0, str):
        pass
    elif not cfg.eta0 > 0.0:
        raise ValueError(f"explicit eta0 must be positive, got {cfg.eta0}")
    if not isinstance(cfg.eta2, str) and not cfg.eta2 > 0.0:
        raise ValueError(f"explicit eta2 must be positive, got {cfg.eta2}")
    if cfg.max_iters_phase1 < 0 or cfg.max_iters_phase2 < 0:
        raise ValueError("iteration budgets must be nonnegative")
    if cfg.plateau_window < 1:
        raise ValueError("plateau_window must be >= 1")


class TwoPhaseStepsize:
    """Stepsize state machine driven by the solver loop.

    The solver asks `should_switch` once per iteration while in phase
    one, calls `enter_phase2(eta2)` when it fires, reads `eta`/`phase`
    for the current step, and calls `advance()` after stepping.
    """

    def __init__(self, eta0, cfg):
        self.eta = max(float(eta0), ETA_FLOOR)
        self.phase = 1
        self._cfg = cfg
        self._phase1_iters = 0

    def should_switch(self, objectives) -> bool:
        cfg = self._cfg
        if cfg.mode == DECAY_ONLY or self.phase == 2:
            return False
        if self._phase1_iters >= cfg.max_iters_phase1:
            return True
        if cfg.switch_rule == SWITCH_STEPSIZE:
            return self.eta < cfg.switch_threshold
        # objective-plateau: relative change over the trailing window
        w = cfg.plateau_window
        if len(objectives) <= w:
            return False
        prev, cur = objectives[-1 - w], objectives[-1]
        scale = max(abs(prev), ETA_FLOOR)
        return abs(cur - prev) <= cfg.plateau_rtol * scale

    def enter_phase2(self, eta2) -> None:
        self.phase = 2
        self.eta = max(float(eta2), ETA_FLOOR)

    def advance(self) -> None:
        if self.phase == 1:
            self._phase1_iters += 1
            self.eta = self.eta * self._cfg.decay_q
