"""Robust scalar losses and full (vanilla) sub-gradients.

Residual convention: u_i = Y_i - <estimate, X_i> everywhere, so the full
sub-gradient of f = sum_i rho(u_i) is G = -sum_i psi(u_i) X_i. For the
symmetric losses this matches the sign(prediction - Y) form; for the
asymmetric quantile loss this convention (delta = P(xi <= 0)) is the one
the estimator semantics require.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

_KIND_CODES = {"absolute": 0, "huber": 1, "quantile": 2, "square": 3}
KINDS = tuple(_KIND_CODES)


@dataclass(frozen=True)
class LossSpec:
    """Which loss rho to use and its parameter.

    delta is the Huber robustification parameter (> 0) or the quantile
    level (in (0, 1)); it is unused for absolute and square.
    """

    kind: str
    delta: float | None = None

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ValueError(f"unknown loss kind {self.kind!r}; "
                             f"expected one of {KINDS}")
        if self.kind == "huber":
            if self.delta is None or not self.delta > 0:
                raise ValueError("huber loss requires delta > 0")
        elif self.kind == "quantile":
            if self.delta is None or not 0 < self.delta < 1:
                raise ValueError("quantile loss requires 0 < delta < 1")

    @property
    def code(self) -> int:
        return _KIND_CODES[self.kind]

    @property
    def param(self) -> float:
        return 0.0 if self.delta is None else float(self.delta)

    def lipschitz(self):
        """Global Lipschitz constant of rho, None for the square loss."""
        if self.kind == "absolute":
            return 1.0
        if self.kind == "huber":
            return 2.0 * self.delta
        if self.kind == "quantile":
            return max(self.delta, 1.0 - self.delta)
        return None


def loss_value(spec: LossSpec, u: float) -> float:
    """rho(u) for a single residual."""
    if not np.isfinite(u):
        raise ValueError(f"residual must be finite, got {u}")
    return float(_kernels.loss_values(np.atleast_1d(float(u)),
                                      spec.code, spec.param)[0])


def loss_subgrad(spec: LossSpec, u: float) -> float:
    """An element of the subdifferential of rho at u, with sign(0) = 0."""
    if not np.isfinite(u):
        raise ValueError(f"residual must be finite, got {u}")
    return float(_kernels.loss_subgrads(np.atleast_1d(float(u)),
                                        spec.code, spec.param)[0])


def objective(spec: LossSpec, residuals) -> float:
    """sum_i rho(u_i) over a residual vector."""
    u = np.ascontiguousarray(residuals, dtype=np.float64)
    return _kernels.objective_from_residuals(u, spec.code, spec.param)


def full_subgradient_vec(spec: LossSpec, problem, beta):
    """G = -sum_i psi(u_i) X_i for a vector problem."""
    beta = np.ascontiguousarray(beta, dtype=np.float64)
    if beta.shape != (problem.d,):
        raise ValueError(f"beta shape {beta.shape} != ({problem.d},)")
    _, g = _kernels.subgradient_core(problem.design, beta,
                                     problem.responses, spec.code, spec.param)
    return g


def full_subgradient_mat(spec: LossSpec, problem, m):
    """G = -sum_i psi(u_i) X_i for a matrix problem (dense d1 x d2)."""
    m = np.ascontiguousarray(m, dtype=np.float64)
    if m.shape != problem.shape:
        raise ValueError(f"estimate shape {m.shape} != {problem.shape}")
    _, g = _kernels.subgradient_core(problem.design_2d, m.ravel(),
                                     problem.responses, spec.code, spec.param)
    return g.reshape(problem.shape)
