"""Pure-numpy implementations of the solver hot kernels.

Mirrors the compiled core in `_core.pyx`; semantics must stay identical.
Loss kinds are encoded as integers: 0=absolute, 1=huber, 2=quantile,
3=square.
"""

import numpy as np

ABSOLUTE = 0
HUBER = 1
QUANTILE = 2
SQUARE = 3


def loss_values(u, kind, delta):
    """Elementwise robust loss rho(u)."""
    u = np.asarray(u, dtype=np.float64)
    if kind == ABSOLUTE:
        return np.abs(u)
    if kind == HUBER:
        au = np.abs(u)
        return np.where(au <= delta, u * u, 2.0 * delta * au - delta * delta)
    if kind == QUANTILE:
        return np.where(u >= 0.0, delta * u, (delta - 1.0) * u)
    if kind == SQUARE:
        return u * u
    raise ValueError(f"unknown loss kind code {kind}")


def loss_subgrads(u, kind, delta):
    """Elementwise subgradient psi(u) with sign(0) = 0."""
    u = np.asarray(u, dtype=np.float64)
    if kind == ABSOLUTE:
        return np.sign(u)
    if kind == HUBER:
        return np.where(np.abs(u) <= delta, 2.0 * u, 2.0 * delta * np.sign(u))
    if kind == QUANTILE:
        out = np.where(u > 0.0, delta, delta - 1.0)
        return np.where(u == 0.0, 0.0, out)
    if kind == SQUARE:
        return 2.0 * u
    raise ValueError(f"unknown loss kind code {kind}")


def objective_from_residuals(u, kind, delta):
    return float(loss_values(u, kind, delta).sum())


def residuals(design, coef, y):
    """u_i = y_i - <design_i, coef> for a 2-D row-major design."""
    return y - design @ coef


def subgradient_core(design, coef, y, kind, delta):
    """Fused residual + full subgradient pass.

    Returns (u, g) with u_i = y_i - <design_i, coef> and
    g = -sum_i psi(u_i) design_i.
    """
    u = y - design @ coef
    psi = loss_subgrads(u, kind, delta)
    g = -(design.T @ psi)
    return u, g


def top_k_abs_indices(v, k):
    """Indices of the k largest |v| entries, ties broken by lowest index.

    Returned indices are sorted ascending.
    """
    if k == 0:
        return np.empty(0, dtype=np.intp)
    order = np.argsort(-np.abs(v), kind="stable")
    return np.sort(order[:k])
