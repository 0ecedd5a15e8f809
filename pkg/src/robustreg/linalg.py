"""Dense linear-algebra primitives for the sparse and low-rank solvers.

Everything here is a pure function on immutable inputs. Matrix factor
contracts are stated at reconstruction level: factors returned by
`svd_top`/`retract_fast` may differ by sign or rotation from any other
valid decomposition, but the product U diag(s) V^T is pinned.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class LowRankFactors:
    """Factored rank-r matrix U diag(s) V^T.

    U (d1 x r) and V (d2 x r) have orthonormal columns, s is nonnegative
    and sorted descending. Also serves as the result type of `svd_top`.
    """

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return self.s.shape[0]

    @property
    def shape(self) -> tuple:
        return (self.U.shape[0], self.V.shape[0])

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.s) @ self.V.T

    def operator_norm(self) -> float:
        return float(self.s[0]) if self.s.size else 0.0

    def validate(self, tol: float = 1e-10) -> None:
        """Raise ValueError if orthonormality/ordering invariants fail."""
        r = self.rank
        if self.U.shape[1] != r or self.V.shape[1] != r:
            raise ValueError("factor column counts disagree with len(s)")
        if np.any(self.s < -tol):
            raise ValueError("negative singular value")
        if np.any(np.diff(self.s) > tol):
            raise ValueError("singular values not sorted descending")
        for name, f in (("U", self.U), ("V", self.V)):
            gram = f.T @ f
            if np.max(np.abs(gram - np.eye(r))) > tol:
                raise ValueError(f"{name} columns not orthonormal to {tol}")


# SvdTriple in the interface docs is the same structure.
SvdTriple = LowRankFactors


def _as_matrix(m, name="matrix"):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def svd_top(m, r: int) -> LowRankFactors:
    """Best rank-r approximation of m via the thin SVD.

    Returns factors with s sorted descending. r must satisfy
    1 <= r <= min(m.shape).
    """
    m = _as_matrix(m)
    if not 1 <= r <= min(m.shape):
        raise ValueError(f"rank r={r} out of range for shape {m.shape}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return LowRankFactors(np.ascontiguousarray(u[:, :r]), s[:r].copy(),
                          np.ascontiguousarray(vt[:r].T))


def qr_thin(a):
    """Thin QR with the sign convention diag(R) >= 0.

    Requires rows >= cols. Returns (Q, R) with Q column-orthonormal and
    R upper-triangular, Q R = a.
    """
    a = _as_matrix(a)
    if a.shape[0] < a.shape[1]:
        raise ValueError(f"qr_thin needs rows >= cols, got {a.shape}")
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r)).copy()
    signs[signs == 0.0] = 1.0
    return q * signs, signs[:, None] * r


def hard_threshold(v, k: int):
    """Keep the k largest-|v| entries, zero the rest.

    Ties are broken by lowest index so traces are reproducible.
    """
    v = np.ascontiguousarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("hard_threshold expects a vector")
    if not 0 <= k <= v.shape[0]:
        raise ValueError(f"k={k} out of range for dim {v.shape[0]}")
    out = np.zeros_like(v)
    idx = _kernels.top_k_abs_indices(v, k)
    out[idx] = v[idx]
    return out


def tangent_project(u_basis, v_basis, g):
    """Project g onto the tangent space of the fixed-rank manifold.

    Computes U U^T g + g V V^T - U U^T g V V^T without forming the
    d x d projectors; the result has rank at most 2r.
    """
    u_basis = np.asarray(u_basis, dtype=np.float64)
    v_basis = np.asarray(v_basis, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if (u_basis.shape[0] != g.shape[0] or v_basis.shape[0] != g.shape[1]
            or u_basis.shape[1] != v_basis.shape[1]):
        raise ValueError(
            f"dimension mismatch: U {u_basis.shape}, V {v_basis.shape}, "
            f"G {g.shape}")
    utg = u_basis.T @ g
    gv = g @ v_basis
    return u_basis @ utg + (gv - u_basis @ (utg @ v_basis)) @ v_basis.T


def retract_fast(current: LowRankFactors, g, eta: float) -> LowRankFactors:
    """One Riemannian step: project g, step by eta, retract to rank r.

    Equivalent (at reconstruction level) to
    svd_top(M - eta * tangent_project(U, V, g), r), but only needs two
    thin QRs of d x r panels and the SVD of a 2r x 2r core.
    """
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    u, s, v = current.U, current.s, current.V
    g = np.asarray(g, dtype=np.float64)
    if g.shape != current.shape:
        raise ValueError(f"gradient shape {g.shape} != {current.shape}")
    r = current.rank

    utg = u.T @ g
    gv = g @ v
    utgv = utg @ v
    # panels orthogonal to the current column/row spaces
    a1 = utg.T - v @ utgv.T        # (I - V V^T) g^T U, d2 x r
    a2 = gv - u @ utgv             # (I - U U^T) g V,   d1 x r
    q1, r1 = np.linalg.qr(a1)
    q2, r2 = np.linalg.qr(a2)

    core = np.zeros((2 * r, 2 * r))
    core[:r, :r] = np.diag(s) - eta * utgv
    core[:r, r:] = -eta * r1.T
    core[r:, :r] = -eta * r2
    uc, sc, vct = np.linalg.svd(core)

    left = np.hstack([u, q2]) @ uc[:, :r]
    right = np.hstack([v, q1]) @ vct[:r].T
    return LowRankFactors(left, sc[:r].copy(), right)


def retract_dense(current: LowRankFactors, g, eta: float) -> LowRankFactors:
    """Reference path for `retract_fast`: dense step then truncated SVD."""
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    step = current.reconstruct() - eta * tangent_project(current.U, current.V, g)
    return svd_top(step, current.rank)
