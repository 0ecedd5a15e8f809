# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: elementwise robust losses plus the residual/
subgradient pass used by both solvers.

The design-matrix sweeps stay in BLAS (via numpy matmul, which a naive
C loop cannot beat); the compiled wins are the branchy elementwise
rho/psi evaluations and the small-k top-|v| selection. Semantics must
match `_fallback.py` exactly. Loss kind codes: 0=absolute, 1=huber,
2=quantile, 3=square.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline double _rho(double u, int kind, double delta) noexcept nogil:
    cdef double au
    if kind == 0:
        return u if u >= 0.0 else -u
    elif kind == 1:
        au = u if u >= 0.0 else -u
        if au <= delta:
            return u * u
        return 2.0 * delta * au - delta * delta
    elif kind == 2:
        if u >= 0.0:
            return delta * u
        return (delta - 1.0) * u
    else:
        return u * u


cdef inline double _psi(double u, int kind, double delta) noexcept nogil:
    if kind == 0:
        if u > 0.0:
            return 1.0
        elif u < 0.0:
            return -1.0
        return 0.0
    elif kind == 1:
        if u > delta:
            return 2.0 * delta
        elif u < -delta:
            return -2.0 * delta
        return 2.0 * u
    elif kind == 2:
        if u > 0.0:
            return delta
        elif u < 0.0:
            return delta - 1.0
        return 0.0
    else:
        return 2.0 * u


def loss_values(u, int kind, double delta):
    """Elementwise robust loss rho(u)."""
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(uu)
    cdef Py_ssize_t i, n = uu.shape[0]
    for i in range(n):
        out[i] = _rho(uu[i], kind, delta)
    return out


def loss_subgrads(u, int kind, double delta):
    """Elementwise subgradient psi(u) with sign(0) = 0."""
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(uu)
    cdef Py_ssize_t i, n = uu.shape[0]
    for i in range(n):
        out[i] = _psi(uu[i], kind, delta)
    return out


def objective_from_residuals(u, int kind, double delta):
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef double acc = 0.0
    cdef Py_ssize_t i, n = uu.shape[0]
    for i in range(n):
        acc += _rho(uu[i], kind, delta)
    return acc


def residuals(design, coef, y):
    """u_i = y_i - <design_i, coef> for a 2-D row-major design."""
    return y - design @ coef


def subgradient_core(design, coef, y, int kind, double delta):
    """Residuals plus full subgradient in one call.

    Returns (u, g) with u_i = y_i - <design_i, coef> and
    g = -sum_i psi(u_i) design_i. Matvecs go through BLAS; the psi pass
    runs compiled.
    """
    cdef cnp.ndarray[double, ndim=1] u = y - design @ coef
    cdef cnp.ndarray[double, ndim=1] psi = np.empty_like(u)
    cdef Py_ssize_t i, n = u.shape[0]
    for i in range(n):
        psi[i] = -_psi(u[i], kind, delta)
    return u, psi @ design


def top_k_abs_indices(const double[::1] v, Py_ssize_t k):
    """Indices of the k largest |v| entries, ties broken by lowest index.

    Small k uses a repeated max scan (O(k d), allocation free); larger k
    falls back to a stable argsort. Returned indices sorted ascending.
    """
    cdef Py_ssize_t d = v.shape[0]
    if k > 16:
        order = np.argsort(-np.abs(np.asarray(v)), kind="stable")
        return np.sort(order[:k])
    cdef cnp.ndarray[cnp.intp_t, ndim=1] idx = np.empty(k, dtype=np.intp)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] taken = np.zeros(d, dtype=np.uint8)
    cdef Py_ssize_t pick, best, j
    cdef double bestval, av
    for pick in range(k):
        best = -1
        bestval = -1.0
        for j in range(d):
            if taken[j]:
                continue
            av = v[j] if v[j] >= 0.0 else -v[j]
            if av > bestval:
                bestval = av
                best = j
        idx[pick] = best
        taken[best] = 1
    idx.sort()
    return idx
