"""Synthetic instance generation.

Designs, planted truths, heavy-tailed noise calibrated to a target
mean-absolute scale, and response contamination. One seed feeds four
independent substreams (truth, design, noise, contamination) so that
e.g. changing the contamination fraction never perturbs the design or
noise draws.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import qr_thin
from .problem import MatrixProblem, VectorProblem

LARGE_UNIFORM = "large-uniform"
SIGN_FLIP_SCALE = "sign-flip-scale"
NOISE_KINDS = ("none", "gaussian", "student_t", "symmetric_pareto")


@dataclass(frozen=True)
class DesignSpec:
    """Gaussian design: iid N(0,1) entries or a diagonal covariance.

    diag holds the per-coordinate variances (all within [Cl, Cu] > 0)
    and must match the problem's vectorized dimension.
    """

    kind: str = "iid-standard-normal"
    diag: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in ("iid-standard-normal", "diagonal-covariance"):
            raise ValueError(f"unknown design kind {self.kind!r}")
        if self.kind == "diagonal-covariance":
            if self.diag is None:
                raise ValueError("diagonal-covariance design needs diag")
            diag = np.asarray(self.diag, dtype=np.float64).ravel()
            if np.any(diag <= 0.0):
                raise ValueError("diagonal covariance entries must be > 0")
            object.__setattr__(self, "diag", diag)
        elif self.diag is not None:
            raise ValueError("diag only applies to diagonal-covariance")


def _student_t_abs_moment(nu: float) -> float:
    """E|T_nu| for nu > 1 (equals sqrt(2) at nu = 2)."""
    return math.sqrt(nu / math.pi) * math.gamma((nu - 1) / 2) / math.gamma(nu / 2)


@dataclass(frozen=True)
class NoiseSpec:
    """Noise distribution plus optional density bounds b0, b1.

    The density bounds are unobservable in practice and only feed the
    theory-stepsize oracle experiments.
    """

    kind: str = "none"
    sigma: Optional[float] = None      # gaussian
    nu: Optional[float] = None         # student_t degrees of freedom
    alpha: Optional[float] = None      # symmetric pareto shape
    scale: Optional[float] = None      # student_t / pareto multiplier
    b0: Optional[float] = None
    b1: Optional[float] = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "gaussian" and not (self.sigma and self.sigma > 0):
            raise ValueError("gaussian noise requires sigma > 0")
        if self.kind == "student_t":
            if not (self.nu and self.nu > 1):
                raise ValueError("student_t noise requires nu > 1")
            if not (self.scale and self.scale > 0):
                raise ValueError("student_t noise requires scale > 0")
        if self.kind == "symmetric_pareto":
            if not (self.alpha and self.alpha > 1):
                raise ValueError("symmetric_pareto noise requires alpha > 1")
            if not (self.scale and self.scale > 0):
                raise ValueError("symmetric_pareto noise requires scale > 0")

    @property
    def gamma(self) -> float:
        """E|xi| of the spec."""
        if self.kind == "none":
            return 0.0
        if self.kind == "gaussian":
            return self.sigma * math.sqrt(2.0 / math.pi)
        if self.kind == "student_t":
            return self.scale * _student_t_abs_moment(self.nu)
        return self.scale * self.alpha / (self.alpha - 1.0)


@dataclass(frozen=True)
class ContaminationSpec:
    """Huber epsilon-contamination of the responses.

    Exactly ceil(epsilon * n) responses are overwritten: large-uniform
    replaces them with Uniform(-A, A), A = 100 * max|Y| pre-corruption;
    sign-flip-scale maps Y to -10 Y.
    """

    epsilon: float
    model: str = LARGE_UNIFORM

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.model not in (LARGE_UNIFORM, SIGN_FLIP_SCALE):
            raise ValueError(f"unknown contamination model {self.model!r}")


@dataclass(frozen=True)
class SparseTruth:
    """Planted sparse vector: explicit entries, or s random nonzeros."""

    d: int
    entries: Optional[np.ndarray] = None
    s: Optional[int] = None
    magnitude_range: tuple = (1.0, 10.0)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if (self.entries is None) == (self.s is None):
            raise ValueError("give exactly one of entries or s")
        if self.entries is not None:
            entries = np.asarray(self.entries, dtype=np.float64)
            if entries.shape != (self.d,):
                raise ValueError(f"entries shape {entries.shape} != ({self.d},)")
            object.__setattr__(self, "entries", entries)
        else:
            if not 1 <= self.s <= self.d:
                raise ValueError(f"s={self.s} out of range for d={self.d}")
            lo, hi = self.magnitude_range
            if not 0 < lo <= hi:
                raise ValueError("magnitude_range must satisfy 0 < lo <= hi")

    def build(self, rng) -> np.ndarray:
        if self.entries is not None:
            return self.entries.copy()
        beta = np.zeros(self.d)
        support = rng.choice(self.d, size=self.s, replace=False)
        signs = rng.integers(0, 2, size=self.s) * 2 - 1
        beta[support] = signs * rng.uniform(*self.magnitude_range, size=self.s)
        return beta


@dataclass(frozen=True)
class LowRankTruth:
    """Planted rank-r matrix with a given spectrum or condition number."""

    d1: int
    d2: int
    r: int
    spectrum: Optional[np.ndarray] = None
    kappa: Optional[float] = None
    sigma_r: float = 1.0

    def __post_init__(self):
        if not 1 <= self.r <= min(self.d1, self.d2):
            raise ValueError(f"r={self.r} out of range for "
                             f"({self.d1}, {self.d2})")
        if self.spectrum is not None and self.kappa is not None:
            raise ValueError("give at most one of spectrum or kappa")
        if self.spectrum is not None:
            spec = np.sort(np.asarray(self.spectrum, dtype=np.float64))[::-1]
            if spec.shape != (self.r,) or np.any(spec <= 0):
                raise ValueError("spectrum must hold r positive values")
            object.__setattr__(self, "spectrum", spec)
        else:
            if self.kappa is not None and self.kappa < 1.0:
                raise ValueError("kappa must be >= 1")
            if not self.sigma_r > 0:
                raise ValueError("sigma_r must be positive")

    def singular_values(self) -> np.ndarray:
        if self.spectrum is not None:
            return self.spectrum.copy()
        kappa = 1.0 if self.kappa is None else self.kappa
        if self.r == 1:
            return np.array([self.sigma_r * kappa])
        expo = np.arange(self.r - 1, -1, -1) / (self.r - 1)
        return self.sigma_r * kappa ** expo

    def build(self, rng) -> np.ndarray:
        u, _ = qr_thin(rng.standard_normal((self.d1, self.r)))
        v, _ = qr_thin(rng.standard_normal((self.d2, self.r)))
        return (u * self.singular_values()) @ v.T


def _substreams(seed):
    children = np.random.SeedSequence(seed).spawn(4)
    return [np.random.default_rng(c) for c in children]


def _draw_design(design: DesignSpec, shape, rng) -> np.ndarray:
    z = rng.standard_normal(shape)
    if design.kind == "iid-standard-normal":
        return z
    vec_dim = int(np.prod(shape[1:]))
    if design.diag.shape != (vec_dim,):
        raise ValueError(f"design diag has {design.diag.shape[0]} entries, "
                         f"problem needs {vec_dim}")
    return z * np.sqrt(design.diag).reshape((1,) + shape[1:])


def draw_noise(noise: NoiseSpec, n: int, rng) -> np.ndarray:
    if noise.kind == "none":
        return np.zeros(n)
    if noise.kind == "gaussian":
        return noise.sigma * rng.standard_normal(n)
    if noise.kind == "student_t":
        return noise.scale * rng.standard_t(noise.nu, size=n)
    # symmetric pareto: random sign times classical Pareto(alpha, x_m = 1)
    signs = rng.integers(0, 2, size=n) * 2 - 1
    return noise.scale * signs * (1.0 + rng.pareto(noise.alpha, size=n))


def contaminated_count(epsilon: float, n: int) -> int:
    """ceil(epsilon * n), robust to float fuzz at integer boundaries."""
    if epsilon == 0.0:
        return 0
    return int(math.ceil(epsilon * n - 1e-9))


def _apply_contamination(contamination, y, rng):
    if contamination is None or contamination.epsilon == 0.0:
        return y
    n = y.shape[0]
    m = contaminated_count(contamination.epsilon, n)
    idx = rng.choice(n, size=m, replace=False)
    out = y.copy()
    if contamination.model == LARGE_UNIFORM:
        a = 100.0 * float(np.max(np.abs(y)))
        if a == 0.0:
            a = 100.0
        out[idx] = rng.uniform(-a, a, size=m)
    else:
        out[idx] = -10.0 * out[idx]
    return out


def gen_sparse_problem(truth: SparseTruth, design: DesignSpec,
                       noise: NoiseSpec, contamination=None,
                       n: int = 100, seed: int = 0) -> VectorProblem:
    """Y = X beta* + xi with optional response contamination."""
    if n < 1:
        raise ValueError("n must be >= 1")
    truth_rng, design_rng, noise_rng, contam_rng = _substreams(seed)
    beta = truth.build(truth_rng)
    x = _draw_design(design, (n, truth.d), design_rng)
    y = x @ beta + draw_noise(noise, n, noise_rng)
    y = _apply_contamination(contamination, y, contam_rng)
    return VectorProblem(x, y, beta)


def gen_lowrank_problem(truth: LowRankTruth, design: DesignSpec,
                        noise: NoiseSpec, contamination=None,
                        n: int = 100, seed: int = 0) -> MatrixProblem:
    """Y_i = <X_i, M*> + xi_i with optional response contamination."""
    if n < 1:
        raise ValueError("n must be >= 1")
    truth_rng, design_rng, noise_rng, contam_rng = _substreams(seed)
    m_star = truth.build(truth_rng)
    x = _draw_design(design, (n, truth.d1, truth.d2), design_rng)
    y = x.reshape(n, -1) @ m_star.ravel() + draw_noise(noise, n, noise_rng)
    y = _apply_contamination(contamination, y, contam_rng)
    return MatrixProblem(x, y, m_star)


def snr_to_gamma(snr_db: float, truth_fro: float) -> float:
    """Noise scale E|xi| for a target SNR = 20 log10(||truth||_F / E|xi|)."""
    if not truth_fro > 0:
        raise ValueError("truth_fro must be positive")
    return truth_fro / 10.0 ** (snr_db / 20.0)


def calibrate_noise(kind: str, target_gamma: float, *, nu: float = 2.0,
                    alpha: float = 1.5) -> NoiseSpec:
    """A NoiseSpec of the given kind with E|xi| = target_gamma."""
    if not target_gamma > 0:
        raise ValueError("target_gamma must be positive; use kind 'none' "
                         "for noiseless data")
    if kind == "gaussian":
        return NoiseSpec("gaussian", sigma=target_gamma * math.sqrt(math.pi / 2.0))
    if kind == "student_t":
        return NoiseSpec("student_t", nu=nu,
                         scale=target_gamma / _student_t_abs_moment(nu))
    if kind == "symmetric_pareto":
        return NoiseSpec("symmetric_pareto", alpha=alpha,
                         scale=target_gamma * (alpha - 1.0) / alpha)
    raise ValueError(f"cannot calibrate noise kind {kind!r}")


def smoothing_demo(noise: NoiseSpec, n: int, grid, seed: int = 0) -> np.ndarray:
    """Tabulate g(t) = mean |xi_i - t| and its subdifferential on a grid.

    Returns an array with columns (t, g(t), g'(t)); g'(t) is
    mean sign(t - xi_i) with sign(0) = 0.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    xi = draw_noise(noise, n, rng)
    diffs = grid[:, None] - xi[None, :]
    g = np.mean(np.abs(diffs), axis=1)
    gp = np.mean(np.sign(diffs), axis=1)
    return np.column_stack([grid, g, gp])
