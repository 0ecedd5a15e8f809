"""Experiment drivers: convergence traces, accuracy trials, contamination
sweeps, and CSV holdout evaluation.

All drivers enforce paired-seed discipline: every method within one
experiment consumes the identical problem instance. CSV schemas are part
of the external interface and must not drift:

    trace:  iter,phase,stepsize,objective,rel_error
    trials: method,seed,final_error,iters,wall_ms
    sweep:  epsilon,method,median_error
"""

import csv
import math
import os
import time
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .datagen import (ContaminationSpec, DesignSpec, LARGE_UNIFORM,
                      LowRankTruth, NoiseSpec, SparseTruth, calibrate_noise,
                      snr_to_gamma)
from .datagen import gen_lowrank_problem, gen_sparse_problem
from .losses import LossSpec
from .lowrank import HUBER_AUTO, RsGradConfig, rsgrad_solve
from .problem import VectorProblem, error_to_truth, holdout_mae
from .schedule import DECAY_ONLY, DivergenceError, TWO_PHASE
from .sparse import IhtConfig, iht_solve
from .spectral import spectral_init

TRACE_HEADER = ("iter", "phase", "stepsize", "objective", "rel_error")
TRIALS_HEADER = ("method", "seed", "final_error", "iters", "wall_ms")
SWEEP_HEADER = ("epsilon", "method", "median_error")

# method name -> (solver family, loss, schedule mode)
METHODS = {
    "iht-l1": ("iht", LossSpec("absolute"), TWO_PHASE),
    "iht-l2": ("iht", LossSpec("square"), TWO_PHASE),
    "iht-l1-decay": ("iht", LossSpec("absolute"), DECAY_ONLY),
    "rsgrad-l1": ("rsgrad", LossSpec("absolute"), TWO_PHASE),
    "rsgrad-l2": ("rsgrad", LossSpec("square"), TWO_PHASE),
    "rsgrad-huber": ("rsgrad", HUBER_AUTO, TWO_PHASE),
    "rsgrad-quantile": ("rsgrad", LossSpec("quantile", 0.5), TWO_PHASE),
    "rsgrad-l1-decay": ("rsgrad", LossSpec("absolute"), DECAY_ONLY),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: problem shape, noise, methods, trial layout.

    Desk-scale defaults (d1 = d2 = 40, r = 3) keep full suites in the
    minutes range; larger studies just override the dimensions.
    """

    scenario: str = "conv-gaussian"
    kind: str = "lowrank"                 # "lowrank" | "sparse"
    d1: int = 40
    d2: int = 40
    rank: int = 3
    d: int = 50
    sparsity: int = 3
    n: Optional[int] = None
    snr_db: Optional[float] = 40.0        # None -> noiseless
    noise_kind: str = "gaussian"
    epsilon: float = 0.0
    contamination_model: str = LARGE_UNIFORM
    trials: int = 20
    seed_base: int = 0
    out_dir: str = "."
    methods: tuple = ()
    max_iters_phase1: int = 500
    max_iters_phase2: int = 300

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.kind not in ("lowrank", "sparse"):
            raise ValueError(f"unknown problem kind {self.kind!r}")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; "
                                 f"known: {sorted(METHODS)}")

    @property
    def effective_n(self) -> int:
        if self.n is not None:
            return self.n
        return 10 * self.rank * self.d1 if self.kind == "lowrank" else 200

    @property
    def effective_methods(self) -> tuple:
        if self.methods:
            return self.methods
        if self.scenario.startswith("conv"):
            return (("rsgrad-l1", "rsgrad-l1-decay") if self.kind == "lowrank"
                    else ("iht-l1", "iht-l1-decay"))
        return (("rsgrad-l1", "rsgrad-l2") if self.kind == "lowrank"
                else ("iht-l1", "iht-l2"))


def _fmt(x) -> str:
    return repr(float(x))


def _truth_spec(config: ExperimentConfig):
    if config.kind == "sparse":
        return SparseTruth(config.d, s=config.sparsity,
                           magnitude_range=(1.0, 10.0))
    return LowRankTruth(config.d1, config.d2, config.rank,
                        kappa=1.0, sigma_r=5.0)


def make_instance(config: ExperimentConfig, seed: int):
    """Build the shared problem instance for one trial seed."""
    truth_spec = _truth_spec(config)
    truth = truth_spec.build(
        np.random.default_rng(np.random.SeedSequence(seed).spawn(4)[0]))
    if config.noise_kind == "none" or config.snr_db is None:
        noise = NoiseSpec("none")
    else:
        gamma = snr_to_gamma(config.snr_db, float(np.linalg.norm(truth)))
        noise = calibrate_noise(config.noise_kind, gamma)
    contamination = None
    if config.epsilon > 0:
        contamination = ContaminationSpec(config.epsilon,
                                          config.contamination_model)
    gen = gen_sparse_problem if config.kind == "sparse" else gen_lowrank_problem
    return gen(truth_spec, DesignSpec(), noise, contamination,
               n=config.effective_n, seed=seed)


def run_method(method: str, problem, config: ExperimentConfig):
    """Solve one instance with one method.

    Returns (final_error, iters, trace, wall_ms). Diverged runs report
    an infinite final error with the partial trace.
    """
    family, loss, mode = METHODS[method]
    start = time.perf_counter()
    try:
        if family == "iht":
            solver_cfg = IhtConfig(sparsity=config.sparsity, mode=mode,
                                   max_iters_phase1=config.max_iters_phase1,
                                   max_iters_phase2=config.max_iters_phase2)
            estimate, trace = iht_solve(problem, loss, solver_cfg)
        else:
            solver_cfg = RsGradConfig(rank=config.rank, loss=loss, mode=mode,
                                      max_iters_phase1=config.max_iters_phase1,
                                      max_iters_phase2=config.max_iters_phase2)
            m0 = spectral_init(problem, r=config.rank)
            estimate, trace = rsgrad_solve(problem, solver_cfg, m0)
        final_error = error_to_truth(problem, estimate).absolute
    except DivergenceError as exc:
        trace = exc.trace
        final_error = math.inf
    wall_ms = (time.perf_counter() - start) * 1e3
    iters = trace[-1].iteration if trace else 0
    return final_error, iters, trace, wall_ms


def write_trace_csv(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for rec in records:
            rel = "" if rec.rel_error is None else _fmt(rec.rel_error)
            writer.writerow([rec.iteration, rec.phase, _fmt(rec.stepsize),
                             _fmt(rec.objective), rel])


def write_trials_csv(path, rows) -> None:
    rows = sorted(rows, key=lambda r: (r[0], r[1]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIALS_HEADER)
        for method, seed, err, iters, wall_ms in rows:
            writer.writerow([method, seed, _fmt(err), iters, _fmt(wall_ms)])


def write_sweep_csv(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for eps, method, med in rows:
            writer.writerow([_fmt(eps), method, _fmt(med)])


def run_convergence(config: ExperimentConfig):
    """One seed, one instance, a trace CSV per method.

    Returns {method: csv_path}.
    """
    problem = make_instance(config, config.seed_base)
    os.makedirs(config.out_dir, exist_ok=True)
    paths = {}
    for method in config.effective_methods:
        _, _, trace, _ = run_method(method, problem, config)
        path = os.path.join(config.out_dir, f"trace_{method}.csv")
        write_trace_csv(path, trace)
        paths[method] = path
    return paths


def run_accuracy(config: ExperimentConfig):
    """`trials` paired seeds, every method on the identical instances.

    Writes trials.csv in out_dir; returns (path, rows).
    """
    rows = []
    for t in range(config.trials):
        seed = config.seed_base + t
        problem = make_instance(config, seed)
        for method in config.effective_methods:
            err, iters, _, wall_ms = run_method(method, problem, config)
            rows.append((method, seed, err, iters, wall_ms))
    os.makedirs(config.out_dir, exist_ok=True)
    path = os.path.join(config.out_dir, "trials.csv")
    write_trials_csv(path, rows)
    return path, rows


def check_epsilon(epsilon: float) -> float:
    """Validate/cap a contamination fraction for sweep configs."""
    if epsilon > 0.5:
        raise ValueError(f"contamination fraction {epsilon} rejected; the "
                         "breakdown analysis needs epsilon well below 1/2")
    if epsilon > 0.3:
        warnings.warn(f"contamination fraction {epsilon} capped at 0.3",
                      stacklevel=2)
        return 0.3
    return epsilon


def run_contamination_sweep(config: ExperimentConfig, eps_list):
    """Median error per (epsilon, method) over paired seeds.

    Writes sweep.csv in out_dir; returns (path, rows).
    """
    rows = []
    for eps in eps_list:
        eps = check_epsilon(eps)
        sub = replace(config, epsilon=eps,
                      out_dir=os.path.join(config.out_dir,
                                           f"eps_{_fmt(eps)}"))
        _, trial_rows = run_accuracy(sub)
        for method in sub.effective_methods:
            errs = [r[2] for r in trial_rows if r[0] == method]
            rows.append((eps, method, float(np.median(errs))))
    os.makedirs(config.out_dir, exist_ok=True)
    path = os.path.join(config.out_dir, "sweep.csv")
    write_sweep_csv(path, rows)
    return path, rows


def read_regression_csv(path):
    """Load a regression CSV: header row, response column y first.

    Returns (VectorProblem, feature_names).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if len(header) < 2:
            raise ValueError(f"{path}: need a response and at least one "
                             "feature column")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}:{lineno}: expected "
                                 f"{len(header)} fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.asarray(rows)
    return VectorProblem(data[:, 1:], data[:, 0]), header[1:]


def eval_csv(train_csv, test_csv, sparsity_grid, loss=LossSpec("absolute"),
             solver_overrides=None):
    """Fit on the train CSV at each sparsity level, score on the test CSV.

    Returns a list of report dicts with keys sparsity, mae, support
    (feature indices) and features (names from the header).
    """
    train, names = read_regression_csv(train_csv)
    test, _ = read_regression_csv(test_csv)
    if test.d != train.d:
        raise ValueError(f"train has {train.d} features, test has {test.d}")
    overrides = dict(solver_overrides or {})
    report = []
    for s in sparsity_grid:
        cfg = IhtConfig(sparsity=int(s), **overrides)
        beta, _ = iht_solve(train, loss, cfg)
        support = np.flatnonzero(beta)
        report.append({
            "sparsity": int(s),
            "mae": holdout_mae(train, test, beta),
            "support": [int(i) for i in support],
            "features": [names[i] for i in support],
        })
    return report
