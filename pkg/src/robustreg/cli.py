"""Command-line front end.

Subcommands: gen, solve-sparse, solve-lowrank, bench, demo-smoothing,
eval-csv. Exit codes: 0 success, 1 runtime failure, 2 usage error.
Numeric stdout uses full precision. A JSON --config file supplies
defaults; explicit flags override it.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import harness
from .datagen import (ContaminationSpec, DesignSpec, LowRankTruth, NoiseSpec,
                      SparseTruth, calibrate_noise, smoothing_demo,
                      snr_to_gamma)
from .datagen import gen_lowrank_problem, gen_sparse_problem
from .harness import ExperimentConfig
from .instancefile import load_instance, save_instance
from .losses import LossSpec
from .lowrank import HUBER_AUTO, RsGradConfig, rsgrad_solve
from .problem import MatrixProblem, error_to_truth
from .schedule import DivergenceError
from .sparse import IhtConfig, iht_solve

_NOISE_ALIASES = {"t2": ("student_t", 2.0), "pareto": ("symmetric_pareto", None),
                  "student_t": ("student_t", None),
                  "gaussian": ("gaussian", None), "none": ("none", None)}


class UsageError(ValueError):
    """Invalid flag value or combination; exits with code 2."""


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _float_list(text):
    return [float(v) for v in text.split(",") if v != ""]


def _int_list(text):
    return [int(v) for v in text.split(",") if v != ""]


def _add_gen_noise_flags(p):
    p.add_argument("--noise", default="none",
                   choices=sorted(_NOISE_ALIASES),
                   help="noise kind (t2 = Student's t with nu=2)")
    p.add_argument("--snr", type=float, default=None,
                   help="target SNR in dB; calibrates E|xi| from the truth")
    p.add_argument("--gamma", type=float, default=None,
                   help="target E|xi| directly (alternative to --snr)")
    p.add_argument("--nu", type=float, default=None,
                   help="Student's t degrees of freedom")
    p.add_argument("--alpha", type=float, default=1.5,
                   help="symmetric Pareto shape")
    p.add_argument("--epsilon", type=float, default=0.0,
                   help="contaminated response fraction")
    p.add_argument("--contam-model", default="large-uniform",
                   choices=["large-uniform", "sign-flip-scale"])


def _resolve_noise(args, truth_fro):
    kind, default_nu = _NOISE_ALIASES[args.noise]
    if kind == "none":
        return NoiseSpec("none")
    if args.snr is not None and args.gamma is not None:
        raise ValueError("give at most one of --snr and --gamma")
    if args.gamma is not None:
        gamma = args.gamma
    else:
        snr = 40.0 if args.snr is None else args.snr
        gamma = snr_to_gamma(snr, truth_fro)
    nu = args.nu if args.nu is not None else (default_nu or 2.0)
    return calibrate_noise(kind, gamma, nu=nu, alpha=args.alpha)


def _noise_meta(noise: NoiseSpec) -> str:
    parts = [noise.kind]
    for field in ("sigma", "nu", "alpha", "scale"):
        v = getattr(noise, field)
        if v is not None:
            parts.append(f"{field}={_fmt(v)}")
    return " ".join(parts)


def cmd_gen(args) -> int:
    if args.n is None:
        args.n = 200 if args.kind == "sparse" else 600
    if args.kind == "sparse":
        if args.beta is not None:
            entries = np.zeros(args.d)
            vals = _float_list(args.beta)
            if len(vals) > args.d:
                raise ValueError("--beta has more entries than --d")
            entries[:len(vals)] = vals
            truth_spec = SparseTruth(args.d, entries=entries)
            s = int(np.count_nonzero(entries))
        else:
            truth_spec = SparseTruth(args.d, s=args.s)
            s = args.s
    else:
        spectrum = _float_list(args.spectrum) if args.spectrum else None
        truth_spec = LowRankTruth(args.d1, args.d2, args.r,
                                  spectrum=spectrum, kappa=args.kappa,
                                  sigma_r=args.sigma_r)
    truth_rng = np.random.default_rng(
        np.random.SeedSequence(args.seed).spawn(4)[0])
    truth = truth_spec.build(truth_rng)
    noise = _resolve_noise(args, float(np.linalg.norm(truth)))
    contamination = (ContaminationSpec(args.epsilon, args.contam_model)
                     if args.epsilon > 0 else None)

    meta = {"seed": args.seed, "noise_spec": _noise_meta(noise),
            "epsilon": _fmt(args.epsilon)}
    if args.kind == "sparse":
        problem = gen_sparse_problem(truth_spec, DesignSpec(), noise,
                                     contamination, n=args.n, seed=args.seed)
        meta["s"] = s
    else:
        problem = gen_lowrank_problem(truth_spec, DesignSpec(), noise,
                                      contamination, n=args.n, seed=args.seed)
        meta["r"] = args.r
    save_instance(args.out, problem, meta)
    print(f"wrote {args.out} (kind={args.kind}, n={problem.n})")
    return 0


def _write_estimate(path, estimate) -> None:
    arr = np.atleast_2d(np.asarray(estimate, dtype=np.float64))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# robustreg estimate {arr.shape[0]}x{arr.shape[1]}\n")
        for row in arr:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")


def _parse_loss(args) -> LossSpec:
    if args.loss == "huber" and args.delta is None:
        return None  # caller decides (auto for rsgrad, error for iht)
    if args.loss == "quantile" and args.delta is None:
        return LossSpec("quantile", 0.5)
    try:
        return LossSpec(args.loss, args.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _report_solution(problem, estimate, trace) -> None:
    print(f"iterations={trace[-1].iteration}")
    print(f"final_objective={_fmt(trace[-1].objective)}")
    if problem.truth is not None:
        err = error_to_truth(problem, estimate)
        print(f"abs_error={_fmt(err.absolute)}")
        print(f"rel_error={_fmt(err.relative)}")


def cmd_solve_sparse(args) -> int:
    problem, meta = load_instance(args.instance)
    if isinstance(problem, MatrixProblem):
        raise ValueError("instance is a low-rank problem; "
                         "use solve-lowrank")
    loss = _parse_loss(args)
    if loss is None:
        raise ValueError("IHT needs an explicit --delta for the huber loss")
    sparsity = args.sparsity
    if sparsity is None:
        if "s" not in meta:
            raise ValueError("instance does not record s; pass --sparsity")
        sparsity = int(meta["s"])
    cfg = IhtConfig(sparsity=sparsity, eta0=args.eta0 or "scaled",
                    c0=args.c0, d0=args.d0, decay_q=args.decay_q,
                    switch_rule=args.switch_rule,
                    switch_threshold=args.switch_threshold,
                    eta2=args.eta2 or "noise-scaled", c2=args.c2,
                    max_iters_phase1=args.max_iters1,
                    max_iters_phase2=args.max_iters2, mode=args.mode)
    beta, trace = iht_solve(problem, loss, cfg)
    _report_solution(problem, beta, trace)
    print(f"support={','.join(str(i) for i in np.flatnonzero(beta))}")
    if args.out:
        _write_estimate(args.out, beta)
    if args.trace:
        harness.write_trace_csv(args.trace, trace)
    return 0


def cmd_solve_lowrank(args) -> int:
    problem, meta = load_instance(args.instance)
    if not isinstance(problem, MatrixProblem):
        raise ValueError("instance is a sparse problem; use solve-sparse")
    loss = _parse_loss(args)
    rank = args.rank
    if rank is None:
        if "r" not in meta:
            raise ValueError("instance does not record r; pass --rank")
        rank = int(meta["r"])
    cfg = RsGradConfig(rank=rank, loss=HUBER_AUTO if loss is None else loss,
                       eta0=args.eta0 or "operator-norm", c1=args.c1,
                       decay_q=args.decay_q, switch_rule=args.switch_rule,
                       switch_threshold=args.switch_threshold,
                       eta2=args.eta2 or "noise-scaled", c2=args.c2,
                       max_iters_phase1=args.max_iters1,
                       max_iters_phase2=args.max_iters2, mode=args.mode)
    factors, trace = rsgrad_solve(problem, cfg)
    _report_solution(problem, factors, trace)
    if args.out:
        _write_estimate(args.out, factors.reconstruct())
    if args.trace:
        harness.write_trace_csv(args.trace, trace)
    return 0


_SCENARIOS = {
    "conv-gaussian": dict(kind="lowrank", noise_kind="gaussian"),
    "conv-t2": dict(kind="lowrank", noise_kind="student_t"),
    "conv-sparse": dict(kind="sparse", noise_kind="gaussian"),
    "conv-noiseless": dict(kind="lowrank", noise_kind="none", snr_db=None),
    "accuracy-sparse": dict(kind="sparse", noise_kind="student_t"),
    "accuracy-lowrank": dict(kind="lowrank", noise_kind="gaussian"),
    "contamination-sparse": dict(kind="sparse", noise_kind="gaussian"),
    "rate-lowrank": dict(kind="lowrank", noise_kind="gaussian"),
}


def cmd_bench(args) -> int:
    base = dict(_SCENARIOS[args.scenario])
    base.update(scenario=args.scenario, out_dir=args.out_dir,
                trials=args.trials, seed_base=args.seed,
                epsilon=args.epsilon, d1=args.d1, d2=args.d2, rank=args.r,
                d=args.d, sparsity=args.s)
    if args.n is not None:
        base["n"] = args.n
    if args.snr is not None:
        base["snr_db"] = args.snr
    config = ExperimentConfig(**base)
    if args.scenario.startswith("conv"):
        paths = harness.run_convergence(config)
        for method, path in paths.items():
            print(f"{method}: {path}")
    elif args.scenario == "contamination-sparse":
        eps_list = _float_list(args.eps_list)
        path, rows = harness.run_contamination_sweep(config, eps_list)
        print(path)
    elif args.scenario == "rate-lowrank":
        import os
        from dataclasses import replace
        n = config.effective_n
        for label, nn in (("n", n), ("4n", 4 * n)):
            sub = replace(config, n=nn,
                          out_dir=os.path.join(config.out_dir, label))
            path, _ = harness.run_accuracy(sub)
            print(f"{label}: {path}")
    else:
        path, _ = harness.run_accuracy(config)
        print(path)
    return 0


def cmd_demo_smoothing(args) -> int:
    taus = _float_list(args.tau)
    grid = np.linspace(args.grid_min, args.grid_max, args.grid_points)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau", "t", "g", "dg"])
        for tau in taus:
            noise = NoiseSpec("gaussian", sigma=tau)
            table = smoothing_demo(noise, args.n, grid, seed=args.seed)
            for t, g, dg in table:
                writer.writerow([_fmt(tau), _fmt(t), _fmt(g), _fmt(dg)])
    print(f"wrote {args.out} ({len(taus)} noise scales x "
          f"{args.grid_points} grid points)")
    return 0


def cmd_eval_csv(args) -> int:
    loss = _parse_loss(args)
    if loss is None:
        raise ValueError("eval-csv needs an explicit --delta for huber")
    report = harness.eval_csv(args.train, args.test,
                              _int_list(args.sparsity_grid), loss)
    for row in report:
        feats = ";".join(row["features"])
        print(f"sparsity={row['sparsity']} mae={_fmt(row['mae'])} "
              f"support={feats}")
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sparsity", "mae", "support"])
            for row in report:
                writer.writerow([row["sparsity"], _fmt(row["mae"]),
                                 ";".join(row["features"])])
    return 0


def _add_solver_flags(p):
    p.add_argument("--loss", default="absolute",
                   choices=["absolute", "huber", "quantile", "square"])
    p.add_argument("--delta", type=float, default=None,
                   help="huber delta (> 0) or quantile level (in (0,1))")
    p.add_argument("--eta0", type=float, default=None,
                   help="explicit initial stepsize (default: scaled rule)")
    p.add_argument("--eta2", type=float, default=None,
                   help="explicit phase-two stepsize (default: noise rule)")
    p.add_argument("--c0", type=float, default=0.25)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--d0", type=float, default=None,
                   help="initial-distance estimate override")
    p.add_argument("--decay-q", type=float, default=0.91)
    p.add_argument("--switch-rule", default="stepsize",
                   choices=["stepsize", "objective-plateau"])
    p.add_argument("--switch-threshold", type=float, default=1e-10)
    p.add_argument("--max-iters1", type=int, default=500)
    p.add_argument("--max-iters2", type=int, default=300)
    p.add_argument("--mode", default="two-phase",
                   choices=["two-phase", "decay-only"])
    p.add_argument("--trace", default=None, help="write a trace CSV here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustreg",
        description="Robust sparse/low-rank regression via projected "
                    "sub-gradient descent with two-phase stepsizes.")
    parser.add_argument("--config", default=None,
                        help="JSON file of flag defaults (flags override)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic instance file")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    gs = gen_sub.add_parser("sparse")
    gs.add_argument("--d", type=int, default=50)
    gs.add_argument("--s", type=int, default=3)
    gs.add_argument("--beta", default=None,
                    help="explicit truth entries, comma separated "
                         "(zero padded to --d)")
    gl = gen_sub.add_parser("lowrank")
    gl.add_argument("--d1", type=int, default=40)
    gl.add_argument("--d2", type=int, default=40)
    gl.add_argument("--r", type=int, default=3)
    gl.add_argument("--spectrum", default=None,
                    help="explicit singular values, comma separated")
    gl.add_argument("--kappa", type=float, default=None)
    gl.add_argument("--sigma-r", type=float, default=5.0)
    for p in (gs, gl):
        p.add_argument("--n", type=int, default=None,
                       help="sample count (default: 200 sparse, 600 lowrank)")
        _add_gen_noise_flags(p)
        p.add_argument("--seed", type=int, default=0,
                       help="RNG seed (default 0)")
        p.add_argument("--out", "-o", required=True)
        p.set_defaults(func=cmd_gen)

    ss = sub.add_parser("solve-sparse", help="run IHT on an instance file")
    ss.add_argument("instance")
    ss.add_argument("--sparsity", type=int, default=None,
                    help="sparsity budget (default: recorded truth size)")
    _add_solver_flags(ss)
    ss.add_argument("--out", "-o", default=None, help="estimate file")
    ss.set_defaults(func=cmd_solve_sparse)

    sl = sub.add_parser("solve-lowrank", help="run RsGrad on an instance file")
    sl.add_argument("instance")
    sl.add_argument("--rank", type=int, default=None,
                    help="rank budget (default: recorded truth rank)")
    _add_solver_flags(sl)
    sl.add_argument("--out", "-o", default=None, help="estimate file")
    sl.set_defaults(func=cmd_solve_lowrank)

    bench = sub.add_parser("bench", help="run a benchmark scenario")
    bench.add_argument("--scenario", required=True,
                       choices=sorted(_SCENARIOS))
    bench.add_argument("--out-dir", default="bench-out")
    bench.add_argument("--trials", type=int, default=20)
    bench.add_argument("--seed", type=int, default=0,
                       help="base RNG seed (default 0)")
    bench.add_argument("--n", type=int, default=None)
    bench.add_argument("--snr", type=float, default=None)
    bench.add_argument("--epsilon", type=float, default=0.0)
    bench.add_argument("--eps-list", default="0,0.05,0.1,0.2")
    bench.add_argument("--d1", type=int, default=40)
    bench.add_argument("--d2", type=int, default=40)
    bench.add_argument("--r", type=int, default=3)
    bench.add_argument("--d", type=int, default=50)
    bench.add_argument("--s", type=int, default=3)
    bench.set_defaults(func=cmd_bench)

    demo = sub.add_parser("demo-smoothing",
                          help="tabulate the noise-smoothing curves")
    demo.add_argument("--tau", default="0.1,1,10",
                      help="Gaussian noise scales, comma separated")
    demo.add_argument("--n", type=int, default=1000)
    demo.add_argument("--grid-min", type=float, default=-5.0)
    demo.add_argument("--grid-max", type=float, default=5.0)
    demo.add_argument("--grid-points", type=int, default=201)
    demo.add_argument("--seed", type=int, default=0,
                      help="RNG seed (default 0)")
    demo.add_argument("--out", "-o", required=True)
    demo.set_defaults(func=cmd_demo_smoothing)

    ev = sub.add_parser("eval-csv", help="holdout evaluation on CSV data")
    ev.add_argument("--train", required=True)
    ev.add_argument("--test", required=True)
    ev.add_argument("--sparsity-grid", required=True,
                    help="comma-separated sparsity levels")
    ev.add_argument("--loss", default="absolute",
                    choices=["absolute", "huber", "quantile", "square"])
    ev.add_argument("--delta", type=float, default=None)
    ev.add_argument("--out", "-o", default=None)
    ev.set_defaults(func=cmd_eval_csv)

    return parser


def _apply_defaults(parser, defaults) -> None:
    """Apply config defaults to the parser and every subparser.

    Subparsers parse into a fresh namespace and would otherwise clobber
    defaults set only on the root parser.
    """
    parser.set_defaults(**defaults)
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                _apply_defaults(sub, defaults)


def _scan_config_path(argv):
    for i, arg in enumerate(argv):
        if arg == "--config":
            if i + 1 >= len(argv):
                return None
            return argv[i + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    # config supplies defaults for optional flags; explicit flags override
    config_path = _scan_config_path(argv)
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                defaults = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config {config_path}: {exc}",
                  file=sys.stderr)
            return 1
        if not isinstance(defaults, dict):
            parser.error("--config must hold a JSON object")
        _apply_defaults(parser, defaults)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
