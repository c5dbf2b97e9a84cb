"""Command-line entry points.

Subcommands: gen-seq, osc, kernel-corr, expsum-check, czd-demo,
ergodic-run, fit. Exit codes: 0 on success/pass, 1 on a verdict failure,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", help="JSON file of experiment parameters")
    sub.add_argument("--out", help="output directory", default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--format", choices=["csv", "json"], default="csv")


def _load_params(args, extra: dict | None = None) -> dict:
    params = {}
    if args.config:
        with open(args.config) as fh:
            params.update(json.load(fh))
    if extra:
        for k, v in extra.items():
            if v is not None and k not in params:
                params[k] = v
    return params


def _run(name: str, args, extra: dict | None = None) -> int:
    from .experiments import ExperimentConfig, run_experiment

    cfg = ExperimentConfig(
        name=name,
        params=_load_params(args, extra),
        out_dir=args.out,
        seed=args.seed,
        threads=args.threads,
        fmt=args.format,
    )
    report = run_experiment(cfg)
    sys.stdout.write(report.to_json() + "\n")
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_gen_seq(args) -> int:
    from .sequences import bernoulli_indicators, floor_power_sequence, hitting_times

    if args.kind == "deterministic":
        seq = floor_power_sequence(args.c, args.count)
    else:
        ind = bernoulli_indicators(args.alpha, args.n_max, args.seed)
        seq = hitting_times(ind, args.count)
    text = seq.to_json() + "\n" if args.format == "json" else seq.to_tsv()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        ext = "json" if args.format == "json" else "tsv"
        with open(os.path.join(args.out, f"sequence.{ext}"), "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def _cmd_osc(args) -> int:
    from .oscillation import (
        OscillationFunctional,
        apply_functional,
        axiom_suite,
        load_series_json,
    )

    if args.suite:
        report = axiom_suite(args.suite_kind, args.trials, seed=args.seed)
        out = {
            "kind": report.kind,
            "entries": [
                {
                    "name": e.name,
                    "constant": e.constant,
                    "worst_ratio": e.worst_ratio,
                    "violations": e.violations,
                    "trials": e.trials,
                }
                for e in report.entries
            ],
            "total_violations": report.total_violations,
        }
        sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
        return EXIT_PASS if report.total_violations == 0 else EXIT_FAIL
    text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    series = load_series_json(text)
    bp = tuple(int(b) for b in args.breakpoints.split(",")) if args.breakpoints else None
    fn = OscillationFunctional(args.kind, epsilon=args.epsilon, r=args.r, breakpoints=bp)
    sys.stdout.write(json.dumps({"kind": args.kind, "value": apply_functional(fn, series)}) + "\n")
    return EXIT_PASS


def _cmd_kernel_corr(args) -> int:
    if args.sweep:
        return _run("correlation-gap", args, {"c": args.c})
    from .kernels import autocorrelation_table, power_average_kernel, random_average_kernel
    from .sequences import bernoulli_indicators

    if args.model == "deterministic":
        K = power_average_kernel(args.N, args.c)
    else:
        ind = bernoulli_indicators(args.alpha, args.N, args.seed)
        K = random_average_kernel(ind, args.N)
    vals = np.zeros(args.N + 1)
    idx = K.offset + np.arange(len(K))
    keep = idx <= args.N
    vals[idx[keep]] = K.values.real[keep]
    corr = autocorrelation_table(vals, args.N)
    lines = ["x,value"] + [f"{x},{corr[x]:.17g}" for x in range(corr.size)]
    text = "\n".join(lines) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "correlation.csv"), "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def _cmd_expsum_check(args) -> int:
    name = {
        "vdc": "vdc-certify",
        "min-sum": "min-sum",
        "sawtooth": "sawtooth",
        "counting": "counting-function",
        "fourier-pieces": "fourier-pieces",
    }[args.check]
    return _run(name, args, {"c": args.c})


def _cmd_czd_demo(args) -> int:
    from .czd import cz_split

    gen = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
    if args.synthetic == "spikes":
        f = np.zeros(args.size)
        pos = gen.integers(0, args.size, size=max(1, args.size // 64))
        np.add.at(f, pos, gen.exponential(4.0, size=pos.size))
    else:
        f = gen.normal(size=args.size)
    dec = cz_split(f, args.n, args.alpha, level=args.level)
    summary = {
        "window": [dec.offset, dec.offset + dec.f.size],
        "n": args.n,
        "alpha": args.alpha,
        "level": args.level,
        "threshold": dec.threshold,
        "intervals": len(dec.intervals),
        "exceptional_size": dec.exceptional_size,
        "l1": float(np.abs(dec.f).sum()),
        "reconstruction_error": dec.reconstruction_error(),
        "good_sup": float(np.abs(dec.good).max()),
    }
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "intervals.csv"), "w") as fh:
            fh.write("scale,start,length,mass\n")
            for q in dec.intervals:
                a = q.start - dec.offset
                mass = float(np.abs(dec.f[a : a + q.length]).sum())
                fh.write(f"{q.scale},{q.start},{q.length},{mass:.17g}\n")
    ok = dec.reconstruction_error() < 1e-9
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_ergodic_run(args) -> int:
    return _run(
        "ergodic-census",
        args,
        {"m": args.m, "a": args.a, "c": args.c, "tau": args.tau, "count": args.count},
    )


def _cmd_fit(args) -> int:
    from .fitting import fit_slope

    rows = [line.split(",") for line in open(args.input).read().strip().splitlines()]
    if rows and not rows[0][0].replace(".", "").isdigit():
        rows = rows[1:]  # header
    Ns = [float(r[0]) for r in rows]
    vals = [float(r[1]) for r in rows]
    try:
        fit = fit_slope(Ns, vals, claimed=args.claimed, slope_tol=args.slope_tol, residual_tol=args.residual_tol)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    sys.stdout.write(json.dumps(fit.to_dict(), indent=2, sort_keys=True) + "\n")
    if fit.verdict is None:
        return EXIT_PASS
    return EXIT_PASS if fit.verdict else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparseavg", description=__doc__)
    subs = ap.add_subparsers(dest="command", required=True)

    s = subs.add_parser("gen-seq", help="generate a sparse time sequence")
    s.add_argument("--kind", choices=["deterministic", "random"], default="deterministic")
    s.add_argument("--c", type=float, default=1.1)
    s.add_argument("--alpha", type=float, default=0.3)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--n-max", type=int, default=1 << 20)
    _common(s)
    s.set_defaults(fn=_cmd_gen_seq)

    s = subs.add_parser("osc", help="oscillation functionals on a series, or the axiom suite")
    s.add_argument("--input", default="-")
    s.add_argument("--kind", choices=["jump", "variation", "oscillation", "diameter"], default="jump")
    s.add_argument("--epsilon", type=float, default=None)
    s.add_argument("--r", type=float, default=None)
    s.add_argument("--breakpoints", default=None)
    s.add_argument("--suite", action="store_true")
    s.add_argument("--suite-kind", choices=["jump", "variation", "oscillation"], default="jump")
    s.add_argument("--trials", type=int, default=1000)
    _common(s)
    s.set_defaults(fn=_cmd_osc)

    s = subs.add_parser("kernel-corr", help="correlation table or the gap sweep")
    s.add_argument("--model", choices=["deterministic", "random"], default="deterministic")
    s.add_argument("--N", type=int, default=1 << 12)
    s.add_argument("--c", type=float, default=1.1)
    s.add_argument("--alpha", type=float, default=0.3)
    s.add_argument("--sweep", action="store_true")
    _common(s)
    s.set_defaults(fn=_cmd_kernel_corr)

    s = subs.add_parser("expsum-check", help="exponential-sum bound checks")
    s.add_argument(
        "--check",
        choices=["vdc", "min-sum", "sawtooth", "counting", "fourier-pieces"],
        default="vdc",
    )
    s.add_argument("--c", type=float, default=None)
    _common(s)
    s.set_defaults(fn=_cmd_expsum_check)

    s = subs.add_parser("czd-demo", help="run a decomposition on synthetic input")
    s.add_argument("--synthetic", choices=["spikes", "noise"], default="spikes")
    s.add_argument("--size", type=int, default=4096)
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--alpha", type=float, default=0.3)
    s.add_argument("--level", type=float, default=0.125)
    _common(s)
    s.set_defaults(fn=_cmd_czd_demo)

    s = subs.add_parser("ergodic-run", help="rotation averages and the census sweep")
    s.add_argument("--m", type=int, default=10007)
    s.add_argument("--a", type=int, default=1)
    s.add_argument("--c", type=float, default=1.1)
    s.add_argument("--tau", type=float, default=0.1)
    s.add_argument("--count", type=int, default=100_000)
    _common(s)
    s.set_defaults(fn=_cmd_ergodic_run)

    s = subs.add_parser("fit", help="slope fit on a CSV of N,value rows")
    s.add_argument("--input", required=True)
    s.add_argument("--claimed", type=float, default=None)
    s.add_argument("--slope-tol", type=float, default=0.05)
    s.add_argument("--residual-tol", type=float, default=0.2)
    _common(s)
    s.set_defaults(fn=_cmd_fit)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    try:
        return args.fn(args)
    except (KeyError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
