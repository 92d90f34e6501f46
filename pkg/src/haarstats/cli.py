"""Command-line interface.

One subcommand per experiment artifact:

* ``sample``  - simulate a (possibly depolarized) random state and write a
  bit-string samples file;
* ``analyze`` - full/subsystem/conditional distribution analysis of
  simulated states or of an existing samples file: histogram CSV, KS
  report, gap and noise-strength estimates;
* ``xeb``     - full/subsystem/conditional linear XEB over fresh trials;
* ``gap``     - depolarizing-gap estimation;
* ``laws``    - tabulate an analytic pdf/cdf for plotting.

All randomness is controlled by ``--seed``; identical invocations write
byte-identical outputs.  ``--out-dir`` defaults to $HAARSTATS_OUT_DIR or
the current directory.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .experiments import ExperimentConfig, analyze_sample_set, run_experiment
from .laws import AnalyticLaw
from .rng import RngSpec
from .states import depolarize, probabilities, sample_haar_state
from .xeb import draw_samples


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=12, help="number of qubits")
    parser.add_argument("--a-bits", type=_bit_list, default=None, metavar="Q0,Q1,...",
                        help="qubit positions of subsystem A (comma separated)")
    parser.add_argument("--m-a", type=int, default=None, metavar="M",
                        help="shorthand for --a-bits 0,..,M-1 (complement = trailing bits)")
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="depolarizing strength in [0, 1]")
    parser.add_argument("--trials", type=int, default=100, help="number of Monte Carlo trials")
    parser.add_argument("--shots", type=int, default=100_000, help="samples per trial")
    parser.add_argument("--seed", type=int, default=1, help="master seed")
    parser.add_argument("--condition-b", type=int, default=None,
                        help="fixed outcome of the complement subsystem")
    parser.add_argument("--bins", type=int, default=50, help="histogram bins")
    parser.add_argument("--out-dir", default=os.environ.get("HAARSTATS_OUT_DIR", "."),
                        help="output directory (default: $HAARSTATS_OUT_DIR or '.')")
    parser.add_argument("--config", default=None,
                        help="JSON config file; explicit flags override its fields")


def _bit_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok != "")


def _build_config(args, analysis: str) -> ExperimentConfig:
    doc = {}
    if args.config:
        import json
        doc = json.loads(Path(args.config).read_text())
    defaults = ExperimentConfig()
    a_bits = args.a_bits
    if a_bits is None and args.m_a is not None:
        a_bits = tuple(range(args.m_a))
    overrides = {
        "n": args.n, "partition_a_bits": a_bits, "lambda": args.lam,
        "trials": args.trials, "shots": args.shots, "seed": args.seed,
        "analysis": analysis, "condition_b": args.condition_b, "bins": args.bins,
    }
    for key, value in overrides.items():
        default = getattr(defaults, "lam" if key == "lambda" else
                          ("partition_a_bits" if key == "partition_a_bits" else key))
        if key not in doc or value != default:
            doc[key] = value
    doc["analysis"] = analysis
    return ExperimentConfig.from_dict(doc, out_dir=args.out_dir)


def _infer_analysis(args) -> str:
    if args.condition_b is not None:
        return "conditional"
    if args.a_bits is not None or args.m_a is not None:
        return "subsystem"
    return "full"


def _cmd_sample(args) -> int:
    rng = RngSpec(args.seed)
    p = probabilities(sample_haar_state(args.n, rng.substream(0)))
    sampler = depolarize(p, args.lam) if args.lam else p
    samples = draw_samples(sampler, args.shots, rng.substream(1))
    io.write_samples(samples, args.out, fmt=args.format)
    print(f"wrote {samples.total} samples over n={args.n} qubits to {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    if args.samples:
        samples = io.read_samples(args.samples)
        a_bits = args.a_bits
        if a_bits is None and args.m_a is not None:
            a_bits = tuple(range(args.m_a))
        summary = analyze_sample_set(samples, a_bits=a_bits,
                                     condition_b=args.condition_b, bins=args.bins,
                                     out_dir=args.out_dir,
                                     lambda_claim=args.lam or None)
    else:
        summary = run_experiment(_build_config(args, _infer_analysis(args)))
    return _report(summary)


def _cmd_xeb(args) -> int:
    summary = run_experiment(_build_config(args, "xeb"))
    for name, res in summary["results"]["xeb"].items():
        print(f"{name}: fidelity={res['fidelity']:.6f} +- {res['std_error']:.6f} "
              f"(m_eff={res['m_eff']}, shots={res['shots_used']})")
    return _report(summary, quiet=True)


def _cmd_gap(args) -> int:
    summary = run_experiment(_build_config(args, "gap"))
    res = summary["results"]
    print(f"gap estimate={res['gap_estimate']:.6f} "
          f"lambda_mean={res['lambda_mean_estimate']:.6f}")
    return _report(summary, quiet=True)


def _cmd_laws(args) -> int:
    dim = 2**args.n
    lam = args.lam
    if args.family == "full-beta":
        law = AnalyticLaw.full_beta(dim, lam=lam, scaled=not args.raw)
    elif args.family == "subsystem-beta":
        law = AnalyticLaw.subsystem_beta(dim, 2**(args.n - args.m_a), lam=lam,
                                         scaled=not args.raw)
    elif args.family == "conditional-beta":
        law = AnalyticLaw.conditional_beta(2**args.m_a, lam=lam, scaled=not args.raw)
    elif args.family == "gamma":
        law = AnalyticLaw.gamma_limit(2**(args.n - args.m_a), lam=lam,
                                      scaled=not args.raw, dim_a=2**args.m_a)
    else:  # exp
        law = AnalyticLaw.exp_limit(lam=lam, scaled=not args.raw, dim=dim)
    lo, hi = law.support()
    x_max = args.x_max if args.x_max is not None else (hi if hi != float("inf") else lo + 10.0)
    grid = np.linspace(args.x_min if args.x_min is not None else lo, x_max, args.points)
    pdf, cdf = law.pdf(grid), law.cdf(grid)
    rows = ["x,pdf,cdf"]
    rows += [f"{x:.12g},{f:.12g},{c:.12g}" for x, f, c in zip(grid, pdf, cdf)]
    Path(args.out).write_text("\n".join(rows) + "\n")
    mean, var = law.moments()
    print(f"{law.family.value}: support=[{lo:.6g}, {hi:.6g}] mean={mean:.6g} "
          f"variance={var:.6g}; wrote {args.points} rows to {args.out}")
    return 0


def _report(summary: dict, quiet: bool = False) -> int:
    if not quiet:
        res = summary["results"]
        if "ks" in res:
            ks = res["ks"]
            print(f"analysis={summary['analysis']} pooled={res['n_pooled']} "
                  f"KS D={ks['ks_statistic']:.5f} (critical {ks['ks_critical_1pct']:.5f}) "
                  f"passed={ks['passed']} gap={res['gap_estimate']:.5f}")
    print(f"summary written; passed={summary['passed']}")
    return 0 if summary["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarstats",
        description="Statistics and cross-entropy benchmarking of random quantum states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="simulate a state and write a samples file")
    p_sample.add_argument("--n", type=int, default=12)
    p_sample.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p_sample.add_argument("--shots", type=int, default=100_000)
    p_sample.add_argument("--seed", type=int, default=1)
    p_sample.add_argument("--out", required=True, help="output samples file")
    p_sample.add_argument("--format", choices=("counts", "text"), default="counts")
    p_sample.set_defaults(func=_cmd_sample)

    p_analyze = sub.add_parser("analyze", help="distribution analysis (simulation or file)")
    _add_common(p_analyze)
    p_analyze.add_argument("--samples", default=None,
                           help="analyze this samples file instead of simulating")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_xeb = sub.add_parser("xeb", help="linear XEB fidelities over fresh trials")
    _add_common(p_xeb)
    p_xeb.set_defaults(func=_cmd_xeb)

    p_gap = sub.add_parser("gap", help="estimate the depolarizing gap")
    _add_common(p_gap)
    p_gap.set_defaults(func=_cmd_gap)

    p_laws = sub.add_parser("laws", help="tabulate an analytic pdf/cdf as CSV")
    p_laws.add_argument("--family", required=True,
                        choices=("full-beta", "subsystem-beta", "conditional-beta",
                                 "exp", "gamma"))
    p_laws.add_argument("--n", type=int, default=12)
    p_laws.add_argument("--m-a", type=int, default=None,
                        help="subsystem qubit count (subsystem/conditional/gamma families)")
    p_laws.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p_laws.add_argument("--raw", action="store_true",
                        help="raw probability coordinates instead of scaled")
    p_laws.add_argument("--x-min", type=float, default=None)
    p_laws.add_argument("--x-max", type=float, default=None)
    p_laws.add_argument("--points", type=int, default=200)
    p_laws.add_argument("--out", required=True)
    p_laws.set_defaults(func=_cmd_laws)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
