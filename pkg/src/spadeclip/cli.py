"""Command-line interface: clip simulation, declipping, benchmarks, verification.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments
(argparse), 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from .feasible import DEFAULT_DELTA_DETECT, detect_masks, hard_clip
from .metrics import sdr, sdr_masked
from .pipeline import declip_signal
from .solvers import SolverParams, Variant
from .verification import OracleConfig, run_all_checks
from .wavio import read_wav, write_wav

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_IO = 3

CSV_FIELDS = [
    "variant",
    "theta",
    "redundancy",
    "sdr_in_db",
    "sdr_out_db",
    "sdr_clipped_db",
    "mean_iters",
    "runtime_s",
]

VARIANTS = {v.value: v for v in Variant}


def _fmt(value: float) -> str:
    return "inf" if np.isinf(value) else f"{value:.4f}"


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--frame-len", type=int, default=1024)
    p.add_argument("--hop", type=int, default=256)
    p.add_argument("--redundancy", type=float, default=2.0)
    p.add_argument("--s", type=int, default=1, help="sparsity step")
    p.add_argument("--r", type=int, default=1, help="iterations between sparsity increments")
    p.add_argument("--epsilon", type=float, default=0.1, help="termination residual")
    p.add_argument("--delta-detect", type=float, default=DEFAULT_DELTA_DETECT)
    p.add_argument("--threads", default="auto", help='worker threads, integer or "auto"')
    p.add_argument("--seed", type=int, default=0, help="unused by declip; kept for config parity")


def _threads_arg(value: str) -> int | None:
    return None if value == "auto" else int(value)


def cmd_clip(args) -> int:
    rate, x = read_wav(args.input)
    clipped = hard_clip(x, args.theta)
    write_wav(args.output, rate, clipped)
    frac = np.mean(np.abs(x) >= args.theta)
    print(f"clipped {frac:.4f} of {len(x)} samples at theta={args.theta}")
    return EXIT_OK


def cmd_declip(args) -> int:
    rate, y = read_wav(args.input)
    theta = (
        float(np.max(np.abs(y))) - args.delta_detect
        if args.theta == "auto"
        else float(args.theta)
    )
    params = SolverParams(
        s=args.s, r=args.r, epsilon=args.epsilon, variant=VARIANTS[args.variant]
    )
    restored, report = declip_signal(
        y,
        theta,
        params,
        frame_len=args.frame_len,
        hop=args.hop,
        redundancy=args.redundancy,
        delta_detect=args.delta_detect,
        threads=_threads_arg(args.threads),
    )
    write_wav(args.output, rate, restored)
    model = detect_masks(y, theta, args.delta_detect)
    print(f"clipped samples: {model.num_clipped} of {len(y)}")
    print(report.as_table())
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
            writer.writeheader()
            writer.writerow(
                {
                    "variant": args.variant,
                    "theta": _fmt(theta),
                    "redundancy": args.redundancy,
                    "sdr_in_db": _fmt(report.sdr_clipped_input),
                    "sdr_out_db": _fmt(report.sdr_restored),
                    "sdr_clipped_db": _fmt(report.sdr_on_clipped_samples),
                    "mean_iters": f"{report.mean_iterations:.2f}",
                    "runtime_s": f"{report.runtime:.3f}",
                }
            )
    return EXIT_OK


def cmd_bench(args) -> int:
    _, x = read_wav(args.input)
    peak = float(np.max(np.abs(x)))
    variants = [VARIANTS[v] for v in args.variants.split(",")]
    thetas = [float(t) for t in args.thetas.split(",")]
    redundancies = [float(r) for r in args.redundancies.split(",")]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS)
    writer.writeheader()
    try:
        for variant in variants:
            for theta_rel in thetas:
                theta = theta_rel * peak
                y = hard_clip(x, theta)
                for red in redundancies:
                    params = SolverParams(
                        s=args.s, r=args.r, epsilon=args.epsilon, variant=variant
                    )
                    t0 = time.perf_counter()
                    _, report = declip_signal(
                        y,
                        theta,
                        params,
                        frame_len=args.frame_len,
                        hop=args.hop,
                        redundancy=red,
                        delta_detect=args.delta_detect,
                        threads=_threads_arg(args.threads),
                        reference=x,
                    )
                    writer.writerow(
                        {
                            "variant": variant.value,
                            "theta": theta_rel,
                            "redundancy": red,
                            "sdr_in_db": _fmt(report.sdr_clipped_input),
                            "sdr_out_db": _fmt(report.sdr_restored),
                            "sdr_clipped_db": _fmt(report.sdr_on_clipped_samples),
                            "mean_iters": f"{report.mean_iterations:.2f}",
                            "runtime_s": f"{time.perf_counter() - t0:.3f}",
                        }
                    )
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    config = OracleConfig(n_trials=args.trials, seed=args.seed)
    reports = run_all_checks(config)
    for rep in reports:
        print(rep.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spadeclip", description="Sparse audio declipping toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_clip = sub.add_parser("clip", help="hard-clip a WAV file for experiments")
    p_clip.add_argument("--input", required=True)
    p_clip.add_argument("--output", required=True)
    p_clip.add_argument("--theta", type=float, required=True)
    p_clip.set_defaults(func=cmd_clip)

    p_declip = sub.add_parser("declip", help="restore a clipped WAV file")
    p_declip.add_argument("--input", required=True)
    p_declip.add_argument("--output", required=True)
    p_declip.add_argument("--variant", choices=sorted(VARIANTS), default="aspade")
    p_declip.add_argument(
        "--theta", default="auto", help='clip threshold, or "auto" (max |y| minus delta)'
    )
    p_declip.add_argument("--csv", help="also write the report as one CSV row")
    _add_solver_args(p_declip)
    p_declip.set_defaults(func=cmd_declip)

    p_bench = sub.add_parser(
        "bench", help="clip a clean WAV over a grid and declip; CSV per cell"
    )
    p_bench.add_argument("--input", required=True, help="clean reference WAV")
    p_bench.add_argument("--output", help="CSV path (default stdout)")
    p_bench.add_argument("--variants", default="aspade,sspade,sspade-dr")
    p_bench.add_argument("--thetas", default="0.1,0.3,0.5,0.7,0.9", help="fractions of peak amplitude")
    p_bench.add_argument("--redundancies", default="2")
    _add_solver_args(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_verify = sub.add_parser("verify", help="run the oracle checks")
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, OSError) else 2
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
