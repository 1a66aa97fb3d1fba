"""Command line entry point.

    resgrass run [--config PATH] [--suite NAME ...] [--seed N] [--out PATH] [--sizes "a,b;c,d"]
    resgrass converge [--config PATH] [--seed N] [--sizes ...] [--out CSV]
    resgrass norms FILE [--p P]

Exit status: 0 when every suite passes, 1 on a violation, 2 on a
configuration or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import io
from .config import SUITES, load_config, parse_sizes
from .convergence import convergence_study, rows_to_csv
from .errors import ConfigError, ResgrassError
from .polarized import commutator, make_d
from .runner import reports_to_json, run, write_reports
from .schatten import l1q_norm, restricted_norm, restricted_trace, schatten_norm

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2


def _add_common(sub):
    sub.add_argument("--config", metavar="PATH", help="JSON config file")
    sub.add_argument("--seed", type=int, help="master seed (overrides config and environment)")
    sub.add_argument("--sizes", help='truncation sizes, e.g. "4,4;8,8;16,16"')
    sub.add_argument("--p", type=float, help="Schatten exponent in [1, 2]")
    sub.add_argument("--gamma", type=float, help="central charge (nonzero)")
    sub.add_argument("--decay-alpha", type=float, dest="decay_alpha", help="ensemble decay exponent")
    sub.add_argument("--out", metavar="PATH", help="output file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resgrass", description=__doc__.split("\n")[0])
    cmds = parser.add_subparsers(dest="command", required=True)

    p_run = cmds.add_parser("run", help="run the property battery")
    _add_common(p_run)
    p_run.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable)")
    p_run.add_argument("--trials", type=int, help="trials per size")

    p_conv = cmds.add_parser("converge", help="truncation-convergence table (CSV)")
    _add_common(p_conv)

    p_norms = cmds.add_parser("norms", help="norms of an operator stored as matrix JSON")
    p_norms.add_argument("file")
    p_norms.add_argument("--p", type=float, default=2.0)
    return parser


def _config(args):
    cfg = load_config(args.config)
    overrides = {
        "seed": args.seed,
        "p": args.p,
        "gamma": args.gamma,
        "decay_alpha": args.decay_alpha,
        "output_path": args.out,
        "sizes": parse_sizes(args.sizes) if args.sizes else None,
        "suites": tuple(args.suite) if getattr(args, "suite", None) else None,
        "trials": getattr(args, "trials", None),
    }
    return cfg.with_overrides(**overrides)


def _cmd_run(args) -> int:
    cfg = _config(args)
    reports = run(cfg)
    if cfg.output_path:
        write_reports(reports, cfg)
    else:
        sys.stdout.write(reports_to_json(reports))
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.suite}: max_violation={r.max_violation:.3e} threshold={r.threshold:g}",
              file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def _cmd_converge(args) -> int:
    cfg = _config(args)
    text = rows_to_csv(convergence_study(cfg))
    if cfg.output_path:
        try:
            Path(cfg.output_path).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.output_path}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_norms(args) -> int:
    try:
        a = io.load_operator(args.file)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read operator from {args.file}: {exc}") from exc
    p = args.p
    q = math.inf if p == 1 else p / (p - 1)
    tr = restricted_trace(a)
    out = {
        "operator_norm": a.norm(),
        f"schatten_{p:g}": schatten_norm(a, p),
        f"commutator_schatten_{p:g}": schatten_norm(commutator(make_d(a.space), a), p),
        f"restricted_norm_{p:g}": restricted_norm(a, p),
        f"l1q_norm_{q:g}": l1q_norm(a, q),
        "restricted_trace": [tr.real, tr.imag],
    }
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": _cmd_run, "converge": _cmd_converge, "norms": _cmd_norms}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"resgrass: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResgrassError as exc:
        print(f"resgrass: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
