"""Command-line harness: ``rho-engine run <demo_id>`` and ``rho-engine list``.

Exit status is 0 iff every requested demo passes, 1 if any demo fails, and 2
for invalid parameters or an unwritable output path.
"""

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .demos import DEMOS, DemoConfig, run_demo
from .exceptions import ConfigInvalid, ReportWriteFailure, RhoEngineError

SEED_ENV = "RHO_ENGINE_SEED"


def _fmt(value):
    # repr keeps full precision and is locale independent
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def report_to_csv(report):
    fieldnames = list(dict.fromkeys(k for row in report.rows for k in row))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, restval="", lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def report_to_json(report):
    return json.dumps(report.to_json_dict(), indent=2) + "\n"


def render(report, fmt):
    return report_to_csv(report) if fmt == "csv" else report_to_json(report)


def write_report(text, path):
    try:
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportWriteFailure(f"cannot write report to {path}: {exc}") from exc


def resolve_seed(seed, environ=None):
    """Explicit seed, else ``RHO_ENGINE_SEED``, else 0."""
    if seed is not None:
        return seed
    raw = (os.environ if environ is None else environ).get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigInvalid(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rho-engine", description="Run density-operator demonstrations and emit reports."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="List demos and what each reproduces")

    run = sub.add_parser("run", help="Run one demo, or 'all'")
    run.add_argument("demo_id", help="demo name from 'list', or 'all'")
    run.add_argument("--grid-n", type=int)
    run.add_argument("--a", type=float, help="half-length of the configuration space")
    run.add_argument("--mass", type=float, default=1.0)
    run.add_argument("--hbar", type=float, default=1.0)
    run.add_argument("--mode-n", type=int)
    run.add_argument("--seed", type=int, help=f"defaults to ${SEED_ENV}, then 0")
    run.add_argument("--members", type=int)
    run.add_argument("--dt", type=float)
    run.add_argument("--t-final", type=float)
    run.add_argument("--format", choices=("csv", "json"), default="json")
    run.add_argument(
        "--out",
        type=Path,
        help="output file; with 'all' a directory receiving <demo_id>.<format>. Default stdout.",
    )
    return parser


def _configs(args):
    seed = resolve_seed(args.seed)
    ids = list(DEMOS) if args.demo_id == "all" else [args.demo_id]
    if args.demo_id != "all" and args.demo_id not in DEMOS:
        raise ConfigInvalid(f"unknown demo {args.demo_id!r}; choose from {', '.join(DEMOS)} or all")
    return [
        DemoConfig(
            demo_id=d,
            grid_n=args.grid_n,
            a=args.a,
            mass=args.mass,
            hbar=args.hbar,
            mode_n=args.mode_n,
            seed=seed,
            members=args.members,
            dt=args.dt,
            t_final=args.t_final,
        )
        for d in ids
    ]


def _run(args, stdout):
    configs = _configs(args)
    for cfg in configs:
        cfg.resolved()  # fail on bad parameters before any demo runs
    all_pass = True
    for cfg in configs:
        report = run_demo(cfg)
        text = render(report, args.format)
        if args.out is None:
            stdout.write(text)
        elif args.demo_id == "all":
            write_report(text, args.out / f"{cfg.demo_id}.{args.format}")
        else:
            write_report(text, args.out)
        print(
            f"{cfg.demo_id}: {'PASS' if report.passed else 'FAIL'}",
            file=sys.stderr,
        )
        all_pass &= report.passed
    return 0 if all_pass else 1


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, demo in DEMOS.items():
            stdout.write(f"{name}\t{demo.anchor}\n")
        return 0
    try:
        return _run(args, stdout)
    except RhoEngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
