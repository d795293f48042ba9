"""``ngt`` command line: run one named experiment per invocation.

Exit codes: 0 all checks passed, 1 a scientific check failed, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import sys

from .errors import NGTError
from .experiments import EXPERIMENTS, parse_config, parse_overrides, run


def _keys_epilog() -> str:
    lines = ["experiment keys (defaults in brackets); precedence: default < --config file < --set:"]
    for name, exp in EXPERIMENTS.items():
        lines.append(f"\n  {name}: {exp.claim}")
        for key, spec in exp.keys.items():
            default = spec.default
            if isinstance(default, list):
                default = ",".join(str(v) for v in default)
            lines.append(f"    {key:<12} {spec.help} [{default}]")
    lines.append("\nconfig file format: one 'key = value' per line, '#' starts a comment;"
                 " 'experiment = <name>' may appear in the file.")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ngt", description="Nonlinear gauge transformation experiments",
        epilog=_keys_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment and write report.json",
                           epilog=_keys_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    run_p.add_argument("--experiment", help="experiment name (overrides the config file)")
    run_p.add_argument("--config", help="flat key = value config file")
    run_p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key; repeatable")
    run_p.add_argument("--out", required=True, help="output directory for report.json and CSVs")

    sub.add_parser("list", help="list experiments and the claim each one checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        width = max(len(n) for n in EXPERIMENTS)
        for name, exp in EXPERIMENTS.items():
            print(f"{name:<{width}}  {exp.claim}")
        return 0

    try:
        cfg = parse_config(args.config, parse_overrides(args.set), args.experiment, args.out)
        report = run(cfg)
    except (NGTError, OSError) as exc:
        print(f"ngt: error: {exc}", file=sys.stderr)
        return 2

    status = "PASS" if report["passed"] else "FAIL"
    for check, ok in report["checks"].items():
        print(f"  {'ok ' if ok else 'BAD'} {check}")
    print(f"{cfg.experiment}: {status} -> {cfg.output_dir / 'report.json'}")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
