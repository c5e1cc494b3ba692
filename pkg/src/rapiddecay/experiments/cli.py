"""Command line: ``rapiddecay run <config>``, ``rapiddecay list``, ``rapiddecay version``."""

import argparse
import sys

from .. import __version__
from .config import ConfigError
from .runner import list_registry, run


def _cmd_run(args):
    try:
        report = run(args.config, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"{mark} {report.name}: {c.name}")
    print(f"{report.name}: {'all checks passed' if report.passed else 'checker failure'}")
    return report.exit_code


def _cmd_list(args):
    for section, items in list_registry().items():
        print(f"[{section}]")
        for item in items:
            print(f"  {item}")
    return 0


def _cmd_version(args):
    print(__version__)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="rapiddecay",
                                     description="Run rapid-decay experiments from config files.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None,
                       help="output directory (default: the config's 'output' entry)")
    p_run.set_defaults(func=_cmd_run)
    sub.add_parser("list", help="list group keys, complexes and kinds").set_defaults(
        func=_cmd_list)
    sub.add_parser("version", help="print the package version").set_defaults(func=_cmd_version)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
