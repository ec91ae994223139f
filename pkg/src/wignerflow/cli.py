"""Command-line entry point.

    wigner-flow run <config.toml>
    wigner-flow sweep <config.toml>
    wigner-flow verify <suite>

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
Relative output directories can be re-rooted with the environment
variable WIGNER_FLOW_OUTPUT_ROOT.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigurationError, ContractViolationError, InstabilityError
from .scenarios import load_config, run_scenario, run_sweep
from .verify import SUITES, report, run_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wigner-flow",
        description="Phase-space evolution of Wigner functions under "
        "dephasing and balanced gain/loss generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a single scenario from a TOML config")
    run_p.add_argument("config", help="path to the scenario config")
    sweep_p = sub.add_parser("sweep", help="run a (gamma, Gamma, kappa) parameter sweep")
    sweep_p.add_argument("config", help="path to a config with a [sweep] table")
    verify_p = sub.add_parser("verify", help="run a verification suite")
    verify_p.add_argument("suite", choices=SUITES)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            manifest = run_scenario(load_config(args.config))
            print(f"scenario {manifest['name']}: wrote {len(manifest['files'])} files")
            return EXIT_OK
        if args.command == "sweep":
            summary = run_sweep(load_config(args.config))
            print(f"sweep summary: {summary}")
            with open(summary) as fh:
                if "failed" in fh.read():
                    return EXIT_NUMERICAL
            return EXIT_OK
        results = run_suite(args.suite)
        print(report(results))
        return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InstabilityError, ContractViolationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
