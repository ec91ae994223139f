#!/usr/bin/env python3
"""Run every built-in preset scenario into ./out (or WIGNER_FLOW_OUTPUT_ROOT).

Usage: python scripts/run_presets.py [preset ...]
With no arguments, all presets run in order. Long-running presets print a
step-count estimate first.
"""

import sys

from wignerflow import PRESETS, run_scenario


def main(argv: list[str]) -> int:
    names = argv or list(PRESETS)
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        print(f"unknown presets: {', '.join(unknown)}", file=sys.stderr)
        print(f"known: {', '.join(PRESETS)}", file=sys.stderr)
        return 2
    for name in names:
        config = PRESETS[name]
        steps = round(config.t_max / config.dt)
        print(f"[{name}] t_max={config.t_max} dt={config.dt:g} ({steps} steps)")
        manifest = run_scenario(config)
        print(f"[{name}] t_c={manifest['t_c']} max_Wneg={manifest['max_Wneg']:.4g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
