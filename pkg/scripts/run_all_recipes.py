#!/usr/bin/env python3
"""Run every committed config recipe and collect the outputs in one place.

Usage: python scripts/run_all_recipes.py [output_dir]
"""

import os
import sys

from monopole_lab.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
CONFIGS = os.path.join(HERE, "..", "configs")


def run_all(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    os.environ["MONOPOLE_LAB_OUTPUT_DIR"] = out_dir
    failures = []
    for name in sorted(os.listdir(CONFIGS)):
        if not name.endswith(".json"):
            continue
        path = os.path.join(CONFIGS, name)
        import json
        command = json.load(open(path))["command"]
        print(f"== {name}")
        status = main([command, "--config", path])
        if status != 0:
            failures.append((name, status))
    return failures


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "results"
    failed = run_all(target)
    for name, status in failed:
        print(f"FAILED {name} (exit {status})", file=sys.stderr)
    raise SystemExit(1 if failed else 0)
