#!/usr/bin/env python3
# Copyright 2026 The Curio Authors
# SPDX-License-Identifier: Apache-2.0
"""Recompute an experiment summary from its per-seed CSVs and check that it
matches summary.json exactly.

Usage: check_summary.py <experiment-out-dir>

Independent of the C++ code on purpose: quantiles, smoothing, and the final
metric are recomputed here from first principles.
"""
import csv
import json
import math
import sys
from pathlib import Path


def quantile(values, q):
    """Linear interpolation between order statistics."""
    xs = sorted(values)
    h = q * (len(xs) - 1)
    lo = int(h)
    if lo + 1 >= len(xs):
        return xs[-1]
    return xs[lo] + (h - lo) * (xs[lo + 1] - xs[lo])


def smooth(values, window):
    out = []
    for i in range(len(values)):
        lo = max(0, i - window + 1)
        out.append(sum(values[lo : i + 1]) / (i + 1 - lo))
    return out


def main():
    if len(sys.argv) != 2:
        print(__doc__)
        return 2
    out_dir = Path(sys.argv[1])
    summary = json.loads((out_dir / "summary.json").read_text())
    config = json.loads((out_dir / "config.json").read_text())
    manifest = json.loads((out_dir / "manifest.json").read_text())
    window = config["smooth_window"]

    finals = []
    successes = 0
    for name in manifest["curves"]:
        with open(out_dir / name) as f:
            rows = list(csv.DictReader(f))
        metric = [float(r["mean_extrinsic"]) for r in rows]
        finals.append(smooth(metric, window)[-1])
        if any(int(r["success_flag"]) for r in rows):
            successes += 1

    failures = []

    def check(name, got, want):
        ok = got == want or (
            isinstance(got, float)
            and isinstance(want, float)
            and math.isnan(got)
            and math.isnan(want)
        )
        if not ok:
            failures.append(f"{name}: recomputed {got!r} != summary {want!r}")

    per_seed = [e for e in summary["per_seed"] if not e["failed"]]
    for entry, got in zip(per_seed, finals):
        check(f"seed {entry['seed']} final_reward", got, entry["final_reward"])
    if finals:
        check("median", quantile(finals, 0.5), summary["median"])
        check("q25", quantile(finals, 0.25), summary["q25"])
        check("q75", quantile(finals, 0.75), summary["q75"])
    check("successes", successes, summary["successes"])

    if failures:
        print("\n".join(failures))
        print("MISMATCH")
        return 1
    print(f"summary verified: {len(finals)} seeds, median {summary['median']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
