#!/usr/bin/env python3
"""Run the standard (s,b,t) = (5,3,2) grid and print the fitted exponent.

Usage:
    python scripts/run_grid.py [--out-dir DIR] [--seeds 1 2 ...] [--n 32 48 ...]

Writes report.csv / report.json / plot.svg into the output directory.  The
fitted slope is a desk-scale measurement; it is labeled "reported, not
asserted" because the theoretical exponents are asymptotic.
"""

import argparse
import sys

from erlab.experiment import ExperimentConfig, run_experiment, write_report


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default="grid-out")
    parser.add_argument("--seeds", type=int, nargs="+", default=[1, 2])
    parser.add_argument("--n", type=int, nargs="+",
                        default=[32, 48, 64, 96, 128, 192, 256])
    parser.add_argument("--s", type=int, default=5)
    parser.add_argument("--b", type=int, default=3)
    parser.add_argument("--t", type=int, default=2)
    args = parser.parse_args()

    config = ExperimentConfig(
        s=args.s, b=args.b, t=args.t, n_list=args.n, seeds=args.seeds,
        budgets={"exact_threshold": 100, "alpha_nodes": 200_000},
        out_dir=args.out_dir,
    )
    report = run_experiment(config)
    write_report(report, config.out_dir)
    flagged = [r for r in report.rows if not r.cert_ok]
    print(f"{len(report.rows)} rows -> {config.out_dir} ({len(flagged)} flagged)")
    if report.fit:
        print(f"slope {report.fit['slope']:.4f} "
              f"[{report.fit['ci_low']:.4f}, {report.fit['ci_high']:.4f}] "
              f"r2={report.fit['r2']:.4f}  ({report.fit['label']})")
        print(f"theoretical exponents: lower {report.fit.get('theoretical_lower')}, "
              f"upper {report.fit.get('theoretical_upper')}")
    return 1 if flagged else 0


if __name__ == "__main__":
    sys.exit(main())
