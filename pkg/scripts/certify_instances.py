#!/usr/bin/env python3
"""Build and certify the standard instance battery, printing one line per
check.  Mirrors the heavy part of the acceptance suite as a standalone run.

Usage:
    python scripts/certify_instances.py [--seed 7]
"""

import argparse
import sys
import time

from erlab.construct import ConstructionParams, certificate_passes, construct_upper_bound_instance

POINTS = [
    (5, 3, 2, 64, 1, 5),
    (5, 3, 2, 128, 1, 5),
    (5, 3, 2, 256, 1, 7),
    (5, 3, 4, 64, 4, 5),
    (5, 3, 4, 128, 4, 5),
    (5, 3, 4, 256, 4, 7),
]


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    failures = 0
    for (s, b, t, n, k, R) in POINTS:
        t0 = time.monotonic()
        params = ConstructionParams.derive(s, b, t, n, k=k, R=R, seed=args.seed)
        bundle = construct_upper_bound_instance(params, n)
        ok = certificate_passes(bundle.certificate)
        failures += 0 if ok else 1
        elapsed = time.monotonic() - t0
        print(f"[{'PASS' if ok else 'FAIL'}] ({s},{b},{t}) n={n} k={k} R={R}: "
              f"|H|={bundle.hypergraph.m} |V(G_*)|={bundle.sparsified.graph.n} "
              f"final=({bundle.final.n} vertices, {bundle.final.m} edges) "
              f"{elapsed:.1f}s")
        if not ok:
            for name, check in bundle.certificate["checks"].items():
                if not check["pass"]:
                    print(f"       {name}: {check}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
