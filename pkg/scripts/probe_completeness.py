#!/usr/bin/env python3
"""Probe the punctured-sphere metric toward all four punctures and one
regular point; print path lengths and per-decade growth."""

import sys

from mobiusmin.config import RunConfig
from mobiusmin.punctured_sphere import (
    PuncturedSphereData,
    completeness_probe,
    validate_punctures,
)

EPSILONS = [1e-2, 1e-3, 1e-4, 1e-5]


def main() -> int:
    config = RunConfig.standard()
    sphere = PuncturedSphereData(validate_punctures(config.alpha, config.beta))
    targets = list(zip(("alpha", "beta", "alpha_star", "beta_star"), sphere.config.punctures))
    targets.append(("regular 1.2", 1.2 + 0j))
    for name, target in targets:
        lengths = completeness_probe(sphere, target, EPSILONS)
        diffs = [b - a for a, b in zip(lengths, lengths[1:])]
        spread = max(diffs) / min(diffs) if min(diffs) > 0 else float("inf")
        print(f"{name:12s} target {target}")
        for eps, length in zip(EPSILONS, lengths):
            print(f"  L({eps:.0e}) = {length:.9f}")
        print(f"  decade differences: {['%.6f' % d for d in diffs]}  spread {spread:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
