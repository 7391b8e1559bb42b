"""Full-null Monte-Carlo check of the simultaneous error rate for every
registered method: binomial test families, m = 50, alpha = 0.2.

Usage: python scripts/run_coverage.py [replicates]
Set FDENV_THREADS to cap the worker pool.
"""

import math
import sys

from fdenvelope.registry import METHOD_NAMES
from fdenvelope.sim import CoverageConfig, coverage_mc


def main() -> None:
    reps = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    cfg = CoverageConfig(
        m=50, trials=(5, 15, 30), alpha=0.2,
        methods=METHOD_NAMES, replicates=reps, seed=2024,
    )
    rates = coverage_mc(cfg)
    bound = cfg.alpha + 3.0 * math.sqrt(cfg.alpha * (1 - cfg.alpha) / reps)
    print(f"B={reps}  nominal={cfg.alpha}  mc_bound={bound:.4f}")
    for name in cfg.methods:
        flag = "ok" if rates[name] <= bound else "VIOLATION"
        print(f"{name:24s} {rates[name]:.4f}  {flag}")


if __name__ == "__main__":
    main()
