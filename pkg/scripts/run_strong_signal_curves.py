"""Desk-scale reproduction of the strong-signal experiment: three-block
contingency-table draws, envelope curves for every registered method, and
the oracle signal-count column for comparison.

Usage: python scripts/run_strong_signal_curves.py [outdir]
"""

import pathlib
import sys

from fdenvelope.registry import METHOD_NAMES
from fdenvelope.sim import SimConfig, run_envelopes, simulate_dohler

OUT = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "out/strong_signal")


def main() -> None:
    cfg = SimConfig(m=200, pi0=0.2, pi0prime=0.5, q=0.4, alpha=0.2, seed=0)
    fam, truth = simulate_dohler(cfg)
    # kr capped below 0.31, fine at alpha=0.2; run everything
    curves, oracle = run_envelopes(fam, truth, METHOD_NAMES, cfg.alpha)
    OUT.mkdir(parents=True, exist_ok=True)
    for name, curve in curves.items():
        (OUT / f"{name}.csv").write_text(curve.to_csv())
    lines = ["k,signals_among_top_k"]
    lines += [f"{k},{v}" for k, v in enumerate(oracle, start=1)]
    (OUT / "oracle.csv").write_text("\n".join(lines) + "\n")
    print(f"wrote {len(curves)} curves to {OUT}")


if __name__ == "__main__":
    main()
