"""Simulation harness: contingency-table draws in three blocks, binomial
full-null draws for coverage checks, and replicate-parallel Monte-Carlo
estimates of the simultaneous error rate.

RNG is counter-based (Philox) keyed by (seed, replicate), so results do
not depend on how replicates are distributed over workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .discrete import ContingencyTable, binom_test, fisher_test
from .model import EnvelopeCurve, PValueFamily
from .registry import BuiltEnvelope, build_envelope, envelope_curve


@dataclass(frozen=True)
class SimConfig:
    """Three-block contingency-table design: two null blocks with success
    probabilities (0.01, 0.01) and (0.1, 0.1), one signal block (0.1, q)."""

    m: int = 200
    n_per_group: int = 50
    pi0: float = 0.2
    pi0prime: float = 0.5
    q: float = 0.4
    beta_small: float = 0.01
    beta_large: float = 0.1
    alpha: float = 0.2
    seed: int = 0
    methods: tuple[str, ...] = ("simes", "dkw", "bretagnolle")
    replicates: int = 1

    def __post_init__(self) -> None:
        for name, v in (
            ("pi0", self.pi0),
            ("pi0prime", self.pi0prime),
            ("q", self.q),
        ):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.m < 1 or self.n_per_group < 1 or self.replicates < 1:
            raise ValueError("m, n_per_group and replicates must be >= 1")

    def block_sizes(self) -> tuple[int, int, int]:
        """(small-null, large-null, signal); floor rule, remainder to the
        second null block."""
        m0 = int(self.m * self.pi0)
        b1 = int(m0 * self.pi0prime)
        return b1, m0 - b1, self.m - m0


def _rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, replicate]))


def simulate_dohler(
    cfg: SimConfig, replicate: int = 0
) -> tuple[PValueFamily, tuple[bool, ...]]:
    """One draw of m contingency tables; returns the p-value family and
    per-hypothesis null indicators (null iff both groups share a rate)."""
    rng = _rng(cfg.seed, replicate)
    b1, b2, b3 = cfg.block_sizes()
    betas = (
        [(cfg.beta_small, cfg.beta_small)] * b1
        + [(cfg.beta_large, cfg.beta_large)] * b2
        + [(cfg.beta_large, cfg.q)] * b3
    )
    n = cfg.n_per_group
    pvals, cdfs, truth = [], [], []
    for beta1, beta2 in betas:
        x1 = int(rng.binomial(n, beta1))
        x2 = int(rng.binomial(n, beta2))
        p, cdf = fisher_test(ContingencyTable(x1, n - x1, x2, n - x2))
        pvals.append(p)
        cdfs.append(cdf)
        truth.append(beta1 == beta2)
    labels = tuple("null" if t else "signal" for t in truth)
    fam = PValueFamily(tuple(pvals), tuple(cdfs), labels)
    return fam, tuple(truth)


def null_binomial_family(
    trials: Sequence[int], rng: np.random.Generator
) -> PValueFamily:
    """Full-null family of two-sided binomial tests, x_i ~ Bin(n_i, 1/2)."""
    cdf_cache = {}
    pvals, cdfs = [], []
    for n in trials:
        x = int(rng.binomial(n, 0.5))
        p, cdf = binom_test(n, x)
        if n not in cdf_cache:
            cdf_cache[n] = cdf
        pvals.append(p)
        cdfs.append(cdf_cache[n])
    return PValueFamily(tuple(pvals), tuple(cdfs))


def run_envelopes(
    fam: PValueFamily,
    truth: Sequence[bool],
    methods: Sequence[str],
    alpha: float,
) -> tuple[dict[str, EnvelopeCurve], tuple[int, ...]]:
    """Per-method curves plus the oracle count of signals among the top k."""
    if not methods:
        raise ValueError("need at least one method")
    curves = {name: envelope_curve(name, fam, alpha) for name in methods}
    order = fam.sort().order
    oracle = []
    acc = 0
    for i in order:
        acc += 0 if truth[i] else 1
        oracle.append(acc)
    return curves, tuple(oracle)


def jer_violated(
    built: BuiltEnvelope, fam: PValueFamily, truth: Sequence[bool]
) -> bool:
    """Whether some region holds more nulls than its zeta allows."""
    if built.structure == "topk":
        acc = 0
        order = fam.sort().order
        for rank, i in enumerate(order):
            acc += 1 if truth[i] else 0
            if acc > built.zetas[rank]:
                return True
        return False
    null_ps = [p for p, t in zip(fam.pvalues, truth) if t]
    for z, t in zip(built.zetas, built.thresholds):
        inside = (
            len(null_ps) if math.isinf(t) else sum(1 for p in null_ps if p <= t)
        )
        if inside > z:
            return True
    return False


@dataclass(frozen=True)
class CoverageConfig:
    m: int = 50
    trials: tuple[int, ...] = (5, 15, 30)
    alpha: float = 0.2
    methods: tuple[str, ...] = ("simes", "dkw", "bretagnolle")
    replicates: int = 2000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.replicates < 100:
            raise ValueError("coverage needs at least 100 replicates")
        if self.m < 1 or not self.trials:
            raise ValueError("m >= 1 and a nonempty trials cycle required")

    def trial_cycle(self) -> tuple[int, ...]:
        return tuple(self.trials[i % len(self.trials)] for i in range(self.m))


def _coverage_replicate(args: tuple[CoverageConfig, int]) -> tuple[bool, ...]:
    cfg, rep = args
    rng = _rng(cfg.seed, rep)
    fam = null_binomial_family(cfg.trial_cycle(), rng)
    truth = (True,) * cfg.m
    out = []
    for name in cfg.methods:
        built = build_envelope(name, fam, cfg.alpha)
        out.append(jer_violated(built, fam, truth))
    return tuple(out)


def worker_count() -> int:
    env = os.environ.get("FDENV_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        return max(1, min(int(env), cpus))
    return cpus


def coverage_mc(cfg: CoverageConfig) -> dict[str, float]:
    """Empirical violation frequency per method under the full null."""
    jobs = [(cfg, rep) for rep in range(cfg.replicates)]
    workers = worker_count()
    if workers > 1 and cfg.replicates >= 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_coverage_replicate, jobs, chunksize=16))
    else:
        results = [_coverage_replicate(j) for j in jobs]
    rates = {}
    for j, name in enumerate(cfg.methods):
        rates[name] = sum(r[j] for r in results) / cfg.replicates
    return rates
