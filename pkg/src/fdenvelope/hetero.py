"""Bounds that exploit known per-hypothesis null cdfs: the mean-cdf
empirical-process bound, step-up-derived threshold families with their
adaptive variants, per-region deterministic bounds, and the Lambert-W
multiplier bound.

Threshold searches run over the merged cdf support; phi-statistic searches
over t run on {0} U {p_i} (clamped to [0, lambda] where the family demands
it).  Both restrictions are lossless for step cdfs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .homogeneous import lambda_alpha
from .localtests import LocalTestHandle
from .model import PValueFamily, ReferenceFamily


def bret_lambda(alpha: float) -> float:
    """sqrt((1 + log(1/alpha)) / 2); the DKW constant at level alpha/e."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    # computed through the level shift so that the homogeneous reduction
    # is bit-exact against the uniform-null bound at level alpha/e
    return lambda_alpha(alpha / math.e)


# -- empirical-process (mean-cdf) machinery ------------------------------


def _sorted_g_prefixes(fam: PValueFamily, t: float) -> list[float]:
    """Prefix sums of the ascending-sorted G_i(t) = 1{p_i <= t} - F_i(t)."""
    g = sorted(
        (1.0 if p <= t else 0.0) - c.eval(t)
        for p, c in zip(fam.pvalues, fam.cdfs)
    )
    out = [0.0]
    for v in g:
        out.append(out[-1] + v)
    return out


def bret_m0(fam: PValueFamily, alpha: float) -> int:
    """max n such that, at every grid t, the sum of the n smallest G_i(t)
    stays below lam * sqrt(n)."""
    lam = bret_lambda(alpha)
    grid = sorted({0.0, *fam.pvalues})
    prefixes = [_sorted_g_prefixes(fam, t) for t in grid]
    for n in range(fam.m, 0, -1):
        bound = lam * math.sqrt(n)
        if all(pre[n] <= bound for pre in prefixes):
            return n
    return 0


def bret_phi_snt(
    fam: PValueFamily, s: Sequence[int], n: int, t: float, alpha: float
) -> int:
    """The minimized indicator at a single t (0 = some trace-n set survives)."""
    h = LocalTestHandle(fam, alpha, "bretagnolle")
    grid = list(h.t_grid)
    # snap t onto the handle grid: the statistic is constant between
    # order statistics, so evaluate at the largest grid point <= t
    ti = max((i for i, g in enumerate(grid) if g <= t), default=0)
    return h.phi_snt(s, n, ti)


def bret_vsc1(fam: PValueFamily, s: Sequence[int], alpha: float) -> int:
    return LocalTestHandle(fam, alpha, "bretagnolle").vsc1(s)


def bret_topk_zeta(fam: PValueFamily, alpha: float, n: int) -> tuple[int, ...]:
    """zeta_k = k AND n AND floor(sum of the n largest F_i(p_(k)) + sqrt(n)*lam).

    With every cdf an exact uniform the sum collapses to n * p_(k), making
    the reduction to the uniform-null bound at level alpha/e exact.
    """
    if not 0 <= n <= fam.m:
        raise ValueError("plug-in count n must lie in [0, m]")
    lam = bret_lambda(alpha)
    ps = sorted(fam.pvalues)
    homogeneous = all(c.identity for c in fam.cdfs)
    zetas = []
    for k, p in enumerate(ps, start=1):
        if n == 0:
            zetas.append(0)
            continue
        if homogeneous:
            total = n * p + math.sqrt(n) * lam
        else:
            fvals = sorted((c.eval(p) for c in fam.cdfs), reverse=True)
            total = sum(fvals[:n]) + math.sqrt(n) * lam
        zetas.append(max(min(k, n, math.floor(total)), 0))
    # suffix minima: harmless regularization
    for k in range(len(zetas) - 2, -1, -1):
        zetas[k] = min(zetas[k], zetas[k + 1])
    return tuple(zetas)


def bret_deterministic_family(
    regions: Sequence[Sequence[int]], fam: PValueFamily, alpha: float
) -> ReferenceFamily:
    """Per-region m0-style bounds at level alpha/K (union bound)."""
    if not regions:
        raise ValueError("need at least one region")
    n_regions = len(regions)
    out_regions, zetas = [], []
    for region in regions:
        idx = sorted(set(region))
        out_regions.append(frozenset(idx))
        if not idx:
            zetas.append(0)
            continue
        sub = PValueFamily(
            pvalues=tuple(fam.pvalues[i] for i in idx),
            cdfs=tuple(fam.cdfs[i] for i in idx),
        )
        zetas.append(bret_m0(sub, alpha / n_regions))
    return ReferenceFamily(
        regions=tuple(out_regions), zetas=tuple(zetas), structure="deterministic"
    )


# -- step-up-derived threshold families ----------------------------------


@dataclass(frozen=True)
class ThresholdFamily:
    """Nondecreasing rejection thresholds drawn from the merged support."""

    taus: tuple[float, ...]
    alpha: float
    lam: float
    kind: str  # "ahsu" | "adaptive"


def h_vector(fam: PValueFamily, s: float, t: float) -> tuple[float, ...]:
    """Componentwise F_i(t) / (1 - F_i(s)); fails loudly when F_i(s) = 1."""
    out = []
    for i, c in enumerate(fam.cdfs):
        fs = c.eval(s)
        if fs >= 1.0:
            raise ValueError(f"F_{i}({s}) = 1: ratio undefined")
        out.append(c.eval(t) / (1.0 - fs))
    return tuple(out)


def check_c1(
    taus: Sequence[float], u: Sequence[int], alpha: float, fam: PValueFamily
) -> bool:
    """Condition on a threshold family for the step-up FDR / order-statistic
    bound to hold over U: with s = tau_|U|, for every k the sum of the
    (|U|-k+1) largest F_i(tau_k)/(1-F_i(s)) over U is at most k*alpha.
    """
    u_idx = sorted(set(u))
    if not u_idx:
        return True
    size = len(u_idx)
    if len(taus) < size:
        raise ValueError("threshold family shorter than |U|")
    s = taus[size - 1]
    denoms = []
    for i in u_idx:
        fs = fam.cdfs[i].eval(s)
        if fs >= 1.0:
            return False
        denoms.append(1.0 - fs)
    for k in range(1, size + 1):
        h = sorted(
            (fam.cdfs[i].eval(taus[k - 1]) / d for i, d in zip(u_idx, denoms)),
            reverse=True,
        )
        if sum(h[: size - k + 1]) > k * alpha:
            return False
    return True


def ahsu_lambda(fam: PValueFamily, alpha: float) -> float:
    """Default step-up parameter: the largest support point t with every
    F_i(t) < 1 and sum_i F_i(t)/(1-F_i(t)) <= m*alpha."""
    best = None
    for t in fam.merged_support():
        vals = [c.eval(t) for c in fam.cdfs]
        if any(v >= 1.0 for v in vals):
            continue
        if sum(v / (1.0 - v) for v in vals) <= fam.m * alpha:
            best = t
    if best is None:
        raise ValueError("no admissible lambda on the merged support")
    return best


def local_test_lambda(fam: PValueFamily, alpha: float) -> float:
    """Largest support point t with every F_i(t) < 1 and
    max_i F_i(t)/(1-F_i(t)) <= alpha (the local-test admissibility set)."""
    best = None
    for t in fam.merged_support():
        vals = [c.eval(t) for c in fam.cdfs]
        if any(v >= 1.0 for v in vals):
            continue
        if max(v / (1.0 - v) for v in vals) <= alpha:
            best = t
    if best is None:
        raise ValueError("no admissible lambda on the merged support")
    return best


def _threshold_scan(
    fam: PValueFamily, alpha: float, lam: float, terms_for_k, k_range
) -> dict[int, float]:
    """For each k in k_range, the largest support t <= lam such that the
    sum of the terms_for_k(k) largest H_i(lam, t) is <= k*alpha."""
    hv_den = []
    for i, c in enumerate(fam.cdfs):
        fs = c.eval(lam)
        if fs >= 1.0:
            raise ValueError(f"F_{i}(lambda) = 1: lambda inadmissible")
        hv_den.append(1.0 - fs)
    out = {k: 0.0 for k in k_range}
    for t in fam.merged_support():
        if t > lam:
            continue
        h = sorted(
            (c.eval(t) / d for c, d in zip(fam.cdfs, hv_den)), reverse=True
        )
        prefix = [0.0]
        for v in h:
            prefix.append(prefix[-1] + v)
        for k in k_range:
            nterms = terms_for_k(k)
            if nterms <= 0 or prefix[min(nterms, len(h))] <= k * alpha:
                out[k] = max(out[k], t)
    return out


def ahsu_thresholds(
    fam: PValueFamily, alpha: float, lam: Optional[float] = None
) -> ThresholdFamily:
    """tau_k = max{t in support, t <= lam : sum of the (m-k+1) largest
    F_i(t)/(1-F_i(lam)) <= k*alpha} for k < m; tau_m = lam."""
    m = fam.m
    if lam is None:
        lam = ahsu_lambda(fam, alpha)
    if m == 0:
        return ThresholdFamily((), alpha, lam, "ahsu")
    if m == 1:
        return ThresholdFamily((lam,), alpha, lam, "ahsu")
    scan = _threshold_scan(fam, alpha, lam, lambda k: m - k + 1, range(1, m))
    taus = tuple(scan[k] for k in range(1, m)) + (lam,)
    return ThresholdFamily(taus, alpha, lam, "ahsu")


def adaptive_thresholds(
    fam: PValueFamily, alpha: float, m0_hat: int, lam: float
) -> ThresholdFamily:
    """Plug-in variant: the largest-term count shrinks from m-k+1 to
    m0_hat-k+1; entries above m0_hat are padded with the support supremum."""
    m = fam.m
    if not 1 <= m0_hat <= m:
        raise ValueError("m0_hat must lie in [1, m]")
    sup_a = fam.merged_support()[-1]
    scan = _threshold_scan(
        fam, alpha, lam, lambda k: m0_hat - k + 1, range(1, m0_hat)
    )
    taus = (
        tuple(scan[k] for k in range(1, m0_hat))
        + (lam,)
        + (sup_a,) * (m - m0_hat)
    )
    return ThresholdFamily(taus, alpha, lam, "adaptive")


def hetero_simes_m0(
    fam: PValueFamily, alpha: float, lam: Optional[float] = None
) -> int:
    """SC1 over-estimator of the null count for the step-up local tests."""
    if fam.m == 0:
        return 0
    if lam is None:
        lam = local_test_lambda(fam, alpha)
    handle = LocalTestHandle(fam, alpha, "hsimes", lam=lam)
    m = fam.m
    full = list(range(m))
    for n in range(m, 0, -1):
        if all(
            handle.phi_snt(full, n, ti) == 0 for ti in range(len(handle.t_grid))
        ):
            return n
    return 0


def m0_jer(pvalues: Sequence[float], taus: Sequence[float]) -> int:
    """min_k (|{p_i > tau_k}| + k - 1), capped at m."""
    m = len(pvalues)
    best = m
    for k, t in enumerate(taus, start=1):
        best = min(best, sum(1 for p in pvalues if p > t) + k - 1)
    return max(best, 0)


def hetero_simes_envelope(
    fam: PValueFamily,
    alpha: float,
    variant: str = "nonadaptive",
    lam: Optional[float] = None,
) -> tuple[ReferenceFamily, Optional[int]]:
    """k-FWER-structure envelopes from the step-up threshold machinery.

    nonadaptive: tau from ahsu_thresholds, regions {p_i <= tau_k}, zeta k-1.
    adaptive-jer: step-down on the interpolated null-count estimate, with
      lam re-derived as tau_{m0_hat} each round.
    adaptive-sc1: plug-in of the SC1 null-count estimate, lam from the
      local-test admissibility set.
    """
    m = fam.m
    if m == 0:
        return ReferenceFamily((), (), "kfwer", ()), None

    def family_from(taus: Sequence[float], cut: Optional[int]) -> ReferenceFamily:
        if cut is None:
            used = list(taus)
            regions = [fam.region(t) for t in used]
        else:
            used = list(taus[:cut])
            regions = [fam.region(t) for t in used]
            # one final all-inclusive region bounded by the null estimate
            regions.append(frozenset(range(m)))
            used.append(1.0)
        zetas = tuple(range(len(regions)))  # zeta_k = k - 1
        return ReferenceFamily(
            regions=tuple(regions),
            zetas=zetas,
            structure="kfwer",
            thresholds=tuple(used),
        )

    if variant == "nonadaptive":
        tau = ahsu_thresholds(fam, alpha, lam)
        return family_from(tau.taus, None), None
    if variant == "adaptive-jer":
        tau = ahsu_thresholds(fam, alpha, lam)
        m0 = m0_jer(fam.pvalues, tau.taus)
        for _ in range(m):
            if m0 == 0:
                m0 = 1  # the threshold machinery needs at least one entry
                tau = adaptive_thresholds(fam, alpha, m0, tau.taus[0])
                break
            new_lam = tau.taus[m0 - 1]
            tau = adaptive_thresholds(fam, alpha, m0, new_lam)
            new_m0 = m0_jer(fam.pvalues, tau.taus)
            if new_m0 >= m0:
                break
            m0 = new_m0
        return family_from(tau.taus, m0), m0
    if variant == "adaptive-sc1":
        if lam is None:
            lam = local_test_lambda(fam, alpha)
        m0 = hetero_simes_m0(fam, alpha, lam)
        m0_eff = max(m0, 1)
        tau = adaptive_thresholds(fam, alpha, m0_eff, lam)
        return family_from(tau.taus, m0_eff), m0
    raise ValueError(f"unknown variant {variant!r}")


def homogenized_hsimes_ell(fam: PValueFamily, alpha: float, lam: float):
    """ell(i, n) = max{t <= lam on the support : sum of the (n-i+1) largest
    F_j(t)/(1-F_j(lam)) <= i*alpha}; a homogeneous Simes-like table."""
    hv_den = []
    for j, c in enumerate(fam.cdfs):
        fs = c.eval(lam)
        if fs >= 1.0:
            raise ValueError(f"F_{j}(lambda) = 1: lambda inadmissible")
        hv_den.append(1.0 - fs)
    support = [t for t in fam.merged_support() if t <= lam]
    cache: dict[tuple[int, int], float] = {}

    def ell(i: int, n: int) -> float:
        if i <= 0:
            return -1.0
        key = (i, n)
        if key not in cache:
            best = 0.0
            for t in support:
                h = sorted(
                    (c.eval(t) / d for c, d in zip(fam.cdfs, hv_den)),
                    reverse=True,
                )
                if sum(h[: max(n - i + 1, 0)]) <= i * alpha:
                    best = max(best, t)
            cache[key] = best
        return cache[key]

    return ell


# -- Lambert-W multiplier bound ------------------------------------------


def lambert_w0(x: float) -> float:
    """Principal branch of w*e^w = x on [-1/e, inf), Halley iteration."""
    if x < -math.exp(-1.0):
        raise ValueError("lambert_w0 requires x >= -1/e")
    if x == 0.0:
        return 0.0
    # initial guess: series near the branch point, log-based elsewhere
    if x < -0.25:
        w = -1.0 + math.sqrt(2.0 * (1.0 + math.e * x))
    elif x < 1.0:
        w = x / (1.0 + x)
    else:
        w = math.log(x) - math.log(math.log(x))
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        step = f / denom
        w -= step
        if abs(step) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


def van_zuijlen_multiplier(delta: float) -> float:
    """1 / (-W0(-delta / (e(1+delta)))); always >= 2 on (0, 1)."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return 1.0 / (-lambert_w0(-delta / (math.e * (1.0 + delta))))


def van_zuijlen_zeta(fam: PValueFamily, delta: float) -> tuple[int, ...]:
    """zeta_k = k AND floor(m * multiplier * mean-cdf at p_(k))."""
    mult = van_zuijlen_multiplier(delta)
    m = fam.m
    ps = sorted(fam.pvalues)
    zetas = []
    for k, p in enumerate(ps, start=1):
        fbar = sum(c.eval(p) for c in fam.cdfs) / m if m else 0.0
        zetas.append(max(min(k, math.floor(m * mult * fbar)), 0))
    for k in range(len(zetas) - 2, -1, -1):
        zetas[k] = min(zetas[k], zetas[k + 1])
    return tuple(zetas)
