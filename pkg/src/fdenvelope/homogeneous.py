"""Concentration bounds valid under super-uniform nulls, and the zeta /
m0-hat / threshold formulas they induce.

All infima over t are evaluated on the grid {0} U {p_i}: the minimized
expressions are nondecreasing in t between order statistics, so the grid
attains the infimum exactly.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

KAPPA = math.pi**2 / 6
KR_ALPHA_MAX = 0.31


def lambda_alpha(alpha: float) -> float:
    """sqrt(log(1/alpha) / 2)."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    return math.sqrt(math.log(1.0 / alpha) / 2.0)


def kr_constant(delta: float) -> float:
    """C_delta = log(1/delta) / log(1 + log(1/delta)); requires delta < 0.31."""
    if not 0.0 < delta < KR_ALPHA_MAX:
        raise ValueError(f"this bound requires alpha in (0, {KR_ALPHA_MAX})")
    ell = math.log(1.0 / delta)
    return ell / math.log1p(ell)


def wellner_h(x: float) -> float:
    """h(x) = x(log x - 1) + 1, increasing on [1, inf) with h(1) = 0."""
    return x * (math.log(x) - 1.0) + 1.0


def wellner_h_inverse(y: float) -> float:
    """Inverse of h on [1, inf), to relative tolerance 1e-12.

    Bracketed bisection to get close, then Newton polish (h'(x) = log x).
    """
    if y < 0.0:
        raise ValueError("h_inverse requires y >= 0")
    if y == 0.0:
        return 1.0
    lo, hi = 1.0, 2.0
    while wellner_h(hi) < y:
        hi *= 2.0
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if wellner_h(mid) < y:
            lo = mid
        else:
            hi = mid
    x = (lo + hi) / 2.0
    for _ in range(8):
        d = math.log(x)
        if d <= 0.0:
            break
        x -= (wellner_h(x) - y) / d
        if x < 1.0:
            x = 1.0
    return x


def _regularize(zetas: Sequence[int]) -> tuple[int, ...]:
    """Suffix minima: the envelope only improves, never changes validity."""
    out = list(zetas)
    for k in range(len(out) - 2, -1, -1):
        out[k] = min(out[k], out[k + 1])
    return tuple(out)


def topk_zeta_homogeneous(
    method: str, pvalues: Sequence[float], alpha: float, n: int
) -> tuple[int, ...]:
    """zeta_k = 1{p_(k) > 0} * floor-form(n, p_(k)) AND k, regularized.

    n is the plug-in count (n = m for the non-adaptive bound, n = m0_hat
    for the adaptive one).  The simes variant uses the left-limit floor
    floor(t-) = ceil(t) - 1; kr uses ceil(f) - 1 because its underlying
    inequality is non-strict.
    """
    m = len(pvalues)
    if not 0 <= n <= m:
        raise ValueError("plug-in count n must lie in [0, m]")
    ps = sorted(pvalues)
    lam = None
    cdelta = None
    if method == "dkw":
        lam = lambda_alpha(alpha)
    elif method == "wellner":
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
    elif method == "simes":
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
    elif method == "kr":
        cdelta = kr_constant(alpha)
    else:
        raise ValueError(f"unknown homogeneous method {method!r}")

    zetas = []
    for k, p in enumerate(ps, start=1):
        if p <= 0.0 or n == 0:
            zetas.append(0)
            continue
        if method == "dkw":
            z = math.floor(n * p + math.sqrt(n) * lam)
        elif method == "wellner":
            arg = (
                2.0 * math.log(KAPPA / alpha)
                + 4.0 * math.log(1.0 + math.log2(1.0 / p))
            ) / (n * p)
            z = math.floor(n * p * wellner_h_inverse(arg))
        elif method == "simes":
            z = math.ceil(n * p / alpha) - 1
        else:  # kr
            z = math.ceil(cdelta * (1.0 + p * n)) - 1
        zetas.append(max(min(z, k), 0))
    return _regularize(zetas)


def m0_hat_homogeneous(method: str, pvalues: Sequence[float], alpha: float) -> int:
    """Closed-form over-estimators of the number of true nulls."""
    m = len(pvalues)
    ps = sorted(pvalues)
    i0 = sum(1 for p in ps if p <= 0.0)

    def i_of(t: float) -> int:
        return sum(1 for p in ps if p <= t)

    if method == "dkw":
        lam = lambda_alpha(alpha)
        best = m
        for t in {0.0, *ps}:
            if t >= 1.0:
                continue
            a = lam / (2.0 * (1.0 - t))
            val = math.floor((a + math.sqrt(a * a + (m - i_of(t)) / (1.0 - t))) ** 2)
            best = min(best, val)
        return max(best, 0)
    if method == "simes":
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        # infimum over t in (0, alpha); as t -> 0+ the expression tends to
        # m - i(0), which is the cap term
        best = m - i0
        for t in ps:
            if not 0.0 < t < alpha:
                continue
            best = min(best, math.ceil((m - i_of(t)) / (1.0 - t / alpha)) - 1)
        return max(best, 0)
    if method == "kr":
        c = kr_constant(alpha)
        best = m
        for t in {0.0, *ps}:
            if t >= 1.0 / c:
                continue
            best = min(
                best, math.ceil((m - i_of(t) + c) / (1.0 - t * c)) - 1
            )
        return max(best, 0)
    raise ValueError(f"no closed-form m0 estimator for method {method!r}")


def vanilla_simes_ell(alpha: float) -> Callable[[int, int], float]:
    """ell(i, n) = i * alpha / n, the vanilla Simes threshold table."""

    def ell(i: int, n: int) -> float:
        if i <= 0:
            return -1.0
        if n <= 0:
            return -1.0
        return i * alpha / n

    return ell


def ghs_m0(ell: Callable[[int, int], float], pvalues: Sequence[float]) -> int:
    """max{n : for every i <= n, the i-th largest p-value exceeds
    ell(n - i + 1, n)}."""
    m = len(pvalues)
    desc = sorted(pvalues, reverse=True)
    for n in range(m, 0, -1):
        if all(desc[i - 1] > ell(n - i + 1, n) for i in range(1, n + 1)):
            return n
    return 0


def ghs_shortcut(
    ell: Callable[[int, int], float],
    pvalues: Sequence[float],
    s: Sequence[int],
) -> int:
    """Exact inversion-procedure value for a homogeneous Simes-like family:
    min over u of |{i in S : p_i > ell(u, m0_hat)}| + u - 1.

    Requires ell(i, n) nonincreasing in n (checked on the diagonal used).
    """
    s_set = sorted(set(s))
    if not s_set:
        return 0
    m = len(pvalues)
    m0 = ghs_m0(ell, pvalues)
    # contract of the family: thresholds shrink as the test size grows
    if m0 >= 1 and any(ell(i, m0) < ell(i, m) for i in range(1, m0 + 1)):
        raise ValueError("ell table must be nonincreasing in the family size")
    sp = [pvalues[i] for i in s_set]
    best = len(s_set)
    for u in range(1, len(s_set) + 1):
        thr = ell(u, m0)
        best = min(best, sum(1 for p in sp if p > thr) + u - 1)
    return best


def kfwer_thresholds_homogeneous(method: str, m: int, alpha: float) -> tuple[float, ...]:
    """simes: tau_k = alpha k / m; hommel: scaled by the harmonic sum."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if method == "simes":
        scale = 1.0
    elif method == "hommel":
        scale = sum(1.0 / i for i in range(1, m + 1))
    else:
        raise ValueError(f"unknown threshold template {method!r}")
    return tuple(alpha * k * scale / m for k in range(1, m + 1))


def dkw_deterministic_zeta(
    region_pvalues: Sequence[float], alpha: float, n_regions: int
) -> int:
    """Per-region bound at union-bound level alpha / K."""
    if n_regions < 1:
        raise ValueError("need at least one region")
    r = len(region_pvalues)
    if r == 0:
        return 0
    lam = lambda_alpha(alpha / n_regions)
    best = r
    for t in {0.0, *region_pvalues}:
        if t >= 1.0:
            continue
        i_t = sum(1 for p in region_pvalues if p <= t)
        a = lam / (2.0 * (1.0 - t))
        val = math.floor((a + math.sqrt(a * a + (r - i_t) / (1.0 - t))) ** 2)
        best = min(best, val)
    return max(best, 0)
