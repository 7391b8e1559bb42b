"""Nested interpolation, the top-k path dynamic program, the two
threshold-structure conversions, and FDX-driven prefix selection.

Interpolation convention throughout: the bound for a selection S is
min_k (zeta_k + |S \\ R_k|) capped at |S|, which is exact when the regions
are nested.  Disjoint deterministic regions instead add up per-region caps.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .model import PValueFamily, ReferenceFamily


def interpolate_nested(ref: ReferenceFamily, s: Sequence[int]) -> int:
    """min_k (zeta_k + |S \\ R_k|) AND |S| for a nested family."""
    if not ref.is_nested():
        raise ValueError("interpolation formula requires nested regions")
    s_set = frozenset(s)
    best = len(s_set)
    for region, zeta in zip(ref.regions, ref.zetas):
        best = min(best, zeta + len(s_set - region))
    return best


def disjoint_bound(ref: ReferenceFamily, s: Sequence[int], m: int) -> int:
    """sum_k min(|S cap R_k|, zeta_k) + |S \\ union R_k| for disjoint regions."""
    s_set = frozenset(s)
    covered: set[int] = set()
    total = 0
    for region, zeta in zip(ref.regions, ref.zetas):
        if covered & region:
            raise ValueError("additive bound requires disjoint regions")
        covered |= region
        total += min(len(s_set & region), zeta)
    return total + len(s_set - covered)


def family_bound(ref: ReferenceFamily, s: Sequence[int], m: int) -> int:
    if ref.structure == "deterministic":
        return disjoint_bound(ref, s, m)
    return interpolate_nested(ref, s)


def topk_path_dp(
    f: Callable[[float], int], pvalues_sorted: Sequence[float]
) -> tuple[tuple[int, ...], int]:
    """Envelope values along the top-k path for bounds of the form
    zeta_k = f(p_(k)) AND k, f nondecreasing and integer-valued.

    Skips f evaluations whenever the running envelope can only grow by one
    per step; returns (envelope, number of f calls).  Raises if the calls
    actually made ever reveal a decrease.
    """
    m = len(pvalues_sorted)
    tilde = [0] * (m + 1)
    k = 1
    calls = 0
    last_f = None
    while k <= m:
        fv = f(pvalues_sorted[k - 1])
        calls += 1
        if fv != int(fv):
            raise ValueError("bound function must be integer-valued")
        if last_f is not None and fv < last_f:
            raise ValueError("bound function must be nondecreasing")
        last_f = fv
        zk = min(int(fv), k)
        if zk > tilde[k - 1]:
            j = min(zk - tilde[k - 1], m - k + 1)
            for i in range(1, j + 1):
                tilde[k + i - 1] = tilde[k - 1] + i
            k += j
        else:
            tilde[k] = tilde[k - 1]
            k += 1
    return tuple(tilde[1:]), calls


def envelope_recurrence(zetas: Sequence[int]) -> tuple[int, ...]:
    """V(R_k) = min(V(R_{k-1}) + 1, zeta_k) for a nested top-k family with
    regularized (nondecreasing, capped) zetas."""
    out = []
    prev = 0
    for z in zetas:
        prev = min(prev + 1, z)
        out.append(prev)
    return tuple(out)


def kfwer_to_topk(
    fam: PValueFamily, thresholds: Sequence[float]
) -> ReferenceFamily:
    """Turn a k-FWER family (regions {p_i <= tau_k}, zeta_k = k-1) into an
    envelope-identical top-k family.

    With ell_k = |{i : p_i <= tau_k}|, the rank-l bound is k-1 for the
    smallest k with l <= ell_k, and m for ranks beyond ell_K.
    """
    if any(b < a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be nondecreasing")
    m = fam.m
    ells = [fam.count_at_most(t) for t in thresholds]
    order = fam.sort().order
    zetas = []
    for rank in range(1, m + 1):
        z = m
        for k, ell in enumerate(ells, start=1):
            if rank <= ell:
                z = k - 1
                break
        zetas.append(z)
    regions = tuple(frozenset(order[:rank]) for rank in range(1, m + 1))
    return ReferenceFamily(regions=regions, zetas=tuple(zetas), structure="topk")


def topk_to_kfwer(
    fam: PValueFamily, f_values: Sequence[int]
) -> ReferenceFamily:
    """Turn a top-k family (zeta_k = f(p_(k)) AND k, f nondecreasing) into
    an envelope-identical k-FWER family.

    nu(s) = max{k : f(p_(k)) <= s - 1} (0 if none, convention f at the
    phantom p_(0) = -1 is 0), region s = {i : p_i <= p_(nu(s))}, zeta = s-1.
    """
    m = fam.m
    if len(f_values) != m:
        raise ValueError("need one f value per p-value")
    if any(b < a for a, b in zip(f_values, f_values[1:])):
        raise ValueError("f values must be nondecreasing")
    ps = fam.sorted_pvalues()
    regions = []
    thresholds = []
    for s in range(1, m + 1):
        nu = sum(1 for v in f_values if v <= s - 1)
        if nu == 0:
            regions.append(frozenset())
            thresholds.append(-1.0)
        else:
            t = ps[nu - 1]
            regions.append(fam.region(t))
            thresholds.append(t)
    return ReferenceFamily(
        regions=tuple(regions),
        zetas=tuple(range(m)),
        structure="kfwer",
        thresholds=tuple(thresholds),
    )


def fdx_select(vhat: Sequence[int], gamma: float) -> int:
    """Largest k with vhat_k / max(k, 1) <= gamma; 0 if none."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    best = 0
    for k, v in enumerate(vhat, start=1):
        if v / k <= gamma:
            best = k
    return best
