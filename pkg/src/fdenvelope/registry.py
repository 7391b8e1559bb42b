"""Stable method names mapping to envelope constructions.

Every method yields either a top-k family (zeta_k attached to the k-th
smallest p-value) or a k-FWER family (zeta_k = k - 1 attached to a
threshold region {i : p_i <= tau_k}).  Both support O(m) envelope curves
along the top-k path and O(m + K) bounds for arbitrary selections via the
nested-interpolation formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import hetero, homogeneous
from .families import envelope_recurrence
from .model import EnvelopeCurve, PValueFamily, ReferenceFamily

METHOD_NAMES: tuple[str, ...] = (
    "simes",
    "simes-adaptive",
    "dkw",
    "dkw-adaptive",
    "wellner",
    "kr",
    "kr-adaptive",
    "bretagnolle",
    "bretagnolle-adaptive",
    "vanzuijlen",
    "hsimes",
    "hsimes-adaptive-jer",
    "hsimes-adaptive-sc1",
)

ADAPTIVE_METHODS = frozenset(
    {
        "simes-adaptive",
        "dkw-adaptive",
        "kr-adaptive",
        "bretagnolle-adaptive",
        "hsimes-adaptive-jer",
        "hsimes-adaptive-sc1",
    }
)

# selection-bound-only shortcuts (no envelope curve; direct SC1 inversion)
SHORTCUT_METHODS: tuple[str, ...] = ("bretagnolle-sc1",)


def list_methods() -> list[dict]:
    out = []
    for name in METHOD_NAMES:
        alpha_max = homogeneous.KR_ALPHA_MAX if name.startswith("kr") else 1.0
        out.append(
            {
                "name": name,
                "adaptive": name in ADAPTIVE_METHODS,
                "alpha_min": 0.0,
                "alpha_max": alpha_max,
            }
        )
    return out


@dataclass(frozen=True)
class BuiltEnvelope:
    """A constructed bound family in threshold form (O(m) memory)."""

    method: str
    alpha: float
    structure: str  # "topk" | "kfwer"
    zetas: tuple[int, ...]
    # kfwer only: region k = {i : p_i <= thresholds[k]}, math.inf = everything
    thresholds: Optional[tuple[float, ...]]
    m0_hat: Optional[int]


def _check_alpha(method: str, alpha: float) -> None:
    hi = homogeneous.KR_ALPHA_MAX if method.startswith("kr") else 1.0
    if not 0.0 < alpha < hi:
        raise ValueError(f"method {method!r} requires alpha in (0, {hi})")


def build_envelope(method: str, fam: PValueFamily, alpha: float) -> BuiltEnvelope:
    if method not in METHOD_NAMES:
        raise ValueError(f"unknown method {method!r}")
    _check_alpha(method, alpha)
    m = fam.m
    ps = fam.pvalues

    if method in ("dkw", "wellner", "simes", "kr"):
        zetas = homogeneous.topk_zeta_homogeneous(method, ps, alpha, m)
        return BuiltEnvelope(method, alpha, "topk", zetas, None, None)

    if method in ("kr-adaptive",):
        m0 = homogeneous.m0_hat_homogeneous("kr", ps, alpha)
        zetas = homogeneous.topk_zeta_homogeneous("kr", ps, alpha, m0)
        return BuiltEnvelope(method, alpha, "topk", zetas, None, m0)

    if method == "dkw-adaptive":
        # exact plug-in form: floor(m0*p + sqrt(m0)*lam) AND k, no zero guard
        m0 = homogeneous.m0_hat_homogeneous("dkw", ps, alpha)
        lam = homogeneous.lambda_alpha(alpha)
        raw = [
            min(k, math.floor(m0 * p + math.sqrt(m0) * lam))
            for k, p in enumerate(sorted(ps), start=1)
        ]
        for k in range(len(raw) - 2, -1, -1):
            raw[k] = min(raw[k], raw[k + 1])
        return BuiltEnvelope(method, alpha, "topk", tuple(raw), None, m0)

    if method == "simes-adaptive":
        m0 = homogeneous.m0_hat_homogeneous("simes", ps, alpha)
        taus = tuple(k * alpha / m0 for k in range(1, m0 + 1)) + (math.inf,)
        zetas = tuple(range(m0 + 1))
        return BuiltEnvelope(method, alpha, "kfwer", zetas, taus, m0)

    if method == "bretagnolle":
        zetas = hetero.bret_topk_zeta(fam, alpha, m)
        return BuiltEnvelope(method, alpha, "topk", zetas, None, None)

    if method == "bretagnolle-adaptive":
        m0 = hetero.bret_m0(fam, alpha)
        zetas = hetero.bret_topk_zeta(fam, alpha, m0)
        return BuiltEnvelope(method, alpha, "topk", zetas, None, m0)

    if method == "vanzuijlen":
        zetas = hetero.van_zuijlen_zeta(fam, alpha)
        return BuiltEnvelope(method, alpha, "topk", zetas, None, None)

    # hsimes variants
    variant = {
        "hsimes": "nonadaptive",
        "hsimes-adaptive-jer": "adaptive-jer",
        "hsimes-adaptive-sc1": "adaptive-sc1",
    }[method]
    ref, m0 = hetero.hetero_simes_envelope(fam, alpha, variant)
    taus = ref.thresholds or ()
    if variant != "nonadaptive" and taus:
        # final all-inclusive region: make the threshold unambiguous
        taus = taus[:-1] + (math.inf,)
    return BuiltEnvelope(method, alpha, "kfwer", ref.zetas, taus, m0)


def _threshold_counts(built: BuiltEnvelope, fam: PValueFamily) -> list[int]:
    return [
        fam.m if math.isinf(t) else fam.count_at_most(t)
        for t in built.thresholds
    ]


def envelope_vhat(built: BuiltEnvelope, fam: PValueFamily) -> tuple[int, ...]:
    """V-hat along the top-k path (stable p-value order)."""
    m = fam.m
    if built.structure == "topk":
        return envelope_recurrence(built.zetas)
    counts = _threshold_counts(built, fam)
    out = []
    for rank in range(1, m + 1):
        best = rank
        for z, c in zip(built.zetas, counts):
            best = min(best, z + max(0, rank - c))
        out.append(best)
    return tuple(out)


def selection_vhat(
    built: BuiltEnvelope, fam: PValueFamily, selection: Sequence[int]
) -> int:
    """Bound for an arbitrary index set via nested interpolation."""
    s_set = frozenset(selection)
    if any(not 0 <= i < fam.m for i in s_set):
        raise ValueError("selection index out of range")
    size = len(s_set)
    if size == 0:
        return 0
    best = size
    if built.structure == "topk":
        order = fam.sort().order
        rank_of = {idx: r for r, idx in enumerate(order, start=1)}
        ranks = sorted(rank_of[i] for i in s_set)
        # outside(j) = |S| - #(ranks <= j), nonincreasing in j
        ptr = 0
        for j, z in enumerate(built.zetas, start=1):
            while ptr < size and ranks[ptr] <= j:
                ptr += 1
            best = min(best, z + size - ptr)
        return best
    for z, t in zip(built.zetas, built.thresholds):
        if math.isinf(t):
            outside = 0
        else:
            outside = sum(1 for i in s_set if fam.pvalues[i] > t)
        best = min(best, z + outside)
    return best


def shortcut_vhat(
    method: str, fam: PValueFamily, alpha: float, selection: Sequence[int]
) -> int:
    """Direct SC1 inversion for the shortcut-only method names."""
    if method != "bretagnolle-sc1":
        raise ValueError(f"unknown shortcut method {method!r}")
    _check_alpha("bretagnolle", alpha)
    s_set = frozenset(selection)
    if any(not 0 <= i < fam.m for i in s_set):
        raise ValueError("selection index out of range")
    return hetero.bret_vsc1(fam, sorted(s_set), alpha)


def envelope_curve(method: str, fam: PValueFamily, alpha: float) -> EnvelopeCurve:
    built = build_envelope(method, fam, alpha)
    return EnvelopeCurve(
        method=method,
        alpha=alpha,
        pvalues_sorted=fam.sorted_pvalues(),
        vhat=envelope_vhat(built, fam),
        m0_hat=built.m0_hat,
    )


def reference_family(
    method: str, fam: PValueFamily, alpha: float
) -> tuple[ReferenceFamily, Optional[int]]:
    """Materialize the regions as explicit index sets (small-m use)."""
    built = build_envelope(method, fam, alpha)
    if built.structure == "topk":
        order = fam.sort().order
        regions = tuple(
            frozenset(order[:rank]) for rank in range(1, fam.m + 1)
        )
        ref = ReferenceFamily(regions, built.zetas, "topk")
    else:
        regions = tuple(
            frozenset(range(fam.m)) if math.isinf(t) else fam.region(t)
            for t in built.thresholds
        )
        finite = tuple(min(t, 1.0) for t in built.thresholds)
        ref = ReferenceFamily(regions, built.zetas, "kfwer", finite)
    return ref, built.m0_hat
