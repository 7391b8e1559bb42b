"""Core data model: step cdfs, p-value families, reference families, curves.

Everything here is immutable after construction and safe for concurrent
reads.  Comparisons are exact (no epsilon): the bound formulas distinguish
strict and weak inequalities, so the step evaluation must too.
"""

from __future__ import annotations

import io
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence


@dataclass(frozen=True)
class StepCdf:
    """A right-continuous nondecreasing step function on [0, 1].

    ``values[j]`` is F(support[j]); F is 0 left of the first support point
    and constant between support points.  A continuous uniform cdf is
    represented exactly with ``identity=True`` (empty support), so
    homogeneous reductions are bit-exact instead of grid approximations.
    """

    support: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    identity: bool = False

    def __post_init__(self) -> None:
        if self.identity:
            if self.support or self.values:
                raise ValueError("identity cdf must not carry a step grid")
            return
        if len(self.support) != len(self.values):
            raise ValueError("support and values must have equal length")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly increasing")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be nondecreasing")
        if self.values and not (0.0 <= self.values[0] and self.values[-1] <= 1.0):
            raise ValueError("values must lie in [0, 1]")
        if self.support and not (0.0 <= self.support[0] and self.support[-1] <= 1.0):
            raise ValueError("support must lie in [0, 1]")

    def eval(self, t: float) -> float:
        """F(t), right-continuous."""
        if self.identity:
            return min(max(t, 0.0), 1.0)
        j = bisect_right(self.support, t)
        return self.values[j - 1] if j else 0.0

    def left_limit(self, t: float) -> float:
        """sup of F on (-inf, t); equals eval(t) off the jump points."""
        if self.identity:
            return min(max(t, 0.0), 1.0)
        j = bisect_left(self.support, t)
        return self.values[j - 1] if j else 0.0

    def to_json(self) -> dict:
        if self.identity:
            return {"identity": True}
        return {"support": list(self.support), "values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> "StepCdf":
        if data.get("identity"):
            return cls(identity=True)
        return cls(support=tuple(data["support"]), values=tuple(data["values"]))


IDENTITY_CDF = StepCdf(identity=True)


@dataclass(frozen=True)
class SortPermutation:
    """Stable ordering of p-values: ``order[k]`` is the index (0-based) of
    the (k+1)-th smallest p-value, ties broken by original index."""

    order: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class PValueFamily:
    """m observed p-values with their per-hypothesis null cdf upper bounds."""

    pvalues: tuple[float, ...]
    cdfs: tuple[StepCdf, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if len(self.pvalues) != len(self.cdfs):
            raise ValueError("pvalues and cdfs must have equal length")
        if self.labels is not None and len(self.labels) != len(self.pvalues):
            raise ValueError("labels must match pvalues in length")
        if any(not (0.0 <= p <= 1.0) for p in self.pvalues):
            raise ValueError("p-values must lie in [0, 1]")

    @property
    def m(self) -> int:
        return len(self.pvalues)

    def merged_support(self) -> tuple[float, ...]:
        """{0} union of all cdf supports, sorted.  0 is always present:
        without it the threshold feasible sets below can be empty."""
        pts = {0.0}
        for cdf in self.cdfs:
            if cdf.identity:
                continue
            pts.update(cdf.support)
        return tuple(sorted(pts))

    def sort(self) -> SortPermutation:
        return SortPermutation(
            tuple(sorted(range(self.m), key=lambda i: (self.pvalues[i], i)))
        )

    def sorted_pvalues(self) -> tuple[float, ...]:
        return tuple(sorted(self.pvalues))

    def count_at_most(self, t: float) -> int:
        """i(t) = |{i : p_i <= t}|."""
        return sum(1 for p in self.pvalues if p <= t)

    def region(self, t: float) -> frozenset[int]:
        """R(t) = {i : p_i <= t} (0-based indices)."""
        return frozenset(i for i, p in enumerate(self.pvalues) if p <= t)

    def t_grid(self) -> tuple[float, ...]:
        """Canonical grid {0} U {p_i} on which sups/infs over t are exact
        for the shipped monotone test statistics."""
        return tuple(sorted({0.0, *self.pvalues}))

    def to_json(self) -> dict:
        out = {
            "pvalues": list(self.pvalues),
            "cdfs": [c.to_json() for c in self.cdfs],
        }
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PValueFamily":
        labels = data.get("labels")
        return cls(
            pvalues=tuple(float(p) for p in data["pvalues"]),
            cdfs=tuple(StepCdf.from_json(c) for c in data["cdfs"]),
            labels=tuple(labels) if labels is not None else None,
        )

    @classmethod
    def homogeneous(cls, pvalues: Iterable[float]) -> "PValueFamily":
        ps = tuple(float(p) for p in pvalues)
        return cls(pvalues=ps, cdfs=(IDENTITY_CDF,) * len(ps))


Structure = Literal["topk", "kfwer", "deterministic"]


@dataclass(frozen=True)
class ReferenceFamily:
    """Regions R_k with integer bounds zeta_k; the JER object.

    Regions are 0-based index sets.  ``thresholds`` is populated for
    kfwer-structure families (region k = {i : p_i <= thresholds[k]}).
    """

    regions: tuple[frozenset[int], ...]
    zetas: tuple[int, ...]
    structure: Structure
    thresholds: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if len(self.regions) != len(self.zetas):
            raise ValueError("regions and zetas must have equal length")
        if any(z < 0 for z in self.zetas):
            raise ValueError("zetas must be nonnegative")

    @property
    def k_max(self) -> int:
        return len(self.regions)

    def is_nested(self) -> bool:
        return all(a <= b for a, b in zip(self.regions, self.regions[1:]))

    def regularized(self) -> "ReferenceFamily":
        """Replace zeta_k by min(zeta_k, ..., zeta_K) and cap at |R_k|.
        Harmless for the envelope (suffix minima argument)."""
        zs = list(self.zetas)
        for k in range(len(zs) - 2, -1, -1):
            zs[k] = min(zs[k], zs[k + 1])
        zs = [min(z, len(r)) for z, r in zip(zs, self.regions)]
        return ReferenceFamily(self.regions, tuple(zs), self.structure, self.thresholds)


@dataclass(frozen=True)
class EnvelopeCurve:
    """Per-k rows (k, p_(k), vhat, dhat) along the top-k path."""

    method: str
    alpha: float
    pvalues_sorted: tuple[float, ...]
    vhat: tuple[int, ...]
    m0_hat: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.pvalues_sorted) != len(self.vhat):
            raise ValueError("vhat must have one entry per p-value")

    @property
    def dhat(self) -> tuple[int, ...]:
        return tuple(k + 1 - v for k, v in enumerate(self.vhat))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("k,p_k,vhat,dhat\n")
        for k, (p, v) in enumerate(zip(self.pvalues_sorted, self.vhat), start=1):
            buf.write(f"{k},{p!r},{v},{k - v}\n")
        return buf.getvalue()

    def to_json(self) -> dict:
        out = {
            "method": self.method,
            "alpha": self.alpha,
            "k": list(range(1, len(self.vhat) + 1)),
            "p_k": list(self.pvalues_sorted),
            "vhat": list(self.vhat),
            "dhat": list(self.dhat),
        }
        if self.m0_hat is not None:
            out["m0_hat"] = self.m0_hat
        return out
