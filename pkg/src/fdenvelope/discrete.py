"""Exact discrete tests producing heterogeneous p-values with known null cdfs.

Two-sided binomial and Fisher tests, both via the minimum-likelihood rule:
p(x) = P(f(X) <= f(x)) under the null, f the null pmf.  All probabilities
are exact integer ratios (math.comb), converted to float at the end, so the
cdf support is free of rounding noise and the identity-on-support property
holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .model import StepCdf


def _min_likelihood_cdf(weights: list[int]) -> tuple[list[Fraction], StepCdf]:
    """Given integer null weights w_x (pmf = w_x / sum), return the exact
    two-sided p-value of each outcome and the null cdf of the p-value.

    p(x) = P(w_X <= w_x).  The p-value cdf is the identity on its support:
    P(p(X) <= p(x)) = p(x) by construction (outcomes tied in weight share
    one p-value).
    """
    total = sum(weights)
    pvals = []
    for w in weights:
        tail = sum(v for v in weights if v <= w)
        pvals.append(Fraction(tail, total))
    support = sorted(set(pvals))
    cdf = StepCdf(
        support=tuple(float(p) for p in support),
        values=tuple(float(p) for p in support),
    )
    return pvals, cdf


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 counts: rows are groups, columns are response / no response."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("counts must be nonnegative")


def binom_test(n: int, x: int) -> tuple[float, StepCdf]:
    """Two-sided test of Bin(n, 1/2) via the minimum-likelihood rule.

    Returns the exact p-value of x and the null StepCdf of the p-value
    (identity on its support).
    """
    if not 0 <= x <= n:
        raise ValueError(f"observed count {x} outside [0, {n}]")
    weights = [comb(n, k) for k in range(n + 1)]
    pvals, cdf = _min_likelihood_cdf(weights)
    return float(pvals[x]), cdf


def fisher_test(table: ContingencyTable) -> tuple[float, StepCdf]:
    """Two-sided Fisher exact test, minimum-likelihood rule, conditional
    on both margins.

    The null cdf is the exact conditional (hypergeometric) cdf of the
    p-value, identity on its support.  Degenerate margins (an empty row or
    column) make the table the only one compatible with its margins:
    p = 1 with a single-point cdf.
    """
    r1, r2 = table.a + table.b, table.c + table.d
    c1 = table.a + table.c
    n = r1 + r2
    lo, hi = max(0, c1 - r2), min(r1, c1)
    if lo == hi:
        return 1.0, StepCdf(support=(1.0,), values=(1.0,))
    # conditional pmf of the top-left cell: integer numerators over C(n, c1)
    weights = [comb(r1, k) * comb(r2, c1 - k) for k in range(lo, hi + 1)]
    pvals, cdf = _min_likelihood_cdf(weights)
    return float(pvals[table.a - lo]), cdf


def uniformize(y: float, cdf: StepCdf, u: float) -> float:
    """Randomized cdf transform: F-(y) + u * (F(y) - F-(y)).

    If cdf is the exact distribution of y the output is uniform on [0,1];
    if y is only super-uniform w.r.t. cdf, the output is <= y.
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must be a uniform draw in [0, 1]")
    left = cdf.left_limit(y)
    return left + u * (cdf.eval(y) - left)
