"""Local-test families, the phi_{S,n,t} statistic, SC1/SC2 shortcuts, and
brute-force oracles.

A handle binds one family of intersection tests phi_A to one PValueFamily.
Every sup/inf over t is taken on the finite grid {0} U {p_i} (clamped to
[0, lambda] for the hsimes family); the shipped statistics are monotone
between order statistics, so the restriction is lossless.
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Sequence

from .model import PValueFamily

BRUTE_FORCE_LIMIT = 20


def _mask_popcount(x: int) -> int:
    return x.bit_count()


class LocalTestHandle:
    """Immutable binding of a local-test family to a p-value family.

    kind is one of:
      - "simes-like":     phi_{A,t} = 1{t <= ell(i_A(t), |A|)}, ell(0, n) = -1
      - "functional-topk":phi_{A,t} = 1{i_A(t) > f(|A|, t)}  (>= if strict=False)
      - "bretagnolle":    phi_{A,t} = 1{sum_{i in A} G_i(t) > lam * sqrt|A|}
      - "hsimes":         phi_{A,t} = 1{sum of (|A|-i_A(t)+1) largest H(lam_t, t)
                          over A <= i_A(t) * alpha}, t restricted to [0, lambda]
    """

    def __init__(
        self,
        fam: PValueFamily,
        alpha: float,
        kind: str,
        *,
        ell: Optional[Callable[[int, int], float]] = None,
        f: Optional[Callable[[int, float], float]] = None,
        strict: bool = True,
        lam: Optional[float] = None,
    ):
        if kind not in ("simes-like", "functional-topk", "bretagnolle", "hsimes"):
            raise ValueError(f"unknown local-test family {kind!r}")
        if kind == "simes-like" and ell is None:
            raise ValueError("simes-like family needs an ell table")
        if kind == "functional-topk" and f is None:
            raise ValueError("functional-topk family needs an f function")
        if kind == "hsimes" and lam is None:
            raise ValueError("hsimes family needs lambda")
        self.fam = fam
        self.alpha = alpha
        self.kind = kind
        self._ell = ell
        self._f = f
        self.strict = strict
        self.lam = lam
        m = fam.m
        if kind == "hsimes":
            grid = sorted({0.0, *(p for p in fam.pvalues if p <= lam)})
        else:
            grid = sorted({0.0, *fam.pvalues})
        self.t_grid: tuple[float, ...] = tuple(grid)
        # per-grid-point membership mask of R(t) = {i : p_i <= t}
        self._r_masks = tuple(
            sum(1 << i for i, p in enumerate(fam.pvalues) if p <= t) for t in grid
        )
        if kind == "bretagnolle":
            self._lamtilde = math.sqrt((1.0 + math.log(1.0 / alpha)) / 2.0)
            self._fvals = tuple(
                tuple(c.eval(t) for c in fam.cdfs) for t in grid
            )
        if kind == "hsimes":
            for i, c in enumerate(fam.cdfs):
                if c.eval(lam) >= 1.0:
                    raise ValueError(f"F_{i}(lambda) = 1: lambda inadmissible")
            self._hvals = tuple(
                tuple(c.eval(t) / (1.0 - c.eval(lam)) for c in fam.cdfs)
                for t in grid
            )
        self._nonrejected: Optional[list[int]] = None

    # -- elementary statistics -------------------------------------------

    def ell(self, i: int, n: int) -> float:
        # convention for empty traces: never rejects
        if i <= 0:
            return -1.0
        return self._ell(i, n)

    def phi_at(self, a_mask: int, ti: int) -> int:
        """phi_{A,t} for A given as a bitmask and t = t_grid[ti]."""
        t = self.t_grid[ti]
        size = _mask_popcount(a_mask)
        i_at = _mask_popcount(a_mask & self._r_masks[ti])
        if self.kind == "simes-like":
            return 1 if t <= self.ell(i_at, size) else 0
        if self.kind == "functional-topk":
            bound = self._f(size, t)
            if self.strict:
                return 1 if i_at > bound else 0
            return 1 if i_at >= bound else 0
        if self.kind == "bretagnolle":
            fv = self._fvals[ti]
            g = i_at - sum(fv[i] for i in _iter_bits(a_mask))
            return 1 if g > self._lamtilde * math.sqrt(size) else 0
        # hsimes
        if i_at == 0:
            return 0  # the sum would include the +infinity padding term
        hv = self._hvals[ti]
        vals = sorted((hv[i] for i in _iter_bits(a_mask)), reverse=True)
        need = size - i_at + 1
        return 1 if sum(vals[:need]) <= i_at * self.alpha else 0

    def phi_a(self, a_mask: int) -> int:
        """phi_A = max over the grid of phi_{A,t}."""
        if a_mask == 0:
            return 0
        return max(self.phi_at(a_mask, ti) for ti in range(len(self.t_grid)))

    # -- the minimized statistic phi_{S,n,t} -----------------------------

    def phi_snt(self, s: Sequence[int], n: int, ti: int) -> int:
        """min over {A : |A cap S| = n} of phi_{A,t} at t = t_grid[ti]."""
        fam = self.fam
        m = fam.m
        s_set = frozenset(s)
        if not 0 <= n <= len(s_set):
            raise ValueError("n must lie in [0, |S|]")
        t = self.t_grid[ti]
        r_mask = self._r_masks[ti]
        i_t = _mask_popcount(r_mask)
        in_s_r = sum(1 for i in s_set if r_mask >> i & 1)  # i_S(t)
        i_sc = i_t - in_s_r                                # i_{S^c}(t)
        size_s = len(s_set)
        if self.kind == "simes-like":
            best = 1
            for k in range(i_sc + 1):
                i_idx = max(n + in_s_r - size_s, 0) + k
                n_idx = n + m - size_s - i_sc + k
                if not (t <= self.ell(i_idx, n_idx)):
                    return 0
            return best
        if self.kind == "functional-topk":
            # optimal A: the n largest-p elements of S plus all of S^c \ R(t),
            # then optionally j extra elements of S^c cap R(t)
            k_s = max(n - (size_s - in_s_r), 0)
            base = n + (m - size_s - i_sc)
            for j in range(i_sc + 1):
                bound = self._f(base + j, t)
                hit = (k_s + j > bound) if self.strict else (k_s + j >= bound)
                if not hit:
                    return 0
            return 1
        if self.kind == "bretagnolle":
            fv = self._fvals[ti]
            g = [
                (1 if r_mask >> i & 1 else 0) - fv[i] for i in range(m)
            ]
            gs = sorted(g[i] for i in s_set)
            gsc = sorted(g[i] for i in range(m) if i not in s_set)
            base = sum(gs[:n])
            acc = 0.0
            for j in range(len(gsc) + 1):
                if base + acc <= self._lamtilde * math.sqrt(n + j):
                    return 0
                if j < len(gsc):
                    acc += gsc[j]
            return 1
        # hsimes (Lemma-style concatenation)
        hv = self._hvals[ti]
        k_s = max(n - (size_s - in_s_r), 0)
        if k_s == 0:
            return 0
        outside = [hv[i] for i in range(m) if not r_mask >> i & 1]
        s_in = sorted((hv[i] for i in s_set if r_mask >> i & 1), reverse=True)
        vec = sorted(outside + s_in[:k_s], reverse=True)
        need = m - i_t + 1
        if len(vec) < need:
            return 0
        return 1 if sum(vec[:need]) <= k_s * self.alpha else 0

    # -- shortcuts -------------------------------------------------------

    def vsc1(self, s: Sequence[int]) -> int:
        s_set = sorted(set(s))
        best = 0
        for n in range(len(s_set), -1, -1):
            if all(
                self.phi_snt(s_set, n, ti) == 0 for ti in range(len(self.t_grid))
            ):
                best = n
                break
        return best

    def vsc2(self, s: Sequence[int]) -> int:
        s_set = sorted(set(s))
        out = len(s_set)
        for ti in range(len(self.t_grid)):
            top = max(
                (n for n in range(len(s_set) + 1) if self.phi_snt(s_set, n, ti) == 0),
                default=0,
            )
            out = min(out, top)
        return out

    # -- brute-force oracles ---------------------------------------------

    def _nonrejected_masks(self) -> list[int]:
        m = self.fam.m
        if m > BRUTE_FORCE_LIMIT:
            raise ValueError(
                f"brute-force enumeration refused for m = {m} > {BRUTE_FORCE_LIMIT}"
            )
        if self._nonrejected is None:
            self._nonrejected = [
                a for a in range(1 << m) if self.phi_a(a) == 0
            ]
        return self._nonrejected

    def brute_vip(self, s: Sequence[int]) -> int:
        """Exact inversion-procedure bound max{|A cap S| : phi_A = 0}."""
        s_mask = 0
        for i in set(s):
            s_mask |= 1 << i
        return max(
            _mask_popcount(a & s_mask) for a in self._nonrejected_masks()
        )


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def brute_vstar(regions, zetas, m: int, s: Sequence[int]) -> int:
    """max |A cap S| over all A consistent with every |R_k cap A| <= zeta_k.

    Exact interpolation oracle by subset enumeration; refuses m > 20.
    """
    if m > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"brute-force enumeration refused for m = {m} > {BRUTE_FORCE_LIMIT}"
        )
    r_masks = []
    for r in regions:
        mask = 0
        for i in r:
            mask |= 1 << i
        r_masks.append(mask)
    s_mask = 0
    for i in set(s):
        s_mask |= 1 << i
    best = 0
    for a in range(1 << m):
        if all(
            _mask_popcount(a & rm) <= z for rm, z in zip(r_masks, zetas)
        ):
            best = max(best, _mask_popcount(a & s_mask))
    return best
