"""Named families, juntas and closed-form difference counts."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from diffam.diff import binom, conjecture_rhs
from diffam.family import SetFamily, full_mask, k_subset_masks, mask_of, popcount

MAX_WIDTH = 12


def full_star(n: int, k: int, x: int = 1) -> SetFamily:
    """All k-subsets of [n] containing ``x``."""
    if not 1 <= x <= n or not 1 <= k <= n:
        raise ValueError(f"bad star parameters n={n}, k={k}, x={x}")
    bit = 1 << (x - 1)
    return SetFamily.from_masks((m for m in k_subset_masks(n, k) if m & bit), n, k)


def hm_bound(n: int, k: int) -> int:
    """Hilton-Milner bound C(n-1,k-1) - C(n-k-1,k-1) + 1."""
    if not n > 2 * k:
        raise ValueError(f"need n > 2k, got n={n}, k={k}")
    return binom(n - 1, k - 1) - binom(n - k - 1, k - 1) + 1


def _check_ap(n: int, k: int, p: int) -> None:
    if not 2 <= p <= k or not n > 2 * k:
        raise ValueError(f"need 2 <= p <= k and n > 2k, got n={n}, k={k}, p={p}")


def build_a_p(n: int, k: int, p: int) -> SetFamily:
    """Sets through 1 meeting [2, p+1], together with the sets containing [2, p+1]."""
    _check_ap(n, k, p)
    window = mask_of(range(2, p + 2), n)
    keep = [m for m in k_subset_masks(n, k) if (m & 1 and m & window) or m & window == window]
    return SetFamily.from_masks(keep, n, k)


def fano_plane() -> SetFamily:
    lines = [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)]
    return SetFamily.from_sets(lines, 7, 3)


def triangle(n: int = 3) -> SetFamily:
    return SetFamily.from_sets([(1, 2), (1, 3), (2, 3)], n, 2)


@dataclass(frozen=True)
class Junta:
    """Membership of a set F is decided by ``F & [width]`` lying in ``defining``."""

    width: int
    defining: SetFamily

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"junta width must be in [1, {MAX_WIDTH}]")
        if self.defining.n != self.width:
            raise ValueError("defining family must live on [width]")

    @classmethod
    def from_sets(cls, width: int, sets: Iterable[Iterable[int]]) -> "Junta":
        return cls(width, SetFamily.from_sets(sets, width))


def as_junta(p: int) -> Junta:
    """The width-(p+1) junta generating the A_p families."""
    if p < 2:
        raise ValueError("p must be at least 2")
    w = p + 1
    window = full_mask(w) ^ 1
    members = [j for j in range(1 << w) if (j & 1 and j & window) or j & window == window]
    return Junta(w, SetFamily.from_masks(members, w))


def junta_family(j: Junta, n: int, k: int) -> SetFamily:
    """``{F in C([n], k) : F & [w] in J*}``."""
    if not j.width <= n or not 0 <= k <= n:
        raise ValueError(f"need width <= n and 0 <= k <= n (w={j.width}, n={n}, k={k})")
    w = j.width
    outside = n - w
    pieces = []
    for trace in j.defining:
        rest = k - popcount(trace)
        if not 0 <= rest <= outside:
            continue
        tails = np.array(k_subset_masks(outside, rest), dtype=np.uint64) << np.uint64(w)
        pieces.append(tails | np.uint64(trace))
    masks = np.concatenate(pieces) if pieces else np.empty(0, dtype=np.uint64)
    return SetFamily(n, masks, k)


@dataclass(frozen=True)
class JuntaLevels:
    """``levels[i]`` = L_i for i = 0..w, ``exact[s]`` = L_s minus L_(s-1)."""

    width: int
    levels: list[frozenset[int]]
    exact: list[frozenset[int]]

    def level(self, i: int) -> frozenset[int]:
        return self.levels[min(max(i, 0), self.width)]

    def level_family(self, i: int) -> SetFamily:
        return SetFamily.from_masks(self.level(i), self.width)


def junta_levels(j: Junta) -> JuntaLevels:
    """L_i: differences J - J' of defining sets with |J & J'| <= i."""
    w = j.width
    first_seen: dict[int, int] = {}
    members = list(j.defining)
    for a in members:
        for b in members:
            d = a & ~b
            inter = popcount(a & b)
            if inter < first_seen.get(d, w + 1):
                first_seen[d] = inter
    levels = [frozenset(d for d, t in first_seen.items() if t <= i) for i in range(w + 1)]
    exact = [levels[0]] + [levels[s] - levels[s - 1] for s in range(1, w + 1)]
    return JuntaLevels(w, levels, exact)


def realised_junta(j: Junta, k: int) -> Junta:
    """Drop defining sets with more than k elements (no k-set has such a trace)."""
    keep = [t for t in j.defining if popcount(t) <= k]
    return Junta(j.width, SetFamily.from_masks(keep, j.width))


def junta_diff_count(j: Junta, n: int, k: int) -> int:
    """Closed-form |D| of the junta family.

    Sums ``|L_i^(b)| * C(n - w, k - i - b)`` over i = 1..k and b = 0..w,
    where L_i^(b) is the size-b part of L_i.
    """
    w = j.width
    if w > n:
        raise ValueError("junta wider than the ground set")
    lv = junta_levels(realised_junta(j, k))
    total = 0
    for i in range(1, k + 1):
        by_size = [0] * (w + 1)
        for d in lv.level(i):
            by_size[popcount(d)] += 1
        for b in range(w + 1):
            if by_size[b]:
                total += by_size[b] * binom(n - w, k - i - b)
    return total


def a3_gap(n: int, k: int) -> int:
    """|D(star)| - |D(A_3)| = C(n-4, k-1) - C(n-3, k-2); negative means A_3 wins."""
    if n < k + 3:
        raise ValueError(f"need n >= k + 3, got n={n}, k={k}")
    return binom(n - 4, k - 1) - binom(n - 3, k - 2)


def a3_threshold(k: int) -> float:
    """Largest root of n^2 - (3k+2) n + k^2 + 6k - 1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return (3 * k + 2 + math.sqrt(5 * k * k - 12 * k + 8)) / 2


def a3_closed_form(n: int, k: int) -> int:
    """|D(A_3(n, k))| = 5 * sum_{i<=k-2} C(n-4, i) + 3 * sum_{i<=k-3} C(n-4, i)."""
    return 5 * sum(binom(n - 4, i) for i in range(k - 1)) + 3 * sum(binom(n - 4, i) for i in range(k - 2))


def ak_gain_loss(n: int, k: int) -> tuple[int, int]:
    """Differences gained and lost when the star is traded for A_k."""
    if not n > 2 * k:
        raise ValueError(f"need n > 2k, got n={n}, k={k}")
    gain = sum(binom(n - k - 1, ell) for ell in range(k - 1))
    loss = binom(n - k - 1, k - 1)
    return gain, loss


def subset_measure(masks: Iterable[int], width: int, alpha: float) -> float:
    return sum(alpha ** popcount(m) * (1 - alpha) ** (width - popcount(m)) for m in masks)


def junta_weighted_objective(j: Junta, alpha: float) -> float:
    """Sum over s >= 1 of (alpha/(1-alpha))^(s-1) * mu_alpha(L_=s).

    mu_alpha is the product measure on subsets of [width].
    """
    if not 0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    lv = junta_levels(j)
    ratio = alpha / (1 - alpha)
    return sum(
        ratio ** (s - 1) * subset_measure(lv.exact[s], j.width, alpha)
        for s in range(1, j.width + 1)
        if lv.exact[s]
    )


SCAN_HEADER = ["p", "c", "n", "k", "junta_count", "star_rhs", "beats_star"]


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def scan_ap_counterexamples(k: int, c_grid: Sequence[float], p_values: Sequence[int] | None = None) -> list[dict]:
    """Compare |D(A_p(ck, k))| (closed form) with the star value over a grid."""
    if p_values is None:
        p_values = range(2, min(k, MAX_WIDTH - 1) + 1)
    rows = []
    for c in c_grid:
        if not 2 < c < 4:
            raise ValueError(f"c must lie in (2, 4), got {c}")
        n = _round_half_up(c * k)
        for p in p_values:
            if p + 1 > MAX_WIDTH:
                raise ValueError(f"p={p} exceeds the junta width cap")
            if not 2 <= p <= k or n <= 2 * k:
                continue
            count = junta_diff_count(as_junta(p), n, k)
            rhs = conjecture_rhs(n, k)
            rows.append(dict(p=p, c=c, n=n, k=k, junta_count=count, star_rhs=rhs, beats_star=count > rhs))
    return rows


def scan_to_csv(rows: list[dict], preamble: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for line in preamble:
        buf.write(f"# {line}\n")
    writer = csv.DictWriter(buf, fieldnames=SCAN_HEADER, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({**r, "beats_star": str(r["beats_star"]).lower()})
    return buf.getvalue()
