"""Difference and symmetric-difference families and their right-hand sides."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

from diffam import kernels
from diffam.family import SetFamily, full_mask, is_intersecting, popcounts, size_profile


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def difference_family(f: SetFamily) -> SetFamily:
    """``{F - G : F, G in f}`` over ordered pairs, F == G included."""
    return SetFamily(f.n, kernels.diff_masks(f.masks, f.n))


def difference_size(f: SetFamily) -> int:
    return int(kernels.diff_size(f.masks, f.n))


def difference_slice(f: SetFamily, ell: int) -> SetFamily:
    if not 0 <= ell <= f.n:
        raise ValueError(f"slice size {ell} outside [0, {f.n}]")
    d = difference_family(f)
    return SetFamily(f.n, d.masks[d.sizes == ell], ell)


def symmetric_difference_family(f: SetFamily) -> SetFamily:
    return SetFamily(f.n, kernels.symdiff_masks(f.masks, f.n))


def _check_nk(n: int, k: int) -> None:
    if not n >= k >= 1:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")


def conjecture_rhs(n: int, k: int) -> int:
    """Size of D(full star): sum of C(n-1, l) for l < k."""
    _check_nk(n, k)
    return sum(binom(n - 1, ell) for ell in range(k))


def conjecture_rhs_inclusive(n: int, k: int) -> int:
    """The same sum with l running up to k inclusive."""
    _check_nk(n, k)
    return sum(binom(n - 1, ell) for ell in range(k + 1))


def sd_rhs(n: int, k: int) -> int:
    """Size of SD(full star): sum of C(n-1, 2l) for l < k."""
    _check_nk(n, k)
    return sum(binom(n - 1, 2 * ell) for ell in range(k))


def marica_schonheim_check(f: SetFamily) -> tuple[bool, int, int]:
    d = difference_size(f)
    return d >= len(f), d, len(f)


@dataclass(frozen=True)
class DiffReport:
    n: int
    k: Optional[int]
    slice_counts: list[int]
    total: int
    rhs_conjecture: Optional[int]
    rhs_inclusive: Optional[int]
    verdict: str
    kind: str = "diff"

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "kind": self.kind,
            "slices": self.slice_counts,
            "total": str(self.total),
            "rhs": None if self.rhs_conjecture is None else str(self.rhs_conjecture),
            "rhs_inclusive": None if self.rhs_inclusive is None else str(self.rhs_inclusive),
            "verdict": self.verdict,
        }
        return out


def diff_report(f: SetFamily, kind: str = "diff") -> DiffReport:
    """Slice counts of D(f) (or SD(f)) against the star value.

    For a k-uniform family slices run over 0..k and ``verdict`` compares the
    total with the star value; otherwise slices cover 0..n and the verdict is
    ``"n/a"``.
    """
    if kind == "diff":
        image = difference_family(f)
    elif kind == "sd":
        image = symmetric_difference_family(f)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    k = f.uniform_k
    profile = size_profile(image)
    top = f.n if (k is None or kind == "sd") else k
    slices = profile[: top + 1]
    total = len(image)
    if k is None or k < 1:
        return DiffReport(f.n, k, slices, total, None, None, "n/a", kind)
    if kind == "diff":
        rhs, rhs_inc = conjecture_rhs(f.n, k), conjecture_rhs_inclusive(f.n, k)
    else:
        rhs, rhs_inc = sd_rhs(f.n, k), sd_rhs(f.n, k + 1)
    verdict = "holds" if total <= rhs else "violated"
    return DiffReport(f.n, k, slices, total, rhs, rhs_inc, verdict, kind)


def maximal_extension(f: SetFamily) -> SetFamily:
    """Extend an intersecting family to an intersecting G with |G| = 2^(n-1).

    G is the up-closure of ``f`` plus, for every complementary pair
    {X, [n] - X} with neither member in the up-closure, the larger of the
    two (ties: the one containing element 1). Both members of such a pair
    meet every set of the up-closure, and two majority picks can never be
    disjoint, so this equals the sequential pair-by-pair extension with the
    majority tie-break, whatever order the pairs are visited in.
    """
    n = f.n
    if n > 24:
        raise ValueError("maximal_extension materialises 2^n flags; n must be <= 24")
    if not is_intersecting(f):
        raise ValueError("maximal_extension requires an intersecting family")
    size = 1 << n
    member = np.zeros(size, dtype=bool)
    member[f.masks.astype(np.int64)] = True
    # up-closure, one coordinate at a time
    for i in range(n):
        view = member.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    low = np.arange(size >> 1, dtype=np.int64)  # representatives without element n
    high = low ^ full_mask(n)
    undecided = ~member[low] & ~member[high]
    lo_size = popcounts(low)
    pick_low = (2 * lo_size > n) | ((2 * lo_size == n) & ((low & 1) == 1))
    chosen = np.where(pick_low, low, high)[undecided]
    member[chosen] = True
    return SetFamily(n, np.flatnonzero(member).astype(np.uint64))


def partition_check(g: SetFamily) -> bool:
    """True iff G and D(G) are disjoint and together cover 2^[n]."""
    if len(g) != 1 << (g.n - 1) or not is_intersecting(g):
        raise ValueError("partition_check needs an intersecting family of size 2^(n-1)")
    d = difference_family(g)
    overlap = np.intersect1d(g.masks, d.masks, assume_unique=True)
    return len(overlap) == 0 and len(g) + len(d) == 1 << g.n


def majority_family(n: int) -> SetFamily:
    """Sets larger than n/2, plus the n/2-sets containing element 1."""
    all_sets = np.arange(1 << n, dtype=np.uint64)
    sizes = popcounts(all_sets)
    keep = (2 * sizes > n) | ((2 * sizes == n) & ((all_sets & np.uint64(1)) == 1))
    return SetFamily(n, all_sets[keep])
