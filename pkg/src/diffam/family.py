"""Set families over a ground set [n], n <= 64.

An element set is an ``int`` bitmask: element ``i`` (1-based) is present iff
bit ``i - 1`` is set. A :class:`SetFamily` keeps its members as a sorted,
duplicate-free, read-only ``uint64`` array, so the canonical order is the
numeric order of the masks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional

import numpy as np

from diffam import kernels

MAX_N = 64


class GroundSetMismatch(ValueError):
    """Two families live on different ground sets."""


def mask_of(elements: Iterable[int], n: int = MAX_N) -> int:
    mask = 0
    for e in elements:
        e = int(e)
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside [1, {n}]")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    mask = int(mask)
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def popcount(mask: int) -> int:
    return int(mask).bit_count()


def full_mask(n: int) -> int:
    return (1 << n) - 1


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"ground set size must be in [1, {MAX_N}], got {n}")


@dataclass(frozen=True, eq=False)
class SetFamily:
    """A duplicate-free family of subsets of [n] in canonical order."""

    n: int
    masks: np.ndarray = field(repr=False)
    uniform_k: Optional[int] = None

    def __post_init__(self) -> None:
        _check_n(self.n)
        arr = np.unique(np.asarray(self.masks, dtype=np.uint64))
        if len(arr) and self.n < MAX_N and int(arr[-1]) >> self.n:
            raise ValueError(f"member outside [1, {self.n}]")
        arr.setflags(write=False)
        object.__setattr__(self, "masks", arr)
        if self.uniform_k is not None:
            if len(arr) and np.any(popcounts(arr) != self.uniform_k):
                raise ValueError(f"not all members have size {self.uniform_k}")

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], n: int, k: Optional[int] = None) -> "SetFamily":
        return cls.from_masks((mask_of(s, n) for s in sets), n, k)

    @classmethod
    def from_masks(cls, masks: Iterable[int], n: int, k: Optional[int] = None) -> "SetFamily":
        masks = [int(m) for m in masks]
        if k is None:
            sizes = {popcount(m) for m in masks}
            k = sizes.pop() if len(sizes) == 1 else None
        return cls(n, np.array(masks, dtype=np.uint64), k)

    @classmethod
    def empty(cls, n: int, k: Optional[int] = None) -> "SetFamily":
        return cls(n, np.empty(0, dtype=np.uint64), k)

    @classmethod
    def all_k_sets(cls, n: int, k: int) -> "SetFamily":
        return cls.from_masks(k_subset_masks(n, k), n, k)

    @classmethod
    def power_set(cls, n: int) -> "SetFamily":
        if n > 30:
            raise ValueError("power set too large to materialise")
        return cls(n, np.arange(1 << n, dtype=np.uint64))

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[int]:
        return (int(m) for m in self.masks)

    def __contains__(self, mask: object) -> bool:
        if not isinstance(mask, (int, np.integer)) or mask < 0:
            return False
        i = np.searchsorted(self.masks, np.uint64(mask))
        return bool(i < len(self.masks) and self.masks[i] == mask)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.masks, other.masks)

    def __hash__(self) -> int:
        return hash((self.n, self.masks.tobytes()))

    def __repr__(self) -> str:
        shown = [set(elements_of(m)) or "{}" for m in itertools.islice(self, 6)]
        more = ", ..." if len(self) > 6 else ""
        return f"SetFamily(n={self.n}, k={self.uniform_k}, size={len(self)}, [{', '.join(map(str, shown))}{more}])"

    def sets(self) -> list[tuple[int, ...]]:
        return [elements_of(m) for m in self]

    @cached_property
    def sizes(self) -> np.ndarray:
        return popcounts(self.masks)

    def is_subfamily(self, other: "SetFamily") -> bool:
        return len(np.setdiff1d(self.masks, other.masks, assume_unique=True)) == 0

    def union(self, other: "SetFamily") -> "SetFamily":
        same_ground(self, other)
        k = self.uniform_k if self.uniform_k == other.uniform_k else None
        return SetFamily(self.n, np.union1d(self.masks, other.masks), k)

    def with_k(self) -> "SetFamily":
        """Copy with ``uniform_k`` inferred from the members."""
        return SetFamily.from_masks(self, self.n)


def popcounts(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.uint64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(arr).astype(np.int64)
    return np.array([int(m).bit_count() for m in arr], dtype=np.int64)


def k_subset_masks(n: int, k: int) -> list[int]:
    return sorted(sum(1 << i for i in c) for c in itertools.combinations(range(n), k))


def same_ground(f: SetFamily, g: SetFamily) -> None:
    if f.n != g.n:
        raise GroundSetMismatch(f"ground sets differ: n={f.n} vs n={g.n}")


def is_intersecting(f: SetFamily) -> bool:
    """Every two members (including a member with itself) share an element.

    The empty family is intersecting; a family containing the empty set is not.
    """
    return bool(kernels.all_intersect(f.masks))


def are_cross_intersecting(f: SetFamily, g: SetFamily) -> bool:
    same_ground(f, g)
    return bool(kernels.cross_intersect(f.masks, g.masks))


def restrict(f: SetFamily, a: int, b: int) -> SetFamily:
    """``{F - A : F in f, F & B == A}`` for element sets ``A <= B``."""
    a, b = int(a), int(b)
    if a & ~b:
        raise ValueError("restrict requires A to be a subset of B")
    sel = f.masks[(f.masks & np.uint64(b)) == np.uint64(a)]
    k = None if f.uniform_k is None else f.uniform_k - popcount(a)
    return SetFamily(f.n, sel & ~np.uint64(a), k)


def restrict_in(f: SetFamily, b: int) -> SetFamily:
    """F(B) = F(B, B)."""
    return restrict(f, b, b)


def restrict_out(f: SetFamily, b: int) -> SetFamily:
    """F(B-bar) = F(empty, B): members avoiding B."""
    return restrict(f, 0, b)


def complement_family(f: SetFamily) -> SetFamily:
    full = np.uint64(full_mask(f.n))
    k = None if f.uniform_k is None else f.n - f.uniform_k
    return SetFamily(f.n, f.masks ^ full, k)


def degrees(f: SetFamily) -> list[int]:
    """``degrees(f)[x - 1]`` = number of members containing ``x``."""
    return [int(np.count_nonzero(f.masks & np.uint64(1 << i))) for i in range(f.n)]


def diversity(f: SetFamily) -> tuple[int, int]:
    """Minimum over x of the members avoiding x, with the smallest witness x."""
    if len(f) == 0:
        raise ValueError("diversity of an empty family is undefined")
    avoid = [len(f) - d for d in degrees(f)]
    best = min(avoid)
    return best, avoid.index(best) + 1


def size_profile(f: SetFamily) -> list[int]:
    """``profile[s]`` = number of members of size s, for s = 0..n."""
    return np.bincount(f.sizes, minlength=f.n + 1).tolist() if len(f) else [0] * (f.n + 1)


def mu_p(f: SetFamily, p):
    """p-biased measure ``sum p^|F| (1-p)^(n-|F|)``.

    Exact when ``p`` is a :class:`~fractions.Fraction` (or int-ratio), float
    otherwise.
    """
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    q = 1 - p
    total = Fraction(0) if isinstance(p, Fraction) else 0.0
    for s, count in enumerate(size_profile(f)):
        if count:
            total += count * p**s * q ** (f.n - s)
    return total
