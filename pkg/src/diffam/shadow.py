"""Level shadows, real-argument binomials and the Lovasz form of Kruskal-Katona."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from diffam.diff import binom
from diffam.family import SetFamily, complement_family, elements_of, same_ground

BISECT_RTOL = 1e-9
BISECT_MAX_ITER = 200
KK_SLACK = 1e-6


def _require_uniform(f: SetFamily) -> int:
    if f.uniform_k is not None:
        return f.uniform_k
    sizes = set(f.sizes.tolist())
    if len(sizes) > 1:
        raise ValueError("family is not uniform")
    if not sizes:
        raise ValueError("uniformity of an empty family is unknown; pass uniform_k")
    return sizes.pop()


def shadow(f: SetFamily, i: int) -> SetFamily:
    """All i-sets contained in some member of the k-uniform family ``f``."""
    k = _require_uniform(f)
    if not 0 <= i <= k:
        raise ValueError(f"shadow level {i} outside [0, {k}]")
    if i == k:
        return SetFamily(f.n, f.masks, k)
    out = set()
    for m in f:
        bits = [1 << (e - 1) for e in elements_of(m)]
        for combo in itertools.combinations(bits, i):
            out.add(sum(combo))
    return SetFamily.from_masks(out, f.n, i)


def real_binomial(x: float, b: int) -> float:
    """``x (x-1) ... (x-b+1) / b!`` for real x."""
    if b < 0:
        raise ValueError("bottom argument must be non-negative")
    if b == 0:
        return 1.0
    if b > 20 and x - b + 1 > 0:
        return math.exp(log_real_binomial(x, b))
    num = 1.0
    for i in range(b):
        num *= x - i
    return num / math.factorial(b)


def log_real_binomial(x: float, b: int) -> float:
    """Natural log of :func:`real_binomial`; needs ``x > b - 1``."""
    if not x - b + 1 > 0:
        raise ValueError("log form needs x > b - 1")
    return math.lgamma(x + 1) - math.lgamma(b + 1) - math.lgamma(x - b + 1)


def lovasz_x(m: int, k: int, n: int) -> float:
    """The real x in [k, n] with C(x, k) = m, by bisection."""
    if not 1 <= m <= binom(n, k):
        raise ValueError(f"m={m} outside [1, C({n},{k})]")
    target = float(m)
    lo, hi = float(k), float(n)
    # bisect to machine resolution; the value tolerance is checked on exit
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if real_binomial(mid, k) < target:
            lo = mid
        else:
            hi = mid
    x = lo if abs(real_binomial(lo, k) - target) <= abs(real_binomial(hi, k) - target) else hi
    if abs(real_binomial(x, k) - target) > BISECT_RTOL * target:
        raise ArithmeticError(f"bisection did not reach C(x,{k}) = {m}")
    return x


@dataclass(frozen=True)
class KKResult:
    holds: bool
    lhs: int
    x: float
    bound: float

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "x": self.x, "bound": self.bound, "holds": self.holds}


def kk_verify(f: SetFamily, i: int) -> KKResult:
    """Check |shadow_i(f)| >= C(x, i) where |f| = C(x, k)."""
    k = _require_uniform(f)
    if len(f) == 0:
        raise ValueError("kk_verify needs a non-empty family")
    if not 0 <= i < k:
        raise ValueError(f"level {i} outside [0, {k})")
    lhs = len(shadow(f, i))
    x = lovasz_x(len(f), k, f.n)
    bound = real_binomial(x, i)
    return KKResult(lhs >= bound - KK_SLACK, lhs, x, bound)


def katona_criterion(f: SetFamily, g: SetFamily) -> bool:
    """Cross-intersection via ``f`` avoiding the k-shadow of the complements of ``g``."""
    same_ground(f, g)
    if len(f) == 0 or len(g) == 0:
        return True
    k, ell = _require_uniform(f), _require_uniform(g)
    if f.n < k + ell:
        raise ValueError(f"need n >= k + l, got n={f.n}, k={k}, l={ell}")
    blocked = shadow(complement_family(g), k)
    return not any(m in blocked for m in f)


def cross_bound(n: int, a: int, b: int, x: float) -> float:
    """Upper bound C(n, b) - C(x, b) on the smaller side of a cross-intersecting pair."""
    if n < a + b:
        raise ValueError(f"need n >= a + b, got n={n}, a={a}, b={b}")
    if not n - a <= x <= n:
        raise ValueError(f"x={x} outside [{n - a}, {n}]")
    return binom(n, b) - real_binomial(x, b)


def min_up_degree(g: SetFamily, i: int) -> int:
    """Minimum, over A in the (i-1)-shadow, of the number of i-shadow sets above A."""
    upper = shadow(g, i)
    lower = shadow(g, i - 1)
    counts = dict.fromkeys(lower, 0)
    for m in upper:
        rest = m
        while rest:
            low = rest & -rest
            counts[m ^ low] += 1
            rest ^= low
    return min(counts.values())
