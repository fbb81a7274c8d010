"""Desk-scale verification of the difference and symmetric-difference bounds.

Because D (and SD) are monotone under inclusion, the largest value over all
intersecting k-uniform families is attained at a maximal one, so exhaustive
checks only walk maximal intersecting families (maximal cliques of the
intersection graph on C([n], k)).
"""

from __future__ import annotations

import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from diffam import kernels
from diffam.diff import binom, conjecture_rhs, sd_rhs
from diffam.family import SetFamily, elements_of, is_intersecting, k_subset_masks, popcount
from diffam.junta import MAX_WIDTH, Junta, as_junta, junta_family
from diffam.shadow import log_real_binomial

GRAPH_CAP = 10_000
DEFAULT_CAP = 10_000_000
CERTIFY_CAP = 20_000  # largest family whose |D| we brute-force during a scan
MODES = ("exhaustive-maximal", "random", "junta-scan", "hill-climb")


def _count(masks, n: int, kind: str) -> int:
    if kind == "diff":
        return int(kernels.diff_size(masks, n))
    if kind == "sd":
        return len(kernels.symdiff_masks(masks, n))
    raise ValueError(f"unknown kind {kind!r}")


def _rhs(n: int, k: int, kind: str) -> int:
    return conjecture_rhs(n, k) if kind == "diff" else sd_rhs(n, k)


@dataclass(frozen=True)
class IntersectionGraph:
    n: int
    k: int
    vertices: list[int]
    adjacency: list[int]

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adjacency[v])

    def family(self, clique: int) -> SetFamily:
        return SetFamily.from_masks((self.vertices[i - 1] for i in elements_of(clique)), self.n, self.k)


def intersection_graph(n: int, k: int) -> IntersectionGraph:
    """Vertices C([n], k) in canonical order; edges join intersecting sets."""
    if binom(n, k) > GRAPH_CAP:
        raise ValueError(f"C({n},{k}) exceeds the {GRAPH_CAP}-vertex cap")
    verts = k_subset_masks(n, k)
    arr = np.array(verts, dtype=np.uint64)
    adj = []
    for i, v in enumerate(verts):
        hits = np.flatnonzero(arr & np.uint64(v))
        row = 0
        for j in hits.tolist():
            if j != i:
                row |= 1 << j
        adj.append(row)
    return IntersectionGraph(n, k, verts, adj)


class MaximalFamilies:
    """Iterable over maximal intersecting k-uniform families on [n].

    ``exhausted`` is set once iteration finishes if more than ``cap``
    families exist (only the first ``cap`` are produced).
    """

    def __init__(self, n: int, k: int, cap: int = DEFAULT_CAP):
        self.graph = intersection_graph(n, k)
        self.cap = cap
        self.exhausted: Optional[bool] = None
        self.count = 0

    def __iter__(self) -> Iterator[SetFamily]:
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, len(self.graph.vertices) + 1000))
        try:
            cliques, exhausted = kernels.maximal_cliques(self.graph.adjacency, self.cap)
        finally:
            sys.setrecursionlimit(limit)
        for c in cliques:
            self.count += 1
            yield self.graph.family(c)
        self.exhausted = exhausted


def enumerate_maximal_intersecting(n: int, k: int, cap: int = DEFAULT_CAP) -> MaximalFamilies:
    return MaximalFamilies(n, k, cap)


def is_maximal_intersecting(f: SetFamily, k: int) -> bool:
    """No k-set outside ``f`` meets every member."""
    if not is_intersecting(f):
        return False
    for v in k_subset_masks(f.n, k):
        if v not in f and kernels.cross_intersect(np.array([v], dtype=np.uint64), f.masks):
            return False
    return True


@dataclass
class VerifyReport:
    n: int
    k: int
    mode: str
    kind: str
    families_checked: int
    max_value: int
    rhs: int
    max_ratio: Fraction
    worst_family: Optional[SetFamily]
    verdict: str
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "mode": self.mode,
            "kind": self.kind,
            "families_checked": self.families_checked,
            "max_value": str(self.max_value),
            "rhs": str(self.rhs),
            "max_ratio": f"{self.max_ratio.numerator}/{self.max_ratio.denominator}",
            "max_ratio_float": float(self.max_ratio),
            "worst_family": None if self.worst_family is None else self.worst_family.sets(),
            "verdict": self.verdict,
            "elapsed_seconds": round(self.elapsed, 3),
            "notes": self.notes,
        }


class _Best:
    """Running maximum with a deterministic tie-break (lexicographically least family)."""

    def __init__(self):
        self.value = -1
        self.family: Optional[SetFamily] = None
        self.checked = 0

    def offer(self, value: int, family: SetFamily) -> None:
        self.checked += 1
        if value > self.value or (
            value == self.value and tuple(family.masks.tolist()) < tuple(self.family.masks.tolist())
        ):
            self.value, self.family = value, family


def certify_counterexample(f: SetFamily, kind: str = "diff") -> bool:
    """Exact, independent check that an intersecting k-uniform ``f`` beats the star value."""
    k = f.uniform_k
    if k is None:
        sizes = set(f.sizes.tolist())
        if len(sizes) != 1:
            raise ValueError("certification needs a uniform family")
        k = sizes.pop()
    if k < 1 or not is_intersecting(f):
        return False
    return _count(f.masks, f.n, kind) > _rhs(f.n, k, kind)


def _finish(best: _Best, n: int, k: int, mode: str, kind: str, exhausted: bool,
            started: float, notes: list[str]) -> VerifyReport:
    rhs = _rhs(n, k, kind)
    value = max(best.value, 0)
    ratio = Fraction(value, rhs)
    descriptive = kind == "sd" and n <= 10 * k
    if best.family is not None and value > rhs and certify_counterexample(best.family, kind):
        verdict = "descriptive" if descriptive else "counterexample-found"
        if descriptive:
            notes.append("exceeds the star value, but n <= 10k lies outside the conjectured range")
    elif exhausted:
        verdict = "budget-exhausted"
    elif mode == "exhaustive-maximal":
        verdict = "descriptive" if descriptive else "conjecture-holds"
    else:
        # non-exhaustive searches cannot confirm the bound
        verdict = "budget-exhausted"
        notes.append("no violation found; non-exhaustive mode cannot confirm the bound")
    return VerifyReport(n, k, mode, kind, best.checked, value, rhs, ratio, best.family,
                        verdict, time.perf_counter() - started, notes)


def verify_conjecture(n: int, k: int, mode: str = "exhaustive-maximal", budget: int = DEFAULT_CAP,
                      seed: int = 0, kind: str = "diff",
                      budget_seconds: Optional[float] = None) -> VerifyReport:
    """Search intersecting k-uniform families on [n] for the largest |D| (or |SD|)."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not n > 2 * k >= 2:
        raise ValueError(f"need n > 2k > 0, got n={n}, k={k}")
    started = time.perf_counter()
    deadline = None if budget_seconds is None else started + budget_seconds
    best = _Best()
    notes: list[str] = []
    exhausted = False

    if mode == "exhaustive-maximal":
        stream = enumerate_maximal_intersecting(n, k, budget)
        for fam in stream:
            best.offer(_count(fam.masks, n, kind), fam)
            if deadline is not None and time.perf_counter() > deadline:
                exhausted = True
                notes.append("wall-clock budget hit")
                break
        exhausted = exhausted or bool(stream.exhausted)
    elif mode == "random":
        rng = random.Random(seed)
        verts = k_subset_masks(n, k)
        for _ in range(budget):
            fam = random_maximal_family(n, k, rng, verts)
            best.offer(_count(fam.masks, n, kind), fam)
            if deadline is not None and time.perf_counter() > deadline:
                notes.append("wall-clock budget hit")
                break
    elif mode == "junta-scan":
        _junta_scan(n, k, budget, seed, kind, best, notes)
    else:
        res = hill_climb(n, k, kind, budget, seed)
        best.offer(res.score, res.family)
        best.checked = res.evaluations
    return _finish(best, n, k, mode, kind, exhausted, started, notes)


def verify_sd_conjecture(n: int, k: int, mode: str = "exhaustive-maximal", budget: int = DEFAULT_CAP,
                         seed: int = 0, budget_seconds: Optional[float] = None) -> VerifyReport:
    return verify_conjecture(n, k, mode, budget, seed, "sd", budget_seconds)


def _junta_scan(n, k, budget, seed, kind, best: _Best, notes) -> None:
    rng = random.Random(seed)
    juntas = [as_junta(p) for p in range(2, min(k, MAX_WIDTH - 1) + 1) if p + 1 <= n]
    juntas += [random_junta(min(5, n - 1), k, rng) for _ in range(budget)]
    skipped = 0
    for j in juntas:
        fam = junta_family(j, n, k)
        if len(fam) > CERTIFY_CAP:
            skipped += 1
            continue
        if len(fam) and is_intersecting(fam):
            best.offer(_count(fam.masks, n, kind), fam)
    if skipped:
        notes.append(f"{skipped} junta families exceeded {CERTIFY_CAP} members and were skipped")


def random_maximal_family(n: int, k: int, rng: random.Random, verts: Optional[list[int]] = None) -> SetFamily:
    """Greedy maximal intersecting family from a random order of the k-sets."""
    verts = list(verts if verts is not None else k_subset_masks(n, k))
    rng.shuffle(verts)
    chosen: list[int] = []
    for v in verts:
        if all(v & c for c in chosen):
            chosen.append(v)
    return SetFamily.from_masks(chosen, n, k)


def random_junta(width: int, k: int, rng: random.Random) -> Junta:
    """Random maximal intersecting defining family on [w] using sets of size <= k."""
    w = rng.randint(1, max(1, width))
    cands = [m for m in range(1, 1 << w) if popcount(m) <= k]
    rng.shuffle(cands)
    chosen: list[int] = []
    for m in cands:
        if all(m & c for c in chosen):
            chosen.append(m)
    return Junta(w, SetFamily.from_masks(chosen, w))


@dataclass
class HillClimbResult:
    family: SetFamily
    score: int
    trace: list[int]
    evaluations: int


class _State:
    """Intersecting family over vertex indices with per-vertex conflict counts."""

    def __init__(self, verts: np.ndarray, disjoint: list[np.ndarray]):
        self.verts = verts
        self.disjoint = disjoint
        self.inside = np.zeros(len(verts), dtype=bool)
        self.blocked = np.zeros(len(verts), dtype=np.int64)

    def add(self, v: int) -> None:
        self.inside[v] = True
        self.blocked[self.disjoint[v]] += 1

    def remove(self, v: int) -> None:
        self.inside[v] = False
        self.blocked[self.disjoint[v]] -= 1

    def addable(self) -> np.ndarray:
        return np.flatnonzero((self.blocked == 0) & ~self.inside)

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.inside)

    def masks(self) -> np.ndarray:
        return self.verts[self.inside]


def hill_climb(n: int, k: int, objective: str = "diff", iters: int = 20_000, seed: int = 0,
               restarts: int = 20) -> HillClimbResult:
    """Seeded local search for intersecting families with large |D| or |SD|.

    Moves add an addable k-set, remove a member, or swap one member for a
    k-set that becomes addable; a move is kept when the objective does not
    drop. Restarts alternate between a random greedy maximal family and a
    random junta family. Defaults: 20 restarts sharing ``iters`` evaluations.
    """
    if binom(n, k) > 100_000:
        raise ValueError("hill_climb caps C(n, k) at 100000 vertices")
    rng = random.Random(seed)
    verts = np.array(k_subset_masks(n, k), dtype=np.uint64)
    index = {int(v): i for i, v in enumerate(verts)}
    disjoint = [np.flatnonzero((verts & v) == 0) for v in verts]
    per_restart = max(1, iters // max(1, restarts))
    best_masks, best_score, trace, evals = None, -1, [], 0

    for r in range(max(1, restarts)):
        state = _State(verts, disjoint)
        if r % 2 == 0:
            start = random_maximal_family(n, k, rng, verts.tolist())
        else:
            start = junta_family(random_junta(min(5, n - 1), k, rng), n, k)
            if len(start) == 0 or not is_intersecting(start):
                start = random_maximal_family(n, k, rng, verts.tolist())
        for m in start:
            state.add(index[m])
        score = _count(state.masks(), n, objective)
        evals += 1
        for _ in range(per_restart):
            move = rng.random()
            members = state.members()
            if move < 0.3 or len(members) == 0:
                cand = state.addable()
                if len(cand) == 0:
                    continue
                v = int(cand[rng.randrange(len(cand))])
                state.add(v)
                new = _count(state.masks(), n, objective)
                if new >= score:
                    score = new
                else:
                    state.remove(v)
            elif move < 0.5:
                u = int(members[rng.randrange(len(members))])
                state.remove(u)
                new = _count(state.masks(), n, objective)
                if new >= score:
                    score = new
                else:
                    state.add(u)
            else:
                u = int(members[rng.randrange(len(members))])
                state.remove(u)
                cand = state.addable()
                cand = cand[cand != u]
                if len(cand) == 0:
                    state.add(u)
                    continue
                v = int(cand[rng.randrange(len(cand))])
                state.add(v)
                new = _count(state.masks(), n, objective)
                if new >= score:
                    score = new
                else:
                    state.remove(v)
                    state.add(u)
            evals += 1
        trace.append(score)
        masks = state.masks()
        if score > best_score or (
            score == best_score and tuple(masks.tolist()) < tuple(best_masks.tolist())
        ):
            best_masks, best_score = masks.copy(), score

    family = SetFamily(n, best_masks, k)
    if _count(family.masks, n, objective) != best_score or not is_intersecting(family):
        raise AssertionError("hill_climb result failed exact re-verification")
    return HillClimbResult(family, best_score, trace, evals)


def size_floor_audit(f: SetFamily) -> bool:
    """A k-uniform family beating the star bound at n >= 3k must have > C(n-1,k-1)/(2k) members."""
    k = f.uniform_k
    if k is None or f.n < 3 * k or not is_intersecting(f):
        return True
    if _count(f.masks, f.n, "diff") <= conjecture_rhs(f.n, k):
        return True
    return 2 * k * len(f) > binom(f.n - 1, k - 1)


def lemma_parameter_check(n: int, k: int) -> dict:
    """Arithmetic audit of the large-n parameter choices (no sampling)."""
    if k < 50 or n < 50 * k * math.log(k):
        raise ValueError(f"need k >= 50 and n >= 50 k ln k, got n={n}, k={k}")
    c = n / k
    t = math.floor(c - 1)
    a = math.sqrt(2 * math.log(8 * n))
    eps = (2 * a + math.sqrt(8 * math.log(2))) / math.sqrt(t)
    eps_upper = (2 * math.sqrt(6 * math.log(k)) + 2.4) / math.sqrt(49 * math.log(k))
    tail = 2 * math.exp(-a * a / 2)
    r = math.log(k)
    log_bound = log_real_binomial(n - r, n - k - 1)
    log_star = math.log(binom(n - 1, k - 1))
    return {
        "n": n,
        "k": k,
        "C": c,
        "t": t,
        "a": a,
        "epsilon": eps,
        "epsilon_upper": eps_upper,
        "epsilon_below_0.88": eps < 0.88,
        "tail_probability": tail,
        "one_over_4n": 1 / (4 * n),
        "tail_identity_holds": math.isclose(tail, 1 / (4 * n), rel_tol=1e-12),
        "log10_diversity_bound": log_bound / math.log(10),
        "diversity_bound": math.exp(log_bound) if log_bound < 700 else math.inf,
        "log10_bound_over_star": (log_bound - log_star) / math.log(10),
    }
