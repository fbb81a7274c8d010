"""Monte Carlo checks of the matching and complement concentration bounds.

Sampling is vectorised: each batch draws ``batch x m`` independent
permutations of [m] with a seeded :class:`numpy.random.Generator`. In
single-stream mode (the default) results are bit-reproducible from the seed.
With ``workers > 1`` each worker gets its own stream spawned from the seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from diffam import kernels
from diffam.diff import binom
from diffam.family import SetFamily, k_subset_masks

BATCH = 20_000
Z95 = 1.959963984540054
GUARD_SE = 3.0


@dataclass(frozen=True)
class ConcReport:
    mode: str
    tail: str
    alpha: float
    epsilon: float
    threshold: float
    empirical_tail: float
    theoretical_bound: float
    sample_mean: float
    sample_variance: float
    standard_error: float
    ci_halfwidth: float
    samples: int
    verdict: str

    def to_json(self) -> dict:
        return asdict(self)


def _verdict(tail: float, se: float, bound: float) -> str:
    return "violated" if tail - GUARD_SE * se > bound else "consistent"


def _tail_stats(hits: int, samples: int) -> tuple[float, float]:
    p = hits / samples
    return p, math.sqrt(p * (1 - p) / samples)


def _block_masks(perms: np.ndarray, ell: int, t: int) -> np.ndarray:
    """Masks of the blocks ``perms[:, j*ell:(j+1)*ell]`` for j < t; shape (rows, t)."""
    bits = np.left_shift(np.uint64(1), perms[:, : t * ell].astype(np.uint64))
    return np.bitwise_or.reduce(bits.reshape(len(perms), t, ell), axis=2)


def _permutations(rng: np.random.Generator, rows: int, m: int) -> np.ndarray:
    base = np.broadcast_to(np.arange(m, dtype=np.int64), (rows, m))
    return rng.permuted(base, axis=1)


def sample_t_matching(m: int, ell: int, t: int, rng: np.random.Generator) -> list[int]:
    """t pairwise-disjoint ell-subsets of [m] (as masks), uniformly at random."""
    if m < t * ell:
        raise ValueError(f"need m >= t*l, got m={m}, t={t}, l={ell}")
    perm = rng.permutation(m)
    return [sum(1 << int(v) for v in perm[j * ell:(j + 1) * ell]) for j in range(t)]


def _density(g: SetFamily, m: int) -> tuple[int, float]:
    ell = g.uniform_k
    if ell is None:
        if len(g):
            raise ValueError("family must be uniform")
        ell = 0
    return ell, len(g) / binom(m, ell)


def _split(samples: int, workers: int) -> list[int]:
    q, r = divmod(samples, workers)
    return [q + (i < r) for i in range(workers)]


def _run(seed: int, samples: int, workers: int, fn):
    """Apply ``fn(rng, count) -> np.ndarray`` over batches and concatenate."""
    if workers <= 1:
        rng = np.random.default_rng(seed)
        parts = [fn(rng, min(BATCH, samples - s)) for s in range(0, samples, BATCH)]
        return np.concatenate(parts) if parts else np.empty(0)
    streams = np.random.SeedSequence(seed).spawn(workers)

    def one(args):
        ss, count = args
        rng = np.random.default_rng(ss)
        parts = [fn(rng, min(BATCH, count - s)) for s in range(0, count, BATCH)]
        return np.concatenate(parts) if parts else np.empty(0)

    with ThreadPoolExecutor(workers) as pool:
        return np.concatenate(list(pool.map(one, zip(streams, _split(samples, workers)))))


def eta_samples(g: SetFamily, t: int, samples: int, seed: int, workers: int = 1) -> np.ndarray:
    """Draws of eta = number of blocks of a uniform t-matching that lie in ``g``."""
    m = g.n
    ell, _ = _density(g, m)
    if m < t * ell or ell < 1:
        raise ValueError(f"need l >= 1 and m >= t*l, got m={m}, t={t}, l={ell}")
    members = g.masks

    def draw(rng, count):
        blocks = _block_masks(_permutations(rng, count, m), ell, t)
        return np.isin(blocks, members).sum(axis=1)

    return _run(seed, samples, workers, draw)


def eta_statistics(g: SetFamily, t: int, samples: int, seed: int, workers: int = 1):
    """Empirical mean, variance and histogram (index = eta value) of eta."""
    eta = eta_samples(g, t, samples, seed, workers)
    return float(eta.mean()), float(eta.var(ddof=1)), np.bincount(eta, minlength=t + 1).tolist()


def verify_matching_conc(g: SetFamily, t: int, a: float, samples: int, seed: int,
                         workers: int = 1) -> list[ConcReport]:
    """One report per sign: P[delta (eta - alpha t) >= 2a sqrt(t)] vs exp(-a^2/2)."""
    if a <= 0:
        raise ValueError("a must be positive")
    _, alpha = _density(g, g.n)
    eta = eta_samples(g, t, samples, seed, workers)
    dev = 2 * a * math.sqrt(t)
    bound = math.exp(-a * a / 2)
    out = []
    for delta, name in ((-1, "lower"), (1, "upper")):
        hits = int(np.count_nonzero(delta * (eta - alpha * t) >= dev))
        p, se = _tail_stats(hits, samples)
        out.append(ConcReport(
            mode="matching", tail=name, alpha=alpha, epsilon=dev / t, threshold=dev,
            empirical_tail=p, theoretical_bound=bound,
            sample_mean=float(eta.mean()), sample_variance=float(eta.var(ddof=1)),
            standard_error=se, ci_halfwidth=Z95 * se, samples=samples,
            verdict=_verdict(p, se, bound),
        ))
    return out


def complement_epsilon(a: float, t: int) -> float:
    return (2 * a + math.sqrt(8 * math.log(2))) / math.sqrt(t)


def complement_counts(g: SetFamily, ell_prime: int, samples: int, seed: int,
                      workers: int = 1) -> np.ndarray:
    """Draws of |G(H-bar)| (members of ``g`` avoiding H) for H uniform of size l'."""
    m = g.n
    members = g.masks

    def draw(rng, count):
        h = _block_masks(_permutations(rng, count, m), ell_prime, 1)[:, 0]
        return kernels.count_disjoint(members, h)

    return _run(seed, samples, workers, draw)


def verify_complement_conc(g: SetFamily, ell_prime: int, t: int, a: float, samples: int,
                           seed: int, tail: str = "lower", workers: int = 1) -> ConcReport:
    """Frequency of |G(H-bar)| < (alpha - eps) C(m - l', l) against 2 exp(-a^2/2).

    ``tail="upper"`` checks the mirrored event |G(H-bar)| > (alpha + eps) C(m - l', l).
    """
    m = g.n
    ell, alpha = _density(g, m)
    if m < t * ell + ell_prime:
        raise ValueError(f"need m >= t*l + l', got m={m}, t={t}, l={ell}, l'={ell_prime}")
    if a <= 0:
        raise ValueError("a must be positive")
    eps = complement_epsilon(a, t)
    scale = binom(m - ell_prime, ell)
    counts = complement_counts(g, ell_prime, samples, seed, workers)
    if tail == "lower":
        threshold = (alpha - eps) * scale
        hits = int(np.count_nonzero(counts < threshold))
    elif tail == "upper":
        threshold = (alpha + eps) * scale
        hits = int(np.count_nonzero(counts > threshold))
    else:
        raise ValueError(f"tail must be 'lower' or 'upper', got {tail!r}")
    bound = 2 * math.exp(-a * a / 2)
    p, se = _tail_stats(hits, samples)
    density = counts / scale
    return ConcReport(
        mode="complement", tail=tail, alpha=alpha, epsilon=eps, threshold=threshold,
        empirical_tail=p, theoretical_bound=bound,
        sample_mean=float(density.mean()), sample_variance=float(density.var(ddof=1)),
        standard_error=se, ci_halfwidth=Z95 * se, samples=samples,
        verdict=_verdict(p, se, bound),
    )


def random_uniform_family(m: int, ell: int, density: float, rng: np.random.Generator) -> SetFamily:
    """Each ell-subset of [m] kept independently with probability ``density``."""
    all_sets = np.array(k_subset_masks(m, ell), dtype=np.uint64)
    return SetFamily(m, all_sets[rng.random(len(all_sets)) < density], ell)


def element_clique(m: int, ell: int, elements: int) -> SetFamily:
    """ell-subsets of [m] meeting [elements] (a union of stars)."""
    window = (1 << elements) - 1
    return SetFamily.from_masks((s for s in k_subset_masks(m, ell) if s & window), m, ell)

